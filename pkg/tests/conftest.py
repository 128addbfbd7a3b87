"""Shared fixtures for the simulator tests."""

import numpy as np
import pytest

from src.models.grid.job import Job
from src.schemas.config import ExperimentConfig, ScenarioConfig


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def make_job():
    """Factory for jobs with sequential ids."""
    counter = {"next": 0}

    def _make(length: float, origin: int = 0, created_step: int = 0, job_id: int = None) -> Job:
        if job_id is None:
            job_id = counter["next"]
            counter["next"] += 1
        return Job(id=job_id, length=length, origin_scheduler=origin, created_step=created_step)

    return _make


@pytest.fixture
def small_scenario():
    return ScenarioConfig(num_schedulers=3, num_resources=5, steps=60, seed=7)


@pytest.fixture
def small_experiment():
    return ExperimentConfig(num_schedulers=3, num_resources=6, steps=40, seed=3, window=10)
