"""Seeded random streams and sampling helpers for the simulator."""

from typing import Sequence

import numpy as np

# Stream domains. Each (domain, index) pair names one independent stream, so
# adding agents never shifts the draws of existing agents or of the workload.
STREAM_CAPACITY = 0
STREAM_JOB_LENGTH = 1
STREAM_JOB_ROUTING = 2
STREAM_AGENT = 3

MAX_SEED = 2**64


def make_stream(seed: int, domain: int, index: int = 0) -> np.random.Generator:
    """
    Create a counter-based random stream derived from the master seed.

    Args:
        seed: Master seed of the run (0 <= seed < 2**64)
        domain: Stream domain (one of the STREAM_* constants)
        index: Index within the domain (e.g. the scheduler id)

    Returns:
        Generator backed by a Philox bit generator
    """
    sequence = np.random.SeedSequence(entropy=seed, spawn_key=(domain, index))
    return np.random.Generator(np.random.Philox(sequence))


def agent_stream(seed: int, scheduler_id: int) -> np.random.Generator:
    """Stream owned by one scheduler agent."""
    return make_stream(seed, STREAM_AGENT, scheduler_id)


def sample_uniform(rng: np.random.Generator, min_val: float, max_val: float) -> float:
    """
    Sample from a uniform distribution.

    Args:
        rng: Random stream to draw from
        min_val: Minimum value
        max_val: Maximum value

    Returns:
        Random value between min_val and max_val; exactly min_val when the
        interval is degenerate
    """
    if min_val == max_val:
        return float(min_val)
    return float(rng.uniform(min_val, max_val))


def sample_uniform_array(
    rng: np.random.Generator, min_val: float, max_val: float, size: int
) -> np.ndarray:
    """Vector version of sample_uniform."""
    if min_val == max_val:
        return np.full(size, float(min_val))
    return rng.uniform(min_val, max_val, size=size)


def sample_index(rng: np.random.Generator, n: int) -> int:
    """Uniform index in [0, n)."""
    return int(rng.integers(n))


def choose_uniform(rng: np.random.Generator, candidates: Sequence[int]) -> int:
    """
    Pick one candidate uniformly at random.

    A single candidate is returned without consuming a draw.
    """
    if len(candidates) == 1:
        return int(candidates[0])
    return int(candidates[int(rng.integers(len(candidates)))])
