"""Configuration schemas."""

from src.schemas.config import ExperimentConfig, ScenarioConfig, build_config

__all__ = ["ExperimentConfig", "ScenarioConfig", "build_config"]
