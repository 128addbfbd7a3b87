"""Scenario and experiment configuration schemas."""

from typing import Any, Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from src.core.errors import ConfigurationError
from src.utils.common.distributions import MAX_SEED
from src.utils.constants import (
    DEFAULT_ALPHA,
    DEFAULT_CAPACITY_RANGE,
    DEFAULT_EPSILON,
    DEFAULT_JOB_LENGTH_RANGE,
    DEFAULT_LOAD_FRACTION,
    DEFAULT_NUM_RESOURCES,
    DEFAULT_NUM_SCHEDULERS,
    DEFAULT_SEED,
    DEFAULT_STEPS,
    DEFAULT_WINDOW,
    DESK_PRESETS,
    FIELD_RANGES,
    REFERENCE_PRESETS,
    POLICIES,
    POLICY_CLDS,
)


def _check_range(value: Tuple[float, float]) -> Tuple[float, float]:
    low, high = value
    if not (low > 0 and high > 0):
        raise ValueError("range bounds must be positive")
    if low > high:
        raise ValueError("range min must be <= max")
    return (float(low), float(high))


class ScenarioConfig(BaseModel):
    """One simulation run: scale, load, workload ranges, policy and seed."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    num_schedulers: int = Field(DEFAULT_NUM_SCHEDULERS, ge=1)
    num_resources: int = Field(DEFAULT_NUM_RESOURCES, ge=1)
    capacity_range: Tuple[float, float] = DEFAULT_CAPACITY_RANGE
    job_length_range: Tuple[float, float] = DEFAULT_JOB_LENGTH_RANGE
    load_fraction: float = Field(DEFAULT_LOAD_FRACTION, gt=0, le=1)
    steps: int = Field(DEFAULT_STEPS, ge=0)
    alpha: float = Field(DEFAULT_ALPHA, gt=0, le=1)
    epsilon: float = Field(DEFAULT_EPSILON, ge=0, le=1)
    policy: str = POLICY_CLDS
    seed: int = Field(DEFAULT_SEED, ge=0, lt=MAX_SEED)
    fail_learner_at: Optional[int] = Field(None, ge=0)
    # False: every batch reaches the full target, overshoot is not carried
    arrival_carryover: bool = True

    @field_validator("capacity_range", "job_length_range")
    @classmethod
    def _positive_range(cls, value: Tuple[float, float]) -> Tuple[float, float]:
        return _check_range(value)

    @field_validator("policy")
    @classmethod
    def _known_policy(cls, value: str) -> str:
        value = value.upper()
        if value not in POLICIES:
            raise ValueError(f"unknown policy '{value}'")
        return value

    def policy_params(self) -> Dict[str, Any]:
        return {"alpha": self.alpha, "epsilon": self.epsilon}


class ExperimentConfig(ScenarioConfig):
    """A scenario run under several policies, plus reporting options."""

    policies: List[str] = Field(default_factory=lambda: list(POLICIES))
    window: int = Field(DEFAULT_WINDOW, ge=1)
    replicates: int = Field(1, ge=1)
    preset: Optional[str] = None

    @field_validator("policies")
    @classmethod
    def _known_policies(cls, value: List[str]) -> List[str]:
        resolved: List[str] = []
        for policy in value:
            policy = policy.upper()
            if policy not in POLICIES:
                raise ValueError(f"unknown policy '{policy}'")
            if policy not in resolved:
                resolved.append(policy)
        if not resolved:
            raise ValueError("at least one policy is required")
        return resolved

    @field_validator("preset")
    @classmethod
    def _known_preset(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in REFERENCE_PRESETS + DESK_PRESETS:
            raise ValueError(f"unknown preset '{value}'")
        return value

    @model_validator(mode="before")
    @classmethod
    def _primary_policy_listed(cls, data: Any) -> Any:
        if not isinstance(data, dict):
            return data
        if data.get("policy") is not None and "policies" not in data:
            # A lone policy selects that policy only
            return {**data, "policies": [data["policy"]]}
        if data.get("policies"):
            policies = [str(p).upper() for p in data["policies"]]
            if str(data.get("policy", "")).upper() not in policies:
                data = {**data, "policy": policies[0]}
        return data

    def scenario(self, policy: str, seed: Optional[int] = None) -> ScenarioConfig:
        """The single-run config for one policy (and optionally another seed)."""
        fields = {name: getattr(self, name) for name in ScenarioConfig.model_fields}
        fields["policy"] = policy
        if seed is not None:
            fields["seed"] = seed
        return build_config(ScenarioConfig, fields)

    def to_echo(self) -> Dict[str, Any]:
        """Flat, YAML-friendly view of the resolved configuration."""
        data = self.model_dump()
        data["capacity_range"] = list(self.capacity_range)
        data["job_length_range"] = list(self.job_length_range)
        return data


def build_config(model: type, values: Dict[str, Any]):
    """
    Validate values into a config model, translating pydantic errors.

    Args:
        model: ScenarioConfig or ExperimentConfig
        values: Raw key/value pairs

    Returns:
        Validated model instance

    Raises:
        ConfigurationError: Naming the first offending key and its valid range
    """
    try:
        return model(**values)
    except ValidationError as e:
        error = e.errors()[0]
        field = str(error["loc"][0]) if error["loc"] else None
        if error["type"] == "extra_forbidden":
            raise ConfigurationError(f"Unknown configuration key '{field}'", field=field) from e
        valid = FIELD_RANGES.get(field, "see documentation")
        raise ConfigurationError(
            f"Invalid value for '{field}': {error['msg']} (valid range: {valid})", field=field
        ) from e
