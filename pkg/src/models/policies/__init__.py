"""Scheduling policies: CLDS and the LLS, RS and DMMS baselines."""

from typing import Any, Dict

from src.models.policies.base import Assignment, SchedulingPolicy
from src.models.policies.clds import CLDSPolicy
from src.models.policies.dmms import MinMinPolicy
from src.models.policies.lls import LeastLoadPolicy
from src.models.policies.rs import RandomPolicy
from src.utils.constants import (
    DEFAULT_ALPHA,
    DEFAULT_EPSILON,
    POLICIES,
    POLICY_CLDS,
    POLICY_DMMS,
    POLICY_LLS,
    POLICY_RS,
)


def create_policy(policy_type: str, params: Dict[str, Any] = None) -> SchedulingPolicy:
    """
    Create a policy from its tag and parameters.

    Args:
        policy_type: One of POLICIES
        params: Optional parameters (alpha, epsilon for CLDS)

    Returns:
        Policy instance
    """
    params = params or {}
    if policy_type == POLICY_CLDS:
        return CLDSPolicy(
            alpha=params.get("alpha", DEFAULT_ALPHA),
            epsilon=params.get("epsilon", DEFAULT_EPSILON),
        )
    elif policy_type == POLICY_LLS:
        return LeastLoadPolicy()
    elif policy_type == POLICY_RS:
        return RandomPolicy()
    elif policy_type == POLICY_DMMS:
        return MinMinPolicy()
    raise ValueError(f"Invalid policy_type: {policy_type}. Must be one of {POLICIES}")


__all__ = [
    "Assignment",
    "SchedulingPolicy",
    "CLDSPolicy",
    "LeastLoadPolicy",
    "RandomPolicy",
    "MinMinPolicy",
    "create_policy",
]
