"""Random Selection (RS) baseline."""

from typing import TYPE_CHECKING, List

import numpy as np

from src.core.errors import DomainError
from src.models.policies.base import Assignment, SchedulingPolicy
from src.utils.common.distributions import sample_index
from src.utils.constants import POLICY_RS

if TYPE_CHECKING:
    from src.simulation.state import SchedulerAgent, SimState


def rs_select(num_resources: int, rng: np.random.Generator) -> int:
    """Uniformly random resource in [0, num_resources)."""
    if num_resources < 1:
        raise DomainError(f"rs_select needs at least one resource, got {num_resources}")
    return sample_index(rng, num_resources)


class RandomPolicy(SchedulingPolicy):
    """RS: resources drawn uniformly, blind to loads and capacities."""

    def __init__(self):
        super().__init__(policy_type=POLICY_RS)

    def assign(self, agent: "SchedulerAgent", state: "SimState") -> List[Assignment]:
        num_resources = len(state.resources)
        assignments = [(job, rs_select(num_resources, agent.rng)) for job in agent.job_queue]
        agent.job_queue.clear()
        return assignments
