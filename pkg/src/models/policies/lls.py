"""Least Load Selection (LLS): oracle baseline that reads true resource loads."""

from typing import TYPE_CHECKING, List

import numpy as np

from src.models.grid.resource import load_of_resource
from src.models.policies.base import Assignment, SchedulingPolicy
from src.utils.common.distributions import choose_uniform
from src.utils.constants import POLICY_LLS

if TYPE_CHECKING:
    from src.simulation.state import SchedulerAgent, SimState


def lls_select(true_loads: np.ndarray, rng: np.random.Generator) -> int:
    """
    Pick a least-loaded resource, breaking ties uniformly at random.

    Args:
        true_loads: Current load of every resource
        rng: Scheduler's random stream

    Returns:
        Index of a resource with minimum load
    """
    loads = np.asarray(true_loads)
    tied = np.flatnonzero(loads == loads.min())
    return choose_uniform(rng, tied)


class LeastLoadPolicy(SchedulingPolicy):
    """
    LLS: each job goes to the currently least-loaded resource.

    Loads are refreshed from the resources once per scheduling phase and
    then updated after each assignment, so later schedulers in the same step
    see earlier schedulers' submissions.
    """

    def __init__(self):
        super().__init__(policy_type=POLICY_LLS)

    def begin_scheduling(self, state: "SimState") -> int:
        state.true_loads = np.array([load_of_resource(r) for r in state.resources])
        busy = sum(1 for agent in state.agents if agent.job_queue)
        # Each scheduler with work polls every resource and gets a reply
        return 2 * len(state.resources) * busy

    def assign(self, agent: "SchedulerAgent", state: "SimState") -> List[Assignment]:
        loads = state.true_loads
        assignments: List[Assignment] = []
        for job in agent.job_queue:
            resource_id = lls_select(loads, agent.rng)
            loads[resource_id] += job.length / state.resources[resource_id].capacity
            assignments.append((job, resource_id))
        agent.job_queue.clear()
        return assignments
