"""Decentralized Min-Min Selection (DMMS) baseline."""

from dataclasses import dataclass
from typing import TYPE_CHECKING, List, Sequence, Tuple

import numpy as np

from src.models.grid.job import Job, JobId, ResourceId, SchedulerId
from src.models.policies.base import Assignment, SchedulingPolicy
from src.utils.constants import POLICY_DMMS

if TYPE_CHECKING:
    from src.simulation.state import SchedulerAgent, SimState


@dataclass(frozen=True, eq=False)
class LocalReadyTimes:
    """
    A scheduler's private estimate of when each resource could start a new job.

    Built only from the scheduler's own assignments; queue states of other
    schedulers are never observed.

    Attributes:
        owner: Scheduler holding the estimate
        ready: Estimated steps until each resource is free (>= 0)
    """

    owner: SchedulerId
    ready: np.ndarray

    @classmethod
    def zeros(cls, owner: SchedulerId, num_resources: int) -> "LocalReadyTimes":
        return cls(owner=owner, ready=np.zeros(num_resources))


def dmms_assign(
    jobs: Sequence[Job],
    capacities: Sequence[float],
    ready: LocalReadyTimes,
) -> Tuple[List[Tuple[JobId, ResourceId]], LocalReadyTimes]:
    """
    Min-Min assignment of a batch of jobs.

    While jobs remain, the estimated completion time of job j on resource q is
    ready[q] + length_j / capacity_q; the job whose best completion time is
    smallest goes to its best resource, and that resource's ready time
    becomes the completion time. Ties go to the lowest job id, then the
    lowest resource id, so the result does not depend on input order.

    Args:
        jobs: Jobs to assign
        capacities: Capacity of every resource (public information)
        ready: The scheduler's current ready-time estimates

    Returns:
        Ordered (job id, resource id) pairs and the updated estimates
    """
    order = sorted(jobs, key=lambda job: job.id)
    ready_times = np.array(ready.ready, dtype=float)
    if not order:
        return [], LocalReadyTimes(owner=ready.owner, ready=ready_times)

    lengths = np.array([job.length for job in order], dtype=float)
    exec_times = lengths[:, None] / np.asarray(capacities, dtype=float)[None, :]

    remaining = list(range(len(order)))
    assignments: List[Tuple[JobId, ResourceId]] = []
    while remaining:
        ect = ready_times[None, :] + exec_times[remaining]
        best_resource = ect.argmin(axis=1)
        best_ect = ect[np.arange(len(remaining)), best_resource]
        pick = int(best_ect.argmin())
        resource_id = int(best_resource[pick])
        ready_times[resource_id] = best_ect[pick]
        assignments.append((order[remaining[pick]].id, resource_id))
        remaining.pop(pick)

    return assignments, LocalReadyTimes(owner=ready.owner, ready=ready_times)


def decay_ready_times(ready: LocalReadyTimes) -> LocalReadyTimes:
    """One step passes: every estimate drops by 1, floored at 0."""
    return LocalReadyTimes(owner=ready.owner, ready=np.maximum(0.0, ready.ready - 1.0))


class MinMinPolicy(SchedulingPolicy):
    """DMMS: every scheduler runs Min-Min on its own queue and estimates."""

    def __init__(self):
        super().__init__(policy_type=POLICY_DMMS)

    def init_state(self, state: "SimState") -> None:
        num_resources = len(state.resources)
        for agent in state.agents:
            agent.ready = LocalReadyTimes.zeros(agent.id, num_resources)

    def begin_scheduling(self, state: "SimState") -> int:
        for agent in state.agents:
            agent.ready = decay_ready_times(agent.ready)
        return 0

    def assign(self, agent: "SchedulerAgent", state: "SimState") -> List[Assignment]:
        by_id = {job.id: job for job in agent.job_queue}
        pairs, agent.ready = dmms_assign(agent.job_queue, state.capacities, agent.ready)
        agent.job_queue.clear()
        return [(by_id[job_id], resource_id) for job_id, resource_id in pairs]
