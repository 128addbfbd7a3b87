"""
Centralized Learning, Distributed Scheduling (CLDS).

Scheduler agents turn their Scheduled Job Lists into per-resource reward
vectors each step. A single learner agent folds the summed vectors into a
shared utility table by exponential smoothing and broadcasts it; schedulers
assign every queued job greedily to the resource with the highest utility,
using the table broadcast in the previous step.
"""

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Dict, Iterable, List, Optional, Sequence

import numpy as np

from src.core.errors import DomainError, ProtocolError, SimulationError
from src.models.grid.job import CompletionNotice, JobId, ResourceId, SchedulerId
from src.models.policies.base import Assignment, SchedulingPolicy
from src.utils.common.distributions import choose_uniform, sample_index
from src.utils.constants import DEFAULT_ALPHA, DEFAULT_EPSILON, POLICY_CLDS

if TYPE_CHECKING:
    from src.simulation.state import SchedulerAgent, SimState

logger = logging.getLogger(__name__)


@dataclass
class ScheduledJobEntry:
    """A scheduler's record of one submitted job."""

    job_id: JobId
    job_size: float
    resource_id: ResourceId
    starting_time: int
    completion_time: Optional[int] = None

    def is_completed(self, current_step: int) -> bool:
        return self.completion_time is not None and self.completion_time <= current_step


@dataclass(frozen=True, eq=False)
class RewardVector:
    """Per-resource rewards produced by one scheduler in one step."""

    sender: SchedulerId
    step: int
    rewards: np.ndarray

    def __len__(self) -> int:
        return len(self.rewards)


@dataclass(frozen=True, eq=False)
class UtilityTable:
    """
    Per-resource efficiency estimates, distributed as an immutable snapshot.

    Attributes:
        values: One utility per resource
        version: Step of the last update (-1 before any update)
    """

    values: np.ndarray
    version: int = -1

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return len(self.values)

    @classmethod
    def zeros(cls, num_resources: int) -> "UtilityTable":
        """Initial table: no knowledge, every resource tied."""
        return cls(values=np.zeros(num_resources), version=-1)


@dataclass
class LearnerState:
    """The learner role: current holder, its table and learning factor."""

    table: UtilityTable
    alpha: float
    current_learner: SchedulerId
    retired: frozenset = field(default_factory=frozenset)


def reward_finished(job_size: float, starting_time: int, completion_time: int) -> float:
    """
    Reward for a completed job: its size over its time to completion.

    Args:
        job_size: Job length
        starting_time: Submission step
        completion_time: Completion step

    Returns:
        job_size / (completion_time - starting_time), always positive

    Raises:
        DomainError: If the span is not positive or the size is not positive
    """
    if completion_time <= starting_time:
        raise DomainError(
            f"completion_time ({completion_time}) must be after starting_time ({starting_time})"
        )
    if not job_size > 0:
        raise DomainError(f"job_size must be positive, got {job_size}")
    return job_size / (completion_time - starting_time)


def reward_unfinished(job_size: float) -> float:
    """
    Penalty for a job still pending: larger jobs are penalized less.

    Args:
        job_size: Job length

    Returns:
        -1 / job_size

    Raises:
        DomainError: If the size is not positive
    """
    if not job_size > 0:
        raise DomainError(f"job_size must be positive, got {job_size}")
    return -1.0 / job_size


def generate_local_rewards(
    scheduler: SchedulerId,
    scheduled_job_list: List[ScheduledJobEntry],
    current_step: int,
    num_resources: int,
) -> RewardVector:
    """
    Build a scheduler's reward vector from its Scheduled Job List.

    Every completed entry contributes its finished reward to its resource and
    is removed from the list; every pending entry contributes its unfinished
    penalty. Resources without entries get 0.

    Args:
        scheduler: Sending scheduler
        scheduled_job_list: Entries of this scheduler (completed ones are removed in place)
        current_step: Current step
        num_resources: Number of resources M

    Returns:
        RewardVector of length M
    """
    rewards = np.zeros(num_resources)
    remaining: List[ScheduledJobEntry] = []
    for entry in scheduled_job_list:
        if not 0 <= entry.resource_id < num_resources:
            raise ProtocolError(f"Entry for job {entry.job_id} names unknown resource {entry.resource_id}")
        if entry.is_completed(current_step):
            rewards[entry.resource_id] += reward_finished(
                entry.job_size, entry.starting_time, entry.completion_time
            )
        else:
            rewards[entry.resource_id] += reward_unfinished(entry.job_size)
            remaining.append(entry)
    scheduled_job_list[:] = remaining
    return RewardVector(sender=scheduler, step=current_step, rewards=rewards)


class ScheduledJobList:
    """
    Scheduled Job List kept by one scheduler during a run.

    Produces the same vectors as generate_local_rewards, but keeps the summed
    penalty of pending entries per resource up to date as entries come and
    go, so a step costs O(M + completions) instead of O(pending entries).
    """

    def __init__(self, num_resources: int):
        self.num_resources = num_resources
        self._entries: Dict[JobId, ScheduledJobEntry] = {}
        self._completed: List[JobId] = []
        self._penalty = np.zeros(num_resources)
        self._pending_count = np.zeros(num_resources, dtype=np.int64)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, job_id: JobId) -> bool:
        return job_id in self._entries

    def entries(self) -> List[ScheduledJobEntry]:
        return list(self._entries.values())

    def record(self, entry: ScheduledJobEntry) -> None:
        """Record a submitted job."""
        self._entries[entry.job_id] = entry
        self._penalty[entry.resource_id] += reward_unfinished(entry.job_size)
        self._pending_count[entry.resource_id] += 1

    def mark_completed(self, job_id: JobId, completion_step: int) -> None:
        """
        Fill in the completion time of a recorded job.

        Raises:
            ProtocolError: If the job was never recorded or is already completed
        """
        entry = self._entries.get(job_id)
        if entry is None:
            raise ProtocolError(f"Completion notice for job {job_id}, which is not in the Scheduled Job List")
        if entry.completion_time is not None:
            raise ProtocolError(
                f"Duplicate completion notice for job {job_id} (already completed at {entry.completion_time})"
            )
        if completion_step <= entry.starting_time:
            raise DomainError(
                f"Job {job_id} completed at {completion_step}, not after submission at {entry.starting_time}"
            )
        entry.completion_time = completion_step
        self._completed.append(job_id)
        q = entry.resource_id
        self._pending_count[q] -= 1
        if self._pending_count[q] == 0:
            self._penalty[q] = 0.0
        else:
            self._penalty[q] -= reward_unfinished(entry.job_size)

    def produce_rewards(self, sender: SchedulerId, current_step: int) -> RewardVector:
        """Reward vector for this step; completed entries are dropped afterwards."""
        rewards = self._penalty.copy()
        still_waiting: List[JobId] = []
        for job_id in self._completed:
            entry = self._entries[job_id]
            if entry.is_completed(current_step):
                rewards[entry.resource_id] += reward_finished(
                    entry.job_size, entry.starting_time, entry.completion_time
                )
                del self._entries[job_id]
            else:
                still_waiting.append(job_id)
        self._completed = still_waiting
        return RewardVector(sender=sender, step=current_step, rewards=rewards)


def update_utility_table(
    table: UtilityTable,
    vectors: Sequence[RewardVector],
    alpha: float,
    step: Optional[int] = None,
) -> UtilityTable:
    """
    Exponential smoothing of the utility table by the summed reward vectors.

    U(q) <- (1 - alpha) * U(q) + alpha * sum_i vector_i(q). Missing senders
    count as all-zero vectors.

    Args:
        table: Current table
        vectors: Reward vectors received this step (all of the same step)
        alpha: Learning factor in (0, 1]
        step: Step of the update; required when no vectors arrived

    Returns:
        New table with version set to the vectors' step

    Raises:
        ProtocolError: On mismatched vector lengths or steps
        DomainError: If alpha is outside (0, 1]
    """
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must be in (0, 1], got {alpha}")

    num_resources = len(table)
    totals = np.zeros(num_resources)
    steps = {v.step for v in vectors}
    if len(steps) > 1:
        raise ProtocolError(f"Reward vectors from different steps: {sorted(steps)}")
    for vector in vectors:
        if len(vector) != num_resources:
            raise ProtocolError(
                f"Reward vector from scheduler {vector.sender} has length {len(vector)}, expected {num_resources}"
            )
        totals += vector.rewards

    if steps:
        version = steps.pop()
        if step is not None and step != version:
            raise ProtocolError(f"Reward vectors are from step {version}, update is for step {step}")
    elif step is not None:
        version = step
    else:
        raise ProtocolError("update_utility_table needs a step when no vectors arrived")

    values = (1.0 - alpha) * table.values + alpha * totals
    return UtilityTable(values=values, version=max(version, table.version))


def select_resource(
    table: UtilityTable, rng: np.random.Generator, epsilon: float = 0.0
) -> ResourceId:
    """
    Greedy choice: an index attaining the maximum utility.

    Ties are broken uniformly at random with the caller's stream. With
    epsilon > 0 a uniformly random resource is chosen with that probability.

    Args:
        table: Utility table (non-empty)
        rng: Scheduler's random stream
        epsilon: Exploration probability (0 = literal greedy, no extra draws)

    Returns:
        Selected resource index
    """
    if len(table) == 0:
        raise DomainError("select_resource needs a non-empty utility table")
    if epsilon > 0 and rng.random() < epsilon:
        return sample_index(rng, len(table))
    values = table.values
    tied = np.flatnonzero(values == values.max())
    return choose_uniform(rng, tied)


def schedule_queue(
    agent: "SchedulerAgent",
    table: UtilityTable,
    current_step: int,
    epsilon: float = 0.0,
) -> List[Assignment]:
    """
    Assign every queued job of a scheduler greedily from the utility table.

    Each assignment is recorded in the scheduler's Scheduled Job List with the
    current step as starting time; the job queue is empty afterwards.

    Args:
        agent: Scheduler agent (job queue, job list and stream)
        table: Table broadcast in the previous step
        current_step: Current step
        epsilon: Exploration probability

    Returns:
        (job, resource id) pairs in queue order
    """
    assignments: List[Assignment] = []
    for job in agent.job_queue:
        resource_id = select_resource(table, agent.rng, epsilon)
        agent.job_list.record(
            ScheduledJobEntry(
                job_id=job.id,
                job_size=job.length,
                resource_id=resource_id,
                starting_time=current_step,
            )
        )
        assignments.append((job, resource_id))
    agent.job_queue.clear()
    return assignments


def promote_learner(
    agents: Iterable[SchedulerId],
    failed: SchedulerId,
    table_snapshot: UtilityTable,
    alpha: float = DEFAULT_ALPHA,
    retired: Iterable[SchedulerId] = (),
) -> LearnerState:
    """
    Hand the learner role to the lowest-index surviving scheduler.

    The new learner starts from the last table it received, not from any
    update the failed learner may have had in flight.

    Args:
        agents: All scheduler ids
        failed: The failed learner
        table_snapshot: Last broadcast table
        alpha: Learning factor carried over
        retired: Earlier failed learners, never promoted again

    Returns:
        New LearnerState

    Raises:
        SimulationError: If no scheduler can take over
    """
    excluded = set(retired) | {failed}
    survivors = sorted(a for a in agents if a not in excluded)
    if not survivors:
        raise SimulationError(f"Learner {failed} failed and no scheduler is left to take over")
    return LearnerState(
        table=table_snapshot,
        alpha=alpha,
        current_learner=survivors[0],
        retired=frozenset(excluded),
    )


class CLDSPolicy(SchedulingPolicy):
    """
    CLDS scheduling policy.

    Attributes:
        alpha: Learning factor of the utility update
        epsilon: Exploration probability (0 = literal greedy)
    """

    def __init__(self, alpha: float = DEFAULT_ALPHA, epsilon: float = DEFAULT_EPSILON):
        super().__init__(policy_type=POLICY_CLDS)
        if not 0 < alpha <= 1:
            raise DomainError(f"alpha must be in (0, 1], got {alpha}")
        if not 0 <= epsilon <= 1:
            raise DomainError(f"epsilon must be in [0, 1], got {epsilon}")
        self.alpha = alpha
        self.epsilon = epsilon

    def init_state(self, state: "SimState") -> None:
        num_resources = len(state.resources)
        for agent in state.agents:
            agent.job_list = ScheduledJobList(num_resources)
        table = UtilityTable.zeros(num_resources)
        state.learner = LearnerState(table=table, alpha=self.alpha, current_learner=0)
        state.broadcast_table = table

    def on_completion(self, agent: "SchedulerAgent", notice: CompletionNotice) -> None:
        agent.job_list.mark_completed(notice.job_id, notice.completion_step)

    def fail_learner(self, state: "SimState") -> bool:
        """Remove the current learner and promote its successor."""
        failed = state.learner.current_learner
        state.learner = promote_learner(
            (agent.id for agent in state.agents),
            failed,
            state.broadcast_table,
            alpha=self.alpha,
            retired=state.learner.retired,
        )
        state.learner_down = True
        logger.warning(
            "Learner %d failed at step %d; scheduler %d promoted (table version %d)",
            failed,
            state.step,
            state.learner.current_learner,
            state.learner.table.version,
        )
        return True

    def exchange(self, state: "SimState") -> int:
        """Reward phase and learning phase. Returns the number of messages sent."""
        vectors = [
            agent.job_list.produce_rewards(agent.id, state.step) for agent in state.agents
        ]
        messages = len(vectors)

        if state.learner_down:
            # Vectors addressed to the dead learner are lost; the promoted
            # learner takes over from the next step.
            state.learner_down = False
            return messages

        learner = state.learner
        learner.table = update_utility_table(learner.table, vectors, learner.alpha, step=state.step)
        state.pending_broadcast = learner.table
        return messages + len(state.agents)

    def assign(self, agent: "SchedulerAgent", state: "SimState") -> List[Assignment]:
        return schedule_queue(agent, state.broadcast_table, state.step, self.epsilon)

    def end_step(self, state: "SimState") -> None:
        if state.pending_broadcast is not None:
            state.broadcast_table = state.pending_broadcast
            state.pending_broadcast = None

    def get_parameters(self) -> Dict[str, Any]:
        params = super().get_parameters()
        params.update({"alpha": self.alpha, "epsilon": self.epsilon})
        return params
