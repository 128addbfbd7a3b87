"""Mutable state of one simulation run."""

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from src.models.grid.job import CompletionNotice, Job, SchedulerId
from src.models.grid.resource import Resource
from src.models.policies.base import SchedulingPolicy
from src.models.policies.clds import LearnerState, ScheduledJobList, UtilityTable
from src.models.policies.dmms import LocalReadyTimes


@dataclass
class SchedulerAgent:
    """
    One scheduler agent and everything it owns.

    Attributes:
        id: Dense scheduler index in [0, N)
        rng: The agent's private random stream
        job_queue: Jobs delivered by the workload, not yet submitted
        job_list: Scheduled Job List (CLDS only)
        ready: Local ready-time estimates (DMMS only)
    """

    id: SchedulerId
    rng: np.random.Generator
    job_queue: List[Job] = field(default_factory=list)
    job_list: Optional[ScheduledJobList] = None
    ready: Optional[LocalReadyTimes] = None


@dataclass
class SimState:
    """
    State of the Grid model during a run.

    Resources and agents are written only by the engine's step loop; the
    utility table reaches schedulers only as immutable broadcast snapshots.
    """

    resources: List[Resource]
    capacities: np.ndarray
    agents: List[SchedulerAgent]
    policy: SchedulingPolicy
    length_stream: np.random.Generator
    routing_stream: np.random.Generator
    step: int = 0
    next_job_id: int = 0
    # Overshoot of earlier arrival batches, credited against the next target
    arrival_credit: float = 0.0
    # Notices from the previous processing phase, delivered in the next step
    notices: List[CompletionNotice] = field(default_factory=list)
    message_count_this_step: int = 0

    # CLDS
    learner: Optional[LearnerState] = None
    broadcast_table: Optional[UtilityTable] = None
    pending_broadcast: Optional[UtilityTable] = None
    learner_down: bool = False

    # LLS, refreshed every scheduling phase
    true_loads: Optional[np.ndarray] = None

    # Accounting
    jobs_created: int = 0
    jobs_completed: int = 0
    created_length: float = 0.0
    completed_length: float = 0.0

    @property
    def total_capacity(self) -> float:
        return float(self.capacities.sum())

    def pending_length(self) -> float:
        """Length still waiting in scheduler queues or on resources."""
        on_resources = sum(r.pending_length for r in self.resources)
        in_queues = sum(job.length for agent in self.agents for job in agent.job_queue)
        return on_resources + in_queues
