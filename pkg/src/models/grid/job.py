"""Job and completion notice records."""

from dataclasses import dataclass

from src.core.errors import DomainError

JobId = int
ResourceId = int
SchedulerId = int


@dataclass(frozen=True)
class Job:
    """
    A unit of work owned by a scheduler until it is submitted to a resource.

    Attributes:
        id: Unique id, assigned in creation order
        length: Job length (length units)
        origin_scheduler: Scheduler the job was delivered to
        created_step: Step at which the workload generated the job
    """

    id: JobId
    length: float
    origin_scheduler: SchedulerId
    created_step: int

    def __post_init__(self):
        if not self.length > 0:
            raise DomainError(f"Job {self.id}: length must be positive, got {self.length}")
        if self.created_step < 0:
            raise DomainError(f"Job {self.id}: created_step must be non-negative")


@dataclass(frozen=True)
class CompletionNotice:
    """Emitted once per job, at the step its remaining length reaches zero."""

    job_id: JobId
    resource_id: ResourceId
    completion_step: int
    origin_scheduler: SchedulerId
    job_length: float = 0.0
