"""Resource model: FIFO queue, capacity-driven processing and load."""

from collections import deque
from typing import Deque, List, Optional, Tuple

from src.core.errors import DomainError, SchedulingError
from src.models.grid.job import CompletionNotice, Job, JobId, ResourceId
from src.utils.constants import COMPLETION_TOLERANCE


class Resource:
    """
    A processor with fixed capacity that runs one job at a time in FIFO order.

    A job enqueued at step t waits at least until step t+1 before it can be
    processed, so scheduling in one step never feeds that same step's
    processing.

    Attributes:
        id: Dense resource index in [0, M)
        capacity: Length units processed per time step
        current_job: Job in service, if any
        remaining_length: Unprocessed length of the current job
    """

    def __init__(self, resource_id: ResourceId, capacity: float):
        """
        Initialize an idle resource.

        Args:
            resource_id: Resource index
            capacity: Positive processing capacity

        Raises:
            DomainError: If capacity is not positive
        """
        if not capacity > 0:
            raise DomainError(f"Resource {resource_id}: capacity must be positive, got {capacity}")
        self.id = resource_id
        self.capacity = float(capacity)
        self.current_job: Optional[Job] = None
        self.remaining_length = 0.0
        self._queue: Deque[Tuple[Job, int]] = deque()
        self._job_ids: set = set()
        self._queued_length = 0.0

    def __repr__(self) -> str:
        return (
            f"Resource(id={self.id}, capacity={self.capacity}, "
            f"queued={len(self._queue)}, busy={self.current_job is not None})"
        )

    @property
    def queue(self) -> List[Job]:
        """Waiting jobs in arrival order (the job in service excluded)."""
        return [job for job, _ in self._queue]

    @property
    def queued_length(self) -> float:
        return self._queued_length

    @property
    def pending_length(self) -> float:
        """Remaining length of the current job plus all queued lengths."""
        return self.remaining_length + self._queued_length

    def is_idle(self) -> bool:
        return self.current_job is None and not self._queue

    def holds(self, job_id: JobId) -> bool:
        return job_id in self._job_ids


def job_processing_time(length: float, capacity: float) -> float:
    """
    Pure processing time of a job on a resource, excluding queue wait.

    Args:
        length: Job length
        capacity: Resource capacity

    Returns:
        length / capacity, in time steps

    Raises:
        DomainError: If either input is not positive
    """
    if not length > 0 or not capacity > 0:
        raise DomainError(
            f"job_processing_time needs positive inputs, got length={length}, capacity={capacity}"
        )
    return length / capacity


def enqueue_job(resource: Resource, job: Job, step: int = 0) -> Resource:
    """
    Append a job at the tail of the resource queue.

    Args:
        resource: Target resource (updated in place)
        job: Job to submit
        step: Submission step; the job becomes processable at step + 1

    Returns:
        The updated resource

    Raises:
        SchedulingError: If the job is already held by this resource
    """
    if resource.holds(job.id):
        raise SchedulingError(f"Job {job.id} is already on resource {resource.id}")
    resource._queue.append((job, step))
    resource._job_ids.add(job.id)
    resource._queued_length += job.length
    return resource


def advance_resource(resource: Resource, step: int) -> List[CompletionNotice]:
    """
    Process one time step of work.

    The resource spends capacity x 1 units of length, starting with the
    current job and pulling further jobs from the queue head. Budget left
    after a completion carries into the next visible queued job within the
    same step; budget left with nothing to run is discarded.

    Args:
        resource: Resource to advance (updated in place)
        step: Current simulation step; completions are stamped with it

    Returns:
        One CompletionNotice per job finished during this step
    """
    notices: List[CompletionNotice] = []
    budget = resource.capacity
    tolerance = COMPLETION_TOLERANCE * resource.capacity

    while budget > tolerance:
        if resource.current_job is None:
            if not resource._queue or resource._queue[0][1] >= step:
                break
            job, _ = resource._queue.popleft()
            resource._queued_length -= job.length
            resource.current_job = job
            resource.remaining_length = job.length

        if resource.remaining_length <= budget + tolerance:
            budget -= resource.remaining_length
            job = resource.current_job
            notices.append(
                CompletionNotice(
                    job_id=job.id,
                    resource_id=resource.id,
                    completion_step=step,
                    origin_scheduler=job.origin_scheduler,
                    job_length=job.length,
                )
            )
            resource._job_ids.discard(job.id)
            resource.current_job = None
            resource.remaining_length = 0.0
        else:
            resource.remaining_length -= budget
            budget = 0.0

    if not resource._queue:
        # Exact zero once the queue is empty
        resource._queued_length = 0.0
    return notices


def load_of_resource(resource: Resource) -> float:
    """
    Load of a resource: pending length divided by capacity.

    Args:
        resource: Resource to measure

    Returns:
        (remaining length of current job + queued lengths) / capacity
    """
    if resource.is_idle():
        return 0.0
    return max(0.0, resource.pending_length) / resource.capacity
