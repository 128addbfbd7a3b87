"""Grid model: jobs, resources and resource-side mechanics."""

from src.models.grid.job import CompletionNotice, Job, JobId, ResourceId, SchedulerId
from src.models.grid.resource import (
    Resource,
    advance_resource,
    enqueue_job,
    job_processing_time,
    load_of_resource,
)

__all__ = [
    "CompletionNotice",
    "Job",
    "JobId",
    "ResourceId",
    "SchedulerId",
    "Resource",
    "advance_resource",
    "enqueue_job",
    "job_processing_time",
    "load_of_resource",
]
