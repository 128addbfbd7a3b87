"""Load metrics, per-step trace records and run summaries."""

import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from src.core.errors import DomainError
from src.models.grid.resource import Resource, load_of_resource


@dataclass(frozen=True)
class TraceRecord:
    """
    Metrics of one simulation step, sampled after the processing phase.

    Attributes:
        step: Step index
        alor: Average load of resources
        completed_jobs: Jobs finished during this step's processing
        messages: Coordination messages exchanged this step
        pending_length_total: Length still queued or in service
        policy: Policy tag of the run
    """

    step: int
    alor: float
    completed_jobs: int
    messages: int
    pending_length_total: float
    policy: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class RunSummary(BaseModel):
    """Aggregates of one run's trace."""

    policy: str
    steps: int
    final_alor: float = 0.0
    mean_alor: float = 0.0
    late_window: List[int] = [0, 0]
    late_mean_alor: float = 0.0
    total_messages: int = 0
    max_messages_per_step: int = 0
    total_completed: int = 0


def compute_alor(resources: Sequence[Resource]) -> float:
    """
    Average Load of Resources: mean over resources of pending length / capacity.

    Args:
        resources: All resources (at least one)

    Returns:
        ALoR, non-negative

    Raises:
        DomainError: If the resource list is empty
    """
    if not resources:
        raise DomainError("compute_alor needs at least one resource")
    return math.fsum(load_of_resource(r) for r in resources) / len(resources)


def windowed_mean(trace: Sequence[TraceRecord], start: int, end: int) -> float:
    """
    Mean ALoR over the steps [start, end) of a trace.

    Raises:
        DomainError: If the window is empty or out of bounds
    """
    if not 0 <= start < end <= len(trace):
        raise DomainError(f"Window [{start}, {end}) is empty or outside a trace of {len(trace)} steps")
    return math.fsum(record.alor for record in trace[start:end]) / (end - start)


def crossover_step(
    trace_a: Sequence[TraceRecord], trace_b: Sequence[TraceRecord], window: int
) -> Optional[int]:
    """
    Step from which A's windowed mean ALoR stays below B's.

    The traces are cut into consecutive windows [k*window, (k+1)*window); a
    trailing partial window is ignored. The result is the start of the first
    window of the final uninterrupted run of windows where A is below B.

    Args:
        trace_a: Trace of policy A
        trace_b: Trace of policy B (same length)
        window: Window width in steps (>= 1)

    Returns:
        Crossover step, or None when A does not end below B
    """
    if window < 1:
        raise DomainError(f"window must be >= 1, got {window}")
    if len(trace_a) != len(trace_b):
        raise DomainError(f"Traces differ in length: {len(trace_a)} vs {len(trace_b)}")

    num_windows = len(trace_a) // window
    crossover = None
    for k in range(num_windows - 1, -1, -1):
        start, end = k * window, (k + 1) * window
        if windowed_mean(trace_a, start, end) < windowed_mean(trace_b, start, end):
            crossover = start
        else:
            break
    return crossover


def late_window(steps: int) -> List[int]:
    """The last quarter of a run, e.g. [1500, 2000) for 2000 steps."""
    return [steps - steps // 4 if steps >= 4 else 0, steps]


def summarize_run(policy: str, trace: Sequence[TraceRecord]) -> RunSummary:
    """
    Build the summary of one run.

    Args:
        policy: Policy tag
        trace: Full trace of the run

    Returns:
        RunSummary; all zeros for an empty trace
    """
    steps = len(trace)
    if steps == 0:
        return RunSummary(policy=policy, steps=0)
    window = late_window(steps)
    messages = np.array([record.messages for record in trace], dtype=np.int64)
    return RunSummary(
        policy=policy,
        steps=steps,
        final_alor=trace[-1].alor,
        mean_alor=windowed_mean(trace, 0, steps),
        late_window=window,
        late_mean_alor=windowed_mean(trace, window[0], window[1]),
        total_messages=int(messages.sum()),
        max_messages_per_step=int(messages.max()),
        total_completed=sum(record.completed_jobs for record in trace),
    )
