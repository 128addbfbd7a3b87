"""Workload generation: job sizes, submission and offered load."""

from typing import List

from src.models.grid.job import Job
from src.schemas.config import ScenarioConfig
from src.simulation.state import SimState
from src.utils.common.distributions import sample_index, sample_uniform


def arrival_target(state: SimState, config: ScenarioConfig) -> float:
    """Length to generate this step: load share of capacity minus carried overshoot."""
    target = config.load_fraction * state.total_capacity
    if config.arrival_carryover:
        target -= state.arrival_credit
    return target


def generate_jobs(state: SimState, config: ScenarioConfig) -> List[Job]:
    """
    Generate this step's batch of jobs and deliver them to scheduler queues.

    Lengths are drawn uniformly from job_length_range until the batch reaches
    load_fraction x total capacity; the last job may overshoot and is kept.
    With arrival_carryover the overshoot is credited against the next step's
    target, so the offered load per step averages load_fraction x total
    capacity and a step may receive no jobs at all. Without it every batch
    reaches the full target and the offered load runs above load_fraction by
    the mean overshoot. Each job goes to a scheduler chosen uniformly at
    random; ids follow draw order.

    Args:
        state: Simulation state (updated in place)
        config: Scenario configuration

    Returns:
        The jobs generated this step
    """
    s_min, s_max = config.job_length_range
    num_schedulers = len(state.agents)
    target = arrival_target(state, config)

    batch: List[Job] = []
    batch_length = 0.0
    while batch_length < target:
        length = sample_uniform(state.length_stream, s_min, s_max)
        owner = sample_index(state.routing_stream, num_schedulers)
        job = Job(
            id=state.next_job_id,
            length=length,
            origin_scheduler=owner,
            created_step=state.step,
        )
        state.next_job_id += 1
        state.agents[owner].job_queue.append(job)
        batch.append(job)
        batch_length += length

    state.arrival_credit = batch_length - target if config.arrival_carryover else 0.0
    state.jobs_created += len(batch)
    state.created_length += batch_length
    return batch
