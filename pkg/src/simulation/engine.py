"""
Discrete-time engine.

Each step runs the phases in a fixed order: workload, completion harvest,
rewards, learning, scheduling, processing, metrics. Schedulers use the
utility table broadcast in the previous step, and jobs submitted in a step
are processed from the next step on.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Union

from src.analysis.metrics import RunSummary, TraceRecord, compute_alor, summarize_run
from src.core.errors import SimulationError
from src.models.grid.resource import Resource, advance_resource, enqueue_job
from src.models.policies import create_policy
from src.schemas.config import ScenarioConfig, build_config
from src.simulation.state import SchedulerAgent, SimState
from src.simulation.workload import generate_jobs
from src.utils.common.distributions import (
    STREAM_CAPACITY,
    STREAM_JOB_LENGTH,
    STREAM_JOB_ROUTING,
    agent_stream,
    make_stream,
    sample_uniform_array,
)

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    """Trace and summary of one run."""

    config: ScenarioConfig
    trace: List[TraceRecord]
    summary: RunSummary


def _resolve(config: Union[ScenarioConfig, Dict[str, Any]]) -> ScenarioConfig:
    if isinstance(config, ScenarioConfig):
        return config
    return build_config(ScenarioConfig, dict(config))


def init_scenario(config: Union[ScenarioConfig, Dict[str, Any]]) -> SimState:
    """
    Build the initial state of a run.

    Capacities are drawn uniformly from capacity_range. Queues start empty,
    the CLDS table at zeros and DMMS ready times at zero. The state is a
    deterministic function of the config, seed included.

    Args:
        config: Scenario configuration (a dict is validated first)

    Returns:
        Initial SimState

    Raises:
        ConfigurationError: If the configuration is invalid
    """
    config = _resolve(config)
    c_min, c_max = config.capacity_range
    capacities = sample_uniform_array(
        make_stream(config.seed, STREAM_CAPACITY), c_min, c_max, config.num_resources
    )
    state = SimState(
        resources=[Resource(q, float(c)) for q, c in enumerate(capacities)],
        capacities=capacities,
        agents=[
            SchedulerAgent(id=i, rng=agent_stream(config.seed, i))
            for i in range(config.num_schedulers)
        ],
        policy=create_policy(config.policy, config.policy_params()),
        length_stream=make_stream(config.seed, STREAM_JOB_LENGTH),
        routing_stream=make_stream(config.seed, STREAM_JOB_ROUTING),
    )
    state.policy.init_state(state)
    return state


def step(state: SimState, config: ScenarioConfig) -> TraceRecord:
    """
    Advance the simulation by one step.

    Args:
        state: Simulation state (updated in place)
        config: Scenario configuration

    Returns:
        TraceRecord of this step

    Raises:
        SimulationError: If the run is already complete or a learner cannot be replaced
    """
    if state.step >= config.steps:
        raise SimulationError(f"Run already finished ({config.steps} steps)")
    policy = state.policy

    # (1) workload
    generate_jobs(state, config)

    # (2) completion harvest
    for notice in state.notices:
        policy.on_completion(state.agents[notice.origin_scheduler], notice)
    state.notices = []

    if config.fail_learner_at is not None and state.step == config.fail_learner_at:
        if not policy.fail_learner(state):
            logger.warning(
                "fail_learner_at=%d ignored: policy %s has no learner", state.step, policy.policy_type
            )

    # (3) rewards and (4) learning
    messages = policy.exchange(state)

    # (5) scheduling, in scheduler index order
    messages += policy.begin_scheduling(state)
    for agent in state.agents:
        for job, resource_id in policy.assign(agent, state):
            enqueue_job(state.resources[resource_id], job, state.step)

    # (6) processing
    notices = []
    for resource in state.resources:
        notices.extend(advance_resource(resource, state.step))
    state.notices = notices
    state.jobs_completed += len(notices)
    state.completed_length += math.fsum(notice.job_length for notice in notices)
    policy.end_step(state)

    # (7) metrics
    state.message_count_this_step = messages
    record = TraceRecord(
        step=state.step,
        alor=compute_alor(state.resources),
        completed_jobs=len(notices),
        messages=messages,
        pending_length_total=math.fsum(r.pending_length for r in state.resources),
        policy=policy.policy_type,
    )
    logger.debug(
        "step=%d alor=%.4f completed=%d messages=%d",
        record.step,
        record.alor,
        record.completed_jobs,
        record.messages,
    )
    state.step += 1
    return record


def run(config: Union[ScenarioConfig, Dict[str, Any]]) -> RunResult:
    """
    Run a full simulation.

    Args:
        config: Scenario configuration (a dict is validated first)

    Returns:
        RunResult with one TraceRecord per step and the run summary

    Raises:
        ConfigurationError: If the configuration is invalid
    """
    config = _resolve(config)
    logger.info(
        "Running %s: N=%d M=%d load=%.2f steps=%d seed=%d",
        config.policy,
        config.num_schedulers,
        config.num_resources,
        config.load_fraction,
        config.steps,
        config.seed,
    )
    state = init_scenario(config)
    trace = [step(state, config) for _ in range(config.steps)]
    summary = summarize_run(config.policy, trace)
    logger.info(
        "Finished %s: final ALoR %.4f, late-window ALoR %.4f, %d messages",
        config.policy,
        summary.final_alor,
        summary.late_mean_alor,
        summary.total_messages,
    )
    return RunResult(config=config, trace=trace, summary=summary)
