"""Discrete-time simulation of the Grid scheduling model."""

from src.simulation.engine import RunResult, init_scenario, run, step
from src.simulation.state import SchedulerAgent, SimState
from src.simulation.workload import generate_jobs

__all__ = [
    "RunResult",
    "SchedulerAgent",
    "SimState",
    "generate_jobs",
    "init_scenario",
    "run",
    "step",
]
