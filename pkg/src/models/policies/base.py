"""Base class for scheduling policies."""

from abc import ABC, abstractmethod
from typing import TYPE_CHECKING, Any, Dict, List, Tuple

from src.models.grid.job import CompletionNotice, Job, ResourceId
from src.utils.constants import POLICIES

if TYPE_CHECKING:
    from src.simulation.state import SchedulerAgent, SimState

Assignment = Tuple[Job, ResourceId]


class SchedulingPolicy(ABC):
    """
    Base class for the job scheduling policies driven by the engine.

    A policy plugs into the engine's per-step phase protocol through hooks.
    Only assign() is mandatory; the other hooks default to doing nothing.

    Attributes:
        policy_type: Policy tag (one of POLICIES)
    """

    def __init__(self, policy_type: str):
        """
        Initialize a policy.

        Args:
            policy_type: Policy tag (must be in POLICIES)
        """
        if policy_type not in POLICIES:
            raise ValueError(f"Invalid policy_type: {policy_type}. Must be one of {POLICIES}")
        self.policy_type = policy_type

    def __repr__(self) -> str:
        return f"{type(self).__name__}(policy_type='{self.policy_type}')"

    def init_state(self, state: "SimState") -> None:
        """Attach policy-specific per-agent state after the scenario is built."""

    def on_completion(self, agent: "SchedulerAgent", notice: CompletionNotice) -> None:
        """Deliver a completion notice to the job's origin scheduler."""

    def fail_learner(self, state: "SimState") -> bool:
        """
        Handle a learner failure.

        Returns:
            False when the policy has no learner to fail
        """
        return False

    def exchange(self, state: "SimState") -> int:
        """
        Reward and learning phases.

        Returns:
            Number of messages exchanged
        """
        return 0

    def begin_scheduling(self, state: "SimState") -> int:
        """
        Prepare the scheduling phase.

        Returns:
            Number of messages exchanged
        """
        return 0

    @abstractmethod
    def assign(self, agent: "SchedulerAgent", state: "SimState") -> List[Assignment]:
        """
        Assign every job in the agent's queue to a resource.

        The agent's job queue is empty afterwards.

        Args:
            agent: Scheduler agent
            state: Simulation state (read-only apart from policy bookkeeping)

        Returns:
            (job, resource id) pairs in submission order
        """

    def end_step(self, state: "SimState") -> None:
        """Bookkeeping once processing is done."""

    def get_parameters(self) -> Dict[str, Any]:
        """
        Get tunable parameters for this policy.

        Returns:
            Dictionary of parameter names and their current values
        """
        return {"policy_type": self.policy_type}
