"""Exception hierarchy for the simulator."""

from typing import Optional


class GridSimError(Exception):
    """Base class for all simulator errors."""


class DomainError(GridSimError, ValueError):
    """An argument lies outside the domain of a formula or operation."""


class SchedulingError(GridSimError):
    """A job was placed in a way the model forbids (e.g. submitted twice)."""


class ProtocolError(GridSimError):
    """Messages exchanged between agents do not fit the learning protocol."""


class SimulationError(GridSimError, RuntimeError):
    """The simulation cannot continue."""


class ConfigurationError(GridSimError, ValueError):
    """
    Invalid scenario or experiment configuration.

    Attributes:
        field: Name of the offending configuration key, when known
    """

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field
