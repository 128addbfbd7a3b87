"""Common utility functions."""

from src.utils.common.distributions import (
    make_stream,
    agent_stream,
    sample_uniform,
    sample_uniform_array,
    sample_index,
    choose_uniform,
)

__all__ = [
    "make_stream",
    "agent_stream",
    "sample_uniform",
    "sample_uniform_array",
    "sample_index",
    "choose_uniform",
]
