"""Multi-dimensional customization engine.

Models and customizations are passed as JSON document strings.
"""

from ._mdcust import (
    Error,
    Session,
    adjacency,
    check_model,
    closure,
    generate_model,
    guidance,
    normalize_model,
    oracle_valid,
    replay,
)

__all__ = [
    "Error",
    "Session",
    "adjacency",
    "check_model",
    "closure",
    "generate_model",
    "guidance",
    "normalize_model",
    "oracle_valid",
    "replay",
]
