"""
Exceptions raised by qiopa.

All of them derive from ValueError so callers that only care about "bad
input" can keep catching ValueError.
"""
from typing import Optional


class InvalidParameterError(ValueError):
    """A physical parameter (gain, phase, angle, truncation) is out of range."""


class InvalidConfigurationError(ValueError):
    """An operation received a state or point of the wrong configuration."""


class CutoffError(ValueError):
    """
    The Fock cutoff cannot represent the requested state accurately.

    Attributes:
    - suggested_cutoff (Optional[int]): the smallest cutoff satisfying the
        cutoff policy, or None when no feasible cutoff exists
    """
    def __init__(self, message: str, suggested_cutoff: Optional[int] = None) -> None:
        super().__init__(message)
        self.suggested_cutoff = suggested_cutoff


class GridSizeError(ValueError):
    """A phase-space grid exceeds the configured sample cap."""


class QuadratureOrderError(ValueError):
    """The Gauss-Hermite order is below the exactness threshold."""


class ScenarioError(ValueError):
    """A scenario file or flag combination is malformed."""
