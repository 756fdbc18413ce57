"""Shared result records for regime conditions."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

PASS_TOL = 1e-9


@dataclass(frozen=True)
class ConditionReport:
    """Pass/fail of a regime condition with its numeric margin and witness.

    ``margin`` is the primary (covariance-based where applicable) margin; the
    condition passes when it is >= -1e-9.  ``witness`` holds the parameters
    at which the margin was attained; ``extras`` carries secondary margins,
    cross-check values, and discrepancy flags.
    """

    name: str
    margin: float
    witness: Mapping[str, float] = field(default_factory=dict)
    extras: Mapping[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.margin >= -PASS_TOL

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "margin": self.margin,
            "witness": dict(self.witness),
            "extras": dict(self.extras),
        }


class RegimeGateError(Exception):
    """Channel parameters are outside the regime an analysis requires."""
