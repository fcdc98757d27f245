"""Plain x/y data series handed to plotting tools."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

CURVE_KINDS = ("cdf", "pdf", "hazard", "survival", "km-step", "profile")


@dataclass(frozen=True)
class CurveSeries:
    """A named curve. ``x`` is strictly increasing except for ``km-step``,
    which repeats each event time to encode the jump."""

    name: str
    kind: str
    x: tuple
    y: tuple

    def __post_init__(self):
        if self.kind not in CURVE_KINDS:
            raise DomainError(f"unknown curve kind {self.kind!r}; expected one of {CURVE_KINDS}")
        x = tuple(float(v) for v in self.x)
        y = tuple(float(v) for v in self.y)
        if len(x) != len(y):
            raise DomainError("x and y must have equal length")
        dx = np.diff(x)
        if self.kind == "km-step":
            if np.any(dx < 0):
                raise DomainError("km-step x values must be nondecreasing")
        elif np.any(dx <= 0):
            raise DomainError("curve x values must be strictly increasing")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    def __len__(self):
        return len(self.x)
