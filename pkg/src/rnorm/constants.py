"""Dimension-dependent constants shared by every pipeline."""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class Constants:
    """Constants attached to a fixed ambient dimension d.

    gamma_d is the Radon inversion constant 1/(2(2pi)^(d-1)); c_d is the
    surface area of the unit sphere S^(d-1).
    """

    d: int
    gamma_d: float
    c_d: float

    def as_dict(self) -> dict:
        return {"d": self.d, "gamma_d": self.gamma_d, "c_d": self.c_d}


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in R^d: 2 pi^(d/2) / Gamma(d/2)."""
    if d <= 0:
        raise ValueError(f"dimension must be positive, got {d}")
    return 2.0 * math.pi ** (d / 2.0) / math.gamma(d / 2.0)


def constants(d: int) -> Constants:
    """Build the constants bundle for dimension d (d >= 1)."""
    if not isinstance(d, int) or d <= 0:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    gamma_d = 1.0 / (2.0 * (2.0 * math.pi) ** (d - 1))
    return Constants(d=d, gamma_d=gamma_d, c_d=sphere_area(d))
