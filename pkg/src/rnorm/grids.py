"""Sampled 2-D functions on centered square grids, plus CSV I/O."""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class GridFunction2D:
    """n x n samples of f on a square grid centered at the origin.

    values[i, j] = f(x_i, y_j) with x_i = (i - (n-1)/2) * h.
    """

    values: np.ndarray
    h: float
    warnings: tuple = ()

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("grid values must be a square matrix")
        if v.shape[0] < 16:
            raise ValueError("grid must be at least 16x16")
        if not np.all(np.isfinite(v)):
            raise ValueError("grid samples must be finite")
        if self.h <= 0:
            raise ValueError("grid spacing must be positive")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def half_extent(self) -> float:
        return (self.n - 1) / 2.0 * self.h

    @property
    def half_diagonal(self) -> float:
        return self.half_extent * np.sqrt(2.0)

    def axis(self) -> np.ndarray:
        n = self.n
        return (np.arange(n) - (n - 1) / 2.0) * self.h

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        ax = self.axis()
        return np.meshgrid(ax, ax, indexing="ij")

    def integral(self) -> float:
        return float(self.values.sum()) * self.h**2

    def with_warnings(self, *names: str) -> "GridFunction2D":
        return GridFunction2D(self.values, self.h, self.warnings + names)

    def boundary_leakage(self) -> float:
        """Largest boundary-ring magnitude relative to the grid max."""
        v = self.values
        peak = float(np.abs(v).max())
        if peak == 0.0:
            return 0.0
        ring = max(
            float(np.abs(v[0, :]).max()),
            float(np.abs(v[-1, :]).max()),
            float(np.abs(v[:, 0]).max()),
            float(np.abs(v[:, -1]).max()),
        )
        return ring / peak

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x,y,value\n")
        ax = self.axis()
        for i, x in enumerate(ax):
            for j, y in enumerate(ax):
                buf.write(f"{x:.17g},{y:.17g},{self.values[i, j]:.17g}\n")
        return buf.getvalue()

    @staticmethod
    def from_csv(text: str) -> "GridFunction2D":
        rows = text.strip().splitlines()
        if not rows or rows[0].strip().lower() != "x,y,value":
            raise ValueError("grid CSV must start with header 'x,y,value'")
        data = np.array([[float(c) for c in r.split(",")] for r in rows[1:]])
        xs = np.unique(data[:, 0])
        n = xs.size
        if n * n != data.shape[0]:
            raise ValueError("grid CSV is not a full square grid")
        h = float(xs[1] - xs[0]) if n > 1 else 1.0
        values = np.zeros((n, n))
        idx = lambda c: np.searchsorted(xs, c)
        for x, y, v in data:
            values[idx(x), idx(y)] = v
        return GridFunction2D(values, h)


def sample_grid(func, n: int, half_extent: float) -> GridFunction2D:
    """Sample a callable f(x, y) (vectorized) on an n x n centered grid."""
    h = 2.0 * half_extent / n
    ax = (np.arange(n) - (n - 1) / 2.0) * h
    X, Y = np.meshgrid(ax, ax, indexing="ij")
    return GridFunction2D(np.asarray(func(X, Y), dtype=float), h)
