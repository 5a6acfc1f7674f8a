"""Exact piecewise-polynomial calculus with distributional (Dirac) bookkeeping.

Polynomials are coefficient lists in ascending powers.  Coefficients are kept
as exact `Fraction`s whenever the inputs are rational, so repeated
differentiation and the |polynomial| integrals stay exact up to the float
conversion at the very end.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

BREAKPOINT_TOL = 1e-12

Coeffs = tuple


def _as_exact(x):
    """Promote ints/Fractions untouched, leave floats as floats."""
    if isinstance(x, Rational):
        return Fraction(x)
    return float(x)


def poly_trim(coeffs) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_add(a, b):
    n = max(len(a), len(b))
    return poly_trim(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))


def poly_scale(a, s):
    return poly_trim(tuple(c * s for c in a))


def poly_mul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] += ca * cb
    return poly_trim(tuple(out))


def poly_derivative(coeffs):
    return poly_trim(tuple(coeffs[i] * i for i in range(1, len(coeffs))))


def poly_antiderivative(coeffs):
    out = [0]
    for i, c in enumerate(coeffs):
        if isinstance(c, Rational):
            out.append(Fraction(c, i + 1))
        else:
            out.append(c / (i + 1))
    return poly_trim(tuple(out))


def _poly_real_roots(coeffs, lo: float, hi: float) -> list[float]:
    """Real roots of the polynomial strictly inside (lo, hi).

    Companion-matrix roots followed by a few Newton polish steps; tolerance
    matches the 1e-12 breakpoint convention of the symbolic pipelines.
    """
    cf = [float(c) for c in coeffs]
    cf = list(poly_trim(tuple(cf)))
    if len(cf) <= 1:
        return []
    rts = np.roots(cf[::-1])
    dcf = [float(c) for c in poly_derivative(cf)]
    out = []
    span = max(hi - lo, 1.0)
    for r in rts:
        if abs(r.imag) > 1e-7 * (1.0 + abs(r.real)):
            continue
        x = float(r.real)
        for _ in range(4):
            d = poly_eval(dcf, x)
            if d == 0:
                break
            x -= poly_eval(cf, x) / d
        if lo + 1e-14 * span < x < hi - 1e-14 * span:
            out.append(x)
    out.sort()
    dedup: list[float] = []
    for x in out:
        if not dedup or x - dedup[-1] > 1e-12 * span:
            dedup.append(x)
    return dedup


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Piecewise polynomial on consecutive intervals between sorted breakpoints.

    With ``compact=True`` the function is identically zero outside
    [breakpoints[0], breakpoints[-1]]; otherwise the outer pieces extend to
    +/- infinity.
    """

    breakpoints: tuple = ()
    pieces: tuple = ()
    compact: bool = True

    def __post_init__(self):
        bps = [_as_exact(b) for b in self.breakpoints]
        for a, b in zip(bps, bps[1:]):
            if not float(b) - float(a) > BREAKPOINT_TOL:
                raise ValueError("breakpoints must be strictly increasing")
        if self.breakpoints and len(self.pieces) != len(self.breakpoints) - 1:
            raise ValueError("need exactly one piece per breakpoint interval")
        object.__setattr__(self, "breakpoints", tuple(bps))
        object.__setattr__(
            self, "pieces", tuple(poly_trim(tuple(_as_exact(c) for c in p)) for p in self.pieces)
        )

    @staticmethod
    def zero() -> "PiecewisePolynomial":
        return PiecewisePolynomial((), (), compact=True)

    @staticmethod
    def constant(value, lo=None, hi=None) -> "PiecewisePolynomial":
        """Constant on [lo, hi], or on all of R when no bounds are given."""
        if lo is None:
            return PiecewisePolynomial((-1, 1), ((value,),), compact=False)
        return PiecewisePolynomial((lo, hi), ((value,),), compact=True)

    @property
    def is_zero(self) -> bool:
        return all(not p for p in self.pieces)

    def _piece_index(self, b: float) -> int | None:
        bps = [float(x) for x in self.breakpoints]
        if not self.pieces:
            return None
        if b < bps[0]:
            return 0 if not self.compact else None
        if b >= bps[-1]:
            return len(self.pieces) - 1 if not self.compact else None
        lo = 0
        for i in range(len(self.pieces)):
            if bps[i] <= b < bps[i + 1]:
                lo = i
                break
        return lo

    def __call__(self, b):
        if np.ndim(b) > 0:
            return np.array([self(float(x)) for x in np.asarray(b).ravel()]).reshape(np.shape(b))
        i = self._piece_index(float(b))
        if i is None:
            return 0.0
        return float(poly_eval(self.pieces[i], float(b)))

    def eval_exact(self, b):
        """Evaluate keeping exact arithmetic when b is rational."""
        i = self._piece_index(float(b))
        if i is None:
            return Fraction(0)
        return poly_eval(self.pieces[i], b)

    def boundary_jumps(self) -> list[tuple]:
        """(location, jump) at each breakpoint; jump = right limit - left limit."""
        out = []
        n = len(self.pieces)
        for idx, bp in enumerate(self.breakpoints):
            if idx == 0:
                left = 0 if self.compact else poly_eval(self.pieces[0], bp)
                right = poly_eval(self.pieces[0], bp) if n else 0
            elif idx == len(self.breakpoints) - 1:
                left = poly_eval(self.pieces[-1], bp) if n else 0
                right = 0 if self.compact else poly_eval(self.pieces[-1], bp)
            else:
                left = poly_eval(self.pieces[idx - 1], bp)
                right = poly_eval(self.pieces[idx], bp)
            jump = right - left
            if jump != 0 and abs(float(jump)) > 1e-14 * (1.0 + abs(float(left)) + abs(float(right))):
                out.append((bp, jump))
        return out

    def derivative_pieces(self) -> "PiecewisePolynomial":
        return PiecewisePolynomial(
            self.breakpoints, tuple(poly_derivative(p) for p in self.pieces), self.compact
        )

    def scale(self, s) -> "PiecewisePolynomial":
        return PiecewisePolynomial(
            self.breakpoints, tuple(poly_scale(p, s) for p in self.pieces), self.compact
        )

    def abs_integral(self) -> float:
        """Exact integral of |p| over its domain; inf for unbounded support."""
        if not self.pieces or self.is_zero:
            return 0.0
        if not self.compact:
            outer = (self.pieces[0], self.pieces[-1])
            if any(p for p in outer):
                return math.inf
        total = 0.0
        for i, coeffs in enumerate(self.pieces):
            if not coeffs:
                continue
            lo = float(self.breakpoints[i])
            hi = float(self.breakpoints[i + 1])
            anti = poly_antiderivative(coeffs)
            pts = [lo] + _poly_real_roots(coeffs, lo, hi) + [hi]
            for a, b in zip(pts, pts[1:]):
                total += abs(float(poly_eval(anti, b)) - float(poly_eval(anti, a)))
        return total

    def to_json(self) -> str:
        return json.dumps(
            {
                "breakpoints": [float(b) for b in self.breakpoints],
                "pieces": [[float(c) for c in p] for p in self.pieces],
            }
        )

    @staticmethod
    def from_json(text: str) -> "PiecewisePolynomial":
        obj = json.loads(text)
        return PiecewisePolynomial(tuple(obj["breakpoints"]), tuple(tuple(p) for p in obj["pieces"]))


@dataclass(frozen=True)
class DistributionalProfile:
    """Absolutely continuous piecewise polynomial plus Dirac atoms.

    atom_derivative_order > 0 records that a delta has itself been
    differentiated, at which point the total variation is infinite.
    """

    ac: PiecewisePolynomial
    atoms: tuple = ()
    atom_derivative_order: int = 0

    def __post_init__(self):
        cleaned = tuple((loc, m) for loc, m in self.atoms if m != 0 and abs(float(m)) > 1e-300)
        object.__setattr__(self, "atoms", cleaned)


def _merge_atoms(atoms: list[tuple]) -> tuple:
    merged: list[list] = []
    for loc, mass in sorted(atoms, key=lambda a: float(a[0])):
        if merged and abs(float(loc) - float(merged[-1][0])) <= BREAKPOINT_TOL:
            merged[-1][1] += mass
        else:
            merged.append([loc, mass])
    return tuple((loc, m) for loc, m in merged if m != 0)


def pw_derivative(p: PiecewisePolynomial) -> DistributionalProfile:
    """Distributional derivative: piecewise derivative plus one jump atom per breakpoint."""
    return DistributionalProfile(
        ac=p.derivative_pieces(),
        atoms=_merge_atoms(p.boundary_jumps()),
        atom_derivative_order=0,
    )


def profile_derivative(q: DistributionalProfile) -> DistributionalProfile:
    """Differentiate a profile once more; any pre-existing atom becomes a delta derivative."""
    base = pw_derivative(q.ac)
    order = q.atom_derivative_order
    if q.atoms or order > 0:
        order += 1
    return DistributionalProfile(
        ac=base.ac,
        atoms=_merge_atoms(list(base.atoms)),
        atom_derivative_order=order,
    )


def profile_l1(q: DistributionalProfile) -> float:
    """Total variation: integral of |ac| plus summed |atom masses|; inf past order 0."""
    if q.atom_derivative_order >= 1:
        return math.inf
    ac = q.ac.abs_integral()
    if math.isinf(ac):
        return math.inf
    return ac + sum(abs(float(m)) for _, m in q.atoms)
