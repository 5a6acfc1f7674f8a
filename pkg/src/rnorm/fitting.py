"""Minimum-total-variation measure recovery over a discretized ReLU atom dictionary.

The primary solver is a Chambolle-Pock primal-dual iteration on

    min ||a||_1   s.t.  |Phi a + L z - y|_inf <= tau,

with the linear unit and bias collected in the unpenalized block L z.  An
independent exact LP oracle (scipy HiGHS) backs the same discretization for
cross-checking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .engine import FiniteReluNet

ATOM_MERGE_TOL = 1e-9
DEFAULT_MAX_ITER = 50_000
INTERPOLATION_SLACK = 1e-8


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite signed combination of Diracs on S^(d-1) x R."""

    atoms: tuple  # of (w: unit vector, b: float, weight: float)

    def __post_init__(self):
        merged: list[list] = []
        for w, b, wt in self.atoms:
            w = np.asarray(w, dtype=float)
            for atom in merged:
                if np.linalg.norm(atom[0] - w) + abs(atom[1] - b) <= ATOM_MERGE_TOL:
                    atom[2] += wt
                    break
            else:
                merged.append([w, float(b), float(wt)])
        cleaned = []
        for w, b, wt in merged:
            if wt != 0:
                w.setflags(write=False)
                cleaned.append((w, b, wt))
        object.__setattr__(self, "atoms", tuple(cleaned))

    @property
    def total_variation(self) -> float:
        return sum(abs(wt) for _, _, wt in self.atoms)

    def __len__(self) -> int:
        return len(self.atoms)


def even_part(m: AtomicMeasure) -> AtomicMeasure:
    """Replace the weights at (w, b) and (-w, -b) by their average at both points."""
    out = []
    for w, b, wt in m.atoms:
        out.append((w, b, wt / 2.0))
        out.append((-w, -b, wt / 2.0))
    return AtomicMeasure(tuple(out))


@dataclass(frozen=True)
class FitProblem:
    """Samples plus the atom-grid discretization of the fitting program."""

    X: np.ndarray
    y: np.ndarray
    K: int = 64
    J: int = 65
    tol: float = 1e-3
    use_linear_unit: bool = True
    offset_range: float | None = None
    origin_value: float | None = None  # pin the fit at x=0 to this value

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        if X.shape[0] != y.size or X.shape[0] < 1:
            raise ValueError("need one target per sample point")
        if self.tol < 0:
            raise ValueError("tolerance must be nonnegative")
        B = self.offset_range
        radius = float(np.linalg.norm(X, axis=1).max())
        if B is None:
            B = 1.05 * radius if radius > 0 else 1.0
        elif B < radius:
            raise ValueError("atom offset range does not cover the sample hull")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "offset_range", float(B))

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def atom_grid(self) -> tuple[np.ndarray, np.ndarray]:
        """Full-circle angle grid and uniform offsets for d=2."""
        if self.d != 2:
            raise ValueError("atom dictionaries are implemented for d=2")
        angles = np.arange(self.K) * 2.0 * math.pi / self.K
        offsets = np.linspace(-self.offset_range, self.offset_range, self.J)
        return angles, offsets


@dataclass(frozen=True)
class FitResult:
    measure: AtomicMeasure
    v: np.ndarray
    c: float
    residual_max: float
    duality_gap: float
    iterations: int
    objective: float
    converged: bool = True

    def as_net(self, d: int = 2) -> FiniteReluNet:
        """Equivalent finite net; the -[-b]_+ dictionary offsets fold into the bias."""
        units = tuple((wt, w, b) for w, b, wt in self.measure.atoms)
        shift = sum(wt * max(-b, 0.0) for _, b, wt in self.measure.atoms)
        return FiniteReluNet(d=d, units=units, v=self.v, c=self.c - shift)

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "v": list(map(float, self.v)),
            "c": self.c,
            "residual_max": self.residual_max,
            "duality_gap": self.duality_gap,
            "iterations": self.iterations,
            "converged": self.converged,
            "atoms": [[list(map(float, w)), b, wt] for w, b, wt in self.measure.atoms],
        }


def build_dictionary(p: FitProblem) -> tuple[np.ndarray, np.ndarray]:
    """Feature matrix: column (k, j) holds [w_k.x - b_j]_+ - [-b_j]_+ per sample.

    Returns (Phi, L) where L stacks the unpenalized columns: sample
    coordinates when the linear unit is enabled, plus the constant column
    unless the origin value is pinned.
    """
    angles, offsets = p.atom_grid()
    W = np.stack([np.cos(angles), np.sin(angles)], axis=1)  # (K, 2)
    proj = p.X @ W.T  # (N, K)
    # (N, K, J) -> (N, K*J), offset-major within each angle block
    Phi = np.maximum(proj[:, :, None] - offsets[None, None, :], 0.0) - np.maximum(
        -offsets[None, None, :], 0.0
    )
    Phi = Phi.reshape(p.X.shape[0], -1)
    cols = []
    if p.use_linear_unit:
        cols.append(p.X)
    if p.origin_value is None:
        cols.append(np.ones((p.X.shape[0], 1)))
    L = np.concatenate(cols, axis=1) if cols else np.zeros((p.X.shape[0], 0))
    return Phi, L


def _symmetrized_dictionary(p: FitProblem) -> tuple[np.ndarray, np.ndarray]:
    """Even-measure feature matrix: variable (k, j) places mass t/2 at both
    (w_k, b_j) and (-w_k, -b_j), so its column is 0.5 (|w_k.x - b_j| - |b_j|).

    The representing measure of a two-layer net is even; without this tying a
    one-sided atom at the far edge of the offset range would represent any
    linear trend at half its true cost on a bounded sample set.
    """
    angles, offsets = p.atom_grid()
    W = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    proj = p.X @ W.T
    Psi = 0.5 * (np.abs(proj[:, :, None] - offsets[None, None, :]) - np.abs(offsets)[None, None, :])
    Psi = Psi.reshape(p.X.shape[0], -1)
    cols = []
    if p.use_linear_unit:
        cols.append(p.X)
    if p.origin_value is None:
        cols.append(np.ones((p.X.shape[0], 1)))
    L = np.concatenate(cols, axis=1) if cols else np.zeros((p.X.shape[0], 0))
    return Psi, L


def _grid_atoms(p: FitProblem) -> list[tuple[np.ndarray, float]]:
    angles, offsets = p.atom_grid()
    out = []
    for th in angles:
        w = np.array([math.cos(th), math.sin(th)])
        for b in offsets:
            out.append((w, float(b)))
    return out


def _result_from_weights(
    p: FitProblem, a: np.ndarray, zcols: np.ndarray, Phi: np.ndarray, L: np.ndarray,
    gap: float, iters: int, converged: bool,
) -> FitResult:
    atoms = _grid_atoms(p)
    keep = np.abs(a) > 1e-10
    halves = []
    for i in np.nonzero(keep)[0]:
        w, b = atoms[i]
        halves.append((w, b, float(a[i]) / 2.0))
        halves.append((-w, -b, float(a[i]) / 2.0))
    measure = AtomicMeasure(tuple(halves))
    if p.use_linear_unit:
        v = zcols[: p.d]
        rest = zcols[p.d :]
    else:
        v = np.zeros(p.d)
        rest = zcols
    c = float(rest[0]) if rest.size else float(p.origin_value)
    yhat = Phi @ a + (L @ zcols if L.shape[1] else 0.0)
    if p.origin_value is not None:
        yhat = yhat + p.origin_value
    residual = float(np.abs(yhat - p.y).max())
    return FitResult(
        measure=measure,
        v=np.asarray(v, dtype=float),
        c=c,
        residual_max=residual,
        duality_gap=gap,
        iterations=iters,
        objective=float(np.abs(a).sum()),
        converged=converged,
    )


def min_norm_fit(
    p: FitProblem,
    max_iter: int = DEFAULT_MAX_ITER,
    gap_tol: float | None = None,
    check_every: int = 250,
) -> FitResult:
    """First-order primal-dual solve of the tau-tube minimum-L1 program.

    Deterministic: zero initialization, fixed step sizes from a 100-step
    power iteration with a fixed seed.  Stops at duality gap <=
    1e-6 * ||y||_inf (or gap_tol) or at max_iter.
    """
    Phi, L = _symmetrized_dictionary(p)
    y = p.y - (p.origin_value or 0.0) if p.origin_value is not None else p.y
    tau = max(p.tol, INTERPOLATION_SLACK)
    yscale = max(float(np.abs(y).max()), 1e-12)
    if gap_tol is None:
        gap_tol = 1e-6 * yscale

    # column equilibration keeps the problem equivalent via weighted soft-thresholds
    colnorm = np.linalg.norm(Phi, axis=0)
    colnorm[colnorm == 0] = 1.0
    Phis = Phi / colnorm
    Kmat = np.concatenate([Phis, L], axis=1) if L.shape[1] else Phis
    M = Phis.shape[1]

    rng = np.random.default_rng(0)
    vec = rng.standard_normal(Kmat.shape[1])
    for _ in range(100):
        vec = Kmat.T @ (Kmat @ vec)
        vec /= np.linalg.norm(vec)
    opnorm = math.sqrt(float(vec @ (Kmat.T @ (Kmat @ vec))))
    step = 0.99 / max(opnorm, 1e-12)

    Lpinv = np.linalg.pinv(L) if L.shape[1] else None

    a = np.zeros(M)
    z = np.zeros(L.shape[1])
    lam = np.zeros(y.size)
    a_bar, z_bar = a.copy(), z.copy()
    weights = 1.0 / colnorm  # l1 weights of the equilibrated variables

    def dual_value(lam_raw: np.ndarray) -> float:
        lam_f = lam_raw.copy()
        if Lpinv is not None:
            lam_f = lam_f - L @ (Lpinv @ lam_f)
        scale = float(np.abs(Phi.T @ lam_f).max())
        if scale > 1.0:
            lam_f = lam_f / scale
        return float(-y @ lam_f - tau * np.abs(lam_f).sum())

    gap = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        u = lam + step * (Phis @ a_bar + (L @ z_bar if z.size else 0.0)) - step * y
        lam = np.sign(u) * np.maximum(np.abs(u) - step * tau, 0.0)
        a_old, z_old = a, z
        grad_a = Phis.T @ lam
        a = np.sign(a - step * grad_a) * np.maximum(np.abs(a - step * grad_a) - step * weights, 0.0)
        if z.size:
            z = z - step * (L.T @ lam)
        a_bar = 2.0 * a - a_old
        z_bar = 2.0 * z - z_old
        if it % check_every == 0:
            resid = float(np.abs(Phis @ a + (L @ z if z.size else 0.0) - y).max())
            primal = float((weights * np.abs(a)).sum())
            gap = primal - dual_value(lam)
            if resid <= tau * (1.0 + 1e-3) + 1e-9 and gap <= gap_tol:
                break

    a_true = a / colnorm
    resid = float(np.abs(Phi @ a_true + (L @ z if z.size else 0.0) - y).max())
    converged = gap <= gap_tol and resid <= tau * (1.0 + 1e-3) + 1e-9
    return _result_from_weights(p, a_true, z, Phi, L, gap, it, converged)


def lp_oracle(p: FitProblem) -> float:
    """Exact LP value of the same discretized program (independent of the solver).

    Split form: min sum(a+ + a-) subject to |Psi (a+ - a-) + L z - y| <= tau
    componentwise, solved by HiGHS.
    """
    from scipy.optimize import linprog

    Phi, L = _symmetrized_dictionary(p)
    y = p.y - (p.origin_value or 0.0) if p.origin_value is not None else p.y
    tau = max(p.tol, INTERPOLATION_SLACK)
    N, M = Phi.shape
    nz = L.shape[1]
    cost = np.concatenate([np.ones(2 * M), np.zeros(nz)])
    block = np.concatenate([Phi, -Phi, L], axis=1)
    A_ub = np.concatenate([block, -block], axis=0)
    del block
    b_ub = np.concatenate([y + tau, tau - y])
    bounds = [(0, None)] * (2 * M) + [(None, None)] * nz
    res = linprog(cost, A_ub=A_ub, b_ub=b_ub, bounds=bounds, method="highs")
    if not res.success:
        raise RuntimeError(f"LP oracle failed: {res.message}")
    return float(res.fun)


def refinement_study(
    p: FitProblem,
    levels: int,
    target=None,
    seed: int = 0,
    method: str = "primal-dual",
    radius: float | None = None,
    max_iter: int = 20_000,
    gap_rel: float = 1e-4,
) -> list[dict]:
    """Rerun the fit doubling K and J per level; report the norm trajectory.

    When a target callable is given, the sample set is refined alongside the
    dictionary: one pool of points is drawn in the disc of the base problem's
    sample radius, and level l uses the first N * 2**l of them (nested
    prefixes keep the trajectory comparable across levels).  With a fixed
    sample set and nested dictionaries the minimum could only decrease, which
    would hide infinite-norm blow-up.  method="lp" solves each level exactly.
    """
    if levels < 2:
        raise ValueError("need at least 2 refinement levels")
    if method not in ("primal-dual", "lp"):
        raise ValueError(f"unknown refinement method {method!r}")
    if radius is None:
        radius = float(np.linalg.norm(p.X, axis=1).max())
    if target is not None:
        rng = np.random.default_rng(seed)
        n_pool = p.X.shape[0] * 2 ** (levels - 1)
        rr = radius * np.sqrt(rng.uniform(0.0, 1.0, n_pool))
        th = rng.uniform(0.0, 2.0 * math.pi, n_pool)
        pool = np.stack([rr * np.cos(th), rr * np.sin(th)], axis=1)
    rows = []
    for level in range(levels):
        K = p.K * 2**level
        J = (p.J - 1) * 2**level + 1
        if target is None:
            X, y = p.X, p.y
        else:
            X = pool[: p.X.shape[0] * 2**level]
            y = np.asarray(target(X), dtype=float)
        prob = FitProblem(
            X, y, K=K, J=J, tol=p.tol, use_linear_unit=p.use_linear_unit,
            offset_range=p.offset_range, origin_value=p.origin_value,
        )
        if method == "lp":
            rows.append({"K": K, "J": J, "norm": lp_oracle(prob), "gap": 0.0})
        else:
            yscale = max(float(np.abs(y).max()), 1e-12)
            fit = min_norm_fit(prob, max_iter=max_iter, gap_tol=gap_rel * yscale)
            rows.append({"K": K, "J": J, "norm": fit.objective, "gap": fit.duality_gap})
    return rows
