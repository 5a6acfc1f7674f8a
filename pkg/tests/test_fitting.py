import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rnorm import (
    AtomicMeasure,
    FiniteReluNet,
    FitProblem,
    build_dictionary,
    even_part,
    lp_oracle,
    min_norm_fit,
    refinement_study,
)


def _disc_samples(n: int, radius: float, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    rr = radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    th = rng.uniform(0.0, 2.0 * math.pi, n)
    return np.stack([rr * np.cos(th), rr * np.sin(th)], axis=1)


class TestAtomicMeasure:
    def test_merges_nearby_atoms(self):
        w = np.array([1.0, 0.0])
        m = AtomicMeasure(((w, 0.5, 1.0), (w + 1e-12, 0.5, 2.0), (w, -0.5, -1.5)))
        assert len(m) == 2
        assert m.total_variation == pytest.approx(4.5)

    def test_cancelled_atoms_dropped(self):
        w = np.array([0.0, 1.0])
        m = AtomicMeasure(((w, 0.0, 1.0), (w, 0.0, -1.0)))
        assert len(m) == 0
        assert m.total_variation == 0.0

    def test_even_part_averages_antipodes(self):
        w = np.array([1.0, 0.0])
        m = AtomicMeasure(((w, 0.5, 2.0),))
        e = even_part(m)
        assert len(e) == 2
        assert e.total_variation == pytest.approx(2.0)
        weights = {(round(a[0][0]), a[1]): a[2] for a in e.atoms}
        assert weights[(1, 0.5)] == pytest.approx(1.0)
        assert weights[(-1, -0.5)] == pytest.approx(1.0)

    def test_even_part_idempotent(self):
        w = np.array([1.0, 0.0])
        m = AtomicMeasure(((w, 0.5, 2.0), (-w, -0.5, 1.0)))
        once = even_part(m)
        twice = even_part(once)
        assert once.total_variation == pytest.approx(twice.total_variation, rel=1e-15)


@given(st.lists(st.tuples(st.floats(-3, 3), st.floats(-1, 1)), min_size=1, max_size=6))
@settings(max_examples=50, deadline=None)
def test_even_part_never_increases_total_variation(entries):
    atoms = []
    for i, (wt, b) in enumerate(entries):
        th = 0.7 * i
        atoms.append((np.array([math.cos(th), math.sin(th)]), b, wt))
    m = AtomicMeasure(tuple(atoms))
    assert even_part(m).total_variation <= m.total_variation + 1e-12


class TestFitProblem:
    def test_validation(self):
        X = np.zeros((3, 2))
        with pytest.raises(ValueError):
            FitProblem(X, np.zeros(2))
        with pytest.raises(ValueError):
            FitProblem(X, np.zeros(3), tol=-1.0)
        with pytest.raises(ValueError):
            FitProblem(np.ones((3, 2)), np.zeros(3), offset_range=1.0)

    def test_default_offset_range_covers_hull(self):
        X = 2.0 * np.eye(2)
        p = FitProblem(X, np.zeros(2))
        assert p.offset_range == pytest.approx(2.1)
        angles, offsets = p.atom_grid()
        assert angles.size == p.K and offsets.size == p.J
        assert offsets[0] == -offsets[-1] == -p.offset_range

    def test_atom_grid_requires_2d(self):
        p = FitProblem(np.ones((3, 3)), np.zeros(3))
        with pytest.raises(ValueError):
            p.atom_grid()


class TestDictionary:
    def test_column_formula(self):
        X = np.array([[0.5, 0.0]])
        p = FitProblem(X, np.array([0.0]), K=4, J=3, offset_range=1.0)
        Phi, L = build_dictionary(p)
        angles, offsets = p.atom_grid()
        k, j = 1, 0  # w = (0, 1), b = -1
        w = np.array([math.cos(angles[k]), math.sin(angles[k])])
        b = offsets[j]
        expected = max(float(X[0] @ w) - b, 0.0) - max(-b, 0.0)
        assert Phi[0, k * p.J + j] == pytest.approx(expected, abs=1e-15)
        # linear unit plus constant column
        assert L.shape == (1, 3)
        assert np.allclose(L[0], [0.5, 0.0, 1.0])

    def test_columns_vanish_at_origin(self):
        X = np.array([[0.0, 0.0], [0.3, -0.2]])
        p = FitProblem(X, np.zeros(2), K=8, J=9)
        Phi, _ = build_dictionary(p)
        assert np.abs(Phi[0]).max() == 0.0

    def test_origin_value_removes_constant_column(self):
        X = np.array([[0.5, 0.0]])
        p = FitProblem(X, np.array([0.0]), K=4, J=3, origin_value=0.0)
        _, L = build_dictionary(p)
        assert L.shape == (1, 2)


class TestSolver:
    def test_pure_linear_target_costs_nothing(self):
        X = _disc_samples(60, 1.5, 3)
        y = X @ np.array([1.0, 2.0]) + 0.5
        fit = min_norm_fit(FitProblem(X, y, K=16, J=17, tol=1e-3), max_iter=5000)
        assert fit.objective <= 1e-6
        assert np.allclose(fit.v, [1.0, 2.0], atol=1e-3)
        assert fit.c == pytest.approx(0.5, abs=1e-3)
        assert fit.residual_max <= 1e-3 * 1.001 + 1e-9

    def test_result_net_reproduces_fit(self):
        X = _disc_samples(50, 1.2, 5)
        y = np.abs(X[:, 0]) - 0.3 * X[:, 1]
        fit = min_norm_fit(FitProblem(X, y, K=16, J=17, tol=1e-3))
        net = fit.as_net()
        assert np.abs(net(X) - y).max() <= fit.residual_max + 1e-8

    def test_matches_lp_oracle(self):
        X = _disc_samples(40, 1.0, 7)
        y = np.abs(X[:, 0] + X[:, 1]) / math.sqrt(2.0)
        p = FitProblem(X, y, K=16, J=17, tol=1e-3)
        fit = min_norm_fit(p)
        exact = lp_oracle(p)
        assert fit.objective == pytest.approx(exact, rel=0.005)

    def test_measure_is_even(self):
        X = _disc_samples(30, 1.0, 9)
        y = np.abs(X[:, 0])
        fit = min_norm_fit(FitProblem(X, y, K=8, J=9, tol=1e-2), max_iter=4000)
        atoms = {(round(w[0], 6), round(w[1], 6), round(b, 6)): wt for w, b, wt in fit.measure.atoms}
        for (w0, w1, b), wt in atoms.items():
            assert atoms[(-w0, -w1 if w1 != 0 else 0.0, -b if b != 0 else 0.0)] == pytest.approx(wt)

    def test_deterministic(self):
        X = _disc_samples(30, 1.0, 11)
        y = np.abs(X[:, 1])
        p = FitProblem(X, y, K=8, J=9, tol=1e-2)
        a = min_norm_fit(p, max_iter=2000)
        b = min_norm_fit(p, max_iter=2000)
        assert a.objective == b.objective
        assert a.iterations == b.iterations
        assert np.array_equal(a.v, b.v)


class TestRefinement:
    def test_validation(self):
        X = _disc_samples(10, 1.0, 0)
        p = FitProblem(X, np.zeros(10), K=8, J=9)
        with pytest.raises(ValueError):
            refinement_study(p, 1)
        with pytest.raises(ValueError):
            refinement_study(p, 2, method="newton")

    def test_levels_double_grid_and_samples(self):
        X = _disc_samples(12, 1.0, 1)
        p = FitProblem(X, X @ np.array([1.0, 0.0]), K=8, J=9, tol=1e-2)
        rows = refinement_study(p, 2, target=lambda Z: Z @ np.array([1.0, 0.0]), max_iter=1500)
        assert [r["K"] for r in rows] == [8, 16]
        assert [r["J"] for r in rows] == [9, 17]
        assert all(r["norm"] <= 1e-4 for r in rows)  # linear target is free

    def test_lp_method_reports_zero_gap(self):
        X = _disc_samples(12, 1.0, 2)
        target = lambda Z: np.abs(Z @ np.array([0.0, 1.0]))
        p = FitProblem(X, target(X), K=8, J=9, tol=1e-2)
        rows = refinement_study(p, 2, target=target, method="lp")
        assert all(r["gap"] == 0.0 for r in rows)
        assert all(r["norm"] == pytest.approx(2.0, rel=0.25) for r in rows)


def test_lp_oracle_on_representable_target():
    # |w.x| with w on the atom grid costs exactly 2 under interpolation.
    X = _disc_samples(40, 1.0, 13)
    y = np.abs(X[:, 0])
    value = lp_oracle(FitProblem(X, y, K=8, J=9, tol=0.0))
    assert value == pytest.approx(2.0, rel=1e-6)
