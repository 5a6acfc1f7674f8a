import math

import numpy as np
import pytest

from rnorm import GridFunction2D, sample_grid


def test_sample_grid_shape_and_axis():
    f = sample_grid(lambda X, Y: X + 2 * Y, 32, 4.0)
    assert f.n == 32
    assert f.h == pytest.approx(8.0 / 32)
    ax = f.axis()
    assert ax.size == 32
    assert ax[0] == pytest.approx(-ax[-1])
    X, Y = f.meshgrid()
    assert np.allclose(f.values, X + 2 * Y)


def test_gaussian_integral():
    f = sample_grid(lambda X, Y: np.exp(-(X**2 + Y**2) / 2.0), 256, 8.0)
    assert f.integral() == pytest.approx(2.0 * math.pi, rel=1e-6)


def test_half_extent_and_diagonal():
    f = sample_grid(lambda X, Y: 0 * X, 16, 1.0)
    assert f.half_extent == pytest.approx((16 - 1) / 2.0 * f.h)
    assert f.half_diagonal == pytest.approx(f.half_extent * math.sqrt(2.0))


def test_csv_round_trip_exact():
    f = sample_grid(lambda X, Y: np.sin(X) * np.cos(Y), 16, 2.0)
    g = GridFunction2D.from_csv(f.to_csv())
    assert g.h == pytest.approx(f.h, rel=1e-15)
    assert np.array_equal(g.values, f.values)


def test_csv_rejects_bad_header_and_partial_grid():
    with pytest.raises(ValueError):
        GridFunction2D.from_csv("a,b,c\n0,0,1\n")
    f = sample_grid(lambda X, Y: X, 16, 1.0)
    truncated = "\n".join(f.to_csv().splitlines()[:-5])
    with pytest.raises(ValueError):
        GridFunction2D.from_csv(truncated)


@pytest.mark.parametrize(
    "values,h",
    [
        (np.zeros((8, 8)), 1.0),  # too small
        (np.zeros((16, 17)), 1.0),  # not square
        (np.full((16, 16), np.nan), 1.0),  # non-finite
        (np.zeros((16, 16)), 0.0),  # bad spacing
    ],
)
def test_validation_errors(values, h):
    with pytest.raises(ValueError):
        GridFunction2D(values, h)


def test_boundary_leakage():
    compact = sample_grid(lambda X, Y: np.exp(-(X**2 + Y**2)), 64, 8.0)
    assert compact.boundary_leakage() < 1e-10
    flat = GridFunction2D(np.ones((16, 16)), 1.0)
    assert flat.boundary_leakage() == pytest.approx(1.0)
    zero = GridFunction2D(np.zeros((16, 16)), 1.0)
    assert zero.boundary_leakage() == 0.0


def test_values_are_read_only():
    f = sample_grid(lambda X, Y: X, 16, 1.0)
    with pytest.raises(ValueError):
        f.values[0, 0] = 5.0


def test_with_warnings_accumulates():
    f = sample_grid(lambda X, Y: X, 16, 1.0).with_warnings("a").with_warnings("b")
    assert f.warnings == ("a", "b")
