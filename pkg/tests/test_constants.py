import math

import pytest

from rnorm import constants, sphere_area


def test_gamma_2_is_quarter_pi_inverse():
    assert constants(2).gamma_d == pytest.approx(1.0 / (4.0 * math.pi), rel=1e-15)


def test_d3_closed_forms():
    c = constants(3)
    assert c.gamma_d == pytest.approx(1.0 / (8.0 * math.pi**2), rel=1e-15)
    assert c.c_d == pytest.approx(4.0 * math.pi, rel=1e-15)


def test_d3_identity_is_one():
    assert constants(3).gamma_d * constants(3).c_d * constants(2).c_d == pytest.approx(1.0, rel=1e-13)


@pytest.mark.parametrize("d", [3, 5, 7, 9])
def test_constants_identity_odd_d(d):
    lhs = constants(d).gamma_d * constants(d).c_d * constants(d - 1).c_d
    assert lhs == pytest.approx(1.0 / math.factorial(d - 2), rel=1e-12)


@pytest.mark.parametrize("d", [0, -1])
def test_nonpositive_dimension_rejected(d):
    with pytest.raises(ValueError):
        constants(d)


def test_sphere_area_matches_circle_and_sphere():
    assert sphere_area(2) == pytest.approx(2.0 * math.pi, rel=1e-15)
    assert sphere_area(3) == pytest.approx(4.0 * math.pi, rel=1e-15)
