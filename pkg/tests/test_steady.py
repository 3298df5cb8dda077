"""Tests for the unperturbed profiles and boundary speeds."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helestab.specialfn import bessel_i, bessel_k
from helestab.steady import (
    ModelParams,
    Radial,
    Regime,
    radial_coeffs,
    radial_nutrient,
    radial_pressure,
    radial_speed,
    tw_nutrient,
    tw_pressure,
    tw_speed,
)

VITRO, VIVO = Regime.IN_VITRO, Regime.IN_VIVO

# (lam, R, in vitro speed, in vivo speed) with g0 = cb = 1; mpmath, 40 digits
FROZEN_SPEEDS = [
    (1.0, 2.0, 0.69777465796400798201, 0.44495165264741926083),
    (100.0, 1.5, 0.096606956398650812477, 0.011437795451135954042),
    (4.0, 0.3, 0.14363140756566696536, 0.11417240412081168096),
]


def _d4(fn, x, h, side):
    """Fourth-order one-sided first derivative."""
    w = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
    s = 1.0 if side == "right" else -1.0
    return s * sum(c * fn(x + s * k * h) for k, c in enumerate(w)) / h


def test_params_validation():
    with pytest.raises(ValueError):
        ModelParams(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        ModelParams(1.0, -1.0, 1.0)
    with pytest.raises(ValueError):
        ModelParams(1.0, 1.0, math.nan)
    with pytest.raises(ValueError):
        Radial(0.0)
    assert ModelParams(2.0, 3.0, 4.0).scale == 6.0


def test_regime_parse():
    assert Regime.parse("InVivo") is VIVO
    assert Regime.parse("in_vitro") is VITRO
    with pytest.raises(ValueError):
        Regime.parse("vivarium")


# -- traveling wave ---------------------------------------------------------

def test_tw_nutrient_boundary_values():
    assert tw_nutrient(ModelParams(1, 100, 1), VITRO, 0.0) == 100.0
    assert tw_nutrient(ModelParams(1, 100, 1), VIVO, 0.0) == pytest.approx(50.0, rel=1e-15)


def test_tw_nutrient_in_vivo_slope_continuous():
    p = ModelParams(1.0, 3.0, 2.5)
    h = 1e-5
    left = _d4(lambda x: tw_nutrient(p, VIVO, x), 0.0, h, "left")
    right = _d4(lambda x: tw_nutrient(p, VIVO, x), 0.0, h, "right")
    assert abs(left - right) < 1e-6 * abs(left)


def test_tw_pressure_limits():
    p = ModelParams(2.0, 3.0, 4.0)
    assert tw_pressure(p, VITRO, 0.0) == 0.0
    assert tw_pressure(p, VITRO, 1.0) == 0.0
    np.testing.assert_allclose(tw_pressure(p, VITRO, -60.0), 6.0 / 4.0, rtol=1e-14)
    np.testing.assert_allclose(tw_pressure(p, VIVO, -60.0), 6.0 / (4.0 * 3.0), rtol=1e-14)


@pytest.mark.parametrize("reg", [VITRO, VIVO])
def test_tw_profiles_satisfy_odes(reg):
    p = ModelParams(1.3, 2.0, 3.0)
    h = 1e-3
    for xi in (-2.0, -0.5, -0.1):
        c = lambda x: tw_nutrient(p, reg, x)
        pr = lambda x: tw_pressure(p, reg, x)
        c2 = (c(xi + h) - 2 * c(xi) + c(xi - h)) / h**2
        p2 = (pr(xi + h) - 2 * pr(xi) + pr(xi - h)) / h**2
        assert abs(-c2 + p.lam * c(xi)) < 1e-6 * p.cb
        assert abs(-p2 - p.g0 * c(xi)) < 1e-5 * p.scale


def test_tw_speeds():
    assert tw_speed(ModelParams(1, 100, 4), VITRO) == pytest.approx(50.0, rel=1e-15)
    assert tw_speed(ModelParams(1, 100, 1), VIVO) == pytest.approx(50.0, rel=1e-15)
    p = ModelParams(1, 100, 4)
    assert tw_speed(p, VIVO) / tw_speed(p, VITRO) == pytest.approx(1 / 3, rel=1e-15)


def test_tw_speed_is_front_flux():
    p = ModelParams(1.5, 2.0, 3.0)
    slope = _d4(lambda x: tw_pressure(p, VIVO, x), 0.0, 1e-4, "left")
    np.testing.assert_allclose(-slope, tw_speed(p, VIVO), rtol=1e-9)


# -- radial -----------------------------------------------------------------

@pytest.mark.parametrize("lam, R", [(1.0, 2.0), (100.0, 1.5), (0.5, 0.2), (4.0, 30.0)])
def test_radial_coeffs_continuity(lam, R):
    p = ModelParams(1.0, 1.0, lam)
    a0, b0, C = radial_coeffs(p, R)
    s = math.sqrt(lam)
    inside = a0 * bessel_i(0, s * R)
    outside = 1.0 + b0 * bessel_k(0, R)
    assert abs(inside - outside) < 1e-12
    # flux continuity
    np.testing.assert_allclose(a0 * s * bessel_i(1, s * R), -b0 * bessel_k(1, R), rtol=1e-13)
    np.testing.assert_allclose(
        C, s * bessel_k(0, R) * bessel_i(1, s * R) + bessel_k(1, R) * bessel_i(0, s * R), rtol=1e-14)


def test_radial_nutrient_values():
    p = ModelParams(1.0, 7.0, 1.0)
    assert radial_nutrient(p, VITRO, 2.0, 2.0) == pytest.approx(7.0, rel=1e-15)
    np.testing.assert_allclose(radial_nutrient(p, VITRO, 2.0, 0.0), 7.0 / bessel_i(0, 2.0), rtol=1e-14)
    a0, _, _ = radial_coeffs(p, 2.0)
    np.testing.assert_allclose(radial_nutrient(p, VIVO, 2.0, 2.0), 7.0 * a0 * bessel_i(0, 2.0), rtol=1e-14)


def test_radial_nutrient_in_vivo_continuous_and_bounded():
    p = ModelParams(1.0, 2.0, 3.0)
    R = 1.7
    inner = radial_nutrient(p, VIVO, R, R * (1 - 1e-12))
    outer = radial_nutrient(p, VIVO, R, R * (1 + 1e-12))
    assert abs(inner - outer) < 1e-10
    _, b0, _ = radial_coeffs(p, R)
    for r in (2.0, 5.0, 20.0):
        gap = abs(radial_nutrient(p, VIVO, R, r) - p.cb)
        assert gap <= p.cb * abs(b0) * bessel_k(0, r) * (1 + 1e-12)


def test_radial_pressure_values():
    p = ModelParams(1.0, 3.0, 2.0)
    R = 1.2
    s = math.sqrt(2.0)
    assert radial_pressure(p, VITRO, R, R) == 0.0
    assert radial_pressure(p, VIVO, R, 2 * R) == 0.0
    np.testing.assert_allclose(radial_pressure(p, VITRO, R, 0.0),
                               3.0 / 2.0 * (1 - 1 / bessel_i(0, s * R)), rtol=1e-14)
    a0, _, _ = radial_coeffs(p, R)
    np.testing.assert_allclose(radial_pressure(p, VIVO, R, 0.0),
                               3.0 / 2.0 * a0 * (bessel_i(0, s * R) - 1), rtol=1e-13)


@pytest.mark.parametrize("reg", [VITRO, VIVO])
def test_radial_pressure_satisfies_ode(reg):
    p = ModelParams(1.0, 2.0, 3.0)
    R, h = 2.0, 1e-3
    pr = lambda r: radial_pressure(p, reg, R, r)
    for r in (0.4, 1.0, 1.6):
        lap = (pr(r + h) - 2 * pr(r) + pr(r - h)) / h**2 + (pr(r + h) - pr(r - h)) / (2 * h * r)
        assert abs(-lap - p.g0 * radial_nutrient(p, reg, R, r)) < 1e-5 * p.scale


@pytest.mark.parametrize("lam, R, v_vitro, v_vivo", FROZEN_SPEEDS)
def test_radial_speed_frozen(lam, R, v_vitro, v_vivo):
    p = ModelParams(1.0, 1.0, lam)
    np.testing.assert_allclose(radial_speed(p, VITRO, R), v_vitro, rtol=1e-13)
    np.testing.assert_allclose(radial_speed(p, VIVO, R), v_vivo, rtol=1e-13)


@pytest.mark.parametrize("reg", [VITRO, VIVO])
def test_radial_speed_is_boundary_flux(reg):
    p = ModelParams(1.0, 2.0, 3.0)
    R = 1.4
    slope = _d4(lambda r: radial_pressure(p, reg, R, r), R, 1e-5 * R, "left")
    np.testing.assert_allclose(-slope, radial_speed(p, reg, R), rtol=1e-8)


def test_radial_speed_limits():
    for lam in (1.0, 4.0):
        p = ModelParams(1.0, 1.0, lam)
        R = 100.0 / math.sqrt(lam)
        for reg in (VITRO, VIVO):
            ratio = radial_speed(p, reg, R) / tw_speed(p, reg)
            assert abs(ratio - 1.0) <= 0.01
    p = ModelParams(1.0, 1.0, 2.0)
    assert radial_speed(p, VITRO, 1e-4) / (1e-4 / 2) == pytest.approx(1.0, rel=1e-6)
    assert radial_speed(p, VIVO, 3.0) <= radial_speed(p, VITRO, 3.0)


def test_radial_speed_huge_radius_is_finite():
    p = ModelParams(1.0, 100.0, 100.0)
    for reg in (VITRO, VIVO):
        v = radial_speed(p, reg, 500.0)
        assert math.isfinite(v) and abs(v / tw_speed(p, reg) - 1.0) < 0.01


@pytest.mark.parametrize("lam", [0.25, 1.0, 4.0, 100.0])
def test_in_vivo_speed_large_radius_correction(lam):
    # v / v_tw = 1 + (sqrt(lam) - 1) / (2 sqrt(lam) R) + O(1/R^2): from above when lam > 1
    p = ModelParams(1.0, 1.0, lam)
    s = math.sqrt(lam)
    R = 2000.0
    excess = radial_speed(p, VIVO, R) / tw_speed(p, VIVO) - 1.0
    np.testing.assert_allclose(excess, (s - 1.0) / (2.0 * s * R), rtol=0.02, atol=1e-6)


@settings(max_examples=80, deadline=None)
@given(lam=st.floats(0.05, 200.0), R=st.floats(0.01, 200.0), dR=st.floats(1e-3, 5.0))
def test_radial_speed_properties(lam, R, dR):
    p = ModelParams(1.0, 1.0, lam)
    v_vitro = radial_speed(p, VITRO, R)
    v_vivo = radial_speed(p, VIVO, R)
    assert 0 < v_vivo <= v_vitro * (1 + 1e-14)
    assert v_vitro <= tw_speed(p, VITRO) * (1 + 1e-14)
    assert radial_speed(p, VITRO, R + dR) > v_vitro * (1 - 1e-14)
