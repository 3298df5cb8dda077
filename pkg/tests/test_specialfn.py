"""Tests for the modified Bessel kernel.

Frozen reference values were produced once with mpmath at 40 digits and are
kept here as literals so the suite does not depend on mpmath.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helestab import specialfn as sf
from helestab.oracle import oracle_bessel

# (n, x, I_n(x), K_n(x))
FROZEN = [
    (0, 0.5, 1.0634833707413235193, 0.92441907122766586178),
    (1, 1.0, 0.56515910399248502721, 0.60190723019723457474),
    (3, 2.5, 0.47437040877803558955, 0.26822714639344920277),
    (7, 10.0, 238.02558477578199451, 0.00017202579456075739519),
    (12, 25.0, 323501953.20734825181, 5.5735699351119543442e-11),
    (2, 50.0, 2.8164306402451940548e20, 3.5479318388581977384e-23),
    (5, 0.1, 2.6052519298936976131e-9, 38376009.99583591757),
    (20, 5.0, 5.0242393579718059921e-11, 482700052.06214846917),
]

# (n, x, e^-x I_n(x), e^x K_n(x)) at arguments where the plain values overflow
FROZEN_SCALED = [
    (0, 200.0, 0.02822715994911191567, 0.088567458339296658234),
    (3, 700.0, 0.01498458666171943865, 0.047667603579972393032),
    (10, 400.0, 0.017606131945023437662, 0.070975869879625237535),
]


@pytest.mark.parametrize("n, x, i_ref, k_ref", FROZEN)
def test_frozen_values(n, x, i_ref, k_ref):
    np.testing.assert_allclose(sf.bessel_i(n, x), i_ref, rtol=1e-13)
    np.testing.assert_allclose(sf.bessel_k(n, x), k_ref, rtol=1e-13)


@pytest.mark.parametrize("n, x, i_ref, k_ref", FROZEN_SCALED)
def test_frozen_scaled_values(n, x, i_ref, k_ref):
    np.testing.assert_allclose(sf.bessel_i_scaled(n, x), i_ref, rtol=1e-12)
    np.testing.assert_allclose(sf.bessel_k_scaled(n, x), k_ref, rtol=1e-12)


def test_values_at_zero():
    assert sf.bessel_i(0, 0.0) == 1.0
    assert sf.bessel_i(3, 0.0) == 0.0


def test_k0_logarithmic_blowup():
    assert abs(sf.bessel_k(0, 1e-3) / -math.log(1e-3) - 1.0) < 0.03


def test_k2_large_argument():
    x = 50.0
    approx = math.sqrt(math.pi / (2 * x)) * math.exp(-x) * (1 + 15 / (8 * x))
    assert abs(sf.bessel_k(2, x) / approx - 1.0) < 1e-3


def test_i0_scaled_large_argument():
    assert abs(sf.bessel_i_scaled(0, 100.0) * math.sqrt(2 * math.pi * 100.0) - 1.0) < 2e-3


def test_scaled_definitions():
    np.testing.assert_allclose(sf.bessel_k_scaled(0, 2.0), sf.bessel_k(0, 2.0) * math.exp(2.0), rtol=1e-14)
    np.testing.assert_allclose(sf.bessel_i_scaled(4, 3.0), sf.bessel_i(4, 3.0) * math.exp(-3.0), rtol=1e-14)


def test_scaled_cross_product():
    val = sf.bessel_i_scaled(0, 1.0) * sf.bessel_k_scaled(1, 1.0) + sf.bessel_i_scaled(1, 1.0) * sf.bessel_k_scaled(0, 1.0)
    assert abs(val - 1.0) < 1e-14


@pytest.mark.parametrize("x", [0.5, 5.0, 20.0])
def test_i0_prime_is_i1(x):
    np.testing.assert_allclose(sf.bessel_i_prime(0, x), sf.bessel_i(1, x), rtol=1e-14)
    np.testing.assert_allclose(sf.bessel_k_prime(0, x), -sf.bessel_k(1, x), rtol=1e-14)


@pytest.mark.parametrize("x", [0.3, 2.0, 17.0])
def test_derivative_shift_identity(x):
    lhs = sf.bessel_i_prime(2, x) - 2.0 / x * sf.bessel_i(2, x)
    np.testing.assert_allclose(lhs, sf.bessel_i(3, x), rtol=1e-12)


def test_k1_prime_half_sum():
    np.testing.assert_allclose(sf.bessel_k_prime(1, 1.0),
                               -(sf.bessel_k(0, 1.0) + sf.bessel_k(2, 1.0)) / 2, rtol=1e-14)


def test_recurrence_closure_grid():
    for x in np.geomspace(0.1, 50.0, 40):
        for n in range(1, 13):
            half = 0.5 * (sf.bessel_i(n - 1, x) + sf.bessel_i(n + 1, x))
            assert abs(sf.bessel_i_prime(n, x) - half) <= 1e-12 * sf.bessel_i_prime(n, x)


@pytest.mark.parametrize("n, x, tol", [(0, 1.0, 1e-12), (5, 0.1, 1e-10), (2, 40.0, 1e-10)])
def test_wronskian_examples(n, x, tol):
    assert abs(sf.wronskian_defect(n, x)) * x <= tol


def test_wronskian_grid():
    worst = max(abs(x * sf.wronskian_defect(n, x))
                for x in np.geomspace(0.1, 50.0, 200) for n in range(13))
    assert worst <= 1e-10


@pytest.mark.parametrize("n, x", [(0, 1.0), (1, 1.0), (4, 0.05), (9, 12.0), (12, 30.0)])
def test_quadrature_oracle_agreement(n, x):
    i_q, k_q = oracle_bessel(n, x)
    np.testing.assert_allclose(sf.bessel_i(n, x), i_q, rtol=1e-10)
    np.testing.assert_allclose(sf.bessel_k(n, x), k_q, rtol=1e-10)


def test_tables_match_single_values():
    it = sf.i_scaled_table(6, 3.7)
    kt = sf.k_scaled_table(6, 3.7)
    for n in range(7):
        assert it[n] == pytest.approx(sf.bessel_i_scaled(n, 3.7), rel=1e-15)
        assert kt[n] == pytest.approx(sf.bessel_k_scaled(n, 3.7), rel=1e-15)


def test_ratios_and_log_derivatives():
    x = 2.3
    rho = sf.i_ratios(5, x)
    sig = sf.k_ratios(5, x)
    for k in range(5):
        np.testing.assert_allclose(rho[k], sf.bessel_i(k + 1, x) / sf.bessel_i(k, x), rtol=1e-14)
        np.testing.assert_allclose(sig[k], sf.bessel_k(k + 1, x) / sf.bessel_k(k, x), rtol=1e-14)
    np.testing.assert_allclose(sf.i_log_derivative(3, x), sf.bessel_i_prime(3, x) / sf.bessel_i(3, x), rtol=1e-14)
    np.testing.assert_allclose(sf.k_log_derivative(3, x), sf.bessel_k_prime(3, x) / sf.bessel_k(3, x), rtol=1e-14)


def test_domain_errors():
    with pytest.raises(ValueError):
        sf.bessel_i(0, -1.0)
    with pytest.raises(ValueError):
        sf.bessel_k(0, 0.0)
    with pytest.raises(ValueError):
        sf.bessel_i(-1, 1.0)
    with pytest.raises(ValueError):
        sf.bessel_i(sf.MAX_ORDER + 1, 1.0)


def test_unscaled_overflow_is_signalled():
    with pytest.raises(OverflowError):
        sf.bessel_i(0, 800.0)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 20), x=st.floats(0.01, 300.0))
def test_positivity_and_signs(n, x):
    assert sf.bessel_i_scaled(n, x) > 0
    assert sf.bessel_k_scaled(n, x) > 0
    assert sf.bessel_i_prime_scaled(n, x) > 0
    assert sf.bessel_k_prime_scaled(n, x) < 0


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 12), x=st.floats(0.05, 30.0), dx=st.floats(1e-3, 1.0))
def test_monotonicity(n, x, dx):
    assert sf.bessel_i(n, x + dx) > sf.bessel_i(n, x)
    assert sf.bessel_k(n, x + dx) < sf.bessel_k(n, x)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(0, 30), x=st.floats(0.1, 700.0))
def test_wronskian_property(n, x):
    assert abs(x * sf.wronskian_defect(n, x)) <= 1e-10
