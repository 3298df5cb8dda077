r"""Modified Bessel functions :math:`I_n` and :math:`K_n` of integer order.

Only real positive arguments and non-negative integer orders are supported.
Every routine is built on the exponentially scaled values

.. math::
    \tilde I_n(x) = e^{-x} I_n(x), \qquad \tilde K_n(x) = e^{x} K_n(x),

which stay representable far beyond the overflow point of ``exp``.

Evaluation strategy
-------------------
* :math:`\tilde I_n` for all orders ``0..nmax`` at once by Miller's backward
  recurrence, normalised with the generating-function sum
  :math:`e^{x} = I_0(x) + 2\sum_{k\ge1} I_k(x)`.  The start order grows like
  :math:`\sqrt{x}` so the neglected tail stays below machine precision.
* :math:`K_0, K_1` from the ascending series for ``x <= 2`` and from Steed's
  evaluation of Temme's continued fraction for ``x > 2`` (the crossover is
  ``_K_SERIES_MAX``).  Higher orders follow from the forward recurrence, which
  is stable for :math:`K`.
* Derivatives by the standard recurrences, never by differencing.

All functions are pure; the module holds no mutable state.
"""

from __future__ import annotations

import math

MAX_ORDER = 64

_EULER_GAMMA = 0.57721566490153286061
_K_SERIES_MAX = 2.0
_RESCALE = 1.0e250
_EPS = 1.0e-17


def _check_order(n: int) -> int:
    if int(n) != n or n < 0:
        raise ValueError(f"order must be a non-negative integer, got {n!r}")
    n = int(n)
    if n > MAX_ORDER:
        raise ValueError(f"order {n} exceeds MAX_ORDER={MAX_ORDER}")
    return n


def _check_positive(x: float) -> float:
    x = float(x)
    if not x > 0.0:
        raise ValueError(f"argument must be positive, got {x!r}")
    return x


def _i_table(nmax: int, x: float) -> list[float]:
    if x == 0.0:
        return [1.0] + [0.0] * nmax
    start = nmax + 30 + int(10.0 * math.sqrt(x))
    two_over_x = 2.0 / x
    vals = [0.0] * (nmax + 1)
    f_next, f = 0.0, 1.0e-280
    total = 0.0
    for k in range(start, 0, -1):
        # f holds f_k, f_next holds f_{k+1}
        if k <= nmax:
            vals[k] = f
        total += 2.0 * f
        f_next, f = f, f_next + k * two_over_x * f
        if f > _RESCALE:
            f /= _RESCALE
            f_next /= _RESCALE
            total /= _RESCALE
            for j in range(k, nmax + 1):
                vals[j] /= _RESCALE
    vals[0] = f
    total += f
    return [v / total for v in vals]


def i_scaled_table(nmax: int, x: float) -> list[float]:
    """Return ``[e^{-x} I_k(x) for k in 0..nmax]``.

    ``x = 0`` is accepted and gives ``[1, 0, 0, ...]``.
    """
    nmax = _check_order(nmax)
    x = float(x)
    if x < 0.0 or math.isnan(x):
        raise ValueError(f"argument must be non-negative, got {x!r}")
    return _i_table(nmax, x)


def _k01_series(x: float) -> tuple[float, float]:
    """K_0 and K_1 (unscaled) from the ascending series, small ``x``."""
    y = 0.25 * x * x
    log_half = math.log(0.5 * x)
    # K_0 = -(ln(x/2) + gamma) I_0 + sum_{k>=1} y^k/(k!)^2 H_k
    term = 1.0
    harmonic = 0.0
    i0 = 1.0
    s0 = 0.0
    # K_1 = 1/x + ln(x/2) I_1 - (x/4) sum_k (psi(k+1)+psi(k+2)) y^k/(k!(k+1)!)
    term1 = 1.0
    psi_a = -_EULER_GAMMA
    psi_b = 1.0 - _EULER_GAMMA
    i1 = 1.0
    s1 = psi_a + psi_b
    for k in range(1, 60):
        term *= y / (k * k)
        harmonic += 1.0 / k
        i0 += term
        s0 += term * harmonic
        term1 *= y / (k * (k + 1))
        psi_a += 1.0 / k
        psi_b += 1.0 / (k + 1)
        i1 += term1
        s1 += term1 * (psi_a + psi_b)
        if term < _EPS * i0 and term1 < _EPS * i1:
            break
    i1 *= 0.5 * x
    k0 = -(log_half + _EULER_GAMMA) * i0 + s0
    k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1
    return k0, k1


def _k01_scaled_cf(x: float) -> tuple[float, float]:
    """e^x K_0 and e^x K_1 from Temme's continued fraction (Steed), ``x > 2``."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 20000):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < _EPS:
            break
    else:  # pragma: no cover - convergence is fast for x > 2
        raise ArithmeticError(f"K continued fraction did not converge at x={x}")
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def _k_table(nmax: int, x: float) -> list[float]:
    if x <= _K_SERIES_MAX:
        k0, k1 = _k01_series(x)
        ex = math.exp(x)
        k0, k1 = k0 * ex, k1 * ex
    else:
        k0, k1 = _k01_scaled_cf(x)
    vals = [k0, k1]
    two_over_x = 2.0 / x
    for k in range(1, nmax):
        vals.append(vals[k - 1] + k * two_over_x * vals[k])
    return vals[: nmax + 1]


def k_scaled_table(nmax: int, x: float) -> list[float]:
    """Return ``[e^{x} K_k(x) for k in 0..nmax]``; entries may be ``inf``."""
    return _k_table(_check_order(nmax), _check_positive(x))


def bessel_i_scaled(n: int, x: float) -> float:
    """``e^{-x} I_n(x)``."""
    return i_scaled_table(n, x)[n]


def bessel_k_scaled(n: int, x: float) -> float:
    """``e^{x} K_n(x)``."""
    return k_scaled_table(n, x)[n]


def bessel_i(n: int, x: float) -> float:
    """Modified Bessel function of the first kind, ``I_n(x)`` for ``x >= 0``.

    Raises
    ------
    ValueError
        For ``x < 0`` or an invalid order.
    OverflowError
        When ``I_n(x)`` is not representable; use :func:`bessel_i_scaled`.
    """
    value = bessel_i_scaled(n, x)
    if x == 0:
        return value
    return value * math.exp(x)


def bessel_k(n: int, x: float) -> float:
    """Modified Bessel function of the second kind, ``K_n(x)`` for ``x > 0``."""
    value = bessel_k_scaled(n, x) * math.exp(-x)
    if math.isinf(value):
        raise OverflowError(f"K_{n}({x}) overflows")
    return value


def _i_prime_from_table(table: list[float], n: int) -> float:
    if n == 0:
        return table[1]
    return 0.5 * (table[n - 1] + table[n + 1])


def _k_prime_from_table(table: list[float], n: int) -> float:
    if n == 0:
        return -table[1]
    return -0.5 * (table[n - 1] + table[n + 1])


def bessel_i_prime_scaled(n: int, x: float) -> float:
    """``e^{-x} I_n'(x)``."""
    n = _check_order(n)
    x = float(x)
    if x < 0.0 or math.isnan(x):
        raise ValueError(f"argument must be non-negative, got {x!r}")
    return _i_prime_from_table(_i_table(n + 1, x), n)


def bessel_k_prime_scaled(n: int, x: float) -> float:
    """``e^{x} K_n'(x)``."""
    return _k_prime_from_table(_k_table(_check_order(n) + 1, _check_positive(x)), n)


def bessel_i_prime(n: int, x: float) -> float:
    """Derivative ``I_n'(x)``; ``I_0' = I_1`` and the half-sum rule for ``n >= 1``."""
    value = bessel_i_prime_scaled(n, x)
    return value * math.exp(x)


def bessel_k_prime(n: int, x: float) -> float:
    """Derivative ``K_n'(x)``; ``K_0' = -K_1`` and the half-sum rule for ``n >= 1``."""
    value = bessel_k_prime_scaled(n, x) * math.exp(-x)
    if math.isinf(value):
        raise OverflowError(f"K_{n}'({x}) overflows")
    return value


def wronskian_defect(n: int, x: float) -> float:
    """``I_n(x) K_{n+1}(x) + I_{n+1}(x) K_n(x) - 1/x``.

    Evaluated from the scaled functions, whose exponential factors cancel in
    each product, so it is valid for large ``x``.
    """
    n = _check_order(n)
    x = _check_positive(x)
    it = _i_table(n + 1, x)
    kt = _k_table(n + 1, x)
    return it[n] * kt[n + 1] + it[n + 1] * kt[n] - 1.0 / x


def i_ratios(nmax: int, x: float) -> list[float]:
    """Return ``[I_{k+1}(x) / I_k(x) for k in 0..nmax]`` for ``x > 0``.

    Built from the same backward recurrence as :func:`i_scaled_table`, but in
    ratio form, so it neither underflows at small ``x`` nor overflows at large
    ``x``.
    """
    nmax = _check_order(nmax)
    x = _check_positive(x)
    start = nmax + 30 + int(10.0 * math.sqrt(x))
    two_over_x = 2.0 / x
    rho = 0.0
    out = [0.0] * (nmax + 1)
    for k in range(start, -1, -1):
        # I_k / I_{k+1} = 2(k+1)/x + I_{k+2} / I_{k+1}
        rho = 1.0 / ((k + 1) * two_over_x + rho)
        if k <= nmax:
            out[k] = rho
    return out


def k_ratios(nmax: int, x: float) -> list[float]:
    """Return ``[K_{k+1}(x) / K_k(x) for k in 0..nmax]`` for ``x > 0``."""
    nmax = _check_order(nmax)
    x = _check_positive(x)
    k0, k1 = _k_table(1, x)
    sigma = k1 / k0
    out = [sigma]
    two_over_x = 2.0 / x
    for k in range(1, nmax + 1):
        # K_{k+1} / K_k = K_{k-1} / K_k + 2k/x
        sigma = 1.0 / sigma + k * two_over_x
        out.append(sigma)
    return out


def i_log_derivative(n: int, x: float) -> float:
    """``I_n'(x) / I_n(x)`` from the derivative recurrence."""
    n = _check_order(n)
    rho = i_ratios(n, x)
    if n == 0:
        return rho[0]
    return 0.5 * (1.0 / rho[n - 1] + rho[n])


def k_log_derivative(n: int, x: float) -> float:
    """``K_n'(x) / K_n(x)`` from the derivative recurrence."""
    n = _check_order(n)
    sigma = k_ratios(n, x)
    if n == 0:
        return -sigma[0]
    return -0.5 * (1.0 / sigma[n - 1] + sigma[n])
