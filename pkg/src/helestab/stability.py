"""Growth rates of single-mode boundary perturbations.

A perturbation ``delta * cos(l y)`` of the planar front, or ``delta *
cos(l theta)`` of a disk boundary, evolves to leading order as
``d(delta)/dt = rate * delta``.  Four closed forms are provided:

======  ==============  ==========
name    geometry        regime
======  ==============  ==========
``f1``  traveling wave  in vitro
``f2``  traveling wave  in vivo
``f3``  radial          in vitro
``f4``  radial          in vivo
======  ==============  ==========

All rates are proportional to ``g0 * cb``.

The radial formulas are evaluated through Bessel log-derivatives.  The
products ``K_l(R) I_l(sqrt(lam) R)`` that appear in ``f4`` cancel against
the coefficient ``C_l(R)``, so high orders never over- or underflow.  Only
the order-one combination ``K_1 I_1 / C`` is needed explicitly, and it is
formed from scaled values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from scipy.optimize import brentq

from .specialfn import (
    i_log_derivative,
    i_ratios,
    i_scaled_table,
    k_log_derivative,
    k_ratios,
    k_scaled_table,
)
from .steady import ModelParams, Regime

NEUTRAL_RTOL = 1e-12


class RootFindingError(RuntimeError):
    """A threshold search could not bracket or refine a sign change."""


class Classification(str, Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    NEUTRAL = "neutral"


def classify(rate: float, scale: float = 1.0, neutral_rtol: float = NEUTRAL_RTOL) -> Classification:
    """Sign classification; ``|rate| <= neutral_rtol * scale`` counts as neutral."""
    if abs(rate) <= neutral_rtol * scale:
        return Classification.NEUTRAL
    return Classification.UNSTABLE if rate > 0 else Classification.STABLE


@dataclass(frozen=True)
class StabilityReport:
    rate: float
    classification: Classification
    formula_id: str
    params: ModelParams
    l: float
    radius: float | None = None


def _check_tw_mode(l: float) -> float:
    l = float(l)
    if not (math.isfinite(l) and l >= 0):
        raise ValueError(f"traveling-wave frequency must be >= 0, got {l!r}")
    return l


def _check_radial_mode(l: int) -> int:
    if isinstance(l, bool) or int(l) != l or l < 1:
        raise ValueError(f"radial wavenumber must be an integer >= 1, got {l!r}")
    return int(l)


def _check_radius(R: float) -> float:
    R = float(R)
    if not (math.isfinite(R) and R > 0):
        raise ValueError(f"radius must be positive, got {R!r}")
    return R


# -- traveling wave ---------------------------------------------------------

def f1(p: ModelParams, l: float) -> float:
    """In vitro traveling-wave rate ``(g0 cb / sqrt(lam)) (sqrt(lam) - sqrt(lam + l^2))``."""
    l = _check_tw_mode(l)
    s = p.sqrt_lam
    # sqrt(lam) - sqrt(lam + l^2) written without cancellation
    return -p.scale / s * l * l / (s + math.sqrt(p.lam + l * l))


def f2(p: ModelParams, l: float) -> float:
    """In vivo traveling-wave rate."""
    l = _check_tw_mode(l)
    s = p.sqrt_lam
    a = math.sqrt(p.lam + l * l)
    b = math.sqrt(1.0 + l * l)
    # (s-l)/(s+1) + (l-a)/(a+b) over a common denominator; the numerator
    # s b - a + l (s + 1 - a - b) is rewritten so that only the final
    # subtraction can cancel, and it does so only near a genuine zero
    l2 = l * l
    num = (p.lam - 1.0) * l2 / (s * b + a) - l * l2 * (1.0 / (s + a) + 1.0 / (1.0 + b))
    return p.scale / s * num / ((s + 1.0) * (a + b))


def f2_lambda1(l: float) -> float:
    """``f2`` at ``lam = 1`` with ``g0 cb = 1``: ``l (1 - sqrt(1+l^2)) / (2 sqrt(1+l^2))``."""
    l = _check_tw_mode(l)
    b = math.sqrt(1.0 + l * l)
    # 1 - sqrt(1+l^2) = -l^2 / (1 + sqrt(1+l^2))
    return -l ** 3 / (1.0 + b) / (2.0 * b)


def f2_small_l_asymptote(p: ModelParams, l: float) -> float:
    """Leading small-``l`` behaviour of :func:`f2`.

    ``g0 cb (lam - 1) l^2 / (2 lam (sqrt(lam) + 1) (sqrt(lam + l^2) + sqrt(1 + l^2)))``
    """
    l = _check_tw_mode(l)
    s = p.sqrt_lam
    denom = 2.0 * p.lam * (s + 1.0) * (math.sqrt(p.lam + l * l) + math.sqrt(1.0 + l * l))
    return p.scale * (p.lam - 1.0) * l * l / denom


def threshold_L(p: ModelParams, *, l_start: float = 1e-3, max_l: float = 1e8) -> float | None:
    """Smallest ``l > 0`` where the in vivo traveling-wave rate changes sign.

    Returns ``None`` for ``lam <= 1``, where :func:`f2` is negative for every
    ``l > 0``.  For ``lam > 1`` the rate is positive near ``l = 0``; the search
    walks up from ``l_start`` in doublings to the first negative value and
    refines that bracket with Brent's method.
    """
    if p.lam <= 1.0:
        return None
    lo = l_start
    while f2(p, lo) <= 0.0:
        lo *= 0.5
        if lo < 1e-12:
            raise RootFindingError(f"f2 not positive near l=0 for lam={p.lam}")
    while True:
        hi = lo * 2.0
        if hi > max_l:
            raise RootFindingError(f"no sign change of f2 in l in [{l_start}, {max_l}] (lam={p.lam})")
        if f2(p, hi) < 0.0:
            break
        lo = hi
    return brentq(lambda l: f2(p, l), lo, hi, xtol=1e-14, rtol=1e-15, maxiter=500)


# -- radial -----------------------------------------------------------------

def f3(p: ModelParams, l: int, R: float) -> float:
    """In vitro radial rate ``g0 cb (I_1/I_0) (I_1'/I_1 - I_l'/I_l)`` at ``sqrt(lam) R``."""
    l = _check_radial_mode(l)
    R = _check_radius(R)
    x = p.sqrt_lam * R
    rho = i_ratios(max(l, 1), x)
    beta_1 = 0.5 * (1.0 / rho[0] + rho[1])
    beta_l = 0.5 * (1.0 / rho[l - 1] + rho[l])
    return p.scale * rho[0] * (beta_1 - beta_l)


def radial_cj_ratio(p: ModelParams, j: int, R: float) -> float:
    """``C_j(R) / (K_j(R) I_j(sqrt(lam) R))`` where ``C_j = K_j' I_j - sqrt(lam) I_j' K_j``.

    Always negative, so ``C_j`` never vanishes.
    """
    s = p.sqrt_lam
    return k_log_derivative(j, R) - s * i_log_derivative(j, s * R)


def _log_derivs(ratios: list[float], sign: float, j: int) -> float:
    # I_j'/I_j or K_j'/K_j from consecutive ratios of the same family
    if j == 0:
        return sign * ratios[0]
    return sign * 0.5 * (1.0 / ratios[j - 1] + ratios[j])


def f4(p: ModelParams, l: int, R: float) -> float:
    """In vivo radial rate.

    With ``D_j = C_j / (K_j I_j)`` and ``beta_j = I_j'/I_j`` at ``sqrt(lam) R``
    the closed form reduces to::

        g0 cb (K_1 I_1 / C) [ l/(sqrt(lam) R) (D_1/D_l - 1) - (D_1 beta_l / D_l - beta_1) ]

    where ``K_1 I_1 / C = 1 / (sqrt(lam) K_0/K_1 + I_0/I_1)``.  Everything is
    built from the ratio tables ``I_{k+1}/I_k`` and ``K_{k+1}/K_k``.
    """
    l = _check_radial_mode(l)
    R = _check_radius(R)
    s = p.sqrt_lam
    x = s * R
    rho = i_ratios(l, x)
    sigma = k_ratios(l, R)
    beta_1 = _log_derivs(rho, 1.0, 1)
    beta_l = _log_derivs(rho, 1.0, l)
    d1 = _log_derivs(sigma, -1.0, 1) - s * beta_1
    dl = _log_derivs(sigma, -1.0, l) - s * beta_l
    if dl == 0.0 or not math.isfinite(dl):
        raise ZeroDivisionError(f"C_{l}({R}) vanished or is not finite")
    order_one = 1.0 / (s / sigma[0] + 1.0 / rho[0])
    ratio = d1 / dl
    bracket = l / x * (ratio - 1.0) - (ratio * beta_l - beta_1)
    return p.scale * order_one * bracket


def f4_lambda1_sum(l: int, R: float) -> float:
    """``f4`` at ``lam = 1`` with ``g0 cb = 1``, as a finite sum over orders.

    ``sum_{j=1}^{l-1} [ R (K_j I_{j+1} - K_{j+1} I_{j+2}) - K_1 I_1 ]`` with every
    Bessel function evaluated at ``R``.
    """
    l = _check_radial_mode(l)
    R = _check_radius(R)
    it = i_scaled_table(l + 1, R)
    kt = k_scaled_table(l + 1, R)
    k1i1 = kt[1] * it[1]
    total = 0.0
    for j in range(1, l):
        total += R * (kt[j] * it[j + 1] - kt[j + 1] * it[j + 2]) - k1i1
    return total


def f4_asymptote_small_R(p: ModelParams, l: int) -> float:
    """Limit of :func:`f4` as ``R -> 0``: ``g0 cb (1 - l) / 2``."""
    l = _check_radial_mode(l)
    return p.scale * (1.0 - l) / 2.0


def f4_asymptote_large_R(p: ModelParams, l: int, R: float) -> float:
    """Alternative large-``R`` form ``g0 cb 5 (l^2-1)(sqrt(lam)-1) / (16 lam R^2 (sqrt(lam)+1))``.

    Numerically :func:`f4` tends to :func:`f4_large_R_leading`, whose
    coefficient is ``1/2`` rather than ``5/16``.  This form is kept for
    comparison.
    """
    l = _check_radial_mode(l)
    R = _check_radius(R)
    s = p.sqrt_lam
    return p.scale * 5.0 * (l * l - 1) * (s - 1.0) / (16.0 * p.lam * R * R * (s + 1.0))


def f4_large_R_leading(p: ModelParams, l: int, R: float) -> float:
    """Leading ``1/R^2`` term of :func:`f4`: ``g0 cb (l^2-1)(sqrt(lam)-1) / (2 lam R^2 (sqrt(lam)+1))``."""
    l = _check_radial_mode(l)
    R = _check_radius(R)
    s = p.sqrt_lam
    return p.scale * (l * l - 1) * (s - 1.0) / (2.0 * p.lam * R * R * (s + 1.0))


def critical_radius(p: ModelParams, l: int, *, r_start: float = 1e-3, r_stop: float = 1e3,
                    max_r: float = 1e7) -> float | None:
    """Radius where the in vivo mode ``l`` switches from decaying to growing.

    ``None`` for ``lam <= 1``.  Otherwise the search starts in the negative
    small-``R`` regime at ``r_start``, walks up in doublings to the first
    positive value (beyond ``r_stop`` if needed, up to ``max_r``) and refines
    with Brent's method to a relative interval of ``1e-12``.
    """
    l = _check_radial_mode(l)
    if l < 2:
        raise ValueError("critical radius needs l >= 2; the l = 1 mode is neutral")
    if p.lam <= 1.0:
        return None
    lo = r_start
    if f4(p, l, lo) >= 0.0:
        raise RootFindingError(f"f4 not negative at R={lo} (lam={p.lam}, l={l})")
    while True:
        hi = lo * 2.0
        if hi > max_r:
            raise RootFindingError(
                f"no sign change of f4 in R in [{r_start}, {max_r}] (lam={p.lam}, l={l})")
        if f4(p, l, hi) > 0.0:
            break
        lo = hi
    return brentq(lambda R: f4(p, l, R), lo, hi, xtol=1e-300, rtol=1e-12, maxiter=500)


# -- dispatch and sweeps ----------------------------------------------------

FORMULAS = ("f1", "f2", "f3", "f4")


def formula_for(regime: Regime | str, radial: bool) -> str:
    regime = Regime.parse(regime)
    if radial:
        return "f3" if regime is Regime.IN_VITRO else "f4"
    return "f1" if regime is Regime.IN_VITRO else "f2"


def growth_rate(p: ModelParams, formula: str, l: float, radius: float | None = None) -> float:
    """Evaluate one of ``f1``..``f4`` by name."""
    if formula == "f1":
        return f1(p, l)
    if formula == "f2":
        return f2(p, l)
    if radius is None:
        raise ValueError(f"{formula} needs a radius")
    if formula == "f3":
        return f3(p, l, radius)
    if formula == "f4":
        return f4(p, l, radius)
    raise ValueError(f"unknown formula {formula!r}")


def report(p: ModelParams, formula: str, l: float, radius: float | None = None) -> StabilityReport:
    rate = growth_rate(p, formula, l, radius)
    return StabilityReport(
        rate=rate,
        classification=classify(rate, p.scale),
        formula_id=formula,
        params=p,
        l=l,
        radius=radius if formula in ("f3", "f4") else None,
    )


def stability_sweep(p: ModelParams, formula: str, modes: Iterable[float],
                    radii: Sequence[float] | None = None) -> list[StabilityReport]:
    """Evaluate ``formula`` on the grid ``modes x radii``.

    Rows come out in lexicographic index order, mode index outermost.
    Traveling-wave formulas ignore ``radii``.
    """
    if formula not in FORMULAS:
        raise ValueError(f"unknown formula {formula!r}")
    modes = list(modes)
    if formula in ("f1", "f2"):
        return [report(p, formula, l) for l in modes]
    radii = [] if radii is None else [R for R in radii if R is not None]
    if not radii:
        raise ValueError(f"{formula} needs at least one radius")
    return [report(p, formula, l, R) for l in modes for R in radii]
