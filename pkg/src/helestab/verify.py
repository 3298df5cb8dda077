"""Verification suites run by ``helestab verify``.

Each check reports a measured error and the tolerance it is held to.
Suites:

``bessel``
    Wronskian identity and agreement with the quadrature oracle.
``oracle``
    Closed-form growth rates against finite-volume solves.
``asymptotes``
    Limits of the in vivo rates for small ``l``, small ``R`` and large ``R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import oracle, specialfn, stability
from .parallel import ordered_map
from .steady import ModelParams, Regime

SUITES = ("bessel", "oracle", "asymptotes")


@dataclass(frozen=True)
class CheckResult:
    name: str
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.error <= self.tolerance)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name}: error={self.error:.3e} tol={self.tolerance:.1e}"


# -- bessel ---------------------------------------------------------------------

def wronskian_error(nmax: int = 12, x_lo: float = 0.1, x_hi: float = 50.0, num: int = 200) -> float:
    """Largest ``|x (I_n K_{n+1} + I_{n+1} K_n) - 1|`` over the grid."""
    worst = 0.0
    for x in np.geomspace(x_lo, x_hi, num):
        for n in range(nmax + 1):
            worst = max(worst, abs(x * specialfn.wronskian_defect(n, float(x))))
    return worst


def recurrence_error(nmax: int = 12, x_lo: float = 0.1, x_hi: float = 50.0, num: int = 200) -> float:
    """Largest ``|I_n' - (n/x) I_n - I_{n+1}| / I_n'`` for ``1 <= n <= nmax``.

    The derivative is built from the half-sum rule, so agreement with the
    shifted form tests the three-term recurrence of the computed values.
    """
    worst = 0.0
    for x in np.geomspace(x_lo, x_hi, num):
        x = float(x)
        for n in range(1, nmax + 1):
            d = specialfn.bessel_i_prime_scaled(n, x)
            shifted = n / x * specialfn.bessel_i_scaled(n, x) + specialfn.bessel_i_scaled(n + 1, x)
            worst = max(worst, abs(d - shifted) / d)
    return worst


def quadrature_error(nmax: int = 12, x_lo: float = 0.01, x_hi: float = 30.0, num: int = 40) -> float:
    """Largest relative gap between :mod:`specialfn` and :func:`oracle.oracle_bessel`."""
    worst = 0.0
    for x in np.geomspace(x_lo, x_hi, num):
        x = float(x)
        for n in range(nmax + 1):
            i_q, k_q = oracle.oracle_bessel(n, x)
            worst = max(worst, abs(specialfn.bessel_i(n, x) / i_q - 1.0),
                        abs(specialfn.bessel_k(n, x) / k_q - 1.0))
    return worst


def bessel_suite() -> list[CheckResult]:
    return [
        CheckResult("wronskian n<=12 x in [0.1,50]", wronskian_error(), 1e-10),
        CheckResult("derivative identity n in [1,12] x in [0.1,50]", recurrence_error(), 1e-12),
        CheckResult("quadrature I_n, K_n n<=12 x<=30", quadrature_error(), 1e-10),
    ]


# -- oracle ---------------------------------------------------------------------

TW_LAMBDAS = (0.5, 1.0, 2.0, 10.0)
TW_MODES = (0.5, 1.0, 2.0, 5.0)
RADIAL_MODES = (1, 2, 3, 5)
RADII = (0.5, 1.5, 5.0)


def oracle_cases() -> list[tuple]:
    """Acceptance grid as ``(regime, lam, l, R or None)`` tuples."""
    cases = []
    for reg in (Regime.IN_VITRO, Regime.IN_VIVO):
        for lam in TW_LAMBDAS:
            cases += [(reg, lam, l, None) for l in TW_MODES]
            cases += [(reg, lam, l, R) for l in RADIAL_MODES for R in RADII]
    return cases


def oracle_deviation(case: tuple, floor: float = 1e-8) -> tuple[float, float, float]:
    """``(closed form, oracle, |oracle - closed| / max(|closed|, floor g0 cb))``."""
    reg, lam, l, R = case
    p = ModelParams(1.0, 1.0, lam)
    formula = stability.formula_for(reg, R is not None)
    closed = stability.growth_rate(p, formula, l, R)
    if R is None:
        num = oracle.oracle_tw_rate(p, reg, l)
    else:
        num = oracle.oracle_radial_rate(p, reg, l, R)
    return closed, num, abs(num - closed) / max(abs(closed), floor * p.scale)


def _order(case: tuple) -> float:
    reg, lam, l, R = case
    p = ModelParams(1.0, 1.0, lam)
    if R is None:
        res = oracle.oracle_tw_rate(p, reg, l, details=True)
    else:
        res = oracle.oracle_radial_rate(p, reg, l, R, details=True)
    return res.observed_order


def oracle_suite() -> list[CheckResult]:
    cases = oracle_cases()
    devs = ordered_map(oracle_deviation, cases)
    worst = max(d[2] for d in devs)
    # convergence order on a few smooth, non-degenerate cases
    smooth = [(Regime.IN_VITRO, 2.0, 2.0, None), (Regime.IN_VIVO, 2.0, 2.0, None),
              (Regime.IN_VITRO, 2.0, 2, 1.5), (Regime.IN_VIVO, 2.0, 2, 1.5)]
    orders = ordered_map(_order, smooth)
    order_gap = max(abs(o - 2.0) for o in orders)
    return [
        CheckResult(f"oracle vs closed form ({len(cases)} cases)", worst, 1e-4),
        CheckResult("observed order within 0.3 of 2", order_gap, 0.3),
    ]


# -- asymptotes -----------------------------------------------------------------

def small_r_error(R: float = 1e-3) -> float:
    worst = 0.0
    for l in (2, 3, 5):
        for lam in (0.5, 2.0, 100.0):
            p = ModelParams(1.0, 1.0, lam)
            worst = max(worst, abs(stability.f4(p, l, R) / stability.f4_asymptote_small_R(p, l) - 1.0))
    return worst


def large_r_error(asymptote: Callable, R: float = 200.0) -> float:
    worst = 0.0
    for l in (2, 3):
        for lam in (4.0, 9.0):
            p = ModelParams(1.0, 1.0, lam)
            worst = max(worst, abs(stability.f4(p, l, R) / asymptote(p, l, R) - 1.0))
    return worst


def small_l_error(lam: float = 4.0, l: float = 1e-3) -> float:
    p = ModelParams(1.0, 1.0, lam)
    return abs(stability.f2(p, l) / stability.f2_small_l_asymptote(p, l) - 1.0)


def asymptotes_suite() -> list[CheckResult]:
    return [
        CheckResult("f2 small-l asymptote lam=4 l=1e-3", small_l_error(), 1e-2),
        CheckResult("f4 small-R asymptote R=1e-3", small_r_error(), 0.05),
        CheckResult("f4 large-R 5/16 form R=200", large_r_error(stability.f4_asymptote_large_R), 0.10),
        CheckResult("f4 large-R leading term (1/2) R=200", large_r_error(stability.f4_large_R_leading), 0.10),
    ]


_RUNNERS = {"bessel": bessel_suite, "oracle": oracle_suite, "asymptotes": asymptotes_suite}


def run_suite(name: str, tolerance: float | None = None) -> list[CheckResult]:
    """Run one suite, or ``"all"``; ``tolerance`` replaces every check's own."""
    names = SUITES if name == "all" else (name,)
    out = []
    for suite in names:
        if suite not in _RUNNERS:
            raise ValueError(f"unknown suite {suite!r}")
        for check in _RUNNERS[suite]():
            if tolerance is not None:
                check = CheckResult(check.name, check.error, tolerance)
            out.append(CheckResult(f"{suite}: {check.name}", check.error, check.tolerance))
    return out


def all_passed(results: list[CheckResult]) -> bool:
    return all(r.passed for r in results) and not any(math.isnan(r.error) for r in results)
