"""Independent numerical growth rates and Bessel values.

Nothing here uses a closed-form Bessel or exponential solution.  Growth
rates come from finite-volume solves of the separated zeroth- and
first-order boundary value problems, followed by Richardson extrapolation
over successively halved grids.  Bessel values come from adaptive
quadrature of integral representations.  The module exists to certify
:mod:`helestab.stability` and :mod:`helestab.specialfn`.

Every one-dimensional problem is written as

    -(1/r^m) (r^m u')' + q(r) u = f(r)

on a uniform grid, with ``m = 0`` for planar problems, ``m = 1`` for
axisymmetric ones and ``m = 2l + 1`` after the regularising substitution
``u = r^l w`` for mode ``l`` inside a disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate
from scipy.linalg import solve_banded
from scipy.special import gammaln

from .steady import ModelParams, Regime


class OracleConvergenceError(ArithmeticError):
    """Refinement did not reach the requested tolerance."""

    def __init__(self, message: str, estimate: float):
        super().__init__(f"{message} (estimated relative error {estimate:.3e})")
        self.estimate = estimate


@dataclass(frozen=True)
class OracleConfig:
    """Discretisation controls.

    Parameters
    ----------
    truncation
        Length ``X`` of each semi-infinite subdomain.  ``None`` picks
        ``25 / min(1, sqrt(lam))``.
    grid_points
        Minimum number of intervals per subdomain on the coarsest level.
    refinement_levels
        Number of grids, each with half the spacing of the previous one.
    tolerance
        Relative error target for the extrapolated value.
    points_per_length
        Intervals per decay length ``1/k`` of the fastest-varying profile.
    """

    truncation: float | None = None
    grid_points: int = 100
    refinement_levels: int = 4
    tolerance: float = 1e-8
    points_per_length: float = 12.0
    derivative: str = "flux"

    def __post_init__(self):
        if self.truncation is not None and not self.truncation > 0:
            raise ValueError("truncation must be positive")
        if self.grid_points < 100:
            raise ValueError("grid_points must be >= 100")
        if self.refinement_levels < 2:
            raise ValueError("refinement_levels must be >= 2")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")

    def length(self, lam: float) -> float:
        if self.truncation is not None:
            return float(self.truncation)
        return 25.0 / min(1.0, math.sqrt(lam))


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid on ``[a, b]`` with ``n`` intervals."""

    a: float
    b: float
    n: int
    nodes: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (self.b > self.a and self.n >= 4):
            raise ValueError("need b > a and at least 4 intervals")
        object.__setattr__(self, "nodes", np.linspace(self.a, self.b, self.n + 1))

    @property
    def spacing(self) -> float:
        return (self.b - self.a) / self.n


# -- boundary conditions ------------------------------------------------------
# ("dirichlet", value), ("robin", kappa, g) meaning u' = kappa*u + g at that end,
# or ("regular",) for the zero-flux centre of a disk (left end only).

def dirichlet(value: float) -> tuple:
    return ("dirichlet", float(value))


def robin(kappa: float, g: float = 0.0) -> tuple:
    return ("robin", float(kappa), float(g))


REGULAR = ("regular",)


@dataclass(frozen=True)
class FVSolution:
    """Nodal values plus the derivative at each end of the grid."""

    u: np.ndarray
    du_left: float
    du_right: float


def solve_fv(grid: Grid1D, m: float, q, f, left: tuple, right: tuple,
             derivative: str = "flux") -> FVSolution:
    """Vertex-centred finite volumes for ``-(r^-m)(r^m u')' + q u = f``.

    ``q`` and ``f`` are scalars or arrays on the nodes.  Boundary nodes carry
    half cells, so Robin and regular conditions enter through their fluxes
    and the scheme stays second order.

    At a Dirichlet end the derivative is recovered either from the discrete
    balance of all cells (``derivative="flux"``) or from a fourth-order
    one-sided stencil (``"stencil"``).  The balance is a weighted sum of
    nodal values with no ``1/h`` factor, so it keeps round-off at the level
    of the solution itself; the stencil loses ``log10(1/h)`` digits.
    """
    r = grid.nodes
    h = grid.spacing
    n = grid.n
    q = np.broadcast_to(np.asarray(q, dtype=float), r.shape)
    f = np.broadcast_to(np.asarray(f, dtype=float), r.shape)

    faces = np.empty(n + 2)
    faces[0] = r[0]
    faces[1:-1] = 0.5 * (r[:-1] + r[1:])
    faces[-1] = r[-1]
    if m == 0:
        vol = np.diff(faces)
        flux = np.full(n, 1.0 / h)
    else:
        # (hi^(m+1) - lo^(m+1)) / (m+1) in factored form; the plain
        # difference loses log10(r/h) digits
        lo, hi = faces[:-1], faces[1:]
        acc = np.zeros_like(lo)
        for j in range(m + 1):
            acc += hi ** j * lo ** (m - j)
        vol = (hi - lo) * acc / (m + 1)
        flux = faces[1:-1] ** m / h

    # the diagonal is flux + flux + excess; the excess (q vol plus Robin
    # terms) is kept apart because rounding the sum loses it when h is small
    rhs = f * vol
    excess = q * vol

    kind = left[0]
    if kind == "dirichlet":
        rhs[0] = left[1]
    elif kind == "robin":
        # a^m u'(a) enters with a plus sign on the left cell
        wa = r[0] ** m
        excess[0] += wa * left[1]
        rhs[0] -= wa * left[2]
    elif kind == "regular":
        if r[0] != 0.0 and m != 0:
            raise ValueError("regular condition needs the grid to start at r = 0")
    else:
        raise ValueError(f"unknown boundary condition {left!r}")

    kind = right[0]
    if kind == "dirichlet":
        rhs[-1] = right[1]
    elif kind == "robin":
        wb = r[-1] ** m
        excess[-1] -= wb * right[1]
        rhs[-1] += wb * right[2]
    else:
        raise ValueError(f"unsupported right boundary condition {right!r}")
    fixed_a = left[0] == "dirichlet"
    fixed_b = right[0] == "dirichlet"

    # banded storage: row 0 super, row 1 diag, row 2 sub
    ab = np.zeros((3, n + 1))
    ab[1] = excess
    ab[1, :-1] += flux
    ab[1, 1:] += flux
    ab[0, 1:] = -flux
    ab[2, :-1] = -flux
    if fixed_a:
        ab[1, 0], ab[0, 1] = 1.0, 0.0
    if fixed_b:
        ab[1, -1], ab[2, -2] = 1.0, 0.0

    def apply(v):
        # same operator in flux form; neighbour differences are nearly exact
        dv = flux * (v[1:] - v[:-1])
        out = excess * v
        out[:-1] -= dv
        out[1:] += dv
        if fixed_a:
            out[0] = v[0]
        if fixed_b:
            out[-1] = v[-1]
        return out

    u = solve_banded((1, 1), ab, rhs, check_finite=False)
    for _ in range(2):
        u = u + solve_banded((1, 1), ab, rhs - apply(u), check_finite=False)

    # r^m u' at each end; the cell balances telescope to
    # b^m u'(b) - a^m u'(a) = sum (q u - f) vol
    wa = r[0] ** m if m else 1.0
    wb = r[-1] ** m if m else 1.0
    flux_a = flux_b = None
    if left[0] == "robin":
        flux_a = wa * (left[1] * u[0] + left[2])
    elif left[0] == "regular":
        flux_a = 0.0
    if right[0] == "robin":
        flux_b = wb * (right[1] * u[-1] + right[2])
    if derivative == "flux":
        balance = math.fsum((q * u - f) * vol)
        if flux_a is None and flux_b is None:
            # both ends fixed: balance of the first half cell
            flux_a = flux[0] * (u[1] - u[0]) - (q[0] * u[0] - f[0]) * vol[0]
        if flux_b is None:
            flux_b = flux_a + balance
        if flux_a is None:
            flux_a = flux_b - balance
    elif derivative == "stencil":
        if flux_a is None:
            flux_a = wa * left_derivative(u, h)
        if flux_b is None:
            flux_b = wb * right_derivative(u, h)
    else:
        raise ValueError(f"unknown derivative method {derivative!r}")
    du_a = flux_a / wa if wa else 0.0
    return FVSolution(u, du_a, flux_b / wb)


_D1 = np.array([25.0, -48.0, 36.0, -16.0, 3.0]) / 12.0


def right_derivative(u: np.ndarray, h: float) -> float:
    """Fourth-order one-sided derivative at the last node."""
    return float(_D1 @ u[-1:-6:-1]) / h


def left_derivative(u: np.ndarray, h: float) -> float:
    """Fourth-order one-sided derivative at the first node."""
    return -float(_D1 @ u[:5]) / h


# -- extrapolation ------------------------------------------------------------

@dataclass(frozen=True)
class OracleResult:
    value: float
    error_estimate: float
    observed_order: float
    raw: tuple[float, ...]


def error_exponents(count: int, derivative: str = "flux") -> list[int]:
    """Error powers removed by successive extrapolation steps.

    The interior scheme and the cell-balance flux are symmetric, so their
    error is even in ``h``.  The one-sided stencil adds every power from
    ``h^4`` upward, hence ``2, 4, 5, 6, ...`` for ``derivative="stencil"``.
    """
    if derivative == "stencil":
        return [2] + list(range(4, 4 + max(count - 1, 0)))
    return [2 * (j + 1) for j in range(count)]


def richardson(values: Sequence[float], exponents: Sequence[int] | None = None) -> OracleResult:
    """Extrapolate values computed with spacings ``h, h/2, h/4, ...``.

    Step ``j`` removes the error term ``h^exponents[j]``; by default
    :func:`error_exponents`.  The error estimate is the change made by the
    last step.
    """
    values = [float(v) for v in values]
    if len(values) < 2:
        raise ValueError("need at least two refinement levels")
    if exponents is None:
        exponents = error_exponents(len(values) - 1)
    table = [values]
    for p in exponents[: len(values) - 1]:
        factor = 2.0 ** p
        prev = table[-1]
        table.append([(factor * prev[i + 1] - prev[i]) / (factor - 1.0) for i in range(len(prev) - 1)])
    best = table[-1][0]
    err = abs(best - table[-2][-1])
    if len(values) >= 3:
        d1 = values[0] - values[1]
        d2 = values[1] - values[2]
        observed = math.log2(abs(d1 / d2)) if d1 != 0 and d2 != 0 else math.nan
    else:
        observed = math.nan
    return OracleResult(best, err, observed, tuple(values))


def _extrapolate(level_fn: Callable[[int], float], cfg: OracleConfig, scale: float,
                 what: str) -> OracleResult:
    values = [level_fn(2 ** k) for k in range(cfg.refinement_levels)]
    res = richardson(values, error_exponents(len(values) - 1, cfg.derivative))
    if not math.isfinite(res.value):
        raise OracleConvergenceError(f"{what}: non-finite value", math.inf)
    rel = res.error_estimate / max(abs(res.value), scale)
    if rel > cfg.tolerance:
        raise OracleConvergenceError(f"{what}: refinement did not converge", rel)
    return res


def _intervals(length: float, rate: float, cfg: OracleConfig) -> int:
    return max(cfg.grid_points, int(math.ceil(length * rate * cfg.points_per_length)))


# -- traveling wave -----------------------------------------------------------

def _tw_level(p: ModelParams, reg: Regime, l: float, X: float, n_in: int, n_out: int,
              how: str) -> float:
    lam, g0, cb = p.lam, p.g0, p.cb
    s = math.sqrt(lam)
    k1 = math.sqrt(lam + l * l)
    inner = Grid1D(-X, 0.0, n_in)

    # unit-trace interior profiles, decaying into the tumour
    phi0 = solve_fv(inner, 0, lam, 0.0, robin(s), dirichlet(1.0), how)
    phi1 = solve_fv(inner, 0, lam + l * l, 0.0, robin(k1), dirichlet(1.0), how)

    if reg is Regime.IN_VITRO:
        a = cb
        d = -a * phi0.du_right          # c1(0) = -c0'(0)
    else:
        outer = Grid1D(0.0, X, n_out)
        psi0 = solve_fv(outer, 0, 1.0, 0.0, dirichlet(1.0), robin(-1.0), how)
        psi1 = solve_fv(outer, 0, 1.0 + l * l, 0.0, dirichlet(1.0),
                        robin(-math.sqrt(1.0 + l * l)), how)
        # c0 = a phi0 inside, cb + (a - cb) psi0 outside; fluxes agree at 0
        a = -cb * psi0.du_left / (phi0.du_right - psi0.du_left)
        # c1 continuous; its normal derivative jumps by c0''(0+) - c0''(0-)
        jump = (a - cb) - lam * a
        d = jump / (phi1.du_right - psi1.du_left)

    p0 = solve_fv(inner, 0, 0.0, g0 * a * phi0.u, robin(0.0), dirichlet(0.0), how)
    p1 = solve_fv(inner, 0, l * l, g0 * d * phi1.u, robin(l), dirichlet(-p0.du_right), how)
    ddp0 = -g0 * a      # from -p0'' = g0 c0 at the front
    return -(ddp0 + p1.du_right)


def oracle_tw_rate(p: ModelParams, reg: Regime | str, l: float, cfg: OracleConfig | None = None,
                   *, details: bool = False):
    """Growth rate of mode ``l`` on the planar front, by finite volumes.

    The tumour occupies ``[-X, 0]``; in the in vivo regime the exterior
    ``[0, X]`` is solved as well and coupled through the interface
    conditions.  Returns a float, or an :class:`OracleResult` when
    ``details`` is set.
    """
    cfg = cfg or OracleConfig()
    reg = Regime.parse(reg)
    l = float(l)
    if not (math.isfinite(l) and l >= 0):
        raise ValueError(f"l must be >= 0, got {l!r}")
    X = cfg.length(p.lam)
    n_in = _intervals(X, math.sqrt(p.lam + l * l), cfg)
    n_out = _intervals(X, math.sqrt(1.0 + l * l), cfg)
    res = _extrapolate(lambda k: _tw_level(p, reg, l, X, n_in * k, n_out * k, cfg.derivative), cfg, p.scale,
                       f"traveling-wave oracle (lam={p.lam}, l={l}, {reg.value})")
    return res if details else res.value


# -- radial -------------------------------------------------------------------

def _radial_level(p: ModelParams, reg: Regime, l: int, R: float, X: float,
                  n_in: int, n_out: int, how: str) -> float:
    lam, g0, cb = p.lam, p.g0, p.cb
    inner = Grid1D(0.0, R, n_in)

    phi0 = solve_fv(inner, 1, lam, 0.0, REGULAR, dirichlet(1.0), how)
    # mode l inside: phi1 = r^l w with phi1(R) = 1
    m = 2 * l + 1
    w = solve_fv(inner, m, lam, 0.0, REGULAR, dirichlet(R ** -l), how)
    dphi1 = l / R + R ** l * w.du_right

    if reg is Regime.IN_VITRO:
        a = cb
        d = -a * phi0.du_right
    else:
        outer = Grid1D(R, R + X, n_out)
        end = outer.b
        psi0 = solve_fv(outer, 1, 1.0, 0.0, dirichlet(1.0), robin(-(1.0 + 0.5 / end)), how)
        kap1 = math.sqrt(1.0 + (l / end) ** 2) + 0.5 / end
        psi1 = solve_fv(outer, 1, 1.0 + (l / outer.nodes) ** 2, 0.0, dirichlet(1.0),
                        robin(-kap1), how)
        a = -cb * psi0.du_left / (phi0.du_right - psi0.du_left)
        jump = (a - cb) - lam * a
        d = jump / (dphi1 - psi1.du_left)

    p0 = solve_fv(inner, 1, 0.0, g0 * a * phi0.u, REGULAR, dirichlet(0.0), how)
    dp0 = p0.du_right
    # p1 = r^l v, forced by g0 c1 / r^l = g0 d w
    v = solve_fv(inner, m, 0.0, g0 * d * w.u, REGULAR, dirichlet(-dp0 * R ** -l), how)
    dp1 = -l * dp0 / R + R ** l * v.du_right
    ddp0 = -g0 * a - dp0 / R
    return -(ddp0 + dp1)


def oracle_radial_rate(p: ModelParams, reg: Regime | str, l: int, R: float,
                       cfg: OracleConfig | None = None, *, details: bool = False):
    """Growth rate of mode ``l`` on a disk of radius ``R``, by finite volumes.

    The exterior (in vivo only) is truncated at ``R + X``.
    """
    cfg = cfg or OracleConfig()
    reg = Regime.parse(reg)
    if isinstance(l, bool) or int(l) != l or l < 1:
        raise ValueError(f"l must be an integer >= 1, got {l!r}")
    l = int(l)
    R = float(R)
    if not (math.isfinite(R) and R > 0):
        raise ValueError(f"R must be positive, got {R!r}")
    X = cfg.truncation if cfg.truncation is not None else 25.0
    n_in = _intervals(R, max(math.sqrt(p.lam), l / R), cfg)
    n_out = _intervals(X, math.sqrt(1.0 + (l / R) ** 2), cfg)
    res = _extrapolate(lambda k: _radial_level(p, reg, l, R, X, n_in * k, n_out * k,
                                                    cfg.derivative), cfg, p.scale,
                       f"radial oracle (lam={p.lam}, l={l}, R={R}, {reg.value})")
    return res if details else res.value


# -- Bessel quadrature --------------------------------------------------------

BESSEL_ORACLE_MAX_ORDER = 12
BESSEL_ORACLE_MAX_X = 30.0


def _quad(fn, a, b, points=None) -> float:
    val, err, info = integrate.quad(fn, a, b, epsabs=0.0, epsrel=1e-13, limit=400,
                                    points=points, full_output=True)[:3]
    if err > 1e-11 * abs(val):
        raise OracleConvergenceError("Bessel quadrature", err / abs(val))
    return val


def oracle_bessel(n: int, x: float) -> tuple[float, float]:
    """``(I_n(x), K_n(x))`` by adaptive quadrature, for ``n <= 12``, ``0 < x <= 30``.

    ``K_n(x) = int_0^inf exp(-x cosh t) cosh(n t) dt``.  For ``I_n`` the
    positive-integrand form

        I_n(x) = (x/2)^n / (sqrt(pi) Gamma(n + 1/2)) int_0^pi exp(x cos t) sin^(2n) t dt

    is used; the ``cos(n t)`` form cancels badly when ``x`` is small and
    ``n`` large.
    """
    if isinstance(n, bool) or int(n) != n or not 0 <= n <= BESSEL_ORACLE_MAX_ORDER:
        raise ValueError(f"oracle order must be an integer in [0, {BESSEL_ORACLE_MAX_ORDER}]")
    n = int(n)
    x = float(x)
    if not 0.0 < x <= BESSEL_ORACLE_MAX_X:
        raise ValueError(f"oracle argument must be in (0, {BESSEL_ORACLE_MAX_X}]")

    # integrands shifted by their maxima to keep values near one
    def i_kernel(t):
        return math.exp(x * (math.cos(t) - 1.0)) * math.sin(t) ** (2 * n)

    i_int = _quad(i_kernel, 0.0, math.pi)
    log_pref = n * math.log(0.5 * x) - 0.5 * math.log(math.pi) - gammaln(n + 0.5) + x
    i_val = i_int * math.exp(log_pref)

    t_peak = math.asinh(n / x) if n else 0.0
    shift = -x * math.cosh(t_peak) + n * t_peak

    def k_kernel(t):
        # cosh(nt) = (e^{nt} + e^{-nt}) / 2
        return 0.5 * (math.exp(-x * math.cosh(t) + n * t - shift)
                      + math.exp(-x * math.cosh(t) - n * t - shift))

    # integrand below 1e-300 relative beyond t_end
    t_end = t_peak + 1.0
    while -x * math.cosh(t_end) + n * t_end - shift > -700.0:
        t_end *= 1.5
    pts = [t_peak] if 0.0 < t_peak < t_end else None
    k_val = _quad(k_kernel, 0.0, t_end, points=pts) * math.exp(shift)
    return i_val, k_val


def oracle_bessel_cos_form(n: int, x: float) -> float:
    """``I_n(x) = (1/pi) int_0^pi exp(x cos t) cos(n t) dt``; reliable for small ``n``."""
    val = _quad(lambda t: math.exp(x * (math.cos(t) - 1.0)) * math.cos(n * t), 0.0, math.pi)
    return val * math.exp(x) / math.pi
