"""Linearised evolution of a single-mode boundary perturbation.

The unperturbed boundary moves with the steady normal speed while the
amplitude obeys ``d(delta)/dt = rate * delta``.  For a disk both equations
are integrated together with classical RK4, the rate being re-evaluated at
every stage radius.  For the planar front the rate is constant and the
amplitude is an exact exponential.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from . import stability
from .steady import ModelParams, Regime, radial_speed, tw_speed

VALIDITY_CAP = 0.2
DEFAULT_STEPS = 2000
ADAPTIVE_TOL = 1e-8


@dataclass(frozen=True)
class EvolutionState:
    """Snapshot of the boundary ``r = R + delta cos(l theta)`` at time ``t``.

    ``rate`` is the growth rate at ``R`` and ``valid`` records whether
    ``|delta| / R`` is still within the validity cap.
    """

    t: float
    R: float
    delta: float
    rate: float = math.nan
    valid: bool = True


@dataclass(frozen=True)
class SimConfig:
    """Inputs of one run.

    ``dt`` defaults to ``T / 2000``.  Setting ``adaptive_tol`` switches to
    step-doubling control of the local error.  ``geometry`` is ``"radial"``
    or ``"tw"``; for ``"tw"`` the radius is the front position and ``l``
    may be any non-negative real.
    """

    params: ModelParams
    regime: Regime | str
    l: float
    R0: float
    delta0: float
    T: float
    dt: float | None = None
    adaptive_tol: float | None = None
    validity_cap: float = VALIDITY_CAP
    geometry: str = "radial"

    def __post_init__(self):
        object.__setattr__(self, "regime", Regime.parse(self.regime))
        if self.geometry not in ("radial", "tw"):
            raise ValueError(f"geometry must be 'radial' or 'tw', got {self.geometry!r}")
        if self.geometry == "radial":
            if isinstance(self.l, bool) or int(self.l) != self.l or self.l < 1:
                raise ValueError(f"radial mode must be an integer >= 1, got {self.l!r}")
            object.__setattr__(self, "l", int(self.l))
        elif not self.l >= 0:
            raise ValueError(f"mode must be >= 0, got {self.l!r}")
        if not (math.isfinite(self.R0) and self.R0 > 0):
            raise ValueError(f"R0 must be positive, got {self.R0!r}")
        if not math.isfinite(self.delta0):
            raise ValueError("delta0 must be finite")
        if not (math.isfinite(self.T) and self.T >= 0):
            raise ValueError(f"T must be non-negative, got {self.T!r}")
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.adaptive_tol is not None and not self.adaptive_tol > 0:
            raise ValueError("adaptive_tol must be positive")
        if abs(self.delta0) / self.R0 > 0.1:
            warnings.warn(
                f"|delta0|/R0 = {abs(self.delta0) / self.R0:.3g} exceeds 0.1; "
                "the linearised amplitude law may be inaccurate",
                stacklevel=2,
            )

    @property
    def formula(self) -> str:
        return stability.formula_for(self.regime, self.geometry == "radial")


def _speed(cfg: SimConfig, R: float) -> float:
    if cfg.geometry == "tw":
        return tw_speed(cfg.params, cfg.regime)
    return radial_speed(cfg.params, cfg.regime, R)


def _rate(cfg: SimConfig, R: float) -> float:
    if cfg.geometry == "tw":
        return stability.growth_rate(cfg.params, cfg.formula, cfg.l)
    return stability.growth_rate(cfg.params, cfg.formula, cfg.l, R)


def _make_state(cfg: SimConfig, t: float, R: float, delta: float) -> EvolutionState:
    return EvolutionState(t, R, delta, _rate(cfg, R), abs(delta) / R <= cfg.validity_cap)


def initial_state(cfg: SimConfig) -> EvolutionState:
    return _make_state(cfg, 0.0, cfg.R0, cfg.delta0)


def _rk4(cfg: SimConfig, R: float, delta: float, dt: float,
         rate0: float | None = None) -> tuple[float, float]:
    def rhs(r, d):
        return _speed(cfg, r), _rate(cfg, r) * d

    if rate0 is None or math.isnan(rate0):
        k1r, k1d = rhs(R, delta)
    else:
        k1r, k1d = _speed(cfg, R), rate0 * delta
    k2r, k2d = rhs(R + 0.5 * dt * k1r, delta + 0.5 * dt * k1d)
    k3r, k3d = rhs(R + 0.5 * dt * k2r, delta + 0.5 * dt * k2d)
    k4r, k4d = rhs(R + dt * k3r, delta + dt * k3d)
    R_new = R + dt / 6.0 * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
    d_new = delta + dt / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
    return R_new, d_new


def step(state: EvolutionState, cfg: SimConfig, dt: float | None = None) -> EvolutionState:
    """Advance ``state`` by one RK4 step of size ``dt`` (default ``T / 2000``)."""
    if dt is None:
        dt = cfg.dt if cfg.dt is not None else cfg.T / DEFAULT_STEPS
    if not dt > 0:
        raise ValueError("step size must be positive")
    R, delta = _rk4(cfg, state.R, state.delta, dt, state.rate)
    if not R > 0:
        raise ArithmeticError(f"step produced a non-positive radius R={R}")
    return _make_state(cfg, state.t + dt, R, delta)


def _fixed(cfg: SimConfig) -> list[EvolutionState]:
    dt = cfg.dt if cfg.dt is not None else cfg.T / DEFAULT_STEPS
    n = max(1, math.ceil(cfg.T / dt - 1e-9))
    dt = cfg.T / n
    states = [initial_state(cfg)]
    for k in range(1, n + 1):
        nxt = step(states[-1], cfg, dt)
        # pin the clock to the grid so the last time is exactly T
        states.append(replace(nxt, t=cfg.T * k / n))
    return states


def _adaptive(cfg: SimConfig) -> list[EvolutionState]:
    tol = cfg.adaptive_tol
    states = [initial_state(cfg)]
    t, R, delta = 0.0, cfg.R0, cfg.delta0
    h = cfg.dt if cfg.dt is not None else cfg.T / 100.0
    while t < cfg.T:
        h = min(h, cfg.T - t)
        R1, d1 = _rk4(cfg, R, delta, h)
        Rh, dh = _rk4(cfg, R, delta, 0.5 * h)
        R2, d2 = _rk4(cfg, Rh, dh, 0.5 * h)
        err = max(abs(R2 - R1) / max(abs(R2), 1.0), abs(d2 - d1) / max(abs(d2), abs(cfg.delta0), 1e-300))
        err /= 15.0
        if err <= tol or h < 1e-12 * max(cfg.T, 1.0):
            t = cfg.T if cfg.T - t <= h * (1 + 1e-12) else t + h
            # local extrapolation of the two half steps
            R = R2 + (R2 - R1) / 15.0
            delta = d2 + (d2 - d1) / 15.0
            states.append(_make_state(cfg, t, R, delta))
        factor = 0.9 * (tol / err) ** 0.2 if err > 0 else 4.0
        h *= min(4.0, max(0.2, factor))
    return states


def simulate(cfg: SimConfig) -> list[EvolutionState]:
    """Integrate from ``(R0, delta0)`` to ``t = T``; the first entry is the initial state."""
    if cfg.T == 0:
        return [initial_state(cfg)]
    if cfg.adaptive_tol is not None:
        return _adaptive(cfg)
    return _fixed(cfg)


def state_at(trajectory: list[EvolutionState], cfg: SimConfig, time: float) -> EvolutionState:
    """State at ``time`` within the span of ``trajectory``.

    A stored state is returned when its time matches; otherwise one partial
    RK4 step is taken from the last stored state before ``time``.
    """
    if not trajectory[0].t <= time <= trajectory[-1].t * (1 + 1e-12) + 1e-300:
        raise ValueError(f"time {time} outside [{trajectory[0].t}, {trajectory[-1].t}]")
    base = trajectory[0]
    for s in trajectory:
        if s.t <= time:
            base = s
        else:
            break
    if abs(time - base.t) <= 1e-12 * max(abs(time), 1.0):
        return base
    return replace(step(base, cfg, time - base.t), t=time)


def boundary_curve(state: EvolutionState, l: float, n_theta: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Points of ``r = R + delta cos(l theta)`` for ``theta = -pi + 2 pi k / n_theta``.

    Returns ``(theta, x, y)``.  The polyline is closed implicitly; the last
    point is not repeated.
    """
    if int(n_theta) != n_theta or n_theta < 8:
        raise ValueError(f"n_theta must be an integer >= 8, got {n_theta!r}")
    n_theta = int(n_theta)
    theta = -np.pi + 2.0 * np.pi * np.arange(n_theta) / n_theta
    r = state.R + state.delta * np.cos(l * theta)
    return theta, r * np.cos(theta), r * np.sin(theta)


def tw_amplitude(params: ModelParams, regime: Regime | str, l: float, delta0: float, T: float) -> float:
    """Exact planar-front amplitude ``delta0 * exp(rate * T)``."""
    formula = stability.formula_for(regime, radial=False)
    return delta0 * math.exp(stability.growth_rate(params, formula, l) * T)
