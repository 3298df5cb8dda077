"""Unperturbed nutrient and pressure profiles and boundary speeds.

Two geometries are covered: a planar front travelling to the right with the
tumour occupying ``xi <= 0``, and a disk of radius ``R``.  Each geometry
is solved under both nutrient regimes.  Units are nondimensional.

Radial quantities are assembled from exponentially scaled Bessel values.
Every product of the form ``K_j(R) * I_k(sqrt(lam) R)`` carries the same
factor ``exp(sqrt(lam) R - R)``, and that factor cancels in all ratios used
here, so it is never formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .specialfn import i_scaled_table, k_scaled_table


class Regime(str, Enum):
    """Nutrient supply regime."""

    IN_VITRO = "invitro"
    IN_VIVO = "invivo"

    @classmethod
    def parse(cls, value: "Regime | str") -> "Regime":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "").replace("-", "").replace(" ", "")
        for member in cls:
            if member.value == key:
                return member
        raise ValueError(f"unknown regime {value!r}; expected 'invitro' or 'invivo'")


@dataclass(frozen=True)
class ModelParams:
    """Growth rate ``g0``, background concentration ``cb``, consumption ``lam``."""

    g0: float
    cb: float
    lam: float

    def __post_init__(self):
        for name in ("g0", "cb", "lam"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")

    @property
    def sqrt_lam(self) -> float:
        return math.sqrt(self.lam)

    @property
    def scale(self) -> float:
        """``g0 * cb``; every growth rate is proportional to it."""
        return self.g0 * self.cb


@dataclass(frozen=True)
class TravelingWave:
    """Planar front at ``xi = 0``; tumour on ``xi <= 0``."""


@dataclass(frozen=True)
class Radial:
    """Disk of radius ``radius`` centred at the origin."""

    radius: float

    def __post_init__(self):
        if not (math.isfinite(self.radius) and self.radius > 0):
            raise ValueError(f"radius must be positive, got {self.radius!r}")


Geometry = TravelingWave | Radial


# -- traveling wave ---------------------------------------------------------

def tw_nutrient(p: ModelParams, reg: Regime | str, xi: float) -> float:
    """Nutrient concentration across the planar front."""
    reg = Regime.parse(reg)
    s = p.sqrt_lam
    if reg is Regime.IN_VITRO:
        if xi > 0:
            return p.cb
        return p.cb * math.exp(s * xi)
    if xi <= 0:
        return p.cb / (s + 1.0) * math.exp(s * xi)
    return p.cb - s * p.cb / (s + 1.0) * math.exp(-xi)


def tw_pressure(p: ModelParams, reg: Regime | str, xi: float) -> float:
    """Pressure behind the planar front; zero on and ahead of it."""
    reg = Regime.parse(reg)
    if xi >= 0:
        return 0.0
    amp = p.scale / p.lam
    if reg is Regime.IN_VIVO:
        amp /= p.sqrt_lam + 1.0
    return amp * -math.expm1(p.sqrt_lam * xi)


def tw_speed(p: ModelParams, reg: Regime | str) -> float:
    """Constant speed of the planar front."""
    reg = Regime.parse(reg)
    if reg is Regime.IN_VITRO:
        return p.scale / p.sqrt_lam
    return p.scale / (p.lam + p.sqrt_lam)


# -- radial -----------------------------------------------------------------

def _check_radius(R: float) -> float:
    if not (math.isfinite(R) and R > 0):
        raise ValueError(f"radius must be positive, got {R!r}")
    return float(R)


def _scaled_c(p: ModelParams, R: float) -> tuple[float, list[float], list[float]]:
    """C(R) without its factor exp(sqrt(lam) R - R), plus the tables used."""
    s = p.sqrt_lam
    it = i_scaled_table(1, s * R)
    kt = k_scaled_table(1, R)
    return s * kt[0] * it[1] + kt[1] * it[0], it, kt


def radial_coeffs(p: ModelParams, R: float) -> tuple[float, float, float]:
    """Return ``(a0, b0, C)`` of the in vivo radial nutrient profile.

    ``C = sqrt(lam) K_0(R) I_1(sqrt(lam) R) + K_1(R) I_0(sqrt(lam) R)``,
    ``a0 = K_1(R) / C`` and ``b0 = -sqrt(lam) I_1(sqrt(lam) R) / C``.
    Values outside the floating point range come back as ``0`` or ``inf``.
    """
    R = _check_radius(R)
    s = p.sqrt_lam
    c_hat, it, kt = _scaled_c(p, R)
    shift = s * R - R
    a0 = kt[1] / c_hat * _safe_exp(-s * R)
    b0 = -s * it[1] / c_hat * _safe_exp(R)
    return a0, b0, c_hat * _safe_exp(shift)


def _safe_exp(v: float) -> float:
    try:
        return math.exp(v)
    except OverflowError:
        return math.inf


def radial_nutrient(p: ModelParams, reg: Regime | str, R: float, r: float) -> float:
    """Nutrient concentration at distance ``r`` from the centre of a disk of radius ``R``."""
    reg = Regime.parse(reg)
    R = _check_radius(R)
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r!r}")
    s = p.sqrt_lam
    if reg is Regime.IN_VITRO:
        if r >= R:
            return p.cb
        ratio = i_scaled_table(0, s * r)[0] / i_scaled_table(0, s * R)[0]
        return p.cb * ratio * math.exp(s * (r - R))
    c_hat, it, kt = _scaled_c(p, R)
    if r <= R:
        # cb * a0 * I_0(s r)
        return p.cb * kt[1] * i_scaled_table(0, s * r)[0] / c_hat * math.exp(s * (r - R))
    # cb * (1 + b0 K_0(r))
    k0r = k_scaled_table(0, r)[0]
    return p.cb * (1.0 - s * it[1] * k0r / c_hat * math.exp(R - r))


def radial_pressure(p: ModelParams, reg: Regime | str, R: float, r: float) -> float:
    """Pressure inside the disk; zero on and outside the boundary."""
    reg = Regime.parse(reg)
    R = _check_radius(R)
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r!r}")
    if r >= R:
        return 0.0
    s = p.sqrt_lam
    i_r = i_scaled_table(0, s * r)[0]
    decay = math.exp(s * (r - R))
    if reg is Regime.IN_VITRO:
        # (g0 cb / lam) (1 - I_0(s r) / I_0(s R))
        return p.scale / p.lam * (1.0 - i_r / i_scaled_table(0, s * R)[0] * decay)
    c_hat, it, kt = _scaled_c(p, R)
    # (g0 cb / lam) a0 (I_0(s R) - I_0(s r))
    return p.scale / p.lam * kt[1] / c_hat * (it[0] - i_r * decay)


def radial_speed(p: ModelParams, reg: Regime | str, R: float) -> float:
    """Normal speed ``dR/dt`` of the unperturbed disk boundary."""
    reg = Regime.parse(reg)
    R = _check_radius(R)
    s = p.sqrt_lam
    if reg is Regime.IN_VITRO:
        it = i_scaled_table(1, s * R)
        return p.scale * it[1] / (s * it[0])
    c_hat, it, kt = _scaled_c(p, R)
    return p.scale * kt[1] * it[1] / (s * c_hat)
