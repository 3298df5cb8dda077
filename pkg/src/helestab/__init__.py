"""Linear stability of Hele-Shaw tumour growth fronts.

Modules
-------
specialfn
    Modified Bessel functions ``I_n``, ``K_n`` of integer order.
steady
    Unperturbed nutrient, pressure and boundary speed.
stability
    Closed-form growth rates of boundary perturbations and their thresholds.
oracle
    Finite-volume and quadrature re-derivations used for verification.
evolve
    Linearised time evolution of a perturbed disk.
cli
    Command-line interface (``helestab``).
"""

__version__ = "0.1.0"

from .steady import ModelParams, Radial, Regime, TravelingWave  # noqa: E402
from .stability import (  # noqa: E402
    Classification,
    RootFindingError,
    StabilityReport,
    critical_radius,
    f1,
    f2,
    f2_lambda1,
    f2_small_l_asymptote,
    f3,
    f4,
    f4_asymptote_large_R,
    f4_asymptote_small_R,
    f4_lambda1_sum,
    f4_large_R_leading,
    growth_rate,
    stability_sweep,
    threshold_L,
)

__all__ = [
    "Classification", "ModelParams", "Radial", "Regime", "RootFindingError",
    "StabilityReport", "TravelingWave", "critical_radius", "f1", "f2", "f2_lambda1",
    "f2_small_l_asymptote", "f3", "f4", "f4_asymptote_large_R", "f4_asymptote_small_R",
    "f4_lambda1_sum", "f4_large_R_leading", "growth_rate", "stability_sweep", "threshold_L",
]
