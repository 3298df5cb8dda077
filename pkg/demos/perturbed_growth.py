"""
Following a perturbed disk in time
==================================

Integrate the radius and the mode amplitude together and draw the boundary
at the end.  Run with ``python demos/perturbed_growth.py``.
"""

from helestab import ModelParams, Regime
from helestab import evolve as ev

p = ModelParams(g0=1.0, cb=100.0, lam=100.0)

for l in (1, 8, 12, 16, 20):
    cfg = ev.SimConfig(p, Regime.IN_VIVO, l, R0=1.5, delta0=0.05, T=2.0)
    final = ev.simulate(cfg)[-1]
    print(f"l={l:2d}  R(T)={final.R:.4f}  delta(T)/delta0={final.delta / 0.05:.4f}  valid={final.valid}")

# boundary of the l = 8 tumour at the final time
cfg = ev.SimConfig(p, Regime.IN_VIVO, 8, R0=1.5, delta0=0.05, T=2.0)
theta, x, y = ev.boundary_curve(ev.simulate(cfg)[-1], 8, 16)
for t, xi, yi in zip(theta, x, y):
    print(f"  theta={t:+.3f}  ({xi:+.4f}, {yi:+.4f})")
