"""
A growing disk and its critical radii
=====================================

For a circular tumour the in vivo growth rate of mode l changes sign at a
critical radius R*(l).  Small disks are stable to every mode; as the disk
grows, modes switch on in order of increasing l.
"""

import numpy as np

from helestab import ModelParams, critical_radius, f3, f4, stability_sweep

p = ModelParams(g0=1.0, cb=100.0, lam=100.0)

print("critical radius per mode")
for l in (2, 4, 8, 12, 16, 20):
    print(f"  l={l:2d}  R* = {critical_radius(p, l):.6f}")

# at R = 1.5 a band of low modes grows and high modes are cut off
rows = stability_sweep(p, "f4", range(2, 25), [1.5])
growing = [r.l for r in rows if r.rate > 0]
print(f"\nat R=1.5 growing modes: {growing[0]}..{growing[-1]}")

# in vitro the same disk is stable
print(f"max in vitro rate over l=2..24: {max(f3(p, l, 1.5) for l in range(2, 25)):.4f}")

# the radial rate approaches the flat-front limit like 1/R^2
for R in np.geomspace(1, 1000, 4):
    print(f"  R={R:7.1f}  f4(l=3) = {f4(ModelParams(1, 1, 4), 3, R):+.3e}")
