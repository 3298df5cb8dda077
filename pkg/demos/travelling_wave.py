"""
Travelling-wave fronts: which wavelengths grow?
================================================

A flat front perturbed by cos(l y) either heals or roughens.  With nutrient
pinned at the boundary (in vitro) every mode decays; with nutrient exchanged
through the surrounding tissue (in vivo) long waves grow once lambda > 1.
"""

import numpy as np

from helestab import ModelParams, f1, f2, threshold_L

modes = np.geomspace(0.01, 20, 9)

for lam in (0.8, 2.0, 5.0):
    p = ModelParams(g0=1.0, cb=1.0, lam=lam)
    print(f"lambda = {lam}")
    for l in modes:
        print(f"  l={l:8.4f}  in vitro {f1(p, l):+.5f}   in vivo {f2(p, l):+.5f}")
    L = threshold_L(p)
    print("  no growing band" if L is None else f"  modes below l = {L:.6f} grow")
    print()

# the band widens with consumption
for lam in (1.5, 2, 5, 20, 100):
    print(f"threshold at lambda={lam:>5}: {threshold_L(ModelParams(1, 1, lam)):.6f}")
