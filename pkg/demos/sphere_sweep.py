#!/usr/bin/env python3
"""Constrained minimization on the circle across the coupling strength:
the minimal value gamma(x) + gamma(y) climbs toward the ceiling 2, the
deficit 2 - value follows a power law in kappa, and the pair segregates.

Run:  python3 demos/sphere_sweep.py    (~15 s)
"""

import numpy as np

from segsym import gamma, kappa_sweep

KAPPAS = [1e2, 1e3, 1e4]
M = 256

print(f"sweeping kappa over {KAPPAS} at m = {M} cells ...")
fit = kappa_sweep(KAPPAS, 1.0, M)

print()
print(f"{'kappa':>8}  {'value':>8}  {'2-value':>9}  {'mult1':>7}  {'mult2':>7}  {'sup uv':>9}")
for rep in fit.reports:
    print(
        f"{rep.kappa:8g}  {rep.value:8.5f}  {2.0 - rep.value:9.5f}"
        f"  {rep.mult1:7.4f}  {rep.mult2:7.4f}  {rep.seg:9.5f}"
    )

print()
print(f"deficit fit:  2 - value  ~  {fit.C:.4f} * kappa^{fit.exponent:+.4f}")
seg_slope = np.polyfit(np.log(fit.kappas), np.log([r.seg for r in fit.reports]), 1)[0]
print(f"segregation:  sup uv     ~  kappa^{seg_slope:+.4f}")
print()
print("the ceiling 2 = gamma(1) + gamma(1) belongs to the segregated")
print(f"half-circle pair; here gamma(1) = {gamma(1.0, 2):g} in dimension 2.")
print("multipliers drift toward 1 as kappa grows but close the last 5%")
print("only near kappa ~ 6e4; at 1e4 they still sit ~7.5% short.")
