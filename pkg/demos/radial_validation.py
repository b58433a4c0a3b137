"""Radial Schroedinger problem behind the fuzzy models.

Solves the confining well for D = 3 and D = 2 and compares the low levels
with the closed forms used to build the fuzzy algebras.
"""
from math import sqrt

from fuzzy_spectra import radial

k = 1e6
levels = radial.level_spectrum(3, k, 5)
print(f"D = 3, k = {k:g}")
for l in range(6):
    print(f"  E(0,{l}) = {levels[(0, l)]:10.5f}   l(l+1) = {l * (l + 1)}")
print(f"  E(1,0) = {levels[(1, 0)]:.2f}   2 sqrt(2k) = {2 * sqrt(2 * k):.2f}")

report = radial.cutoff_check(3, 50.0, 10)
print("k = 50, Lambda = 10: cutoff holds?", report.overall_pass)

print()
print(f"D = 2, k = {k:g}")
for m in range(3):
    ov = radial.radial_overlap(k, m)
    print(f"  overlap m = {m}: {ov:.9f}")
print(f"  three-term series a = {radial.a_series(k):.7f}")

fit = radial.gaussian_profile_check(3, k, 0)
print("ground state is gaussian:", fit.overall_pass, {c.name: f"{c.residual:.1e}" for c in fit.checks})
