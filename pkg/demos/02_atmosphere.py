"""
Captured atmospheres
====================

A solid body of unit radius captures a condensate atmosphere. The body
enters only through mu. At the surface the density either vanishes
(non-adhesion) or peaks (adhesion). Run with
``python3 demos/02_atmosphere.py``.
"""

import numpy as np

from gravbose import solve_atmosphere, solve_atmosphere_for_mass
from gravbose.atmosphere import potential_consistency_check, thin_limit_estimate

# heavier atmospheres are thinner
print("non-adhesion, mu = 1")
print("  f'(1)      I        eps        E        H      h_m")
for slope in (0.01, 0.1, 0.5, 1.0, 5.0):
    s = solve_atmosphere(1.0, "non_adhesion", slope)
    print(f"{slope:7.2f} {s.I:8.4f} {s.eps:9.4f} {s.E:9.3f} {s.H:7.3f} {s.h_m:6.2f}")

# prescribe the mass instead of the surface value
for kind in ("non_adhesion", "adhesion"):
    s = solve_atmosphere_for_mass(1.0, kind, 1.0)
    print(f"{kind:13s} I = 1 needs surface value {s.bc_value:.5f}; H = {s.H:.3f}")

# the potential from the integral form agrees with the integrated one
s = solve_atmosphere(1.0, "adhesion", 0.5)
print("integral/differential potential mismatch:", f"{potential_consistency_check(s):.1e}")

# light atmospheres on stronger bodies
print("\n   mu     eps/(-mu)   H      1/sqrt(mu)")
for mu in (10.0, 100.0, 1000.0):
    s = solve_atmosphere(mu, "non_adhesion", 1e-3)
    print(f"{mu:6.0f} {s.eps / -mu:9.3f} {s.H:8.4f} {thin_limit_estimate(mu):8.4f}")
# H falls roughly as mu^(-1/3) here: the layer sits in a linear potential well
mus = np.array([10.0, 100.0, 1000.0])
H = np.array([solve_atmosphere(mu, "non_adhesion", 1e-3).H for mu in mus])
print("fitted exponent of H vs mu:", round(np.polyfit(np.log(mus), np.log(H), 1)[0], 3))
