"""
Spherical structures
====================

A cloud of bosons held together only by its own gravity settles into a
sphere. Excited states add concentric shells, one per node of the
amplitude. Run with ``python3 demos/01_spherical.py``.
"""

import numpy as np

from gravbose import shoot_spherical
from gravbose.radial import radial_residual
from gravbose.scales import HYDROGEN_MASS, PhysicalScale, ground_state_energy_divisor
from gravbose.spherical import rescale

# shoot for the ground state and the first two excited states
sols = [shoot_spherical(n) for n in range(3)]
print(" n      f(0)       u(0)        eps          E        R")
for s in sols:
    print(f"{s.n_nodes:2d} {s.f0:10.4e} {s.u0:10.4e} {s.eps:10.4e} {s.E:10.4e} {s.R:8.2f}")

# every solution obeys E = eps/3
print("virial residuals:", [f"{s.virial_residual:.1e}" for s in sols])

# the radial density has n+1 humps; locate them
for s in sols:
    rho = s.profile.density
    humps = np.nonzero((rho[1:-1] > rho[:-2]) & (rho[1:-1] > rho[2:]))[0] + 1
    print(f"n={s.n_nodes}: density maxima at r =", np.round(s.profile.r[np.r_[0, humps]], 2))

# the equations admit a one-parameter family of stretched copies
p = sols[0].profile
for C in (0.5, 2.0, 10.0):
    q = rescale(p, C)
    print(f"C={C:5.1f}: mass {q.mass():.4f}, residual {radial_residual(q):.1e}")

# physical units: a mole of hydrogen
unit = PhysicalScale(HYDROGEN_MASS, 6.02214076e23)
print(f"radius of a mole of hydrogen: {sols[0].R * unit.l0 * 100:.1f} cm")
print(f"ground-state energy: {sols[0].E * unit.system_energy_unit:.3e} J")
print("energy divisor D in E = -G^2 m^5 N^3 / (D hbar^2):", ground_state_energy_divisor(sols[0].E))
