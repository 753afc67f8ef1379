"""
Physical scales
===============

Convert dimensionless results to laboratory and astronomical units.
Run with ``python3 demos/04_scales.py``.
"""

from gravbose import scales
from gravbose.atmosphere import thin_limit_estimate
from gravbose.scales import AVOGADRO, HYDROGEN_MASS, CentralBody

m = HYDROGEN_MASS
print(f"length unit for one hydrogen atom: {scales.length_scale(m, 1):.3e} m")
print(f"gravitational Bohr radius: {scales.gravitational_bohr_radius(m) / 1e3:.2e} km")

for N in (100, 1e19, AVOGADRO):
    R = scales.radius_estimate(m, N)
    print(f"N = {N:8.2e}: R = {R:.3e} m, mean density {scales.mean_density(m, N) * 1e-6:.3e} cm^-3")

O2 = scales.species_mass("oxygen2")
print(f"a mole of O2 condenses into a sphere of {scales.radius_estimate(O2, AVOGADRO) * 100:.1e} cm")

r0, rho0 = scales.vdw_crossover()
print(f"van der Waals equals gravity at {r0 * 100:.3f} cm, i.e. {rho0 * 1e-6:.0f} atoms per cm^3")

for label, body in (("1 g, 1 cm", CentralBody.from_cgs(1.0, 1.0)), ("Earth", CentralBody.from_cgs(5.97e27, 6.37e8))):
    mu = scales.mu_parameter(body, m)
    H = thin_limit_estimate(mu) * body.R0
    print(f"{label:10s} mu = {mu:.3e}, thin-layer thickness ~ {H * 100:.1e} cm")
