"""
Rotating rings
==============

Give every particle the same angular momentum and the density must vanish
on the rotation axis: the ball becomes a ring. The solver iterates the
integral form of the field equations in a Legendre basis. Run with
``python3 demos/03_ring.py``.
"""

import numpy as np

from gravbose import ring_observables, shoot_spherical, solve_ring
from gravbose.ring import ring_pde_residual

ground, first = shoot_spherical(0), shoot_spherical(1)
for l in (1, 2):
    sol = solve_ring(l)
    print(f"l={l}: E = {sol.E:.4e}, eps = {sol.eps:.4e}, {sol.iterations} sweeps")
    print(f"     inner {sol.inner_radius:.2f}, outer {sol.outer_radius:.2f}, height {sol.height:.2f}")
    print(f"     virial residual {sol.virial_residual:.1e}, PDE residuals", np.round(ring_pde_residual(sol), 4))
    if l == 1:
        print(f"     ground state {ground.E:.4e} < ring < first excited {first.E:.4e}")

sol = solve_ring(1)

# equatorial and vertical cuts through the density maximum
rho = np.linspace(0.0, 60.0, 13)
print("\n rho    equatorial density")
for x, d in zip(rho, sol.equatorial_cut(rho)):
    print(f"{x:5.1f}  {d:.3e}")
z = np.linspace(0.0, 30.0, 7)
print("\n   z    density above the maximum")
for x, d in zip(z, sol.vertical_cut(z)):
    print(f"{x:5.1f}  {d:.3e}")

# particles circulate with speed l/(r sin theta); the current peaks inside the ring
for r in (5.0, sol.max_radius, 30.0):
    j, v = ring_observables(sol, r, np.pi / 2)
    print(f"r = {r:6.2f}: current {j:.3e}, speed {v:.4f}")
