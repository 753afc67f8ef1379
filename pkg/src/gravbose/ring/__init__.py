"""Rotating (ring-shaped) structures."""

from .kernels import TruncationWarning, bessel_i, bessel_k, direct_kernel, gegenbauer_kernel
from .legendre import assoc_legendre_table, gauss_legendre, legendre_eval, legendre_table
from .solver import (
    AxisWarning,
    RingGrid,
    RingSolution,
    angular_momentum,
    eigenvalue_update,
    helmholtz_step,
    initial_field,
    poisson_potential,
    ring_iteration,
    ring_observables,
    ring_pde_residual,
    solve_ring,
)

__all__ = [
    "TruncationWarning",
    "bessel_i",
    "bessel_k",
    "direct_kernel",
    "gegenbauer_kernel",
    "assoc_legendre_table",
    "gauss_legendre",
    "legendre_eval",
    "legendre_table",
    "AxisWarning",
    "RingGrid",
    "RingSolution",
    "angular_momentum",
    "eigenvalue_update",
    "helmholtz_step",
    "initial_field",
    "poisson_potential",
    "ring_iteration",
    "ring_observables",
    "ring_pde_residual",
    "solve_ring",
]
