"""Equilibria of zero-temperature self-gravitating Bose condensates.

Three solver families share one dimensionless formulation: boundary-free
spherical structures, atmospheres captured by a central body, and rotating
rings. ``gravbose.scales`` converts results to SI units.
"""

from .atmosphere import AtmosphereSolution, solve_atmosphere, solve_atmosphere_for_mass
from .errors import (
    ConvergenceError,
    DegenerateFieldError,
    DomainError,
    GravBoseError,
    IntegrationDiverged,
    IterationDiverged,
    NumericError,
    ResolutionError,
    TrivialFixedPointError,
)
from .radial import RadialProfile, integrate_radial
from .ring import RingSolution, angular_momentum, ring_observables, solve_ring
from .scales import CentralBody, PhysicalScale
from .spherical import SphericalSolution, shoot_spherical

__version__ = "0.1.0"

__all__ = [
    "AtmosphereSolution",
    "CentralBody",
    "ConvergenceError",
    "DegenerateFieldError",
    "DomainError",
    "GravBoseError",
    "IntegrationDiverged",
    "IterationDiverged",
    "NumericError",
    "PhysicalScale",
    "RadialProfile",
    "ResolutionError",
    "RingSolution",
    "SphericalSolution",
    "TrivialFixedPointError",
    "angular_momentum",
    "integrate_radial",
    "ring_observables",
    "shoot_spherical",
    "solve_atmosphere",
    "solve_atmosphere_for_mass",
    "solve_ring",
]
