"""Physical constants and conversions between solver units and SI.

All solvers work in dimensionless units. For a free structure of ``N``
particles of mass ``m`` the length unit is

    l0 = hbar**2 / (2 G m**3 N)

and the amplitude unit satisfies ``l0**3 * phi0**2 = N`` so that the
dimensionless density integrates to one. For an atmosphere around a body of
radius ``R0`` the length unit is ``R0`` itself and the body enters through
the single number ``mu = 2 G m**2 M0 R0 / hbar**2``.

Constants are CODATA 2018, SI units throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

__all__ = [
    "G",
    "HBAR",
    "C_LIGHT",
    "ATOMIC_MASS_UNIT",
    "AVOGADRO",
    "BOHR_RADIUS",
    "COULOMB_E2",
    "HYDROGEN_MASS",
    "PLANCK_MASS",
    "LIGHT_YEAR",
    "SPECIES",
    "VDW_HYDROGEN_COEFF",
    "PRINTED_GROUND_STATE_DIVISOR",
    "PhysicalScale",
    "CentralBody",
    "species_mass",
    "length_scale",
    "length_scale_compton",
    "gravitational_bohr_radius",
    "radius_estimate",
    "mean_density",
    "energy_prefactor",
    "energy_physical",
    "ground_state_energy_divisor",
    "mu_parameter",
    "atmosphere_energy_prefactor",
    "atmosphere_mass_ratio",
    "vdw_crossover",
    "vdw_force",
    "gravity_force",
]

G = 6.67430e-11  # m^3 kg^-1 s^-2
HBAR = 1.054571817e-34  # J s
C_LIGHT = 299_792_458.0  # m/s
ATOMIC_MASS_UNIT = 1.66053906660e-27  # kg
AVOGADRO = 6.02214076e23
BOHR_RADIUS = 5.29177210903e-11  # m
ELEMENTARY_CHARGE = 1.602176634e-19  # C
VACUUM_PERMITTIVITY = 8.8541878128e-12  # F/m
# Gaussian-units e**2 expressed in SI (J m).
COULOMB_E2 = ELEMENTARY_CHARGE**2 / (4.0 * math.pi * VACUUM_PERMITTIVITY)
HYDROGEN_MASS = 1.00782503223 * ATOMIC_MASS_UNIT  # 1H atom, 1.6735e-27 kg
PLANCK_MASS = math.sqrt(HBAR * C_LIGHT / G)
LIGHT_YEAR = 9.4607304725808e15  # m

SPECIES = {
    "hydrogen": HYDROGEN_MASS,
    "oxygen2": 2 * 15.999 * ATOMIC_MASS_UNIT,
}

# K_W(r) = -6.50 e^2 a_B^5 / r^6 for a pair of hydrogen atoms.
VDW_HYDROGEN_COEFF = 6.50

# Divisor printed for the ground-state energy E = -G^2 m^5 N^3 / (D hbar^2).
# The tabulated dimensionless energy gives D = 1 / (2 |E~|) ~ 18.4 instead;
# see ``ground_state_energy_divisor``.
PRINTED_GROUND_STATE_DIVISOR = 7.37


def _positive(**values: float) -> None:
    for name, value in values.items():
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"{name} must be positive and finite, got {value!r}")


def species_mass(species: str) -> float:
    """Particle mass in kg for a named species."""
    try:
        return SPECIES[species]
    except KeyError:
        raise DomainError(
            f"unknown species {species!r}; known: {', '.join(sorted(SPECIES))}"
        ) from None


@dataclass(frozen=True)
class PhysicalScale:
    """Unit system of a free structure of ``N`` particles of mass ``m``.

    ``l0`` and ``phi0_sq`` are derived on construction; ``G`` and ``hbar``
    may be overridden to work in other unit systems.
    """

    m: float
    N: float
    G: float = G
    hbar: float = HBAR
    l0: float = field(init=False)
    phi0_sq: float = field(init=False)
    M: float = field(init=False)

    def __post_init__(self):
        _positive(m=self.m, G=self.G, hbar=self.hbar)
        if not (self.N >= 1 and math.isfinite(self.N)):
            raise DomainError(f"N must be >= 1, got {self.N!r}")
        l0 = self.hbar**2 / (2.0 * self.G * self.m**3 * self.N)
        object.__setattr__(self, "l0", l0)
        object.__setattr__(self, "phi0_sq", self.hbar**2 / (2.0 * self.G * self.m**3 * l0**4))
        object.__setattr__(self, "M", self.N * self.m)

    @property
    def energy_unit(self) -> float:
        """Unit of the per-particle quantities eps and U (J)."""
        return self.hbar**2 / (2.0 * self.m * self.l0**2)

    @property
    def system_energy_unit(self) -> float:
        """Unit of the total energy E (J): 2 G^2 m^5 N^3 / hbar^2."""
        return 2.0 * self.G**2 * self.m**5 * self.N**3 / self.hbar**2

    @property
    def velocity_unit(self) -> float:
        """hbar / (m l0), the speed of a particle circulating once at r = l0."""
        return self.hbar / (self.m * self.l0)

    @property
    def current_unit(self) -> float:
        """Number-current density unit hbar phi0^2 / (m l0), in m^-2 s^-1."""
        return self.hbar * self.phi0_sq / (self.m * self.l0)

    def length(self, r_tilde: float) -> float:
        return r_tilde * self.l0

    def number_density(self, f_sq: float) -> float:
        return f_sq * self.phi0_sq


@dataclass(frozen=True)
class CentralBody:
    """Spherical body of mass ``M0`` (kg) and radius ``R0`` (m)."""

    M0: float
    R0: float

    def __post_init__(self):
        _positive(M0=self.M0, R0=self.R0)

    @classmethod
    def from_cgs(cls, mass_g: float, radius_cm: float) -> "CentralBody":
        return cls(mass_g * 1e-3, radius_cm * 1e-2)


def length_scale(m: float, N: float) -> float:
    """l0 = hbar^2 / (2 G m^3 N) in metres."""
    return PhysicalScale(m, N).l0


def length_scale_compton(m: float, N: float) -> float:
    """The same length written as (1/2) (m_p/m)^2 times the system's Compton wavelength."""
    _positive(m=m, N=N)
    compton = HBAR / (N * m * C_LIGHT)
    return 0.5 * (PLANCK_MASS / m) ** 2 * compton


def gravitational_bohr_radius(m: float, M: float | None = None) -> float:
    """hbar^2 / (G m^2 M); with ``M`` omitted this is the two-particle value hbar^2/(G m^3)."""
    _positive(m=m)
    M = m if M is None else M
    _positive(M=M)
    return HBAR**2 / (G * m**2 * M)


def radius_estimate(m: float, N: float, R_tilde: float = 10.0) -> float:
    """Physical radius R_tilde * l0 (m)."""
    _positive(R_tilde=R_tilde)
    return R_tilde * length_scale(m, N)


def mean_density(m: float, N: float, R_tilde: float = 10.0) -> float:
    """Mean number density N / (4 pi R^3 / 3) in m^-3."""
    R = radius_estimate(m, N, R_tilde)
    return N / (4.0 * math.pi * R**3 / 3.0)


def energy_prefactor(m: float, N: float) -> float:
    return PhysicalScale(m, N).system_energy_unit


def energy_physical(E_tilde: float, m: float, N: float) -> float:
    """Total energy in J from the dimensionless energy."""
    return energy_prefactor(m, N) * E_tilde


def ground_state_energy_divisor(E_tilde: float) -> dict:
    """Compare the divisor D in E = -G^2 m^5 N^3 / (D hbar^2) with the printed 7.37.

    The computed divisor follows from the energy prefactor, D = 1/(2|E_tilde|).
    Both numbers are reported; neither is adjusted.
    """
    if E_tilde >= 0:
        raise DomainError("ground-state energy must be negative")
    return {
        "computed": 1.0 / (2.0 * abs(E_tilde)),
        "printed": PRINTED_GROUND_STATE_DIVISOR,
    }


def mu_parameter(body: CentralBody, m: float) -> float:
    """mu = 2 G m^2 M0 R0 / hbar^2."""
    _positive(m=m)
    return 2.0 * G * m**2 * body.M0 * body.R0 / HBAR**2


def atmosphere_energy_prefactor(body: CentralBody, m: float) -> float:
    """hbar^4 / (4 G m^4 R0^3) in J."""
    _positive(m=m)
    return HBAR**4 / (4.0 * G * m**4 * body.R0**3)


def atmosphere_mass_ratio(I: float, mu: float) -> float:
    """M / M0 = I / mu."""
    _positive(mu=mu)
    return I / mu


def vdw_force(r: float) -> float:
    """Magnitude of the hydrogen-hydrogen van der Waals force at separation ``r`` (N)."""
    return 6.0 * VDW_HYDROGEN_COEFF * COULOMB_E2 * BOHR_RADIUS**5 / r**7


def gravity_force(r: float, m: float) -> float:
    return G * m**2 / r**2


def vdw_crossover(m: float = HYDROGEN_MASS) -> tuple[float, float]:
    """Separation where van der Waals and gravitational forces are equal.

    Returns ``(r0, rho0)`` in m and m^-3 with rho0 = 1/r0^3. The balance
    6 C e^2 a_B^5 / r^7 = G m^2 / r^2 is solved in closed form.
    """
    _positive(m=m)
    ratio = 6.0 * VDW_HYDROGEN_COEFF * COULOMB_E2 / (G * m**2)
    r0 = BOHR_RADIUS * ratio**0.2
    return r0, 1.0 / r0**3
