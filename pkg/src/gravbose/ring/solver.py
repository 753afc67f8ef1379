"""Rotating axisymmetric structures by Green-function iteration.

The amplitude is phi = f(r, theta) exp(i l psi). In the scaled coordinate
rbar = v r, where eps = -v^2, the field equations become the pair of
integral equations

    fbar = -1/(4 pi v^2) * int exp(-|R|)/|R| cos l(psi - psi') ubar fbar' d^3 rbar'
    ubar = -1/v^2 * int fbar'^2 / |R| d^3 rbar'

and multiplying the first by fbar and integrating gives a Rayleigh-type
expression for v^2. Angular dependence is carried by orthonormal
associated Legendre functions of order ``l`` for the amplitude (so the
factor sin^l(theta) is built in) and by ordinary Legendre polynomials for
the potential; both kernels are diagonal in that basis, leaving only
radial integrals. Only degrees of the parity of ``l`` (amplitude) and even
degrees (potential) are kept, which enforces reflection symmetry about the
equator.

During the iteration the amplitude is kept at the normalization
int fbar^2 d^3 rbar = v^3, the image of int f^2 d^3 r = 1 under the scaling.
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, simpson
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq, minimize_scalar

from ..errors import (
    ConvergenceError,
    DegenerateFieldError,
    DomainError,
    IterationDiverged,
    ResolutionError,
    TrivialFixedPointError,
)
from ..scales import HBAR
from .kernels import TruncationWarning, scaled_bessel_i, scaled_bessel_k
from .legendre import assoc_legendre_table, gauss_legendre

__all__ = [
    "RingGrid",
    "RingSolution",
    "AxisWarning",
    "poisson_potential",
    "helmholtz_step",
    "eigenvalue_update",
    "ring_iteration",
    "initial_field",
    "solve_ring",
    "ring_observables",
    "angular_momentum",
    "ring_pde_residual",
]

log = logging.getLogger(__name__)

TAIL_TOL = 1e-8
# keep r^(k+1) and r^-(k+1) well inside double range
_MAX_LOG_POWER = 600.0


class AxisWarning(RuntimeWarning):
    """Mean velocity requested on the rotation axis, where it is undefined."""


class RingGrid:
    """Discretization shared by every ring operation.

    Radial nodes are geometric on [r_min, r_max] (scaled coordinate);
    polar nodes are Gauss-Legendre in cos(theta).
    """

    def __init__(self, l: int = 1, K: int = 32, n_theta: int = 64, n_r: int = 400, r_min: float = 1e-3, r_max: float = 25.0):
        if int(l) != l or l < 0:
            raise DomainError("l must be a non-negative integer")
        if K < 2 or n_theta < 4 or n_r < 16 or not 0 < r_min < r_max:
            raise DomainError("invalid ring grid parameters")
        self.l, self.K, self.n_theta, self.n_r = int(l), int(K), int(n_theta), int(n_r)
        self.r_min, self.r_max = float(r_min), float(r_max)

        self.t = np.linspace(math.log(r_min), math.log(r_max), n_r)
        self.dt = self.t[1] - self.t[0]
        self.r = np.exp(self.t)
        self.x, self.wx = gauss_legendre(n_theta)
        self.theta = np.arccos(self.x)

        self.k_f = np.arange(self.l, self.l + self.K + 1, 2)
        self.k_u = np.arange(0, 2 * self.K + 1, 2)
        self.P_f = assoc_legendre_table(self.k_f[-1], self.l, self.x)[self.k_f]
        self.P_u = assoc_legendre_table(self.k_u[-1], 0, self.x)[self.k_u]
        # i_k / r^k and k_k * r^(k+1): free of under/overflow at small r
        self._i = np.array([scaled_bessel_i(k, self.r) for k in self.k_f])
        self._k = np.array([scaled_bessel_k(k, self.r) for k in self.k_f])

    def __repr__(self):
        return (
            f"RingGrid(l={self.l}, K={self.K}, n_theta={self.n_theta}, n_r={self.n_r}, "
            f"r_min={self.r_min}, r_max={self.r_max})"
        )

    def refined(self, factor: int = 2) -> "RingGrid":
        """Same domain with truncation, polar and radial resolution multiplied."""
        return RingGrid(self.l, self.K * factor, self.n_theta * factor, self.n_r * factor, self.r_min, self.r_max)

    # --- projections -------------------------------------------------
    def to_modes(self, values: np.ndarray, sector: str = "f") -> np.ndarray:
        P = self.P_f if sector == "f" else self.P_u
        return P @ (values * self.wx).T

    def from_modes(self, modes: np.ndarray, sector: str = "f") -> np.ndarray:
        P = self.P_f if sector == "f" else self.P_u
        return modes.T @ P

    def tail_ratio(self, values: np.ndarray, sector: str = "f") -> float:
        """Largest coefficient of the highest retained degree relative to the largest overall."""
        modes = np.abs(self.to_modes(values, sector))
        return float(modes[-1].max() / modes.max())

    def degrees(self, sector: str = "f") -> np.ndarray:
        return self.k_f if sector == "f" else self.k_u

    # --- quadrature --------------------------------------------------
    def volume_integral(self, values: np.ndarray) -> float:
        """Integral over all space of an axisymmetric field sampled on the grid."""
        radial = values @ self.wx
        return float(2.0 * np.pi * simpson(radial * self.r**3, dx=self.dt))

    def _inner(self, y: np.ndarray, start: int = 0) -> np.ndarray:
        """Running integral of y dr from node ``start`` up to each node."""
        return cumulative_simpson(y * self.r[start:], dx=self.dt, initial=0.0, axis=-1)

    def _outer(self, y: np.ndarray, start: int = 0) -> np.ndarray:
        """Running integral of y dr from each node to the last one.

        Accumulated from the outside so that large integrands near the
        origin cannot cancel against the far-field values.
        """
        rev = (y * self.r[start:])[..., ::-1]
        return cumulative_simpson(rev, dx=self.dt, initial=0.0, axis=-1)[..., ::-1]

    def _radial_convolution(self, modes, degrees, a_in, a_out):
        """Mode-by-mode radial Green-function integral.

        For degree k the result is
            a_out(r) r^-(k+1) int_{r'<r} a_in(r') r'^(k+2) s(r') dr'
          + a_in(r) r^k int_{r'>r} a_out(r') r'^(1-k) s(r') dr'.
        High degrees start at the radius where r^-(k+1) is still finite;
        both the mode and its source behave as r^k, so nothing below that
        radius contributes.
        """
        r = self.r
        out = np.zeros_like(modes)
        for i, k in enumerate(degrees):
            j = int(np.searchsorted(self.t, -_MAX_LOG_POWER / (k + 1.0)))
            rs, src = r[j:], modes[i, j:]
            inner = self._inner(a_in[i, j:] * rs ** (k + 2.0) * src, j)
            outer = self._outer(a_out[i, j:] * rs ** (1.0 - k) * src, j)
            out[i, j:] = a_out[i, j:] * rs ** (-k - 1.0) * inner + a_in[i, j:] * rs**k * outer
        return out

    # --- kernels -----------------------------------------------------
    def coulomb(self, density: np.ndarray) -> np.ndarray:
        """-int density(r') / |r - r'| d^3 r' on the grid."""
        rho = self.to_modes(density, "u")
        weight = (4.0 * np.pi / (2 * self.k_u + 1.0))[:, None]
        ones = np.ones_like(rho)
        return self.from_modes(-weight * self._radial_convolution(rho, self.k_u, ones, ones), "u")

    def screened(self, source: np.ndarray) -> np.ndarray:
        """-(1/4 pi) int exp(-|R|)/|R| source' exp(i l (psi' - psi)) d^3 r'.

        Returned as amplitude modes.
        """
        s = self.to_modes(source, "f")
        return -self._radial_convolution(s, self.k_f, self._i, self._k)


def poisson_potential(grid: RingGrid, f_field: np.ndarray, v: float) -> np.ndarray:
    """ubar = -(1/v^2) int fbar'^2 / |R| d^3 rbar'."""
    if not v > 0:
        raise DomainError("v must be positive")
    return grid.coulomb(f_field**2) / v**2


def _screened_field(grid: RingGrid, u_field: np.ndarray, f_field: np.ndarray) -> np.ndarray:
    out = grid.from_modes(grid.screened(u_field * f_field), "f")
    if not np.all(np.isfinite(out)):
        raise IterationDiverged("non-finite field after the screened-kernel step")
    return out


def helmholtz_step(grid: RingGrid, u_field: np.ndarray, f_field: np.ndarray, v: float) -> np.ndarray:
    """fbar_next = -1/(4 pi v^2) int exp(-|R|)/|R| cos l(psi - psi') ubar fbar' d^3 rbar'."""
    if not v > 0:
        raise DomainError("v must be positive")
    return _screened_field(grid, u_field, f_field) / v**2


def eigenvalue_update(grid: RingGrid, u_field: np.ndarray, f_field: np.ndarray) -> float:
    """v^2 from the Rayleigh-type quotient of the screened-kernel equation."""
    norm = grid.volume_integral(f_field**2)
    if not norm > 1e-300:
        raise DegenerateFieldError("field norm vanishes")
    return grid.volume_integral(f_field * _screened_field(grid, u_field, f_field)) / norm


def _normalized(grid: RingGrid, f_field: np.ndarray, v: float) -> np.ndarray:
    norm = grid.volume_integral(f_field**2)
    if not (norm > 0 and np.isfinite(norm)):
        raise TrivialFixedPointError("field collapsed to zero")
    return f_field * math.sqrt(v**3 / norm)


def ring_iteration(grid: RingGrid, f_field: np.ndarray, v: float) -> tuple[np.ndarray, float]:
    """One undamped sweep: potential, eigenvalue update, screened-kernel step.

    The input is renormalized first; the output is normalized to the new v.
    """
    f_field = _normalized(grid, f_field, v)
    u_field = poisson_potential(grid, f_field, v)
    screened = _screened_field(grid, u_field, f_field)
    v2 = grid.volume_integral(f_field * screened) / grid.volume_integral(f_field**2)
    if not v2 > 1e-300:
        raise TrivialFixedPointError(f"eigenvalue update gave v^2 = {v2:.3e}")
    v_new = math.sqrt(v2)
    return _normalized(grid, screened / v2, v_new), v_new


def initial_field(grid: RingGrid, width: float = 1.0, center: float = 1.0) -> np.ndarray:
    """Torus-like seed (rbar sin theta)^l exp(-(rbar - center)^2 / width^2)."""
    r = grid.r[:, None]
    s = np.sqrt(1.0 - grid.x**2)[None, :]
    seed = (r * s) ** grid.l * np.exp(-(((r - center) / width) ** 2))
    return grid.from_modes(grid.to_modes(seed, "f"), "f")


@dataclass(frozen=True)
class RingSolution:
    """Converged rotating structure.

    Fields on the grid are stored in the scaled coordinate ``r_grid``
    (rbar = v r); physical radii are ``r_grid / v``. ``g`` is the envelope
    f / (r sin theta)^l in physical coordinates. Lengths in the geometry
    fields are physical (dimensionless) radii.
    """

    l: int
    grid: RingGrid = field(repr=False)
    f_bar: np.ndarray = field(repr=False)
    u_bar: np.ndarray = field(repr=False)
    v: float
    eps: float
    E: float
    iterations: int
    residual: float
    inner_radius: float = float("nan")
    outer_radius: float = float("nan")
    height: float = float("nan")
    max_radius: float = float("nan")

    @property
    def r_grid(self) -> np.ndarray:
        return self.grid.r

    @property
    def theta_nodes(self) -> np.ndarray:
        return self.grid.theta

    @property
    def r(self) -> np.ndarray:
        return self.grid.r / self.v

    @property
    def g(self) -> np.ndarray:
        rs = self.r[:, None] * np.sin(self.grid.theta)[None, :]
        return self.f_bar / rs**self.l

    @property
    def Lz_per_particle(self) -> int:
        """Angular momentum per particle in units of hbar."""
        return self.l

    @property
    def virial_residual(self) -> float:
        return abs(self.E - self.eps / 3.0) / abs(self.eps)

    @property
    def _splines(self):
        cache = self.__dict__.get("_spline_cache")
        if cache is None:
            modes = self.grid.to_modes(self.f_bar, "f")
            cache = CubicSpline(self.grid.r, modes, axis=1, extrapolate=False)
            object.__setattr__(self, "_spline_cache", cache)
        return cache

    def field(self, r, theta) -> np.ndarray:
        """Physical amplitude f at spherical coordinates (r, theta)."""
        r = np.asarray(r, dtype=float)
        theta = np.asarray(theta, dtype=float)
        r, theta = np.broadcast_arrays(r, theta)
        rb = np.clip(r * self.v, self.grid.r_min, None)
        modes = np.nan_to_num(self._splines(rb.ravel()), nan=0.0)
        th = theta.ravel()
        P = assoc_legendre_table(self.grid.k_f[-1], self.l, np.cos(th), np.sin(th))[self.grid.k_f]
        return np.sum(modes * P, axis=0).reshape(r.shape)

    def density(self, r, theta) -> np.ndarray:
        return self.field(r, theta) ** 2

    def envelope(self, r, theta) -> np.ndarray:
        r, theta = np.broadcast_arrays(np.asarray(r, float), np.asarray(theta, float))
        return self.field(r, theta) / (r * np.sin(theta)) ** self.l

    def cylindrical_density(self, rho, z) -> np.ndarray:
        rho, z = np.broadcast_arrays(np.asarray(rho, float), np.asarray(z, float))
        r = np.hypot(rho, z)
        theta = np.arctan2(rho, z)
        return self.density(r, theta)

    def equatorial_cut(self, rho) -> np.ndarray:
        return self.cylindrical_density(rho, 0.0)

    def vertical_cut(self, z) -> np.ndarray:
        """Density along the line parallel to the axis through the density maximum."""
        return self.cylindrical_density(self.max_radius, z)

    def summary(self) -> dict:
        return {
            "l": self.l,
            "eps": self.eps,
            "E": self.E,
            "v": self.v,
            "inner_radius": self.inner_radius,
            "outer_radius": self.outer_radius,
            "height": self.height,
            "max_radius": self.max_radius,
            "Lz_per_particle": self.Lz_per_particle,
            "iterations": self.iterations,
            "residual": self.residual,
        }


def _geometry(sol: RingSolution) -> dict:
    """Ring extents by the factor-10 density criterion.

    Inner and outer radii come from the equatorial profile; the height is
    the full extent, above and below the equator, of the vertical line
    through the density maximum.
    """
    r_phys = sol.r
    samples = sol.equatorial_cut(r_phys)
    i = int(np.argmax(samples))
    lo, hi = r_phys[max(i - 1, 0)], r_phys[min(i + 1, len(r_phys) - 1)]
    res = minimize_scalar(lambda p: -sol.equatorial_cut(p), bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    rho_m = float(res.x)
    d_m = float(sol.equatorial_cut(rho_m))
    level = d_m / 10.0
    r_end = r_phys[-1] * 0.999

    def eq(p):
        return float(sol.equatorial_cut(p)) - level

    inner = float("nan")
    if sol.l > 0:
        inner = brentq(eq, r_phys[0], rho_m, xtol=1e-12)
    if eq(r_end) >= 0:
        raise ResolutionError("ring density does not fall off within the grid")
    outer = brentq(eq, rho_m, r_end, xtol=1e-12)

    def vert(z):
        return float(sol.cylindrical_density(rho_m, z)) - level

    z_end = math.sqrt(max(r_end**2 - rho_m**2, 0.0))
    if vert(z_end) >= 0:
        raise ResolutionError("ring density does not fall off along the axis direction")
    z_half = brentq(vert, 0.0, z_end, xtol=1e-12)
    return {"inner_radius": inner, "outer_radius": outer, "height": 2.0 * z_half, "max_radius": rho_m}


def solve_ring(
    l: int = 1,
    *,
    grid: RingGrid | None = None,
    v0: float = 0.2,
    seed: np.ndarray | None = None,
    damping: float = 0.5,
    tol: float = 1e-8,
    max_iter: int = 3000,
    geometry: bool = True,
) -> RingSolution:
    """Iterate to the self-consistent rotating structure with winding ``l``.

    Each sweep computes the potential from the current amplitude, updates v
    from the Rayleigh-type quotient and applies the screened kernel. The new
    amplitude is blended with the old one (weight ``damping``); the weight is
    halved whenever the field change grows for three sweeps in a row.
    Iteration stops once the relative changes of v and of the field norm
    both fall below ``tol``.
    """
    if int(l) != l or l < 1:
        raise DomainError("winding number l must be a positive integer")
    return _solve(int(l), grid=grid, v0=v0, seed=seed, damping=damping, tol=tol, max_iter=max_iter, geometry=geometry)


def _solve(l, *, grid, v0, seed, damping, tol, max_iter, geometry):
    grid = RingGrid(l) if grid is None else grid
    if grid.l != l:
        raise DomainError("grid was built for a different winding number")
    f = initial_field(grid) if seed is None else np.array(seed, dtype=float)
    v = float(v0)
    lam = float(damping)
    prev, growth = math.inf, 0
    dv = df = math.inf
    for it in range(1, max_iter + 1):
        f = _normalized(grid, f, v)
        f_new, v_new = ring_iteration(grid, f, v)
        dv = abs(v_new - v) / v
        df = math.sqrt(grid.volume_integral((f_new - f) ** 2) / grid.volume_integral(f**2))
        f = (1.0 - lam) * f + lam * f_new
        v = v_new
        if dv < tol and df < tol:
            break
        growth = growth + 1 if df > prev else 0
        if growth >= 3 and lam > 1.0 / 64:
            lam *= 0.5
            growth = 0
            log.debug("ring iteration oscillating; damping weight now %g", lam)
        prev = df
        if it % 100 == 0:
            log.debug("ring it=%d v=%.12g dv=%.2e df=%.2e", it, v, dv, df)
    else:
        raise ConvergenceError(f"ring iteration did not converge in {max_iter} sweeps", residual=max(dv, df))

    f = _normalized(grid, f, v)
    u = poisson_potential(grid, f, v)
    eps = -v * v
    E = eps - 0.5 * grid.volume_integral(u * f * f) / v**3
    for values, sector in ((f, "f"), (f * f, "u")):
        ratio = grid.tail_ratio(values, sector)
        if ratio > TAIL_TOL:
            warnings.warn(f"angular truncation tail {ratio:.1e} exceeds {TAIL_TOL:g}; raise K", TruncationWarning, stacklevel=3)
    sol = RingSolution(l=l, grid=grid, f_bar=f, u_bar=u, v=v, eps=eps, E=E, iterations=it, residual=max(dv, df))
    if geometry:
        geo = _geometry(sol)
        sol = RingSolution(**{**_fields(sol), **geo})
    return sol


def _fields(sol: RingSolution) -> dict:
    return {name: getattr(sol, name) for name in RingSolution.__dataclass_fields__}


def ring_observables(sol: RingSolution, r, theta) -> tuple:
    """Dimensionless azimuthal current density and mean speed.

    j = l (r sin theta) g^2 and v_mean = l / (r sin theta); multiply by the
    current and velocity units of :class:`~gravbose.scales.PhysicalScale`
    for SI values. On the axis the speed is undefined (there are no
    particles there): an :class:`AxisWarning` is issued and ``(0.0, nan)``
    returned.
    """
    r = float(r)
    theta = float(theta)
    rs = r * math.sin(theta)
    if abs(rs) < 1e-300:
        warnings.warn("mean velocity is undefined on the rotation axis", AxisWarning, stacklevel=2)
        return 0.0, float("nan")
    g = float(sol.envelope(r, theta))
    return sol.l * rs * g * g, sol.l / rs


def angular_momentum(l: int, N: float) -> float:
    """L_z = hbar l N in J s."""
    if int(l) != l or l < 0:
        raise DomainError("l must be a non-negative integer")
    if N < 0:
        raise DomainError("N must be non-negative")
    return HBAR * l * N


def ring_pde_residual(sol: RingSolution, r_window: tuple[float, float] = (0.05, 15.0)) -> tuple[float, float]:
    """Relative residuals of the differential field equations on the converged fields.

    Each mode is splined in log r and differentiated; the amplitude and
    potential equations are checked in the scaled coordinate,
        lap fbar - fbar = (ubar / v^2) fbar,   lap ubar = 4 pi fbar^2 / v^2,
    over ``r_window`` (scaled units). This is independent of the integral
    form used by the iteration.
    """
    grid, v = sol.grid, sol.v
    t, r = grid.t, grid.r
    mask = (r >= r_window[0]) & (r <= r_window[1])

    def radial_laplacian(modes, degrees):
        spl = CubicSpline(t, modes, axis=1)
        d1, d2 = spl(t, 1), spl(t, 2)
        return (d2 + d1 - degrees[:, None] * (degrees[:, None] + 1) * modes) / r**2

    f_modes = grid.to_modes(sol.f_bar, "f")
    lhs_f = radial_laplacian(f_modes, grid.k_f) - f_modes
    rhs_f = grid.to_modes(sol.u_bar * sol.f_bar, "f") / v**2
    u_modes = grid.to_modes(sol.u_bar, "u")
    lhs_u = radial_laplacian(u_modes, grid.k_u)
    rhs_u = 4.0 * np.pi * grid.to_modes(sol.f_bar**2, "u") / v**2
    res_f = np.max(np.abs(lhs_f - rhs_f)[:, mask]) / np.max(np.abs(rhs_f)[:, mask])
    res_u = np.max(np.abs(lhs_u - rhs_u)[:, mask]) / np.max(np.abs(rhs_u)[:, mask])
    return float(res_f), float(res_u)
