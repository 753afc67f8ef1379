"""Boundary-free spherically symmetric structures.

Shooting is done in the gauge f(0) = 1, where the structure has extent of
order one, by bisecting on w(0) with node counting. The result is then
mapped onto the normalized member of the rescaling family

    f_C(r) = f(r/C) / C^2,   w_C(r) = w(r/C) / C^2,

with C equal to the mass integral of the shot solution.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.signal import argrelmax

from .errors import DomainError, NumericError, ResolutionError
from .radial import (
    RadialProfile,
    bisect_shooting,
    count_sign_changes,
    cumulative_shell_integral,
    extend_exterior,
    integrate_radial,
    level_crossing,
    probe_too_low,
    shell_integral,
    trim_tail,
)

__all__ = [
    "SphericalSolution",
    "shoot_spherical",
    "rescale_normalize",
    "rescale",
    "extract_epsilon",
    "structure_radius",
    "dimensionless_energy",
    "MAX_NODES",
]

log = logging.getLogger(__name__)

MAX_NODES = 5
TAIL_THRESHOLD = 1e-12


@dataclass(frozen=True)
class SphericalSolution:
    """Normalized spherical structure; ``profile.u`` is filled."""

    profile: RadialProfile
    n_nodes: int
    eps: float
    E: float
    R: float
    f0: float
    u0: float

    @property
    def virial_residual(self) -> float:
        """|E - eps/3| / |eps|; vanishes for exact boundary-free solutions."""
        return abs(self.E - self.eps / 3.0) / abs(self.eps)

    def summary(self) -> dict:
        return {
            "n_nodes": self.n_nodes,
            "f0": self.f0,
            "u0": self.u0,
            "eps": self.eps,
            "E": self.E,
            "R": self.R,
        }


def rescale(profile: RadialProfile, C: float) -> RadialProfile:
    """Apply the rescaling symmetry with constant ``C`` (no normalization)."""
    if not (C > 0 and np.isfinite(C)):
        raise DomainError(f"rescaling constant must be positive, got {C!r}")
    c2, c3 = C**-2, C**-3
    return RadialProfile(
        profile.r * C,
        profile.f * c2,
        profile.df * c3,
        profile.w * c2,
        profile.dw * c3,
        None if profile.u is None else profile.u * c2,
    )


def rescale_normalize(profile: RadialProfile) -> RadialProfile:
    """Map a solution onto the member of its family with unit mass integral.

    The mass integral of the rescaled field equals the original one divided
    by C, so taking C equal to that integral normalizes in one step.
    """
    C = profile.mass()
    if not (C > 0 and np.isfinite(C)):
        raise DomainError(f"mass integral must be positive, got {C!r}")
    if C == 1.0:
        return profile
    return rescale(profile, C)


def extract_epsilon(
    profile: RadialProfile,
    enclosed: float = 1.0,
    r_tail: float | None = None,
    threshold: float = TAIL_THRESHOLD,
) -> float:
    """Energy parameter from the far-field behaviour of w.

    Outside the matter the potential is u = -enclosed/r, so
    eps = -(w(r_tail) + enclosed/r_tail). By default ``r_tail`` is the first
    radius past the density peak where f^2 has dropped below
    ``threshold`` times its maximum.
    """
    r, w = profile.r, profile.w
    if r_tail is None:
        rho = profile.f**2
        peak = int(np.argmax(rho))
        tail = np.nonzero(rho[peak:] < threshold * rho[peak])[0]
        if len(tail) == 0:
            raise ResolutionError("density tail not reached")
        i = peak + int(tail[0])
        return float(-(w[i] + enclosed / r[i]))
    if not r[0] <= r_tail <= r[-1]:
        raise ResolutionError(f"r_tail={r_tail} outside the grid")
    return float(-(np.interp(r_tail, r, w) + enclosed / r_tail))


def _reference_maximum(rho: np.ndarray) -> int:
    """Index of the outermost density maximum (the centre if there is none)."""
    peaks = argrelmax(rho)[0]
    peaks = peaks[rho[peaks] > 1e-8 * rho.max()]
    if len(peaks):
        return int(peaks[-1])
    return int(np.argmax(rho))


def structure_radius(profile: RadialProfile) -> float:
    """Radius at which the density has fallen to a tenth of its outermost maximum.

    For a nodeless structure the reference is the central density; for
    layered ones it is the last (outermost) maximum. The radius is measured
    from the centre in both cases.
    """
    rho = profile.f**2
    ref = _reference_maximum(rho)
    return level_crossing(profile.r, rho, ref, rho[ref] / 10.0)


def dimensionless_energy(profile: RadialProfile, eps: float) -> float:
    """E = eps - (1/2) * 4 pi * integral of r^2 u f^2 dr for a normalized profile."""
    u = profile.w + eps if profile.u is None else profile.u
    E = eps - 0.5 * shell_integral(profile.r, u * profile.f**2)
    if not np.isfinite(E):
        raise NumericError("non-finite energy")
    return float(E)


def _shoot_unnormalized(n_nodes, step, r_max, bracket, tol, bound):
    n = int(round(r_max / step))

    def too_low(w0):
        return probe_too_low(0.0, 1.0, 0.0, w0, 0.0, step, n, bound, n_nodes)

    _, w0 = bisect_shooting(too_low, bracket[0], bracket[1], tol)
    # the upper end diverges without extra zeros, which keeps the tail monotone
    return integrate_radial(1.0, w0, step, r_max, divergence_bound=bound)


def shoot_spherical(
    n_nodes: int = 0,
    *,
    step: float = 1e-3,
    r_max: float = 25.0,
    r_max_limit: float = 200.0,
    bracket: tuple[float, float] = (-10.0, 0.0),
    tol: float = 1e-13,
    divergence_bound: float = 1e3,
    max_nodes: int = MAX_NODES,
) -> SphericalSolution:
    """Find the normalized spherical structure with ``n_nodes`` zeros.

    ``r_max`` is doubled (up to ``r_max_limit``) whenever the shot does not
    decay within the grid or shows the wrong node count.
    """
    if int(n_nodes) != n_nodes or n_nodes < 0:
        raise DomainError(f"n_nodes must be a non-negative integer, got {n_nodes!r}")
    if n_nodes > max_nodes:
        raise DomainError(f"n_nodes={n_nodes} exceeds the cap of {max_nodes}")
    n_nodes = int(n_nodes)

    while True:
        try:
            raw = _shoot_unnormalized(n_nodes, step, r_max, bracket, tol, divergence_bound)
            trimmed, cut = trim_tail(raw)
            if abs(raw.f[cut]) > 1e-5 * np.max(np.abs(raw.f)):
                raise ResolutionError(f"tail not resolved at r_max={r_max}")
            if count_sign_changes(trimmed.f) != n_nodes:
                raise ResolutionError(f"node count not resolved at r_max={r_max}")
            break
        except ResolutionError:
            if 2 * r_max > r_max_limit:
                raise
            log.debug("raising r_max from %g to %g", r_max, 2 * r_max)
            r_max *= 2

    trimmed = extend_exterior(trimmed, step, r_max)
    w0 = trimmed.w[0]
    normalized = rescale_normalize(trimmed)
    enclosed = cumulative_shell_integral(normalized.r, normalized.f**2)
    rho = normalized.f**2
    i = int(np.nonzero(rho < TAIL_THRESHOLD * rho.max())[0][0])
    eps = float(-(normalized.w[i] + enclosed[i] / normalized.r[i]))
    normalized = normalized.with_epsilon(eps)
    E = dimensionless_energy(normalized, eps)
    R = structure_radius(normalized)
    sol = SphericalSolution(
        profile=normalized,
        n_nodes=n_nodes,
        eps=eps,
        E=E,
        R=R,
        f0=float(normalized.f[0]),
        u0=float(normalized.w[0] + eps),
    )
    log.debug("n=%d w0(gauge)=%.15g eps=%.10g E=%.10g R=%.6g", n_nodes, w0, eps, E, R)
    return sol
