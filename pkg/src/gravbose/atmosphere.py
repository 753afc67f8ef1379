"""Atmosphere captured by a central body of unit radius.

The body enters only through ``mu``, which fixes du/dr = mu at the surface
r = 1. The second surface condition is one of two limiting cases:

* ``non_adhesion`` - the density vanishes at the surface, f(1) = 0, and the
  slope f'(1) is prescribed;
* ``adhesion`` - the density peaks at the surface, f'(1) = 0, and f(1) is
  prescribed.

The remaining free constant w(1) is found by shooting for a decaying tail.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson

from .errors import ConvergenceError, DomainError, NumericError, ResolutionError
from .radial import (
    FOUR_PI,
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
    "BC_KINDS",
    "AtmosphereSolution",
    "solve_atmosphere",
    "solve_atmosphere_for_mass",
    "atmosphere_mass",
    "atmosphere_energy",
    "atmosphere_thickness",
    "closed_form_potential",
    "potential_consistency_check",
    "thin_limit_estimate",
]

log = logging.getLogger(__name__)

BC_KINDS = ("non_adhesion", "adhesion")
TAIL_THRESHOLD = 1e-14


@dataclass(frozen=True)
class AtmosphereSolution:
    mu: float
    bc_kind: str
    bc_value: float
    u1: float
    eps: float
    I: float
    E: float
    H: float
    h_m: float
    f_m: float
    profile: RadialProfile
    n_nodes: int = 0

    def summary(self) -> dict:
        return {
            "mu": self.mu,
            "bc_kind": self.bc_kind,
            "bc_value": self.bc_value,
            "u1": self.u1,
            "eps": self.eps,
            "I": self.I,
            "E": self.E,
            "H": self.H,
            "h_m": self.h_m,
            "f_m": self.f_m,
        }


def _normalize_kind(bc_kind: str) -> str:
    kind = bc_kind.replace("-", "_")
    if kind not in BC_KINDS:
        raise DomainError(f"bc_kind must be one of {BC_KINDS}, got {bc_kind!r}")
    return kind


def thin_limit_estimate(mu: float) -> float:
    """Order-of-magnitude thickness 1/sqrt(mu) of a light atmosphere on a strong body."""
    if not mu > 0:
        raise DomainError("mu must be positive")
    return 1.0 / math.sqrt(mu)


def atmosphere_mass(profile: RadialProfile) -> float:
    """I = 4 pi * integral over r >= 1 of f^2 r^2 dr (equals mu * M / M0)."""
    return shell_integral(profile.r, profile.f**2)


def atmosphere_energy(profile: RadialProfile, eps: float) -> float:
    """E = eps * I - (1/2) * 4 pi * integral of u f^2 r^2 dr."""
    u = profile.w + eps if profile.u is None else profile.u
    E = eps * atmosphere_mass(profile) - 0.5 * shell_integral(profile.r, u * profile.f**2)
    if not np.isfinite(E):
        raise NumericError("non-finite atmosphere energy")
    return float(E)


def atmosphere_thickness(profile: RadialProfile) -> tuple[float, float, float]:
    """Return ``(H, h_m, f_m)``.

    ``h_m`` is the altitude of the density maximum above the surface and
    ``f_m`` the amplitude there; ``H`` is the altitude above the surface at
    which f^2 has dropped to f_m^2 / 10 beyond the maximum. For adhesion the
    maximum sits on the surface and h_m = 0.
    """
    rho = profile.f**2
    i = int(np.argmax(rho))
    r_surface = profile.r[0]
    H = level_crossing(profile.r, rho, i, rho[i] / 10.0) - r_surface
    return float(H), float(profile.r[i] - r_surface), float(abs(profile.f[i]))


def closed_form_potential(mu: float, r: np.ndarray, f: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Potential of body plus atmosphere from the density alone.

    u(r)  = -mu/r - (4 pi / r) int_1^r r'^2 f^2 dr' - 4 pi int_r^inf r' f^2 dr'
    u'(r) = (mu + 4 pi int_1^r r'^2 f^2 dr') / r^2

    so u'(1) = mu identically. Assumes f vanishes beyond the last grid point.
    """
    inner = cumulative_shell_integral(r, f**2)
    outer_cum = FOUR_PI * cumulative_simpson(r * f**2, x=r, initial=0.0)
    outer = outer_cum[-1] - outer_cum
    u = -mu / r - inner / r - outer
    dudr = (mu + inner) / r**2
    return u, dudr


def potential_consistency_check(sol: AtmosphereSolution) -> float:
    """Max |u_closed_form - u_ode| over the grid."""
    p = sol.profile
    u_closed, _ = closed_form_potential(sol.mu, p.r, p.f)
    return float(np.max(np.abs(u_closed - p.u)))


def _initial_state(kind: str, value: float) -> tuple[float, float]:
    return (0.0, value) if kind == "non_adhesion" else (value, 0.0)


def solve_atmosphere(
    mu: float,
    bc_kind: str,
    bc_value: float,
    *,
    n_nodes: int = 0,
    step: float = 1e-3,
    r_max: float | None = None,
    r_max_limit: float = 400.0,
    tol: float = 1e-13,
    divergence_bound: float = 1e3,
) -> AtmosphereSolution:
    """Shoot on w(1) for the atmosphere with the given surface condition.

    ``n_nodes`` requests interior zeros of f (default: none). Without an
    explicit ``r_max`` the grid length is 1 + 40/sqrt(|eps|), starting from
    the guess |eps| ~ mu and refined after each solve until the density
    tail has dropped below 1e-14 of its maximum or the shot itself runs
    away before the grid ends.
    """
    if not (mu > 0 and math.isfinite(mu)):
        raise DomainError(f"mu must be positive, got {mu!r}")
    if not (bc_value > 0 and math.isfinite(bc_value)):
        raise DomainError(f"bc_value must be positive, got {bc_value!r}")
    if int(n_nodes) != n_nodes or n_nodes < 0:
        raise DomainError("n_nodes must be a non-negative integer")
    kind = _normalize_kind(bc_kind)
    f1, df1 = _initial_state(kind, bc_value)
    bound = divergence_bound * max(1.0, bc_value)
    bracket = (-10.0 * (mu + bc_value), 0.0)

    auto = r_max is None
    r_end = 1.0 + 40.0 / math.sqrt(mu) if auto else float(r_max)
    while True:
        n = int(round((r_end - 1.0) / step))

        def too_low(w1):
            return probe_too_low(1.0, f1, df1, w1, mu, step, n, bound, n_nodes)

        _, w1 = bisect_shooting(too_low, *bracket, tol=tol)
        raw = integrate_radial(f1, w1, step, r_end, r0=1.0, df0=df1, dw0=mu, divergence_bound=bound)
        trimmed, cut = trim_tail(raw)
        nodes_ok = count_sign_changes(trimmed.f) == n_nodes
        tail_ok = raw.f[cut] ** 2 < TAIL_THRESHOLD * np.max(raw.f[: cut + 1] ** 2)
        # a shot that runs away before the grid ends is limited by precision, not by r_max
        ran_away = len(raw.r) < n + 1
        if nodes_ok and (tail_ok or ran_away):
            break
        if not auto or r_end >= r_max_limit:
            raise ResolutionError(f"atmosphere tail not resolved at r_max={r_end:g}")
        suggested = 2.0 * r_end - 1.0
        if nodes_ok:
            q = trimmed.r[cut] ** 2 * trimmed.dw[cut]
            eps_est = -(trimmed.w[cut] + q / trimmed.r[cut])
            if eps_est < 0:
                suggested = max(suggested, 1.0 + 40.0 / math.sqrt(-eps_est))
        r_end = min(r_max_limit, suggested)
        log.debug("raising atmosphere r_max to %g", r_end)

    profile = extend_exterior(trimmed, step, r_end)
    rho = profile.f**2
    enclosed = cumulative_shell_integral(profile.r, rho)
    below = np.nonzero(rho < 1e-12 * rho.max())[0]
    below = below[below > np.argmax(rho)]
    i = int(below[0]) if len(below) else cut
    eps = float(-(profile.w[i] + (mu + enclosed[i]) / profile.r[i]))
    if not eps < 0:
        raise ConvergenceError(f"atmosphere is not bound (eps={eps:.6g})")
    profile = profile.with_epsilon(eps)
    I = atmosphere_mass(profile)
    E = atmosphere_energy(profile, eps)
    H, h_m, f_m = atmosphere_thickness(profile)
    return AtmosphereSolution(
        mu=float(mu),
        bc_kind=kind,
        bc_value=float(bc_value),
        u1=float(profile.u[0]),
        eps=eps,
        I=I,
        E=E,
        H=H,
        h_m=h_m,
        f_m=f_m,
        profile=profile,
        n_nodes=int(n_nodes),
    )


def solve_atmosphere_for_mass(
    mu: float,
    bc_kind: str,
    target_I: float,
    *,
    rtol: float = 1e-8,
    max_iter: int = 50,
    **kwargs,
) -> AtmosphereSolution:
    """Find the surface value that gives atmosphere mass ``target_I``.

    Secant iteration on log(bc_value) against log(I); I grows monotonically
    with the prescribed surface value.
    """
    if not (target_I > 0 and math.isfinite(target_I)):
        raise DomainError(f"target_I must be positive, got {target_I!r}")
    x0, x1 = math.log(0.05), math.log(0.1)
    s0 = solve_atmosphere(mu, bc_kind, math.exp(x0), **kwargs)
    s1 = solve_atmosphere(mu, bc_kind, math.exp(x1), **kwargs)
    g0 = math.log(s0.I / target_I)
    g1 = math.log(s1.I / target_I)
    for _ in range(max_iter):
        if abs(g1) < rtol:
            return s1
        if g1 == g0:
            break
        x2 = x1 - g1 * (x1 - x0) / (g1 - g0)
        # keep steps bounded; I ~ bc^2 for light atmospheres
        x2 = min(max(x2, x1 - 3.0), x1 + 3.0)
        x0, g0 = x1, g1
        x1 = x2
        s1 = solve_atmosphere(mu, bc_kind, math.exp(x1), **kwargs)
        g1 = math.log(s1.I / target_I)
    raise ConvergenceError(f"could not reach I={target_I}", residual=abs(g1))
