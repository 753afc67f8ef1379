"""Radial profiles of the coupled amplitude/potential pair and their integration.

The spherically symmetric field equations, written with the shifted
potential ``w = u - eps``, are

    f'' + (2/r) f' = w f
    w'' + (2/r) w' = 4 pi f^2

They are integrated as a first-order system in ``(f, f', w, w')`` with a
fixed-step classical Runge-Kutta scheme. The hot loops are compiled with
numba; everything else is plain numpy.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numba
import numpy as np
from scipy.integrate import cumulative_simpson, simpson
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import ConvergenceError, IntegrationDiverged, NumericError, ResolutionError

__all__ = [
    "RadialProfile",
    "integrate_radial",
    "origin_series",
    "radial_residual",
    "shell_integral",
    "cumulative_shell_integral",
    "count_sign_changes",
    "level_crossing",
    "bisect_shooting",
]

FOUR_PI = 4.0 * np.pi

# status codes returned by the compiled kernels
_REACHED_END = 0
_EXCEEDED_BOUND = 1
_NON_FINITE = 2


@dataclass(frozen=True)
class RadialProfile:
    """Sampled radial solution on a strictly increasing grid.

    ``u`` is ``None`` until the energy parameter is known, since only the
    shifted potential ``w`` is determined by the integration itself.
    """

    r: np.ndarray
    f: np.ndarray
    df: np.ndarray
    w: np.ndarray
    dw: np.ndarray
    u: np.ndarray | None = None

    def __post_init__(self):
        n = len(self.r)
        for name in ("f", "df", "w", "dw"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} does not align with r")
        if self.u is not None and len(self.u) != n:
            raise ValueError("u does not align with r")

    @property
    def density(self) -> np.ndarray:
        return self.f**2

    def mass(self) -> float:
        """4 pi * integral of r^2 f^2 over the grid."""
        return shell_integral(self.r, self.f**2)

    def with_epsilon(self, eps: float) -> "RadialProfile":
        return replace(self, u=self.w + eps)


@numba.njit(cache=True, inline="always")
def _rhs(r, f, df, w, dw):
    return df, w * f - 2.0 * df / r, dw, FOUR_PI * f * f - 2.0 * dw / r


@numba.njit(cache=True, inline="always")
def _rk4_step(r, h, f, df, w, dw):
    a0, a1, a2, a3 = _rhs(r, f, df, w, dw)
    hh = 0.5 * h
    b0, b1, b2, b3 = _rhs(r + hh, f + hh * a0, df + hh * a1, w + hh * a2, dw + hh * a3)
    c0, c1, c2, c3 = _rhs(r + hh, f + hh * b0, df + hh * b1, w + hh * b2, dw + hh * b3)
    d0, d1, d2, d3 = _rhs(r + h, f + h * c0, df + h * c1, w + h * c2, dw + h * c3)
    s = h / 6.0
    return (
        f + s * (a0 + 2.0 * b0 + 2.0 * c0 + d0),
        df + s * (a1 + 2.0 * b1 + 2.0 * c1 + d1),
        w + s * (a2 + 2.0 * b2 + 2.0 * c2 + d2),
        dw + s * (a3 + 2.0 * b3 + 2.0 * c3 + d3),
    )


@numba.njit(cache=True)
def _series(f0, w0, r):
    # even-power expansion about the regular centre, through r^4
    a = w0 * f0 / 6.0
    c = 2.0 * np.pi * f0 * f0 / 3.0
    b = (w0 * a + c * f0) / 20.0
    d = 2.0 * np.pi * f0 * a / 5.0
    r2 = r * r
    return (
        f0 + a * r2 + b * r2 * r2,
        2.0 * a * r + 4.0 * b * r2 * r,
        w0 + c * r2 + d * r2 * r2,
        2.0 * c * r + 4.0 * d * r2 * r,
    )


@numba.njit(cache=True)
def _trajectory(r0, f, df, w, dw, h, n, bound):
    out = np.empty((n + 1, 4))
    out[0, 0] = f
    out[0, 1] = df
    out[0, 2] = w
    out[0, 3] = dw
    start = 0
    r = r0
    if r0 == 0.0:
        f, df, w, dw = _series(f, w, h)
        out[1, 0] = f
        out[1, 1] = df
        out[1, 2] = w
        out[1, 3] = dw
        start = 1
        r = h
    status = _REACHED_END
    last = start
    for i in range(start, n):
        f, df, w, dw = _rk4_step(r, h, f, df, w, dw)
        r = r0 + (i + 1) * h
        if not (np.isfinite(f) and np.isfinite(df) and np.isfinite(w) and np.isfinite(dw)):
            status = _NON_FINITE
            break
        out[i + 1, 0] = f
        out[i + 1, 1] = df
        out[i + 1, 2] = w
        out[i + 1, 3] = dw
        last = i + 1
        if abs(f) > bound:
            status = _EXCEEDED_BOUND
            break
    return out[: last + 1], status


@numba.njit(cache=True)
def _probe(r0, f, df, w, dw, h, n, bound, max_zeros):
    """Integrate without storing; count sign changes of f.

    Stops early once ``max_zeros`` is exceeded or |f| passes ``bound``.
    """
    start = 0
    r = r0
    if r0 == 0.0:
        f, df, w, dw = _series(f, w, h)
        start = 1
        r = h
    sign = 0.0
    if f > 0.0:
        sign = 1.0
    elif f < 0.0:
        sign = -1.0
    zeros = 0
    status = _REACHED_END
    for i in range(start, n):
        f, df, w, dw = _rk4_step(r, h, f, df, w, dw)
        r = r0 + (i + 1) * h
        if not np.isfinite(f):
            status = _NON_FINITE
            break
        if f != 0.0:
            s = 1.0 if f > 0.0 else -1.0
            if sign != 0.0 and s != sign:
                zeros += 1
                if zeros > max_zeros:
                    break
            sign = s
        if abs(f) > bound:
            status = _EXCEEDED_BOUND
            break
    return zeros, status, f, df


def origin_series(f0: float, w0: float, r):
    """Regular series ``(f, f', w, w')`` about r = 0, accurate to O(r^6)."""
    return _series(float(f0), float(w0), np.asarray(r, dtype=float))


def integrate_radial(
    f0: float,
    w0: float,
    step: float = 1e-3,
    r_max: float = 25.0,
    *,
    r0: float = 0.0,
    df0: float = 0.0,
    dw0: float = 0.0,
    divergence_bound: float = 1e3,
) -> RadialProfile:
    """Integrate the radial pair outward from ``r0``.

    From the centre (``r0 = 0``) the derivatives vanish and the first step is
    taken with the even-power series, which sidesteps the 2/r term. From
    ``r0 > 0`` (atmosphere) all four initial values are used as given.
    The trajectory stops early once |f| exceeds ``divergence_bound``.

    Raises
    ------
    IntegrationDiverged
        If the state becomes non-finite; carries the last finite radius.
    """
    if not step > 0 or not r_max > r0 + step:
        raise ValueError("need step > 0 and r_max > r0 + step")
    n = int(round((r_max - r0) / step))
    traj, status = _trajectory(
        float(r0), float(f0), float(df0), float(w0), float(dw0), float(step), n, float(divergence_bound)
    )
    r = r0 + step * np.arange(len(traj))
    if status == _NON_FINITE:
        raise IntegrationDiverged(r[-1])
    return RadialProfile(r, traj[:, 0].copy(), traj[:, 1].copy(), traj[:, 2].copy(), traj[:, 3].copy())


def probe_too_low(r0, f, df, w, dw, step, n, bound, n_nodes) -> bool:
    """Shooting discriminator: True when the trial potential is too deep.

    Too deep means f acquires more than ``n_nodes`` zeros, or is heading for
    another zero when the grid ends; too shallow means f runs off to
    infinity with at most ``n_nodes`` zeros.
    """
    zeros, status, f_end, df_end = _probe(
        float(r0), float(f), float(df), float(w), float(dw), float(step), int(n), float(bound), int(n_nodes)
    )
    if zeros > n_nodes:
        return True
    if status == _EXCEEDED_BOUND:
        return False
    if status == _NON_FINITE:
        raise IntegrationDiverged(r0 + n * step, "non-finite state while shooting")
    return f_end * df_end < 0.0


def bisect_shooting(too_low, lo: float, hi: float, tol: float = 1e-13, max_expand: int = 6):
    """Bisect a monotone shooting discriminator down to a bracket of width ``tol``.

    ``too_low(x)`` must be True at ``lo`` and False at ``hi``. The lower end
    is pushed further down (doubling) up to ``max_expand`` times if needed.
    Returns the final ``(lo, hi)``.
    """
    for _ in range(max_expand + 1):
        if too_low(lo):
            break
        lo = hi - 2.0 * (hi - lo)
    else:
        raise ConvergenceError(f"no shooting bracket found down to {lo:.6g}")
    if too_low(hi):
        raise ConvergenceError(f"upper shooting bound {hi:.6g} is still too deep")
    width_tol = tol * max(1.0, abs(lo), abs(hi))
    while hi - lo > width_tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if too_low(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def count_sign_changes(y: np.ndarray) -> int:
    s = np.sign(y)
    s = s[s != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


def trim_tail(profile: RadialProfile) -> tuple[RadialProfile, int]:
    """Cut off the growing-mode contamination at the end of a shot.

    The cut is placed at the local minimum of |f| that precedes the final
    monotone run-away. Beyond it f is set to zero and w is continued with
    the vacuum exterior w = w_c + Q (1/r_c - 1/r), Q = r_c^2 w'(r_c).
    """
    a = np.abs(profile.f)
    i = len(a) - 1
    while i > 0 and a[i - 1] < a[i]:
        i -= 1
    if i == 0:
        raise ResolutionError("profile never decays")
    r, f, df, w, dw = (np.array(x, copy=True) for x in (profile.r, profile.f, profile.df, profile.w, profile.dw))
    rc, q = r[i], r[i] ** 2 * dw[i]
    f[i:] = 0.0
    df[i:] = 0.0
    w[i:] = w[i] + q * (1.0 / rc - 1.0 / r[i:])
    dw[i:] = q / r[i:] ** 2
    return RadialProfile(r, f, df, w, dw), i


def extend_exterior(profile: RadialProfile, step: float, r_max: float) -> RadialProfile:
    """Extend a profile whose tail is already vacuum (f = 0) out to ``r_max``."""
    r = profile.r
    n_extra = int(round((r_max - r[-1]) / step))
    if n_extra <= 0:
        return profile
    r_new = r[-1] + step * np.arange(1, n_extra + 1)
    q = r[-1] ** 2 * profile.dw[-1]
    w_new = profile.w[-1] + q * (1.0 / r[-1] - 1.0 / r_new)
    zeros = np.zeros(n_extra)
    return RadialProfile(
        np.concatenate([r, r_new]),
        np.concatenate([profile.f, zeros]),
        np.concatenate([profile.df, zeros]),
        np.concatenate([profile.w, w_new]),
        np.concatenate([profile.dw, q / r_new**2]),
    )


def shell_integral(r: np.ndarray, y: np.ndarray) -> float:
    """4 pi * integral of r^2 y dr, composite Simpson on the stored grid."""
    value = FOUR_PI * simpson(r**2 * y, x=r)
    if not np.isfinite(value):
        raise NumericError("non-finite quadrature")
    return float(value)


def cumulative_shell_integral(r: np.ndarray, y: np.ndarray) -> np.ndarray:
    return FOUR_PI * cumulative_simpson(r**2 * y, x=r, initial=0.0)


def level_crossing(x: np.ndarray, y: np.ndarray, start: int, level: float) -> float:
    """First ``x`` beyond index ``start`` where ``y`` falls to ``level``.

    The bracketing grid cell is located on the samples; the crossing inside
    it is found on a local monotone (PCHIP) interpolant.
    """
    below = np.nonzero(y[start:] <= level)[0]
    if len(below) == 0:
        raise ResolutionError("level not reached within the grid")
    k = start + int(below[0])
    if k == start:
        return float(x[k])
    lo, hi = max(start, k - 3), min(len(x), k + 3)
    interp = PchipInterpolator(x[lo:hi], y[lo:hi] - level)
    return float(brentq(interp, x[k - 1], x[k], xtol=1e-14 * max(1.0, abs(x[k]))))


def radial_residual(profile: RadialProfile) -> float:
    """Relative finite-difference residual of both radial equations.

    Second derivatives come from differencing the stored first
    derivatives; the residual is scaled by the largest term of each
    equation so it is invariant under the rescaling symmetry. The centre
    point is skipped because of the 2/r factor.
    """
    r, f, df, w, dw = profile.r, profile.f, profile.df, profile.w, profile.dw
    d2f = np.gradient(df, r, edge_order=2)
    d2w = np.gradient(dw, r, edge_order=2)
    sl = slice(1, None) if r[0] == 0.0 else slice(None)
    r, f, df, w, dw, d2f, d2w = (a[sl] for a in (r, f, df, w, dw, d2f, d2w))
    res_f = d2f + 2.0 * df / r - w * f
    res_w = d2w + 2.0 * dw / r - FOUR_PI * f**2
    scale_f = np.max(np.abs(w * f))
    scale_w = np.max(FOUR_PI * f**2)
    return float(max(np.max(np.abs(res_f)) / scale_f, np.max(np.abs(res_w)) / scale_w))
