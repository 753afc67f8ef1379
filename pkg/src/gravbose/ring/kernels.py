"""Partial-wave expansion of the screened Coulomb kernel.

Gegenbauer's addition theorem gives, for alpha > 0,

    exp(-alpha |r - r'|) / |r - r'|
        = alpha * sum_k (2k+1) i_k(alpha r_<) k_k(alpha r_>) P_k(cos gamma)

with the modified spherical Bessel functions i_k and k_k normalized so that
k_0(x) = exp(-x)/x. For alpha -> 0 the radial factor tends to the
multipole form r_<^k / r_>^(k+1).
"""

from __future__ import annotations

import warnings

import numpy as np
from scipy.special import gammaln, ive, spherical_in, spherical_kn

from ..errors import DomainError

__all__ = [
    "bessel_i",
    "bessel_k",
    "scaled_bessel_i",
    "scaled_bessel_k",
    "gegenbauer_kernel",
    "direct_kernel",
    "TruncationWarning",
]


class TruncationWarning(RuntimeWarning):
    """The last retained partial wave is not negligible."""


def bessel_i(k: int, x):
    return spherical_in(k, x)


def bessel_k(k: int, x):
    """k_k(x) with k_0(x) = exp(-x)/x (scipy's kn times 2/pi)."""
    return spherical_kn(k, x) * (2.0 / np.pi)


def scaled_bessel_i(k: int, x) -> np.ndarray:
    """i_k(x) / x^k, finite down to x = 0 where it equals 1/(2k+1)!!.

    Power series below x = 1, exponentially scaled Bessel function above.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    small = x < 1.0
    xs = x[small]
    term = np.ones_like(xs)
    total = np.ones_like(xs)
    for j in range(1, 30):
        term = term * (0.5 * xs * xs) / (j * (2 * k + 2 * j + 1))
        total += term
    # 1/(2k+1)!! = sqrt(pi) / (2^(k+1) Gamma(k + 3/2))
    out[small] = total * np.exp(0.5 * np.log(np.pi) - (k + 1) * np.log(2.0) - gammaln(k + 1.5))
    xl = x[~small]
    with np.errstate(divide="ignore"):
        log_ive = np.log(np.sqrt(np.pi / (2 * xl)) * ive(k + 0.5, xl))
    out[~small] = np.exp(log_ive + xl - k * np.log(xl))
    return out


def scaled_bessel_k(k: int, x) -> np.ndarray:
    """k_k(x) * x^(k+1), finite down to x = 0 where it equals (2k-1)!!.

    Uses the terminating series
    k_k(x) = exp(-x)/x * sum_j (k+j)! / (j! (k-j)!) (2x)^(-j), j = 0..k,
    summed term by term in log form.
    """
    x = np.asarray(x, dtype=float)
    j = np.arange(k + 1)
    log_a = gammaln(k + j + 1) - gammaln(j + 1) - gammaln(k - j + 1) - j * np.log(2.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_x = np.log(x)[..., None]
        power = np.where(j == k, 0.0, (k - j) * log_x)
    return np.sum(np.exp(log_a + power - x[..., None]), axis=-1)


def gegenbauer_kernel(alpha: float, r: float, r_prime: float, K: int, tail_tol: float | None = None) -> np.ndarray:
    """Coefficients c_0 .. c_K of the kernel expansion in P_k(cos gamma).

    With ``tail_tol`` set, a :class:`TruncationWarning` is issued when
    |c_K| exceeds ``tail_tol * |c_0|``.
    """
    if not (r > 0 and r_prime > 0):
        raise DomainError("radii must be positive")
    if alpha < 0:
        raise DomainError("alpha must be non-negative")
    if K < 1:
        raise DomainError("need K >= 1")
    k = np.arange(K + 1)
    lo, hi = min(r, r_prime), max(r, r_prime)
    # alpha (2k+1) i_k(a lo) k_k(a hi) with the powers of alpha cancelled;
    # at alpha = 0 the scaled factors give exactly lo^k / hi^(k+1)
    si = np.array([scaled_bessel_i(j, alpha * lo) for j in k])
    sk = np.array([scaled_bessel_k(j, alpha * hi) for j in k])
    c = (2 * k + 1) * si * sk * np.exp(k * np.log(lo / hi)) / hi
    if tail_tol is not None and abs(c[-1]) > tail_tol * abs(c[0]):
        warnings.warn(f"kernel tail c_K/c_0 = {c[-1] / c[0]:.2e} exceeds {tail_tol:g}", TruncationWarning, stacklevel=2)
    return c


def direct_kernel(alpha: float, r: float, r_prime: float, gamma: float) -> float:
    """exp(-alpha d)/d evaluated directly, d = |r - r'| at opening angle ``gamma``."""
    d = np.sqrt(r * r + r_prime * r_prime - 2.0 * r * r_prime * np.cos(gamma))
    return float(np.exp(-alpha * d) / d)
