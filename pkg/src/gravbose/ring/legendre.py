"""Legendre polynomials and orthonormal associated Legendre functions."""

from __future__ import annotations

import numpy as np

from ..errors import DomainError

__all__ = ["legendre_eval", "legendre_table", "assoc_legendre_table", "gauss_legendre"]


def _check_argument(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0):
        raise DomainError("Legendre argument must lie in [-1, 1]")
    return x


def legendre_eval(k: int, x):
    """P_k(x) by the upward three-term recurrence."""
    if k < 0:
        raise DomainError("degree must be non-negative")
    x = _check_argument(x)
    p_prev, p = np.ones_like(x), x.copy()
    if k == 0:
        return p_prev
    for j in range(1, k):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
    return p


def legendre_table(k_max: int, x) -> np.ndarray:
    """Rows P_0 .. P_{k_max} evaluated at ``x``."""
    x = _check_argument(x)
    out = np.empty((k_max + 1,) + x.shape)
    out[0] = 1.0
    if k_max >= 1:
        out[1] = x
    for j in range(1, k_max):
        out[j + 1] = ((2 * j + 1) * x * out[j] - j * out[j - 1]) / (j + 1)
    return out


def assoc_legendre_table(k_max: int, m: int, x, sin_theta=None) -> np.ndarray:
    """Orthonormal associated Legendre functions of order ``m``.

    Row ``k`` holds N_k^m P_k^m(x) normalized so that the integral over
    [-1, 1] of the square is one; rows with k < m are zero. No
    Condon-Shortley phase. Every row carries the factor (1 - x^2)^(m/2);
    pass ``sin_theta`` to supply it directly, which keeps full relative
    precision next to the poles.
    """
    if m < 0 or k_max < m:
        raise DomainError("need 0 <= m <= k_max")
    x = _check_argument(x)
    out = np.zeros((k_max + 1,) + x.shape)
    if sin_theta is None:
        s = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    else:
        s = np.abs(np.asarray(sin_theta, dtype=float))
    p = np.full(x.shape, np.sqrt(0.5))
    for i in range(1, m + 1):
        p = p * np.sqrt((2 * i + 1) / (2 * i)) * s
    out[m] = p
    if m + 1 <= k_max:
        out[m + 1] = x * np.sqrt(2 * m + 3) * p
    for k in range(m + 2, k_max + 1):
        a = np.sqrt((4 * k * k - 1) / (k * k - m * m))
        b = np.sqrt(((k - 1) ** 2 - m * m) / (4 * (k - 1) ** 2 - 1))
        out[k] = a * (x * out[k - 1] - b * out[k - 2])
    return out


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)
