"""Generalised Laguerre polynomials of parameter -1/2."""

from __future__ import annotations

import numpy as np

from .gamma import lngamma

ALPHA = -0.5


def laguerre_table(n_max: int, x) -> np.ndarray:
    """``L_k^{(-1/2)}(x)`` for k = 0..n_max, stacked along the first axis.

    Forward three-term recurrence, which is stable for this family.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + ALPHA - x
    for k in range(1, n_max):
        out[k + 1] = ((2 * k + 1 + ALPHA - x) * out[k] - (k + ALPHA) * out[k - 1]) / (k + 1)
    return out


def laguerre(n: int, x):
    """``L_n^{(-1/2)}(x)`` for integer n >= 0; x may be an array."""
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    v = laguerre_table(int(n), x)[-1]
    return float(v) if v.ndim == 0 else v


def laguerre_at_zero(nu):
    """``L_nu^{(-1/2)}(0) = Gamma(nu + 1/2) / (Gamma(1/2) Gamma(nu + 1))`` for real nu."""
    nu = np.asarray(nu, dtype=float)
    g1, _ = lngamma(nu + 0.5)
    g2, _ = lngamma(nu + 1.0)
    return np.exp(g1 - g2 - 0.5 * np.log(np.pi))
