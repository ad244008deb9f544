"""Log-Gamma with sign, vectorised over numpy arrays."""

from __future__ import annotations

import math

import numpy as np

from ..errors import PoleError

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)
# Stirling coefficients B_{2k} / (2k (2k-1)).
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)
_SHIFT = 12.0


def _stirling(x: np.ndarray) -> np.ndarray:
    """ln Gamma(x) for x >= _SHIFT."""
    inv = 1.0 / x
    inv2 = inv * inv
    corr = np.zeros_like(x)
    for c in reversed(_STIRLING):
        corr = corr * inv2 + c
    return (x - 0.5) * np.log(x) - x + _HALF_LOG_2PI + corr * inv


def _lngamma_positive(x: np.ndarray) -> np.ndarray:
    """ln Gamma(x) for x >= 0.5 via upward shift then Stirling."""
    m = np.maximum(0.0, np.ceil(_SHIFT - x))
    prod = np.ones_like(x)
    for j in range(int(_SHIFT) + 1):
        prod = np.where(j < m, prod * (x + j), prod)
    return _stirling(x + m) - np.log(prod)


def sinpi(x: np.ndarray) -> np.ndarray:
    """sin(pi x) with exact argument reduction."""
    x = np.asarray(x, dtype=float)
    r = x - 2.0 * np.floor(0.5 * x)
    sign = np.where(r >= 1.0, -1.0, 1.0)
    r = np.where(r >= 1.0, r - 1.0, r)
    r = np.minimum(r, 1.0 - r)
    return sign * np.sin(math.pi * r)


def lngamma(x) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised ``(ln|Gamma(x)|, sign Gamma(x))``.

    Poles (non-positive integers) give ``(inf, 0)`` instead of raising,
    so callers can treat ``1/Gamma`` there as exactly zero.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    sign = np.ones_like(x)
    hi = x >= 0.5
    if np.any(hi):
        out[hi] = _lngamma_positive(x[hi])
    # Recurrence, not reflection, on (0, 1/2): sin(pi x) goes subnormal for tiny x.
    small = (x > 0.0) & ~hi
    if np.any(small):
        out[small] = _lngamma_positive(x[small] + 1.0) - np.log(x[small])
    lo = ~(hi | small)
    if np.any(lo):
        xl = x[lo]
        s = sinpi(xl)
        pole = (xl == np.floor(xl))
        with np.errstate(divide="ignore"):
            val = _LOG_PI - np.log(np.abs(s)) - _lngamma_positive(1.0 - xl)
        val[pole] = np.inf
        sg = np.sign(s)
        sg[pole] = 0.0
        out[lo] = val
        sign[lo] = sg
    return out, sign


def ln_gamma(x: float) -> tuple[float, int]:
    """Return ``(ln|Gamma(x)|, sign(Gamma(x)))`` for real ``x``.

    Raises :class:`PoleError` when ``x`` is zero or a negative integer.
    """
    x = float(x)
    if x <= 0.0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at x = {x}")
    v, s = lngamma(np.array([x]))
    return float(v[0]), int(s[0])


def log_rgamma(x) -> tuple[np.ndarray, np.ndarray]:
    """``(ln|1/Gamma(x)|, sign)``; sign 0 marks an exact zero at a pole."""
    v, s = lngamma(x)
    return -v, s
