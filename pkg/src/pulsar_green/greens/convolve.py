"""Spectra for extended sources by convolution with the Green's function.

    f(tau, chi) = int int f_G(tau0, tau, chi0, chi) / Ndot0 eps0^2 Q(z0, eps0) deps0 dz0

with eps0 = chi0 k T_e and z0 = alpha xi r0 tau0^2 / (2 sqrt(sigma_par / sigma_perp)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..column import ColumnParams
from ..errors import GridTooCoarseError
from ..specfun.control import GREENS_CONTROL, SeriesControl
from .series import greens_function

GRID_TOL = 1e-3


@dataclass(frozen=True)
class TabulatedSource:
    """Q(z0, eps0) sampled on a rectangular (tau0, chi0) grid.

    ``q[i, j]`` is the source at ``(tau0[i], chi0[j])`` in photons
    s^-1 cm^-1 erg^-3.  An axis with a single node is a delta function in
    that coordinate, and ``q`` then holds the integral over it.
    """

    tau0: tuple[float, ...]
    chi0: tuple[float, ...]
    q: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.tau0, dtype=float)
        c = np.asarray(self.chi0, dtype=float)
        q = np.asarray(self.q, dtype=float)
        if t.ndim != 1 or c.ndim != 1 or t.size == 0 or c.size == 0:
            raise ValueError("tau0 and chi0 must be non-empty 1-D sequences")
        if np.any(t < 0) or np.any(c <= 0):
            raise ValueError("need tau0 >= 0 and chi0 > 0 on the source grid")
        if np.any(np.diff(t) <= 0) or np.any(np.diff(c) <= 0):
            raise ValueError("source grid coordinates must be strictly increasing")
        if q.shape != (t.size, c.size):
            raise ValueError(f"q has shape {q.shape}, expected {(t.size, c.size)}")
        if not np.all(np.isfinite(q)):
            raise ValueError("q must be finite")


def trapezoid_weights(x) -> np.ndarray:
    """Trapezoid weights on nodes ``x``; a single node gets weight 1."""
    x = np.asarray(x, dtype=float)
    if x.size == 1:
        return np.ones(1)
    w = np.zeros_like(x)
    d = np.diff(x)
    w[:-1] += 0.5 * d
    w[1:] += 0.5 * d
    return w


def _coarse(n: int) -> np.ndarray:
    """Every other node, always keeping both ends."""
    idx = np.arange(0, n, 2)
    return idx if idx[-1] == n - 1 else np.append(idx, n - 1)


def convolve_source(params: ColumnParams, source: TabulatedSource, tau: float, chi: float,
                    control: SeriesControl = GREENS_CONTROL, *, sigma_ratio: float = 1.0,
                    tolerance: float | None = GRID_TOL) -> float:
    """f(tau, chi) in photons cm^-3 erg^-3 for a tabulated source.

    The double integral is a trapezoid sum over the source grid in the
    physical variables.  Along every axis with at least three nodes the
    sum is repeated on every other node; if the Richardson estimate
    |fine - coarse| / 3 exceeds ``tolerance`` times the result,
    :class:`GridTooCoarseError` is raised.  ``tolerance=None`` skips the
    check.
    """
    if sigma_ratio <= 0:
        raise ValueError("sigma_ratio must be positive")
    t0 = np.asarray(source.tau0, dtype=float)
    c0 = np.asarray(source.chi0, dtype=float)
    kt = params.kt
    # dz0 = alpha xi r0 tau0 dtau0 / sqrt(sigma_ratio), deps0 = kT dchi0.
    jac_t = params.alpha * params.xi * params.r0 * t0 / math.sqrt(sigma_ratio)
    if t0.size == 1:
        jac_t = np.ones(1)
    jac_c = np.full(c0.size, kt) if c0.size > 1 else np.ones(1)
    eps0 = c0 * kt
    g = np.zeros((t0.size, c0.size))
    for i, tt in enumerate(t0):
        for j, cc in enumerate(c0):
            if source.q[i, j] == 0.0:
                continue
            if tt == tau and cc == chi:
                raise ValueError("output point coincides with a source node")
            v, _, _ = greens_function(params, float(tt), float(cc), tau, chi, control)
            g[i, j] = v / params.ndot0 * eps0[j] ** 2 * source.q[i, j]
    g *= jac_t[:, None] * jac_c[None, :]

    def total(it: np.ndarray, ic: np.ndarray) -> float:
        wt = trapezoid_weights(t0[it])
        wc = trapezoid_weights(c0[ic])
        return float(wt @ g[np.ix_(it, ic)] @ wc)

    all_t, all_c = np.arange(t0.size), np.arange(c0.size)
    fine = total(all_t, all_c)
    if tolerance is not None:
        for axis, n in ((0, t0.size), (1, c0.size)):
            if n < 3:
                continue
            coarse = total(_coarse(n), all_c) if axis == 0 else total(all_t, _coarse(n))
            err = abs(fine - coarse) / 3.0
            if err > tolerance * abs(fine):
                raise GridTooCoarseError(
                    f"source grid too coarse along {'tau0' if axis == 0 else 'chi0'}: "
                    f"estimated relative error {err / abs(fine) if fine else math.inf:.2e}"
                )
    return fine
