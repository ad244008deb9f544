"""Spatial and energy eigenfunctions and the expansion coefficients."""

from __future__ import annotations

import math

import numpy as np

from ..column import ColumnParams, DerivedParams, EigenMode
from ..constants import C_LIGHT
from ..quadrature import integrate_to_infinity
from ..specfun.control import SeriesControl
from ..specfun.gamma import lngamma
from ..specfun.laguerre import laguerre_table
from ..specfun.whittaker import log_whittaker_m, log_whittaker_w


def spatial_table(n_max: int, alpha: float, w: float, tau) -> np.ndarray:
    """g_k(tau) for k = 0..n_max, stacked along the first axis."""
    tau = np.asarray(tau, dtype=float)
    if np.any(tau < 0):
        raise ValueError("tau must be non-negative")
    x = 0.5 * alpha * w * tau**2
    return np.exp(-0.25 * alpha * (3.0 + w) * tau**2) * laguerre_table(n_max, x)


def spatial_eigenfunction(n: int, alpha: float, w: float, tau: float) -> float:
    """g_n(tau) = exp(-alpha (3 + w) tau^2 / 4) L_n^{(-1/2)}(alpha w tau^2 / 2)."""
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    return float(spatial_table(int(n), alpha, w, tau)[-1])


def orthogonality_norm(n: int, alpha: float, w: float) -> float:
    """Closed form Gamma(n + 1/2) / (n! sqrt(2 alpha w)) of the diagonal overlap."""
    g1, _ = lngamma(np.array([n + 0.5]))
    g2, _ = lngamma(np.array([n + 1.0]))
    return float(math.exp(g1[0] - g2[0]) / math.sqrt(2.0 * alpha * w))


def orthogonality_integral(n: int, m: int, alpha: float, w: float,
                           control: SeriesControl | None = None) -> float:
    """Quadrature of int_0^inf exp(3 alpha tau^2 / 2) g_n g_m dtau.

    The absolute tolerance is tied to the diagonal norm so that
    off-diagonal zeros are resolved to a meaningful level.
    """
    rel = 1e-12 if control is None else min(control.rel_tol, 1e-8)
    k = max(n, m)
    scale = math.sqrt(orthogonality_norm(n, alpha, w) * orthogonality_norm(m, alpha, w))

    def f(tau: float) -> float:
        tab = laguerre_table(k, 0.5 * alpha * w * tau * tau)
        return math.exp(-0.5 * alpha * w * tau * tau) * tab[n] * tab[m]

    return integrate_to_infinity(f, 0.0, rel_tol=rel, abs_tol=rel * scale)


def _split(chi: float, chi0: float) -> tuple[float, float]:
    if chi <= 0 or chi0 <= 0:
        raise ValueError("chi and chi0 must be positive")
    return min(chi, chi0), max(chi, chi0)


def log_energy_eigenfunction(mode: EigenMode, kappa: float, chi: float, chi0: float) -> float:
    """ln h_n(chi); h_n is positive for every admissible parameter set."""
    lo, hi = _split(chi, chi0)
    ml, _ = log_whittaker_m(kappa, mode.mu, lo)
    wl, _ = log_whittaker_w(kappa, mode.mu, hi)
    return float((kappa - 4.0) * math.log(chi) - 0.5 * chi + ml + wl)


def energy_eigenfunction(mode: EigenMode, kappa: float, chi: float, chi0: float) -> float:
    """h_n(chi) = chi^{kappa-4} e^{-chi/2} M_{kappa,mu}(chi_min) W_{kappa,mu}(chi_max)."""
    return math.exp(log_energy_eigenfunction(mode, kappa, chi, chi0))


def log_prefactor(params: ColumnParams, derived: DerivedParams, tau0: float, chi0: float) -> float:
    """ln of the n-independent factor of C_n, excluding e^{-chi0/2} pairing."""
    return (math.log(3.0 * params.ndot0 * params.beta * math.sqrt(2.0 * derived.w))
            + 0.5 * chi0 + 1.5 * params.alpha * tau0**2
            - math.log(math.pi * params.r0**2 * C_LIGHT) - 3.0 * math.log(params.kt)
            - derived.kappa * math.log(chi0) - 0.5 * math.log(params.alpha))


def expansion_coefficient(n: int, params: ColumnParams, derived: DerivedParams, mode: EigenMode,
                          tau0: float, chi0: float) -> float:
    """C_n of the energy-space expansion, assembled in log space."""
    if tau0 < 0 or chi0 <= 0:
        raise ValueError("need tau0 >= 0 and chi0 > 0")
    if mode.n != n:
        raise ValueError("mode does not match n")
    args = np.array([mode.mu - derived.kappa + 0.5, 1.0 + 2.0 * mode.mu, n + 1.0, n + 0.5])
    lg, sg = lngamma(args)
    if sg[0] == 0.0:
        raise ValueError("Gamma pole in mu - kappa + 1/2")
    g = spatial_eigenfunction(n, params.alpha, derived.w, tau0)
    if g == 0.0:
        return 0.0
    lv = log_prefactor(params, derived, tau0, chi0) + lg[0] - lg[1] + lg[2] - lg[3] + math.log(abs(g))
    return float(sg[0] * math.copysign(math.exp(lv), g))
