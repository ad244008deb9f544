"""Finite-difference residuals of the transport equation and its separated parts.

The full equation, away from the source, reads

    (alpha / (3 beta)) [beta chi f_chi - 4 chi (f + f_chi) - chi^2 (f_chi + f_chichi)]
        = f_tautau / 3 + alpha tau f_tau - xi^2 alpha^2 tau^2 f.

Each residual is LHS - RHS divided by the largest single term.
"""

from __future__ import annotations

import math

import numpy as np

from ..column import ColumnParams, EigenMode, derive
from ..errors import StencilError
from ..specfun.control import GREENS_CONTROL, SeriesControl
from ..specfun.laguerre import laguerre_table
from .eigen import log_energy_eigenfunction
from .series import _Kernel, greens_function

STEP = 1e-3
EXCLUSION = 10.0
_MIN_TERMS = 10

# Central weights for the first and second derivative on five points.
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def _normalised(lhs_terms, rhs_terms) -> float:
    scale = max(abs(t) for t in (*lhs_terms, *rhs_terms))
    if scale == 0.0:
        return 0.0
    return abs(sum(lhs_terms) - sum(rhs_terms)) / scale


def transport_residual(params: ColumnParams, tau0: float, chi0: float, tau: float, chi: float,
                       control: SeriesControl = GREENS_CONTROL, step: float = STEP) -> float:
    """Normalised residual of the transport equation at (tau, chi).

    Uses second-order central differences of the series truncated at the
    number of terms the plain stopping rule needs at (tau, chi).  Every
    term solves the homogeneous equation, so the truncation does not bias
    the check.  Because each partial sum has a derivative kink along
    chi = chi0, the chi stencil must stay ``EXCLUSION * step`` away from it.
    """
    if tau < 0 or tau0 < 0:
        raise ValueError("tau and tau0 must be non-negative")
    if chi - EXCLUSION * step <= 0:
        raise StencilError("chi stencil reaches chi <= 0")
    if abs(chi - chi0) < EXCLUSION * step:
        raise StencilError(f"chi = {chi} is within {EXCLUSION * step} of chi0 = {chi0}")
    _, used, _ = greens_function(params, tau0, chi0, tau, chi, control)
    n = max(used, _MIN_TERMS)

    def f(t: float, c: float) -> float:
        k = _Kernel(params, tau0, chi0, abs(t), c)
        # One shared scale for every stencil point.
        return float(math.exp(k.log_scale - base) * np.sum(k.terms(0, n)))

    base = _Kernel(params, tau0, chi0, tau, chi).log_scale
    f0 = f(tau, chi)
    fcp, fcm = f(tau, chi + step), f(tau, chi - step)
    ftp, ftm = f(tau + step, chi), f(tau - step, chi)
    f_c = (fcp - fcm) / (2.0 * step)
    f_cc = (fcp - 2.0 * f0 + fcm) / step**2
    f_t = (ftp - ftm) / (2.0 * step)
    f_tt = (ftp - 2.0 * f0 + ftm) / step**2
    a, b, xi = params.alpha, params.beta, params.xi
    g = a / (3.0 * b)
    lhs = [g * b * chi * f_c, -g * 4.0 * chi * f0, -g * 4.0 * chi * f_c,
           -g * chi**2 * f_c, -g * chi**2 * f_cc]
    rhs = [f_tt / 3.0, a * tau * f_t, -(xi * a * tau) ** 2 * f0]
    return _normalised(lhs, rhs)


def _stencil(x: float, step: float) -> np.ndarray:
    return x + step * np.arange(-2.0, 3.0)


def spatial_residual(n: int, params: ColumnParams, tau: float, step: float = STEP) -> float:
    """Normalised residual of g'' / 3 + alpha tau g' + (alpha lambda_n / 3 - xi^2 alpha^2 tau^2) g.

    Fourth-order stencil; g_n is even in tau so the stencil may cross 0.
    """
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    if tau < 0:
        raise ValueError("tau must be non-negative")
    d = derive(params)
    a, xi = params.alpha, params.xi
    lam = 0.5 * (4.0 * n * d.w + d.w + 3.0)
    t = _stencil(tau, step)
    vals = np.exp(-0.25 * a * (3.0 + d.w) * t**2) * laguerre_table(int(n), 0.5 * a * d.w * t**2)[-1]
    g0 = vals[2]
    g1 = float(_D1 @ vals) / step
    g2 = float(_D2 @ vals) / step**2
    terms = [g2 / 3.0, a * tau * g1, a * lam / 3.0 * g0, -(xi * a * tau) ** 2 * g0]
    return _normalised(terms, [])


def energy_residual(mode: EigenMode, kappa: float, beta: float, chi: float, chi0: float,
                    rel_step: float = STEP) -> float:
    """Normalised residual of chi^-2 d/dchi[chi^4 (h + h')] - beta chi h' - beta lambda h.

    Fourth-order stencil of width ``rel_step * chi`` on one side of chi0;
    h is scaled by h(chi) first.
    """
    step = rel_step * chi
    if abs(chi - chi0) < EXCLUSION * step:
        raise StencilError(f"chi = {chi} is within {EXCLUSION * step} of chi0 = {chi0}")
    c = _stencil(chi, step)
    logs = np.array([log_energy_eigenfunction(mode, kappa, float(v), chi0) for v in c])
    vals = np.exp(logs - logs[2])
    h0 = vals[2]
    h1 = float(_D1 @ vals) / step
    h2 = float(_D2 @ vals) / step**2
    terms = [4.0 * chi * h0, 4.0 * chi * h1, chi**2 * h1, chi**2 * h2,
             -beta * chi * h1, -beta * mode.lam * h0]
    return _normalised(terms, [])
