"""Photon number and energy densities, and the energy integrals K_G.

Three independent routes to the number density n_G(tau0, tau):

* the eigenfunction series with weight 1 / (lambda_n - 3),
* the closed form in Kummer M and Tricomi U,
* quadrature of (kT)^3 chi^2 f_G over chi.
"""

from __future__ import annotations

import math

import numpy as np

from ..column import ColumnParams, EigenMode, derive
from ..constants import C_LIGHT
from ..errors import PoleError
from ..quadrature import integrate, integrate_to_infinity
from ..specfun.bilinear import accelerated_sum, converged_sum, gamma_ratio_half
from ..specfun.control import SeriesControl
from ..specfun.gamma import lngamma
from ..specfun.kummer import log_kummer_m, log_tricomi_u
from ..specfun.whittaker import log_whittaker_m, log_whittaker_w
from .series import greens_function

DENSITY_CONTROL = SeriesControl(max_terms=100_000, rel_tol=1e-9, consecutive_small=3)


def _check_tau(tau0: float, tau: float) -> None:
    if tau < 0 or tau0 < 0:
        raise ValueError("tau and tau0 must be non-negative")


def _log_density_scale(params: ColumnParams) -> float:
    """ln of 3 Ndot0 / (pi r0^2 c)."""
    return math.log(3.0 * params.ndot0 / (math.pi * params.r0**2 * C_LIGHT))


def number_density_series(params: ColumnParams, tau0: float, tau: float,
                          control: SeriesControl = DENSITY_CONTROL, *,
                          n_terms: int | None = None) -> float:
    """n_G in photons cm^-3 from the eigenfunction series.

    With ``n_terms`` the first ``n_terms`` terms are summed exactly and the
    remainder is replaced by its large-order asymptotic sum.  Otherwise
    the cutoff is doubled under ``control`` until the value settles.
    """
    _check_tau(tau0, tau)
    d = derive(params)
    x0 = 0.5 * params.alpha * d.w * tau0**2
    x = 0.5 * params.alpha * d.w * tau**2

    def weight(nu):
        nu = np.asarray(nu, dtype=float)
        return 1.0 / (gamma_ratio_half(nu) * (nu + d.a))

    if n_terms is not None:
        total = accelerated_sum(x0, x, weight, n_terms)
    else:
        total, _, _ = converged_sum(x0, x, weight, control)
    # sum n! g_n g_n / (Gamma(n + 1/2) (lambda_n - 3)) with lambda_n - 3 = 2 w (n + a).
    log_pref = (_log_density_scale(params) + 1.5 * params.alpha * tau0**2
                + 0.5 * math.log(2.0 * d.w) - 0.5 * math.log(params.alpha)
                - 0.25 * params.alpha * (3.0 + d.w) * (tau0**2 + tau**2)
                - math.log(2.0 * d.w))
    return float(math.exp(log_pref) * total)


def number_density_closed(params: ColumnParams, tau0: float, tau: float) -> float:
    """n_G in photons cm^-3 from the closed form in M(a, 1/2, .) and U(a, 1/2, .)."""
    _check_tau(tau0, tau)
    d = derive(params)
    lg, sg = lngamma(np.array([d.a]))
    if sg[0] == 0.0:
        raise PoleError("Gamma(a) has a pole")
    t_lo, t_hi = min(tau, tau0), max(tau, tau0)
    x_lo = 0.5 * params.alpha * d.w * t_lo**2
    x_hi = 0.5 * params.alpha * d.w * t_hi**2
    lm, sm = log_kummer_m(d.a, 0.5, x_lo)
    if x_hi == 0.0:
        # U(a, 1/2, 0) = Gamma(1/2) / Gamma(a + 1/2)
        lh, _ = lngamma(np.array([d.a + 0.5]))
        lu, su = 0.5 * math.log(math.pi) - lh[0], 1.0
    else:
        lu, su = log_tricomi_u(d.a, 0.5, x_hi)
    log_val = (_log_density_scale(params) + lg[0]
               - 0.5 * math.log(2.0 * math.pi * params.alpha * d.w)
               + 0.25 * params.alpha * (3.0 - d.w) * tau0**2
               - 0.25 * params.alpha * (3.0 + d.w) * tau**2 + float(lm) + float(lu))
    return float(sg[0] * sm * su * math.exp(log_val))


def density_jump(params: ColumnParams) -> float:
    """Jump of d n_G / d tau across tau = tau0, -3 Ndot0 / (pi r0^2 c)."""
    return -math.exp(_log_density_scale(params))


def _chi_moment(params: ColumnParams, tau0: float, chi0: float, tau: float, power: int,
                control: SeriesControl) -> float:
    """int_0^inf chi^power f_G dchi, split at chi0."""
    _check_tau(tau0, tau)
    if chi0 <= 0:
        raise ValueError("chi0 must be positive")
    if tau == tau0:
        raise ValueError("chi quadrature on the injection line tau = tau0 is not supported")
    # Pointwise accuracy one decade tighter than the quadrature target.
    f_ctl = SeriesControl(control.max_terms, 0.1 * control.rel_tol, control.consecutive_small)

    def f(chi: float) -> float:
        if chi <= 0.0:
            return 0.0
        v, _, _ = greens_function(params, tau0, chi0, tau, chi, f_ctl)
        return chi**power * v

    # Integrable from both sides; the integrand decays like e^{-chi}.
    lower = integrate(f, 0.0, chi0, rel_tol=control.rel_tol, abs_tol=0.0)
    upper = integrate_to_infinity(f, chi0, rel_tol=control.rel_tol,
                                  abs_tol=control.rel_tol * abs(lower) * 1e-3)
    return lower + upper


def number_density_quadrature(params: ColumnParams, tau0: float, chi0: float, tau: float,
                              control: SeriesControl = SeriesControl(200, 1e-8, 3)) -> float:
    """n_G = (kT)^3 int chi^2 f_G dchi, in photons cm^-3."""
    return params.kt**3 * _chi_moment(params, tau0, chi0, tau, 2, control)


def energy_density_quadrature(params: ColumnParams, tau0: float, chi0: float, tau: float,
                              control: SeriesControl = SeriesControl(200, 1e-8, 3)) -> float:
    """U_G = (kT)^4 int chi^3 f_G dchi, in erg cm^-3."""
    return params.kt**4 * _chi_moment(params, tau0, chi0, tau, 3, control)


def _mode_check(mode: EigenMode) -> None:
    if mode.lam <= 3.0:
        raise PoleError("K_G has a pole at lambda = 3")


def kg_closed(mode: EigenMode, kappa: float, beta: float, chi0: float) -> float:
    """chi0^kappa e^{-chi0/2} Gamma(1 + 2 mu) / (beta (lambda - 3) Gamma(mu - kappa + 1/2))."""
    _mode_check(mode)
    if chi0 <= 0 or beta <= 0:
        raise ValueError("need chi0 > 0 and beta > 0")
    lg, sg = lngamma(np.array([1.0 + 2.0 * mode.mu, mode.mu - kappa + 0.5]))
    if sg[1] == 0.0:
        raise PoleError("Gamma(mu - kappa + 1/2) has a pole")
    log_val = (kappa * math.log(chi0) - 0.5 * chi0 + lg[0] - lg[1]
               - math.log(beta * (mode.lam - 3.0)))
    return float(sg[0] * sg[1] * math.exp(log_val))


def whittaker_m_integral(kappa: float, mu: float, chi0: float) -> float:
    """int_0^chi0 chi^{kappa-2} e^{-chi/2} M_{kappa,mu}(chi) dchi in closed form."""
    lm, sm = log_whittaker_m(kappa - 1.0, mu, chi0)
    if kappa + mu - 0.5 == 0.0:
        raise PoleError("closed form has a pole at kappa + mu = 1/2")
    return float(sm * math.exp(-0.5 * chi0 + (kappa - 1.0) * math.log(chi0) + float(lm))
                 / (kappa + mu - 0.5))


def whittaker_w_integral(kappa: float, mu: float, chi0: float) -> float:
    """int_chi0^inf chi^{kappa-2} e^{-chi/2} W_{kappa,mu}(chi) dchi in closed form."""
    lw, sw = log_whittaker_w(kappa - 1.0, mu, chi0)
    return float(sw * math.exp(-0.5 * chi0 + (kappa - 1.0) * math.log(chi0) + float(lw)))


def _weighted(kappa: float, chi: float, log_f: float, sign: float) -> float:
    return float(sign * math.exp((kappa - 2.0) * math.log(chi) - 0.5 * chi + log_f))


def whittaker_m_integral_quadrature(kappa: float, mu: float, chi0: float, rel_tol: float = 1e-12) -> float:
    """The same integral as :func:`whittaker_m_integral` by adaptive quadrature."""

    def f(chi: float) -> float:
        if chi <= 0.0:
            return 0.0
        lm, sm = log_whittaker_m(kappa, mu, chi)
        return _weighted(kappa, chi, float(lm), float(sm))

    return integrate(f, 0.0, chi0, rel_tol=rel_tol, abs_tol=0.0)


def whittaker_w_integral_quadrature(kappa: float, mu: float, chi0: float, rel_tol: float = 1e-12) -> float:
    """The same integral as :func:`whittaker_w_integral` by adaptive quadrature."""

    def f(chi: float) -> float:
        lw, sw = log_whittaker_w(kappa, mu, chi)
        return _weighted(kappa, chi, float(lw), float(sw))

    return integrate_to_infinity(f, chi0, rel_tol=rel_tol, abs_tol=0.0)


def kg_quadrature(mode: EigenMode, kappa: float, chi0: float,
                  control: SeriesControl = SeriesControl(200, 1e-10, 3)) -> float:
    """W(chi0) int_0^chi0 chi^{kappa-2} e^{-chi/2} M dchi + M(chi0) int_chi0^inf ... W dchi.

    Both integrals are done by quadrature, independently of the closed form.
    """
    _mode_check(mode)
    if chi0 <= 0:
        raise ValueError("chi0 must be positive")
    mu = mode.mu
    lm, sm = log_whittaker_m(kappa, mu, chi0)
    lw, sw = log_whittaker_w(kappa, mu, chi0)
    m0 = float(sm) * math.exp(float(lm))
    w0 = float(sw) * math.exp(float(lw))
    rel = control.rel_tol
    return (w0 * whittaker_m_integral_quadrature(kappa, mu, chi0, rel)
            + m0 * whittaker_w_integral_quadrature(kappa, mu, chi0, rel))

