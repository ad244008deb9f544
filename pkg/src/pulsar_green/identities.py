"""Numerical checks of the Laguerre summation identity and the Wronskians.

The summation identity, for a > 0 and x, x0 >= 0, is

    sum_n n! L_n(x0) L_n(x) / ((n + a) Gamma(n + 1/2))
        = Gamma(a) / sqrt(pi) * M(a, 1/2, x_min) U(a, 1/2, x_max),

with L_n = L_n^{(-1/2)}.  Its terms fall off only like n^{-3/2}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import sici

from .errors import PoleError, UnsupportedParameterError
from .specfun.bilinear import accelerated_sum, bilinear_partial, converged_sum, gamma_ratio_half
from .specfun.control import IDENTITY_CONTROL, SeriesControl
from .specfun.gamma import lngamma
from .specfun.kummer import _logsum, log_kummer_m, log_tricomi_u
from .specfun.whittaker import (
    log_whittaker_m,
    log_whittaker_m_prime,
    log_whittaker_w,
    log_whittaker_w_prime,
)


@dataclass(frozen=True)
class IdentityReport:
    """Both sides of an identity and their relative difference.

    ``scale`` is the largest magnitude that entered ``lhs``; it is the
    reference for identities whose right side vanishes.
    """

    lhs: float
    rhs: float
    rel_diff: float
    terms_used: int
    accelerated: bool
    scale: float = math.nan

    @property
    def abs_ratio(self) -> float:
        """|lhs - rhs| / scale, zero when both sides agree exactly."""
        diff = abs(self.lhs - self.rhs)
        return 0.0 if diff == 0.0 else diff / self.scale


def _report(lhs: float, rhs: float, terms: int, accelerated: bool, scale: float = math.nan) -> IdentityReport:
    den = max(abs(lhs), abs(rhs))
    rel = abs(lhs - rhs) / den if den > 0 else 0.0
    return IdentityReport(lhs, rhs, rel, terms, accelerated, scale)


def _check_args(x0: float, x: float, a: float, extended_domain: bool) -> None:
    if x0 < 0 or x < 0:
        raise ValueError("x and x0 must be non-negative")
    if not extended_domain and not 0.0 < a <= 0.25:
        raise UnsupportedParameterError(
            f"a = {a} is outside (0, 1/4]; pass extended_domain=True to allow it"
        )
    if a <= 0 and a == math.floor(a):
        raise PoleError(f"a = {a} hits a pole of the identity")


def identity_arguments(alpha: float, xi: float, tau0: float, tau: float) -> tuple[float, float, float]:
    """(x0, x, a) for optical depths: x = alpha w tau^2 / 2, a = (w - 3) / (4 w)."""
    if alpha <= 0 or xi <= 0:
        raise ValueError("alpha and xi must be positive")
    w = math.sqrt(9.0 + 12.0 * xi * xi)
    return 0.5 * alpha * w * tau0**2, 0.5 * alpha * w * tau**2, (w - 3.0) / (4.0 * w)


def _weight(a: float):
    def weight(nu):
        return 1.0 / (gamma_ratio_half(np.asarray(nu, dtype=float)) * (nu + a))

    return weight


def leading_tail(x0: float, x: float, n_start: int) -> float:
    """Leading-order estimate of the terms from ``n_start`` on.

    For large n a term averages to e^{(x+x0)/2} cos(2 d sqrt(n)) / (2 pi n^{3/2})
    with d = |sqrt(x) - sqrt(x0)|; this integrates in closed form from
    n_start - 1/2.  At x = x0 it reduces to e^x / (pi sqrt(n_start - 1/2)).
    """
    u0 = math.sqrt(n_start - 0.5)
    k = 2.0 * abs(math.sqrt(x) - math.sqrt(x0))
    pref = math.exp(0.5 * (x + x0)) / math.pi
    if k == 0.0:
        return pref / u0
    si, _ = sici(k * u0)
    return pref * (math.cos(k * u0) / u0 - k * (0.5 * math.pi - float(si)))


def laguerre_identity_lhs(x0: float, x: float, a: float, control: SeriesControl = IDENTITY_CONTROL,
                          *, accelerate: bool = True, n_terms: int | None = None,
                          tail_correction: bool = True,
                          extended_domain: bool = False) -> tuple[float, int]:
    """Left side of the identity, with the number of exact terms used.

    ``accelerate``: exact terms plus the large-order asymptotic tail,
    either at cutoff ``n_terms`` or at doubling cutoffs under ``control``.
    Otherwise plain partial sums, to ``n_terms`` or by the term-wise rule
    of ``control``, plus :func:`leading_tail` when ``tail_correction``.
    """
    _check_args(x0, x, a, extended_domain)
    weight = _weight(a)
    if accelerate:
        if n_terms is not None:
            return accelerated_sum(x0, x, weight, n_terms), n_terms
        v, n, _ = converged_sum(x0, x, weight, control)
        return v, n
    if n_terms is None:
        v, n, _ = converged_sum(x0, x, weight, control, accelerate=False)
    else:
        n = n_terms
        v = float(np.sum(bilinear_partial(x0, x, weight, n)))
    if tail_correction:
        v += leading_tail(x0, x, n)
    return v, n


def laguerre_identity_rhs(x0: float, x: float, a: float, *, extended_domain: bool = False) -> float:
    """Gamma(a) / sqrt(pi) * M(a, 1/2, x_min) U(a, 1/2, x_max)."""
    _check_args(x0, x, a, extended_domain)
    lo, hi = min(x0, x), max(x0, x)
    lg, sg = lngamma(np.array([a, a + 0.5]))
    lm, sm = log_kummer_m(a, 0.5, lo)
    if hi == 0.0:
        # U(a, 1/2, 0) = Gamma(1/2) / Gamma(a + 1/2)
        if sg[1] == 0.0:
            return 0.0
        lu, su = 0.5 * math.log(math.pi) - lg[1], sg[1]
    else:
        lu, su = log_tricomi_u(a, 0.5, hi)
    return float(sg[0] * sm * su * math.exp(lg[0] - 0.5 * math.log(math.pi) + float(lm) + float(lu)))


def check_identity(x0: float, x: float, a: float, control: SeriesControl = IDENTITY_CONTROL, *,
                   accelerate: bool = True, n_terms: int | None = None,
                   extended_domain: bool = False) -> IdentityReport:
    """Both sides of the summation identity and their agreement."""
    lhs, n = laguerre_identity_lhs(x0, x, a, control, accelerate=accelerate, n_terms=n_terms,
                                   extended_domain=extended_domain)
    rhs = laguerre_identity_rhs(x0, x, a, extended_domain=extended_domain)
    return _report(lhs, rhs, n, accelerate)


def whittaker_wronskian(kappa: float, mu: float, x: float) -> tuple[float, float]:
    """M W' - W M' at x, with the larger of the two products as scale."""
    lm, sm = log_whittaker_m(kappa, mu, x)
    lw, sw = log_whittaker_w(kappa, mu, x)
    lmp, smp = log_whittaker_m_prime(kappa, mu, x)
    lwp, swp = log_whittaker_w_prime(kappa, mu, x)
    l1, s1 = lm + lwp, sm * swp
    l2, s2 = lw + lmp, -sw * smp
    lv, sv, _ = _logsum(l1, s1, l2, s2)
    return float(sv * np.exp(lv)), float(np.exp(np.maximum(l1, l2)))


def whittaker_wronskian_closed(kappa: float, mu: float) -> float:
    """-Gamma(1 + 2 mu) / Gamma(mu - kappa + 1/2)."""
    lg, sg = lngamma(np.array([1.0 + 2.0 * mu, mu - kappa + 0.5]))
    if sg[1] == 0.0:
        return 0.0
    return float(-sg[0] * sg[1] * math.exp(lg[0] - lg[1]))


def check_whittaker_wronskian(kappa: float, mu: float, x_list) -> IdentityReport:
    """Worst agreement over ``x_list`` of M W' - W M' with its closed form."""
    xs = [float(v) for v in x_list]
    if not xs or any(v <= 0 for v in xs):
        raise ValueError("x_list must be non-empty and positive")
    rhs = whittaker_wronskian_closed(kappa, mu)
    worst = None
    for v in xs:
        lhs, scale = whittaker_wronskian(kappa, mu, v)
        rep = _report(lhs, rhs, 0, False, scale)
        err = rep.abs_ratio if rhs == 0.0 else rep.rel_diff
        if worst is None or err > worst[0]:
            worst = (err, rep)
    return worst[1]


def spatial_wronskian(rho: float, alpha: float, w: float, tau: float) -> tuple[float, float]:
    """omega(tau) = M dU/dtau - U dM/dtau for M, U at (rho, 1/2, alpha w tau^2 / 2).

    Uses dM/dy = 2 rho M(rho + 1, 3/2, y) and dU/dy = -rho U(rho + 1, 3/2, y).
    Returns the value and the larger of the two products as scale.
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    y = 0.5 * alpha * w * tau * tau
    if rho == 0.0:
        return 0.0, 0.0
    dy = alpha * w * tau
    lm, sm = log_kummer_m(rho, 0.5, y)
    lu, su = log_tricomi_u(rho, 0.5, y)
    lm1, sm1 = log_kummer_m(rho + 1.0, 1.5, y)
    lu1, su1 = log_tricomi_u(rho + 1.0, 1.5, y)
    lr = math.log(abs(rho)) + math.log(dy)
    sr = math.copysign(1.0, rho)
    l1, s1 = lr + lm + lu1, -sr * sm * su1
    l2, s2 = lr + math.log(2.0) + lu + lm1, -sr * su * sm1
    lv, sv, _ = _logsum(l1, s1, l2, s2)
    return float(sv * np.exp(lv)), float(np.exp(max(float(l1), float(l2))))


def spatial_wronskian_closed(rho: float, alpha: float, w: float, tau: float) -> float:
    """-Gamma(1/2) sqrt(2 alpha w) exp(alpha w tau^2 / 2) / Gamma(rho)."""
    lg, sg = lngamma(np.array([rho]))
    if sg[0] == 0.0:
        return 0.0
    return float(-sg[0] * math.exp(0.5 * math.log(math.pi) + 0.5 * math.log(2.0 * alpha * w)
                                   + 0.5 * alpha * w * tau * tau - lg[0]))


def check_spatial_wronskian(rho: float, alpha: float, w: float, tau: float) -> IdentityReport:
    """omega(tau) against its closed form; at rho = -n both sides vanish."""
    lhs, scale = spatial_wronskian(rho, alpha, w, tau)
    return _report(lhs, spatial_wronskian_closed(rho, alpha, w, tau), 0, False, scale)
