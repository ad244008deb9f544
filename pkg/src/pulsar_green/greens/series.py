"""The Green's function f_G(tau0, tau, chi0, chi) as an eigenfunction series.

Each term is

    P * [n! / Gamma(n + 1/2)] g_n(tau0) g_n(tau) H_n,
    H_n = Gamma(mu_n - kappa + 1/2) / Gamma(1 + 2 mu_n)
          * M_{kappa,mu_n}(chi_min) W_{kappa,mu_n}(chi_max),

with P collecting the n-independent factors.  H_n is evaluated in log
space with the Gamma ratio folded into W, so the large Gamma functions
cancel analytically.  Away from chi0 the terms fall off like
(chi_min / chi_max)^{mu_n} and the plain sum converges quickly.  Close to
chi0 it does not, and the remaining terms are summed with the large-order
Laguerre asymptotics of :mod:`pulsar_green.specfun.bilinear`.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..column import ColumnParams, derive, eigenvalue, mu_of_lambda
from ..constants import C_LIGHT
from ..errors import NonConvergenceError
from ..specfun.bilinear import bilinear_tail, gamma_ratio_half
from ..specfun.control import GREENS_CONTROL, SeriesControl
from ..specfun.laguerre import laguerre_table
from ..specfun.whittaker import log_whittaker_m, log_whittaker_w

THREADS_ENV = "PULSAR_GREEN_THREADS"
_BLOCK = 64


@dataclass(frozen=True)
class SpectrumGrid:
    """f_G sampled on a (tau, chi) grid; ``values[i, j]`` is at (tau_i, chi_j)."""

    tau0: float
    chi0: float
    tau_samples: tuple[float, ...]
    chi_samples: tuple[float, ...]
    values: np.ndarray
    terms_used: int
    est_rel_err: float


class _Kernel:
    """Per-point constants of the series, with weights normalised by H_0."""

    def __init__(self, params: ColumnParams, tau0: float, chi0: float, tau: float, chi: float):
        if tau < 0 or tau0 < 0:
            raise ValueError("tau and tau0 must be non-negative")
        if chi <= 0 or chi0 <= 0:
            raise ValueError("chi and chi0 must be positive")
        d = derive(params)
        self.kappa = d.kappa
        self.w = d.w
        self.beta = params.beta
        self.x0 = 0.5 * params.alpha * d.w * tau0**2
        self.x = 0.5 * params.alpha * d.w * tau**2
        self.lo, self.hi = min(chi, chi0), max(chi, chi0)
        self.log_h0 = float(self._log_h(np.array([0.0]))[0])
        self.log_scale = (
            math.log(3.0 * params.ndot0 * params.beta * math.sqrt(2.0 * d.w))
            + 1.5 * params.alpha * tau0**2
            + (d.kappa - 4.0) * math.log(chi) + 0.5 * (chi0 - chi)
            - math.log(math.pi * params.r0**2 * C_LIGHT) - 3.0 * math.log(params.kt)
            - d.kappa * math.log(chi0) - 0.5 * math.log(params.alpha)
            - 0.25 * params.alpha * (3.0 + d.w) * (tau0**2 + tau**2)
            + self.log_h0
        )

    def _log_h(self, nu: np.ndarray) -> np.ndarray:
        mu = mu_of_lambda(self.beta, eigenvalue(self.w, nu))
        ml, _ = log_whittaker_m(self.kappa, mu, self.lo)
        wl, _ = log_whittaker_w(self.kappa, mu, self.hi, scaled=True)
        return ml + wl

    def weight(self, nu) -> np.ndarray:
        """n! / Gamma(n + 1/2) * H_n / H_0 for real n."""
        nu = np.asarray(nu, dtype=float)
        return np.exp(self._log_h(nu) - self.log_h0) / gamma_ratio_half(nu)

    def terms(self, start: int, stop: int) -> np.ndarray:
        """Normalised terms for start <= n < stop."""
        lag = laguerre_table(stop - 1, np.array([self.x0, self.x]))[start:]
        return self.weight(np.arange(start, stop, dtype=float)) * lag[:, 0] * lag[:, 1]

    def tail(self, n_start: int) -> float:
        return bilinear_tail(self.x0, self.x, self.weight, n_start)


def greens_partial_sum(params: ColumnParams, tau0: float, chi0: float, tau: float, chi: float,
                       n_terms: int) -> float:
    """The first ``n_terms`` terms of the series, with no tail and no stopping rule."""
    if n_terms < 1:
        raise ValueError("n_terms must be positive")
    k = _Kernel(params, tau0, chi0, tau, chi)
    return float(math.exp(k.log_scale) * np.sum(k.terms(0, n_terms)))


def greens_function(params: ColumnParams, tau0: float, chi0: float, tau: float, chi: float,
                    control: SeriesControl = GREENS_CONTROL, *,
                    accelerate: bool = True) -> tuple[float, int, float]:
    """f_G in photons cm^-3 erg^-3, with ``(value, terms_used, est_rel_err)``.

    Terms are added until ``control.consecutive_small`` successive terms
    are each below ``control.rel_tol`` times the running sum; the error
    estimate is then the last retained term relative to the total.
    If ``max_terms`` is reached first and ``accelerate`` is set, the
    asymptotic tail is added at cutoffs N/2 and N and their disagreement
    is the error estimate.  The series diverges only at the injection
    point itself, (tau, chi) = (tau0, chi0).
    """
    if tau == tau0 and chi == chi0:
        raise ValueError("f_G is singular at the injection point")
    k = _Kernel(params, tau0, chi0, tau, chi)
    n_max = control.max_terms
    parts: list[np.ndarray] = []
    total = 0.0
    run = 0
    scale = 0.0
    for start in range(0, n_max, _BLOCK):
        block = k.terms(start, min(start + _BLOCK, n_max))
        parts.append(block)
        for i, t in enumerate(block):
            total += t
            scale += abs(t)
            run = run + 1 if abs(t) <= control.rel_tol * abs(total) else 0
            if run >= control.consecutive_small:
                est = float(abs(t / total)) if total else 0.0
                return _finish(k, total, scale, start + i + 1, est)
    if not accelerate:
        raise NonConvergenceError(f"f_G series not converged within {n_max} terms")
    flat = np.concatenate(parts)
    n_lo = max(n_max // 2, 16)
    hi = float(np.sum(flat)) + k.tail(n_max)
    lo = float(np.sum(flat[:n_lo])) + k.tail(n_lo)
    est = float(abs(hi - lo) / abs(hi)) if hi else 0.0
    if est > control.rel_tol:
        raise NonConvergenceError(
            f"f_G series not converged: estimated relative error {est:.2e} after {n_max} terms"
        )
    return _finish(k, hi, scale, n_max, est)


def _finish(k: _Kernel, total: float, scale: float, used: int, est: float):
    if total < -1e-12 * scale:
        raise NonConvergenceError("f_G partial sum is negative; truncation failed")
    return float(math.exp(k.log_scale) * max(total, 0.0)), used, est


def thread_count() -> int:
    """Worker threads for grid sweeps, from the environment (default 1)."""
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError as exc:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from exc
    return max(1, n)


def spectrum(params: ColumnParams, tau0: float, chi0: float, taus, chis,
             control: SeriesControl = GREENS_CONTROL) -> SpectrumGrid:
    """Evaluate f_G on every (tau, chi) pair; results are order-independent of threading."""
    taus = tuple(float(t) for t in taus)
    chis = tuple(float(c) for c in chis)
    pts = [(t, c) for t in taus for c in chis]

    def one(p):
        return greens_function(params, tau0, chi0, p[0], p[1], control)

    n = thread_count()
    if n > 1:
        with ThreadPoolExecutor(max_workers=n) as ex:
            res = list(ex.map(one, pts))
    else:
        res = [one(p) for p in pts]
    vals = np.array([r[0] for r in res]).reshape(len(taus), len(chis))
    return SpectrumGrid(
        tau0=tau0, chi0=chi0, tau_samples=taus, chi_samples=chis, values=vals,
        terms_used=max((r[1] for r in res), default=0),
        est_rel_err=max((r[2] for r in res), default=0.0),
    )
