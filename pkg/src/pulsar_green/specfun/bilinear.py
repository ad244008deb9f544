"""Bilinear Laguerre sums  sum_n c(n) L_n(x0) L_n(x)  with an asymptotic tail.

Plain partial sums of these series converge like n^{-1/2} and oscillate,
so sequence transforms gain little.  Instead the terms beyond a cutoff are
replaced by a uniform large-n approximation of L_n^{(-1/2)} and summed as
explicit terms followed by an Euler-Maclaurin integral.

With E = 4 nu + 1, y = sqrt(x) and Q = E - y^2 the approximation is the
fourth-order Liouville-Green (WKB) solution of the Hermite-function
equation, normalised at x = 0:

    L_nu(x) ~ L_nu(0) e^{x/2} sqrt(p(E, 0) / p(Q, y^2)) cos(theta),
    p = sqrt(Q) + Q^{-3/2} / 4 + (5/8) y^2 Q^{-5/2}
        - (1105/128) E^2 Q^{-11/2} + (663/64) E Q^{-9/2} - (297/128) Q^{-7/2},
    theta = int_0^y p(E - t^2, t^2) dt,

evaluated in closed form through T = y / sqrt(Q).  Its relative error
is near rounding level by n = 100 for x <= 10.
The weight ``c`` must be supplied as a vectorised function of real nu.
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np

from ..errors import NonConvergenceError
from .control import SeriesControl
from .gamma import lngamma
from .laguerre import laguerre_table

Weight = Callable[[np.ndarray], np.ndarray]

_GX, _GW = np.polynomial.legendre.leggauss(32)
_EXPLICIT = 400
_MIN_CUTOFF = 64


def gamma_ratio_half(nu) -> np.ndarray:
    """Gamma(nu + 1/2) / Gamma(nu + 1) for real nu > -1/2."""
    nu = np.asarray(nu, dtype=float)
    t = nu + 0.25
    with np.errstate(divide="ignore", invalid="ignore"):
        out = t**-0.5 * (1 - 1 / (64 * t**2) + 21 / (8192 * t**4) - 671 / (524288 * t**6))
    low = nu <= 40.0
    if np.any(low):
        g1, _ = lngamma(nu[low] + 0.5)
        g2, _ = lngamma(nu[low] + 1.0)
        out[low] = np.exp(g1 - g2)
    return out


def _asin_minus(z: np.ndarray) -> np.ndarray:
    """arcsin(z) - z without cancellation for small z."""
    z2 = z * z
    ser = z * z2 * (1 / 6 + z2 * (3 / 40 + z2 * (15 / 336 + z2 * (105 / 3456 + z2 * (
        945 / 42240 + z2 * (10395 / 599040))))))
    return np.where(z < 0.05, ser, np.arcsin(np.minimum(z, 1.0)) - z)


def _psi(s: np.ndarray, y: float) -> np.ndarray:
    """theta(s^2, y) - y s, the slowly varying part of the phase."""
    e = s * s
    q = e - y * y
    rq = np.sqrt(q)
    t = y / rq
    t2 = t * t
    fourth = t * (19 / 32 + t2 * (259 / 96 + t2 * (2949 / 640 + t2 * (221 / 64 + t2 * (1105 / 1152)))))
    return (-0.5 * y**3 / (rq + s) + 0.5 * e * _asin_minus(y / s)
            + t * (0.25 + 5 / 24 * t2) / e - fourth / e**3)


def _p(q, y2):
    """Effective WKB momentum through fourth order."""
    e = q + y2
    return (np.sqrt(q) + 0.25 * q**-1.5 + 0.625 * y2 * q**-2.5
            + (-1105 / 128 * e * e / q**2 + 663 / 64 * e / q - 297 / 128) * q**-3.5)


def _amp(e: np.ndarray, y: float) -> np.ndarray:
    return np.sqrt(_p(e, 0.0) / _p(e - y * y, y * y))


def laguerre_asymptotic(nu, x: float) -> np.ndarray:
    """Large-order approximation of L_nu^{(-1/2)}(x) for real nu with 4 nu + 1 >> x."""
    nu = np.asarray(nu, dtype=float)
    e = 4.0 * nu + 1.0
    s = np.sqrt(e)
    y = math.sqrt(x)
    l0 = gamma_ratio_half(nu) / math.sqrt(math.pi)
    return l0 * math.exp(0.5 * x) * _amp(e, y) * np.cos(y * s + _psi(s, y))


def _panel_nodes(edges) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on consecutive panels."""
    edges = np.asarray(edges, dtype=float)
    mid = 0.5 * (edges[1:] + edges[:-1])[:, None]
    half = 0.5 * (edges[1:] - edges[:-1])[:, None]
    return (mid + half * _GX).ravel(), (half * _GW).ravel()


def _osc_integral(g, phase, omega: float, s0: float) -> float:
    """int_{s0}^inf g(s) cos(omega s + phase(s)) ds for smooth decaying g.

    ``g`` is evaluated once per geometric panel.
    """
    if omega == 0.0:
        # u = s0 / s maps the range onto (0, 1]; geometric panels toward 0.
        total = 0.0
        scale = 0.0
        for k in range(41):
            u, wt = _panel_nodes([2.0**-(k + 1), 2.0**-k] if k < 40 else [0.0, 2.0**-k])
            s = s0 / u
            fv = g(s) * s0 / (u * u)
            total += float(np.sum(wt * fv * np.cos(phase(s))))
            scale = max(scale, float(np.max(np.abs(fv))) * 2.0**-k)
            if abs(fv[0]) * 2.0**-k <= 1e-17 * scale:
                break
        return total
    stop = max(2.0 * s0, 400.0 / omega)
    total = 0.0
    scale = 0.0
    lo = s0
    while lo < stop:
        hi = min(2.0 * lo, stop)
        # At most four oscillations per Gauss-Legendre panel.
        nsub = int(math.ceil(omega * (hi - lo) / (8.0 * math.pi))) + 1
        s, wt = _panel_nodes(np.linspace(lo, hi, nsub + 1))
        gv = g(s)
        total += float(np.sum(wt * gv * np.cos(omega * s + phase(s))))
        scale = max(scale, float(np.max(np.abs(gv))) * (hi - lo))
        # Stop once the integrand has decayed to rounding level.
        if abs(gv[-1]) * hi <= 1e-17 * scale:
            return total
        lo = hi
    h = stop * 1e-2
    ends = stop + h * np.arange(-2.0, 3.0)
    # Remaining range by four rounds of integration by parts, A = g e^{i phase}.
    a = g(ends) * np.exp(1j * phase(ends))
    a1 = (a[0] - 8 * a[1] + 8 * a[3] - a[4]) / (12 * h)
    a2 = (-a[0] + 16 * a[1] - 30 * a[2] + 16 * a[3] - a[4]) / (12 * h * h)
    a3 = (-a[0] + 2 * a[1] - 2 * a[3] + a[4]) / (2 * h**3)
    io = 1j * omega
    rest = np.exp(io * stop) * (-a[2] / io + a1 / io**2 - a2 / io**3 + a3 / io**4)
    return total + float(rest.real)


def bilinear_tail(x0: float, x: float, weight: Weight, n_start: int,
                  explicit: int = _EXPLICIT) -> float:
    """Approximate sum_{n >= n_start} weight(n) L_n(x0) L_n(x).

    The first ``explicit`` terms use the asymptotic Laguerre form directly;
    the rest are an Euler-Maclaurin integral (midpoint rule with two
    derivative corrections) taken in the variable s = sqrt(4 nu + 1).
    """
    y_lo, y_hi = sorted((math.sqrt(x0), math.sqrt(x)))
    shift = math.exp(0.5 * (x + x0)) / math.pi

    def term(nu):
        nu = np.asarray(nu, dtype=float)
        e = 4.0 * nu + 1.0
        s = np.sqrt(e)
        r = gamma_ratio_half(nu)
        return (weight(nu) * r * r * shift * _amp(e, y_lo) * _amp(e, y_hi)
                * np.cos(y_lo * s + _psi(s, y_lo)) * np.cos(y_hi * s + _psi(s, y_hi)))

    def g(s):
        nu = (s * s - 1.0) / 4.0
        r = gamma_ratio_half(nu)
        return weight(nu) * r * r * shift * _amp(s * s, y_lo) * _amp(s * s, y_hi) * 0.25 * s

    n2 = n_start + explicit
    c = n2 - 0.5
    f = term(np.concatenate([np.arange(n_start, n2, dtype=float), [c - 1.0, c - 0.5, c + 0.5, c + 1.0]]))
    total = float(np.sum(f[:-4]))
    s0 = math.sqrt(4.0 * (n2 - 0.5) + 1.0)
    total += _osc_integral(g, lambda s: _psi(s, y_hi) - _psi(s, y_lo), y_hi - y_lo, s0)
    total += _osc_integral(g, lambda s: _psi(s, y_hi) + _psi(s, y_lo), y_hi + y_lo, s0)
    f = f[-4:]
    d1 = f[2] - f[1]
    d3 = (f[3] - 2 * f[2] + 2 * f[1] - f[0]) / 0.25
    # d1 = f' + f'''/24 + ..., so f'/24 - 7 f'''/5760 = d1/24 - 17 d3/5760.
    return total + d1 / 24.0 - 17.0 * d3 / 5760.0


def bilinear_partial(x0: float, x: float, weight: Weight, n_terms: int) -> np.ndarray:
    """The terms weight(n) L_n(x0) L_n(x) for n < n_terms."""
    lag = laguerre_table(n_terms - 1, np.array([x0, x]))
    n = np.arange(n_terms, dtype=float)
    return weight(n) * lag[:, 0] * lag[:, 1]


def min_cutoff(x0: float, x: float) -> int:
    """Smallest cutoff at which the asymptotic Laguerre form is trusted."""
    return max(_MIN_CUTOFF, int(math.ceil(2.0 * max(x0, x))))


def accelerated_sum(x0: float, x: float, weight: Weight, n_terms: int,
                    explicit: int = _EXPLICIT) -> float:
    """``n_terms`` exact terms plus the asymptotic tail from there on."""
    n_terms = max(n_terms, min_cutoff(x0, x))
    return float(np.sum(bilinear_partial(x0, x, weight, n_terms))) + bilinear_tail(
        x0, x, weight, n_terms, explicit)


def converged_sum(x0: float, x: float, weight: Weight, control: SeriesControl,
                  accelerate: bool = True) -> tuple[float, int, float]:
    """Sum the bilinear series under ``control``.

    Returns ``(value, terms_used, estimated relative error)``.

    Accelerated: estimates at doubling cutoffs, stopping once the last
    ``consecutive_small`` changes are all within ``rel_tol`` of the latest
    estimate.  Plain: the term-wise stopping rule of ``control``, where
    ``consecutive_small`` successive terms must be below ``rel_tol`` times
    the running sum.
    """
    if accelerate:
        n = min_cutoff(x0, x)
        if n > control.max_terms:
            raise NonConvergenceError(f"cutoff {n} exceeds max_terms={control.max_terms}")
        k = control.consecutive_small
        built = 0
        history: list[float] = []
        while n <= control.max_terms:
            if n > built:
                built = min(control.max_terms, max(n, n * 2 ** (k + 1 - len(history))))
                csum = np.cumsum(bilinear_partial(x0, x, weight, built))
            history.append(float(csum[n - 1]) + bilinear_tail(x0, x, weight, n))
            if len(history) > k:
                ref = history[-1]
                if all(abs(h - ref) <= control.rel_tol * abs(ref) for h in history[-k - 1:-1]):
                    return ref, n, abs(history[-2] - ref) / abs(ref)
            n *= 2
        raise NonConvergenceError(
            f"accelerated bilinear sum not settled within {control.max_terms} terms"
        )
    terms = bilinear_partial(x0, x, weight, control.max_terms)
    csum = np.cumsum(terms)
    small = np.abs(terms) <= control.rel_tol * np.abs(csum)
    run = 0
    for i, flag in enumerate(small):
        run = run + 1 if flag else 0
        if run >= control.consecutive_small:
            return float(csum[i]), i + 1, float(abs(terms[i] / csum[i]))
    raise NonConvergenceError(f"bilinear sum not converged within {control.max_terms} terms")
