"""Whittaker functions M_{kappa,mu} and W_{kappa,mu} and their derivatives."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .control import SPECFUN_CONTROL, SeriesControl
from .kummer import _logsum, log_kummer_m, log_tricomi_u

_LN10 = math.log(10.0)
_MAX_LOG = math.log(np.finfo(float).max) - 1.0


@dataclass(frozen=True)
class Scaled:
    """A value too large for a float, stored as ``mantissa * 10**exponent``."""

    mantissa: float
    exponent: int

    @property
    def ln(self) -> float:
        """Natural log of the magnitude."""
        return math.log(abs(self.mantissa)) + self.exponent * _LN10


def _public(logabs: float, sign: float) -> float | Scaled:
    if logabs < _MAX_LOG:
        return float(sign * math.exp(logabs))
    e = int(math.floor(logabs / _LN10))
    return Scaled(float(sign * math.exp(logabs - e * _LN10)), e)


def _ab(kappa, mu):
    return mu - kappa + 0.5, 1.0 + 2.0 * mu


def log_whittaker_m(kappa, mu, x, control: SeriesControl = SPECFUN_CONTROL):
    """``(ln|M_{kappa,mu}(x)|, sign)``, vectorised, x > 0."""
    a, b = _ab(np.asarray(kappa, float), np.asarray(mu, float))
    x = np.asarray(x, float)
    ml, ms = log_kummer_m(a, b, x, control)
    return -0.5 * x + (mu + 0.5) * np.log(x) + ml, ms


def log_whittaker_w(kappa, mu, x, *, scaled: bool = False,
                    control: SeriesControl = SPECFUN_CONTROL):
    """``(ln|W_{kappa,mu}(x)|, sign)``, vectorised, x > 0.

    ``scaled=True`` multiplies by Gamma(mu - kappa + 1/2) / Gamma(1 + 2 mu),
    the combination that appears next to W in expansion coefficients.
    """
    a, b = _ab(np.asarray(kappa, float), np.asarray(mu, float))
    x = np.asarray(x, float)
    ul, us = log_tricomi_u(a, b, x, scaled=scaled, control=control)
    return -0.5 * x + (mu + 0.5) * np.log(x) + ul, us


def _check(x: float) -> None:
    if not x > 0.0:
        raise ValueError(f"Whittaker functions require x > 0, got {x}")


def whittaker_m(kappa: float, mu: float, x: float) -> float | Scaled:
    """M_{kappa,mu}(x) = e^{-x/2} x^{mu+1/2} M(mu-kappa+1/2, 1+2mu, x).

    Returns a :class:`Scaled` value when the result overflows a float.
    """
    _check(x)
    l, s = log_whittaker_m(kappa, mu, x)
    return _public(float(l), float(s))


def whittaker_w(kappa: float, mu: float, x: float) -> float | Scaled:
    """W_{kappa,mu}(x) = e^{-x/2} x^{mu+1/2} U(mu-kappa+1/2, 1+2mu, x).

    Returns a :class:`Scaled` value when the result overflows a float.
    """
    _check(x)
    l, s = log_whittaker_w(kappa, mu, x)
    return _public(float(l), float(s))


def log_whittaker_m_prime(kappa, mu, x):
    """``(ln|dM_{kappa,mu}/dx|, sign)`` via dM(a,b,x)/dx = (a/b) M(a+1,b+1,x)."""
    kappa, mu, x = (np.asarray(v, float) for v in (kappa, mu, x))
    a, b = _ab(kappa, mu)
    pre = -0.5 * x + (mu + 0.5) * np.log(x)
    ml, ms = log_kummer_m(a, b, x)
    c1 = -0.5 + (mu + 0.5) / x
    with np.errstate(divide="ignore"):
        l1 = pre + ml + np.log(np.abs(c1))
        m2l, m2s = log_kummer_m(a + 1.0, b + 1.0, x)
        l2 = pre + np.log(np.abs(a / b)) + m2l
    lv, sv, _ = _logsum(l1, ms * np.sign(c1), l2, m2s * np.sign(a / b))
    return lv, sv


def log_whittaker_w_prime(kappa, mu, x):
    """``(ln|dW_{kappa,mu}/dx|, sign)`` via dU(a,b,x)/dx = -a U(a+1,b+1,x)."""
    kappa, mu, x = (np.asarray(v, float) for v in (kappa, mu, x))
    a, b = _ab(kappa, mu)
    pre = -0.5 * x + (mu + 0.5) * np.log(x)
    ul, us = log_tricomi_u(a, b, x)
    c1 = -0.5 + (mu + 0.5) / x
    with np.errstate(divide="ignore"):
        l1 = pre + ul + np.log(np.abs(c1))
        if np.all(a == 0.0):
            return l1, us * np.sign(c1)
        u2l, u2s = log_tricomi_u(a + 1.0, b + 1.0, x)
        l2 = pre + np.log(np.abs(a)) + u2l
    lv, sv, _ = _logsum(l1, us * np.sign(c1), l2, -u2s * np.sign(a))
    return lv, sv


def whittaker_m_prime(kappa: float, mu: float, x: float) -> float | Scaled:
    """Derivative of M_{kappa,mu} with respect to x."""
    _check(x)
    l, s = log_whittaker_m_prime(kappa, mu, x)
    return _public(float(l), float(s))


def whittaker_w_prime(kappa: float, mu: float, x: float) -> float | Scaled:
    """Derivative of W_{kappa,mu} with respect to x."""
    _check(x)
    l, s = log_whittaker_w_prime(kappa, mu, x)
    return _public(float(l), float(s))
