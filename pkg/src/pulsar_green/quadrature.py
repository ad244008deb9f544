"""Adaptive quadrature on finite and semi-infinite ranges."""

from __future__ import annotations

from collections.abc import Callable

from scipy.integrate import quad

from .errors import NonConvergenceError


def integrate(f: Callable[[float], float], a: float, b: float, rel_tol: float = 1e-10,
              abs_tol: float = 0.0, points=None, limit: int = 400) -> float:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``."""
    res = quad(f, a, b, epsrel=rel_tol, epsabs=abs_tol, points=points, limit=limit,
               full_output=1)
    val, err = res[0], res[1]
    if len(res) > 3 and err > max(rel_tol * abs(val), abs_tol):
        raise NonConvergenceError(f"quadrature on [{a}, {b}] failed: {res[3]}")
    return val


def integrate_to_infinity(f: Callable[[float], float], a: float, rel_tol: float = 1e-10,
                          abs_tol: float = 0.0, limit: int = 400) -> float:
    """Integral of ``f`` over ``[a, inf)`` using x = a + t / (1 - t) on t in [0, 1)."""

    def g(t: float) -> float:
        if t >= 1.0:
            return 0.0
        u = 1.0 - t
        return f(a + t / u) / (u * u)

    return integrate(g, 0.0, 1.0, rel_tol, abs_tol, limit=limit)
