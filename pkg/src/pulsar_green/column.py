"""Accretion-column parameters, derived constants and coordinate maps.

The column is described by the dimensionless constants ``alpha``
(velocity-profile steepness), ``xi`` (ratio of dynamical to
perpendicular-escape time scale) and ``beta`` (bulk-to-thermal
Comptonization ratio), together with the injection rate, the electron
temperature and the column radius that set physical units.

The optical depth along the column is ``tau`` and the dimensionless photon
energy is ``chi = epsilon / (k T_e)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import C_LIGHT, K_BOLTZMANN, M_PROTON, ME_C2


@dataclass(frozen=True)
class ColumnParams:
    """Physical inputs for one accretion column.

    ``ndot0`` is the photon injection rate (s^-1), ``t_e`` the electron
    temperature (K) and ``r0`` the column radius (cm).
    """

    ndot0: float
    t_e: float
    r0: float
    alpha: float
    xi: float
    beta: float

    def __post_init__(self) -> None:
        for name in ("ndot0", "t_e", "r0", "alpha", "xi", "beta"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be a finite positive number, got {v!r}")

    @property
    def kt(self) -> float:
        """Electron thermal energy k T_e in erg."""
        return K_BOLTZMANN * self.t_e


@dataclass(frozen=True)
class DerivedParams:
    """Constants that follow from ``(alpha, xi, beta)``."""

    w: float
    a: float
    kappa: float


@dataclass(frozen=True)
class EigenMode:
    """Spatial eigenvalue and the matching energy-equation indices."""

    n: int
    lam: float
    mu: float


@dataclass(frozen=True)
class MicroPhysics:
    """Scattering and plasma quantities used to infer ``xi`` and ``beta``.

    Cross sections in cm^2: ``sigma_par`` and ``sigma_perp`` for photons
    moving along and across the field, ``sigma_bar`` angle-averaged.
    ``mdot`` is the mass accretion rate (g/s) and ``ne`` the electron
    density (cm^-3); either may be left as ``None`` when unused.
    """

    sigma_par: float
    sigma_perp: float
    sigma_bar: float
    mdot: float | None = None
    ne: float | None = None

    def __post_init__(self) -> None:
        for name in ("sigma_par", "sigma_perp", "sigma_bar", "mdot", "ne"):
            v = getattr(self, name)
            if v is not None and not (math.isfinite(v) and v > 0.0):
                raise ValueError(f"{name} must be a finite positive number, got {v!r}")

    @property
    def sigma_ratio(self) -> float:
        """sigma_par / sigma_perp."""
        return self.sigma_par / self.sigma_perp


def derive(params: ColumnParams) -> DerivedParams:
    """w = sqrt(9 + 12 xi^2), a = (w - 3) / (4 w), kappa = (beta + 4) / 2."""
    w = math.sqrt(9.0 + 12.0 * params.xi**2)
    return DerivedParams(w=w, a=(w - 3.0) / (4.0 * w), kappa=0.5 * (params.beta + 4.0))


def eigenvalue(w: float, n: int) -> float:
    """lambda_n = (4 n w + w + 3) / 2."""
    return 0.5 * (4.0 * n * w + w + 3.0)


def mu_of_lambda(beta: float, lam):
    """mu = sqrt((3 - beta)^2 + 4 beta lambda) / 2; accepts arrays."""
    return 0.5 * ((3.0 - beta) ** 2 + 4.0 * beta * lam) ** 0.5


def eigenmode(n: int, derived: DerivedParams, beta: float) -> EigenMode:
    """The n-th spatial eigenvalue and its energy index mu_n."""
    if int(n) != n or n < 0:
        raise ValueError(f"n must be a non-negative integer, got {n!r}")
    lam = eigenvalue(derived.w, int(n))
    return EigenMode(n=int(n), lam=lam, mu=float(mu_of_lambda(beta, lam)))


def velocity_of_tau(tau: float, alpha: float) -> float:
    """Inflow speed in units of c; negative because the flow is downward."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    return -alpha * tau


def velocity_of_z(z: float, alpha: float, xi: float, r0: float, sigma_ratio: float = 1.0) -> float:
    """Inflow speed in units of c at height ``z`` (cm)."""
    if z < 0:
        raise ValueError("z must be non-negative")
    return -(sigma_ratio**0.25) * math.sqrt(2.0 * alpha * z / (xi * r0))


def _ratio(micro: MicroPhysics | None) -> float:
    return 1.0 if micro is None else micro.sigma_ratio


def tau_of_z(z: float, alpha: float, xi: float, r0: float, micro: MicroPhysics | None = None) -> float:
    """Optical depth above the stellar surface at height ``z`` (cm).

    Without ``micro`` the two directional cross sections are taken equal.
    """
    if z < 0:
        raise ValueError("z must be non-negative")
    return _ratio(micro) ** 0.25 * math.sqrt(2.0 * z / (alpha * xi * r0))


def z_of_tau(tau: float, alpha: float, xi: float, r0: float, micro: MicroPhysics | None = None) -> float:
    """Inverse of :func:`tau_of_z`."""
    if tau < 0:
        raise ValueError("tau must be non-negative")
    return tau**2 * alpha * xi * r0 / (2.0 * _ratio(micro) ** 0.5)


def chi_of_energy(eps: float, t_e: float) -> float:
    """Dimensionless energy chi = eps / (k T_e) for eps in erg and T_e in K."""
    if eps <= 0 or t_e <= 0:
        raise ValueError("eps and t_e must be positive")
    return eps / (K_BOLTZMANN * t_e)


def xi_from_microphysics(micro: MicroPhysics, r0: float) -> float:
    """xi = pi r0 m_p c / (mdot sqrt(sigma_par sigma_perp))."""
    if micro.mdot is None:
        raise ValueError("mdot is required")
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    return math.pi * r0 * M_PROTON * C_LIGHT / (
        micro.mdot * math.sqrt(micro.sigma_par * micro.sigma_perp))


def beta_from_microphysics(alpha: float, micro: MicroPhysics, t_e: float) -> float:
    """beta = (alpha / 3) (sigma_par / sigma_bar) (m_e c^2 / k T_e)."""
    if alpha <= 0 or t_e <= 0:
        raise ValueError("alpha and t_e must be positive")
    return alpha / 3.0 * micro.sigma_par / micro.sigma_bar * ME_C2 / (K_BOLTZMANN * t_e)


def escape_time(micro: MicroPhysics, r0: float) -> float:
    """Diffusive escape time r0 tau_perp / c through the column wall (s)."""
    if micro.ne is None:
        raise ValueError("ne is required")
    if r0 <= 0:
        raise ValueError("r0 must be positive")
    return r0 * (micro.ne * micro.sigma_perp * r0) / C_LIGHT
