"""Analytic Comptonization Green's function for an x-ray pulsar accretion column."""

from .column import (
    ColumnParams,
    DerivedParams,
    EigenMode,
    MicroPhysics,
    beta_from_microphysics,
    chi_of_energy,
    derive,
    eigenmode,
    escape_time,
    tau_of_z,
    velocity_of_tau,
    velocity_of_z,
    xi_from_microphysics,
    z_of_tau,
)
from .errors import (
    GridTooCoarseError,
    NonConvergenceError,
    PoleError,
    ReducedAccuracyWarning,
    StencilError,
    UnsupportedParameterError,
)
from .greens import (
    SpectrumGrid,
    TabulatedSource,
    convolve_source,
    greens_function,
    number_density_closed,
    number_density_quadrature,
    number_density_series,
    spectrum,
)
from .identities import IdentityReport, check_identity, check_spatial_wronskian, check_whittaker_wronskian
from .specfun import SeriesControl

__version__ = "0.1.0"

__all__ = [
    "ColumnParams",
    "DerivedParams",
    "EigenMode",
    "GridTooCoarseError",
    "IdentityReport",
    "MicroPhysics",
    "NonConvergenceError",
    "PoleError",
    "ReducedAccuracyWarning",
    "SeriesControl",
    "SpectrumGrid",
    "StencilError",
    "TabulatedSource",
    "UnsupportedParameterError",
    "beta_from_microphysics",
    "check_identity",
    "check_spatial_wronskian",
    "check_whittaker_wronskian",
    "chi_of_energy",
    "convolve_source",
    "derive",
    "eigenmode",
    "escape_time",
    "greens_function",
    "number_density_closed",
    "number_density_quadrature",
    "number_density_series",
    "spectrum",
    "tau_of_z",
    "velocity_of_tau",
    "velocity_of_z",
    "xi_from_microphysics",
    "z_of_tau",
]
