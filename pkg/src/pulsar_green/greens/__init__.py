"""Green's function series, densities, residual checks and source convolution."""

from .convolve import TabulatedSource, convolve_source, trapezoid_weights
from .density import (
    density_jump,
    energy_density_quadrature,
    kg_closed,
    kg_quadrature,
    number_density_closed,
    number_density_quadrature,
    number_density_series,
    whittaker_m_integral,
    whittaker_m_integral_quadrature,
    whittaker_w_integral,
    whittaker_w_integral_quadrature,
)
from .eigen import (
    energy_eigenfunction,
    expansion_coefficient,
    orthogonality_integral,
    orthogonality_norm,
    spatial_eigenfunction,
)
from .residual import energy_residual, spatial_residual, transport_residual
from .series import SpectrumGrid, greens_function, greens_partial_sum, spectrum

__all__ = [
    "SpectrumGrid",
    "TabulatedSource",
    "convolve_source",
    "density_jump",
    "energy_density_quadrature",
    "energy_eigenfunction",
    "energy_residual",
    "expansion_coefficient",
    "greens_function",
    "greens_partial_sum",
    "kg_closed",
    "kg_quadrature",
    "number_density_closed",
    "number_density_quadrature",
    "number_density_series",
    "orthogonality_integral",
    "orthogonality_norm",
    "spatial_eigenfunction",
    "spatial_residual",
    "spectrum",
    "transport_residual",
    "trapezoid_weights",
    "whittaker_m_integral",
    "whittaker_m_integral_quadrature",
    "whittaker_w_integral",
    "whittaker_w_integral_quadrature",
]
