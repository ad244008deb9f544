"""Special functions: Gamma, confluent hypergeometric, Whittaker, Laguerre."""

from ..errors import NonConvergenceError, PoleError, ReducedAccuracyWarning, UnsupportedParameterError
from .control import GREENS_CONTROL, IDENTITY_CONTROL, SPECFUN_CONTROL, SeriesControl
from .gamma import ln_gamma, lngamma
from .kummer import kummer_m, log_kummer_m, log_tricomi_u, tricomi_u
from .laguerre import laguerre, laguerre_at_zero, laguerre_table
from .whittaker import (
    Scaled,
    log_whittaker_m,
    log_whittaker_w,
    whittaker_m,
    whittaker_m_prime,
    whittaker_w,
    whittaker_w_prime,
)

__all__ = [
    "GREENS_CONTROL",
    "IDENTITY_CONTROL",
    "SPECFUN_CONTROL",
    "NonConvergenceError",
    "PoleError",
    "ReducedAccuracyWarning",
    "Scaled",
    "SeriesControl",
    "UnsupportedParameterError",
    "kummer_m",
    "laguerre",
    "laguerre_at_zero",
    "laguerre_table",
    "ln_gamma",
    "lngamma",
    "log_kummer_m",
    "log_tricomi_u",
    "log_whittaker_m",
    "log_whittaker_w",
    "tricomi_u",
    "whittaker_m",
    "whittaker_m_prime",
    "whittaker_w",
    "whittaker_w_prime",
]
