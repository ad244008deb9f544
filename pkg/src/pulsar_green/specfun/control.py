"""Series truncation control."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy for an infinite series.

    A series stops once ``consecutive_small`` successive terms are each
    below ``rel_tol`` times the running sum, and fails if that has not
    happened after ``max_terms`` terms.
    """

    max_terms: int = 200
    rel_tol: float = 1e-10
    consecutive_small: int = 3

    def __post_init__(self) -> None:
        if int(self.max_terms) != self.max_terms or self.max_terms < 1:
            raise ValueError(f"max_terms must be a positive integer, got {self.max_terms!r}")
        if not 0.0 < self.rel_tol < 1.0:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if int(self.consecutive_small) != self.consecutive_small or self.consecutive_small < 1:
            raise ValueError(
                f"consecutive_small must be a positive integer, got {self.consecutive_small!r}"
            )


# Green's-function spectra.
GREENS_CONTROL = SeriesControl(200, 1e-10, 3)
# Bilinear Laguerre sums; tolerance applies to the accelerated estimate.
IDENTITY_CONTROL = SeriesControl(100_000, 1e-6, 5)
# Hypergeometric power series: run to machine precision.
SPECFUN_CONTROL = SeriesControl(20_000, 1e-17, 3)
