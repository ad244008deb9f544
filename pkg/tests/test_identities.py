import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pulsar_green import PoleError, SeriesControl, UnsupportedParameterError
from pulsar_green.identities import (
    check_identity,
    check_spatial_wronskian,
    check_whittaker_wronskian,
    identity_arguments,
    laguerre_identity_lhs,
    laguerre_identity_rhs,
    spatial_wronskian,
    whittaker_wronskian_closed,
)

# mpmath, 50 digits
ID_0_1 = 4.0464247473978891656  # Gamma(a) U(a, 1/2, 1) / sqrt(pi), a = 1/8
ID_0_0 = 5.2518944653991867773  # Gamma(a) / Gamma(a + 1/2)
ID_03_12 = 4.3143022047860271437
WRONSKIAN_215 = -1.7713293518822771139
SPATIAL_03 = -0.87610242313248892259  # rho = 0.3, alpha = 0.1, w = 6, tau = 1
MU0 = 1.7811513130556875852


def rel(a, b):
    return abs(a / b - 1.0)


class TestLaguerreIdentity:
    def test_surface_specialisation(self):
        assert rel(laguerre_identity_lhs(0.0, 1.0, 0.125)[0], ID_0_1) < 1e-8
        assert check_identity(0.0, 1.0, 0.125).rel_diff < 1e-6

    def test_both_at_origin(self):
        lhs, _ = laguerre_identity_lhs(0.0, 0.0, 0.125)
        assert rel(lhs, ID_0_0) < 1e-8
        # Sum of Gamma(n + 1/2) / (n! (n + a)) is pi times the same number.
        assert math.pi * lhs == pytest.approx(16.50, abs=5e-3)
        assert rel(laguerre_identity_rhs(0.0, 0.0, 0.125), ID_0_0) < 1e-14

    def test_first_term(self):
        lhs, n = laguerre_identity_lhs(0.7, 2.0, 0.125, accelerate=False, n_terms=1,
                                       tail_correction=False)
        assert n == 1
        assert rel(lhs, 1.0 / (0.125 * math.sqrt(math.pi))) < 1e-15

    def test_interior_oracle(self):
        assert rel(laguerre_identity_rhs(0.3, 1.2, 0.125), ID_03_12) < 1e-13
        assert rel(laguerre_identity_lhs(0.3, 1.2, 0.125)[0], ID_03_12) < 1e-8

    @given(st.floats(0, 10), st.floats(0, 10), st.floats(0.01, 0.25))
    def test_rhs_symmetric(self, x0, x, a):
        assert laguerre_identity_rhs(x0, x, a) == laguerre_identity_rhs(x, x0, a)

    @settings(max_examples=15)
    @given(st.floats(0, 10), st.floats(0, 10), st.floats(0.01, 0.25))
    def test_randomised(self, x0, x, a):
        rep = check_identity(x0, x, a)
        assert rep.rel_diff < 1e-5
        assert rep.accelerated

    def test_plain_sum_on_diagonal(self):
        rep = check_identity(2.0, 2.0, 0.125, accelerate=False, n_terms=100_000)
        assert rep.terms_used == 100_000
        assert rep.rel_diff < 1e-4

    def test_plain_stopping_rule(self):
        ctl = SeriesControl(max_terms=100_000, rel_tol=1e-6, consecutive_small=5)
        rep = check_identity(0.5, 3.0, 0.2, ctl, accelerate=False)
        assert not rep.accelerated
        assert rep.rel_diff < 1e-4

    def test_domain(self):
        with pytest.raises(UnsupportedParameterError):
            check_identity(0.5, 1.0, 0.5)
        with pytest.raises(PoleError):
            check_identity(0.5, 1.0, -1.0, extended_domain=True)
        with pytest.raises(ValueError):
            check_identity(-0.5, 1.0, 0.1)
        rep = check_identity(0.5, 1.0, 0.5, extended_domain=True)
        assert rep.rel_diff < 1e-5

    @given(st.floats(0.01, 1), st.floats(0.1, 5), st.floats(0, 3), st.floats(0, 3))
    def test_tau_form_matches_x_form(self, alpha, xi, tau0, tau):
        x0, x, a = identity_arguments(alpha, xi, tau0, tau)
        w = math.sqrt(9 + 12 * xi * xi)
        assert x0 == pytest.approx(alpha * w * tau0**2 / 2, rel=1e-15)
        assert x == pytest.approx(alpha * w * tau**2 / 2, rel=1e-15)
        assert a == pytest.approx((w - 3) / (4 * w), rel=1e-15)


class TestWhittakerWronskian:
    def test_unit_case(self):
        rep = check_whittaker_wronskian(0.0, 0.5, [0.1, 1.0, 10.0])
        assert rep.rhs == pytest.approx(-1.0, rel=1e-15)
        assert rep.rel_diff < 1e-13

    def test_reference_mode(self):
        assert rel(whittaker_wronskian_closed(2.15, MU0), WRONSKIAN_215) < 1e-13
        rep = check_whittaker_wronskian(2.15, MU0, [0.1, 0.5, 2.0, 10.0])
        assert rep.rel_diff < 1e-8

    @pytest.mark.filterwarnings("ignore::pulsar_green.ReducedAccuracyWarning")
    @given(st.floats(-2, 4), st.floats(0.6, 12))
    def test_property(self, kappa, mu):
        if mu - kappa + 0.5 < 0.05:
            return
        assert check_whittaker_wronskian(kappa, mu, [0.1, 1.0, 10.0]).rel_diff < 1e-8

    def test_rejects_bad_points(self):
        with pytest.raises(ValueError):
            check_whittaker_wronskian(0.0, 0.5, [])
        with pytest.raises(ValueError):
            check_whittaker_wronskian(0.0, 0.5, [0.0])


class TestSpatialWronskian:
    def test_oracle(self):
        rep = check_spatial_wronskian(0.3, 0.1, 6.0, 1.0)
        assert rel(rep.rhs, SPATIAL_03) < 1e-14
        assert rep.rel_diff < 1e-8

    @pytest.mark.parametrize("n", range(3))
    def test_vanishes_on_eigenvalues(self, n):
        for tau in (0.5, 1.0, 2.0):
            rep = check_spatial_wronskian(-n, 0.1, 6.0, tau)
            assert rep.rhs == 0.0
            assert rep.abs_ratio < 1e-10

    def test_scale_factor(self):
        r = spatial_wronskian(0.3, 0.1, 6.0, 2.0)[0] / spatial_wronskian(0.3, 0.1, 6.0, 1.0)[0]
        assert rel(r, math.exp(0.1 * 6.0 * 3.0 / 2.0)) < 1e-8

    @given(st.floats(-4.5, 4.5, allow_subnormal=False), st.floats(0.2, 3.0))
    def test_property(self, rho, tau):
        if abs(rho - round(rho)) < 1e-3 and rho <= 0:
            return
        assert check_spatial_wronskian(rho, 0.1, 6.0, tau).rel_diff < 1e-8
