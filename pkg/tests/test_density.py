import math
from dataclasses import replace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pulsar_green import ColumnParams, PoleError, derive, eigenmode
from pulsar_green.column import EigenMode
from pulsar_green.greens import (
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

# mpmath, 40 digits
N_CLOSED_1 = 1.0329955763259888017e-18  # tau0 = 0.5, tau = 1
JUMP = -3.1853024753256868611e-19

TAU0, CHI0 = 0.5, 0.1


def rel(a, b):
    return abs(a / b - 1.0)


class TestClosedForm:
    def test_oracle(self, fig1a):
        assert rel(number_density_closed(fig1a, TAU0, 1.0), N_CLOSED_1) < 1e-13
        assert rel(density_jump(fig1a), JUMP) < 1e-14

    def test_continuous_at_source(self, fig1a):
        h = 1e-12
        lo = number_density_closed(fig1a, TAU0, TAU0 - h)
        hi = number_density_closed(fig1a, TAU0, TAU0 + h)
        assert rel(lo, hi) < 1e-10

    def test_derivative_jump(self, fig1a):
        h = 1e-4
        f = [number_density_closed(fig1a, TAU0, TAU0 + k * h) for k in (-2, -1, 0, 1, 2)]
        left = (3 * f[2] - 4 * f[1] + f[0]) / (2 * h)
        right = (-3 * f[2] + 4 * f[3] - f[4]) / (2 * h)
        assert rel(right - left, density_jump(fig1a)) < 1e-5

    def test_decays_upstream(self, fig1a):
        assert number_density_closed(fig1a, TAU0, 10.0) < 1e-6 * number_density_closed(fig1a, TAU0, TAU0)

    def test_trapping_trend(self, fig1a):
        n = [number_density_closed(fig1a, TAU0, t) for t in (0.01, 1.0, 1.5)]
        assert n[0] > n[1] > n[2]

    def test_rejects_negative(self, fig1a):
        with pytest.raises(ValueError):
            number_density_closed(fig1a, TAU0, -0.1)


class TestSeries:
    def test_matches_closed(self, fig1a):
        assert rel(number_density_series(fig1a, TAU0, 1.0), N_CLOSED_1) < 1e-6

    @given(st.floats(0.0, 3.0), st.floats(0.0, 3.0))
    def test_reciprocity(self, tau0, tau):
        p = ColumnParams(1.0, 1e7, 1e4, 0.1, 1.5, 0.3)
        a = number_density_series(p, tau0, tau, n_terms=100) * math.exp(-0.15 * tau0**2)
        b = number_density_series(p, tau, tau0, n_terms=100) * math.exp(-0.15 * tau**2)
        assert a == pytest.approx(b, rel=1e-9)

    def test_linear_in_ndot0(self, fig1a):
        p2 = replace(fig1a, ndot0=2.0)
        for route in (number_density_series, number_density_closed):
            assert rel(route(p2, TAU0, 1.2), 2 * route(fig1a, TAU0, 1.2)) < 1e-13


class TestQuadrature:
    def test_three_routes_and_energy(self, fig1a):
        nq = number_density_quadrature(fig1a, TAU0, CHI0, 1.0)
        assert rel(nq, number_density_series(fig1a, TAU0, 1.0)) < 1e-5
        ug = energy_density_quadrature(fig1a, TAU0, CHI0, 1.0)
        assert ug > fig1a.kt * nq * CHI0

    def test_injection_line_rejected(self, fig1a):
        with pytest.raises(ValueError):
            number_density_quadrature(fig1a, TAU0, CHI0, TAU0)


class TestKG:
    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_closed_matches_quadrature(self, fig1a, n):
        d = derive(fig1a)
        m = eigenmode(n, d, 0.3)
        assert rel(kg_closed(m, d.kappa, 0.3, CHI0), kg_quadrature(m, d.kappa, CHI0)) < 1e-6

    def test_whittaker_integrals(self, fig1a):
        d = derive(fig1a)
        mu = eigenmode(0, d, 0.3).mu
        assert rel(whittaker_m_integral_quadrature(d.kappa, mu, 0.5), whittaker_m_integral(d.kappa, mu, 0.5)) < 1e-8
        assert rel(whittaker_w_integral_quadrature(d.kappa, mu, 2.0), whittaker_w_integral(d.kappa, mu, 2.0)) < 1e-8

    def test_pole_at_lambda_three(self):
        with pytest.raises(PoleError):
            kg_closed(EigenMode(0, 3.0, 1.5), 2.15, 0.3, CHI0)
