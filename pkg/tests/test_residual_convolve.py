import math

import numpy as np
import pytest

from pulsar_green import (
    GridTooCoarseError,
    StencilError,
    TabulatedSource,
    convolve_source,
    derive,
    eigenmode,
    greens_function,
)
from pulsar_green.greens import (
    energy_residual,
    spatial_residual,
    transport_residual,
    trapezoid_weights,
)

TAU0, CHI0 = 0.5, 0.1


class TestResiduals:
    def test_transport_at_reference_point(self, fig1a):
        assert transport_residual(fig1a, TAU0, CHI0, 1.0, 1.0) < 1e-4

    @pytest.mark.parametrize("chi", [CHI0, CHI0 + 0.005, 0.005])
    def test_transport_stencil_guard(self, fig1a, chi):
        with pytest.raises(StencilError):
            transport_residual(fig1a, TAU0, CHI0, 1.0, chi)

    def test_transport_detects_wrong_equation(self, fig1a):
        # The same series read with another beta does not solve the equation.
        from dataclasses import replace

        from pulsar_green.greens import residual

        bad = replace(fig1a, beta=0.6)
        orig = residual._normalised

        def swapped(lhs, rhs):
            g = bad.alpha / (3 * bad.beta) / (fig1a.alpha / (3 * fig1a.beta))
            return orig([t * g for t in lhs], rhs)

        residual._normalised = swapped
        try:
            assert transport_residual(fig1a, TAU0, CHI0, 1.0, 1.0) > 1e-2
        finally:
            residual._normalised = orig

    @pytest.mark.parametrize("n", range(6))
    def test_spatial(self, fig1a, n):
        for tau in (0.0, 0.7, 2.5):
            assert spatial_residual(n, fig1a, tau) < 1e-8

    @pytest.mark.parametrize("n", range(3))
    def test_energy_both_branches(self, fig1a, n):
        d = derive(fig1a)
        m = eigenmode(n, d, 0.3)
        for chi in (0.2, 1.0, 5.0):
            for chi0 in (0.1, 10.0):
                assert energy_residual(m, d.kappa, 0.3, chi, chi0) < 1e-8

    def test_energy_stencil_guard(self, fig1a):
        d = derive(fig1a)
        with pytest.raises(StencilError):
            energy_residual(eigenmode(0, d, 0.3), d.kappa, 0.3, 1.0, 1.001)


def _delta(params, tau0, chi0):
    eps0 = chi0 * params.kt
    return TabulatedSource((tau0,), (chi0,), np.array([[params.ndot0 / eps0**2]]))


class TestConvolve:
    def test_trapezoid_weights(self):
        assert np.allclose(trapezoid_weights([0.0, 1.0, 3.0]), [0.5, 1.5, 1.0])
        assert trapezoid_weights([2.0]).tolist() == [1.0]

    def test_single_node_is_greens_function(self, fig1a):
        for tau0 in (0.0, TAU0):
            f = convolve_source(fig1a, _delta(fig1a, tau0, CHI0), 1.0, 2.0)
            ref = greens_function(fig1a, tau0, CHI0, 1.0, 2.0)[0]
            assert f == pytest.approx(ref, rel=1e-14)

    def test_one_cell_in_grid(self, fig1a):
        t0 = np.linspace(0.3, 0.7, 5)
        c0 = np.geomspace(0.05, 0.2, 5)
        q = np.zeros((5, 5))
        eps0 = c0[2] * fig1a.kt
        jac = fig1a.alpha * fig1a.xi * fig1a.r0 * t0[2] * fig1a.kt
        q[2, 2] = fig1a.ndot0 / eps0**2 / (trapezoid_weights(t0)[2] * trapezoid_weights(c0)[2] * jac)
        f = convolve_source(fig1a, TabulatedSource(tuple(t0), tuple(c0), q), 1.0, 2.0, tolerance=None)
        assert f == pytest.approx(greens_function(fig1a, t0[2], c0[2], 1.0, 2.0)[0], rel=1e-13)

    def test_linear_and_superposition(self, fig1a):
        t0, c0 = (0.4, 0.6), (0.1,)
        a = TabulatedSource(t0, c0, np.array([[1.0], [0.0]]))
        b = TabulatedSource(t0, c0, np.array([[0.0], [2.0]]))
        ab = TabulatedSource(t0, c0, np.array([[1.0], [2.0]]))
        a2 = TabulatedSource(t0, c0, np.array([[2.0], [0.0]]))
        fa = convolve_source(fig1a, a, 1.0, 2.0)
        fb = convolve_source(fig1a, b, 1.0, 2.0)
        assert convolve_source(fig1a, ab, 1.0, 2.0) == pytest.approx(fa + fb, rel=1e-14)
        assert convolve_source(fig1a, a2, 1.0, 2.0) == pytest.approx(2 * fa, rel=1e-14)

    def test_sigma_ratio_scales_height_jacobian(self, fig1a):
        src = TabulatedSource((0.4, 0.6), (0.1,), np.ones((2, 1)))
        f1 = convolve_source(fig1a, src, 1.0, 2.0)
        f4 = convolve_source(fig1a, src, 1.0, 2.0, sigma_ratio=4.0)
        assert f4 == pytest.approx(0.5 * f1, rel=1e-14)

    def test_coarse_grid_flagged(self, fig1a):
        t0 = (0.2, 0.5, 0.8)
        src = TabulatedSource(t0, (0.1,), np.array([[0.0], [1.0], [0.0]]))
        with pytest.raises(GridTooCoarseError):
            convolve_source(fig1a, src, 1.0, 2.0)

    def test_uniform_source_is_smoother_in_tau(self, fig1a):
        # Relative curvature in tau just above the injection energy.
        chi, h = 0.105, 1e-2

        def curvature(fn):
            f = [fn(TAU0 + k * h) for k in (-1, 0, 1)]
            return abs(f[2] - 2 * f[1] + f[0]) / (h * h * f[1])

        single = curvature(lambda t: greens_function(fig1a, TAU0, CHI0, t, chi)[0])
        t0 = np.linspace(0.1, 0.9, 21)
        src = TabulatedSource(tuple(t0), (CHI0,), np.ones((21, 1)))
        spread = curvature(lambda t: convolve_source(fig1a, src, t, chi, tolerance=None))
        assert spread < 0.2 * single

    def test_node_collision(self, fig1a):
        with pytest.raises(ValueError):
            convolve_source(fig1a, _delta(fig1a, TAU0, CHI0), TAU0, CHI0)

    @pytest.mark.parametrize("kw", [
        dict(tau0=(0.5, 0.4), chi0=(0.1,), q=np.ones((2, 1))),
        dict(tau0=(-0.1,), chi0=(0.1,), q=np.ones((1, 1))),
        dict(tau0=(0.5,), chi0=(0.1,), q=np.ones((2, 1))),
        dict(tau0=(0.5,), chi0=(0.1,), q=np.array([[math.nan]])),
    ])
    def test_source_validation(self, kw):
        with pytest.raises(ValueError):
            TabulatedSource(**kw)
