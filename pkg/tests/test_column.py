import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pulsar_green import ColumnParams, derive, eigenmode
from pulsar_green.column import (
    MicroPhysics,
    beta_from_microphysics,
    chi_of_energy,
    escape_time,
    tau_of_z,
    velocity_of_tau,
    velocity_of_z,
    xi_from_microphysics,
    z_of_tau,
)
from pulsar_green.constants import K_BOLTZMANN, KEV, ME_C2

# mpmath, 50 digits
MU0 = 1.7811513130556875852
CHI_1KEV = 1.1604518121550082606  # 1 keV at 1e7 K
T_ESC = 2.2188683612581074e-5  # s


def params(**kw):
    base = dict(ndot0=1.0, t_e=1e7, r0=1e4, alpha=0.1, xi=1.5, beta=0.3)
    base.update(kw)
    return ColumnParams(**base)


class TestColumnParams:
    @pytest.mark.parametrize("name", ["ndot0", "t_e", "r0", "alpha", "xi", "beta"])
    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_non_positive(self, name, bad):
        with pytest.raises(ValueError):
            params(**{name: bad})

    def test_kt(self):
        assert params().kt == pytest.approx(K_BOLTZMANN * 1e7, rel=1e-15)


class TestDerive:
    def test_reference_values(self):
        d = derive(params())
        assert d.w == 6.0
        assert d.a == 0.125
        assert d.kappa == 2.15
        assert derive(params(beta=1.5)).kappa == 2.75

    @given(st.floats(0.01, 20))
    def test_a_in_quarter_interval(self, xi):
        a = derive(params(xi=xi)).a
        assert 0.0 < a < 0.25


class TestEigenmode:
    def test_reference_values(self):
        d = derive(params())
        m0, m1 = eigenmode(0, d, 0.3), eigenmode(1, d, 0.3)
        assert (m0.lam, m1.lam) == (4.5, 16.5)
        assert abs(m0.mu / MU0 - 1.0) < 1e-15
        k = d.kappa
        assert (k + m0.mu - 0.5) * (m0.mu - k + 0.5) == pytest.approx(0.45, rel=1e-14)

    @pytest.mark.parametrize("n", [-1, 1.5])
    def test_rejects_bad_index(self, n):
        with pytest.raises(ValueError):
            eigenmode(n, derive(params()), 0.3)

    @given(st.floats(0.1, 5), st.floats(0.1, 5))
    def test_spacing_and_algebraic_identity(self, xi, beta):
        d = derive(params(xi=xi, beta=beta))
        k = 0.5 * (beta + 4.0)
        prev = None
        for n in range(51):
            m = eigenmode(n, d, beta)
            if prev is not None:
                assert m.lam - prev == pytest.approx(2.0 * d.w, rel=1e-13)
            prev = m.lam
            lhs = (k + m.mu - 0.5) * (m.mu - k + 0.5)
            assert lhs == pytest.approx(beta * (m.lam - 3.0), rel=1e-12)


class TestCoordinates:
    def test_velocity_examples(self):
        assert velocity_of_tau(0.0, 0.1) == 0.0
        assert velocity_of_tau(0.5, 0.1) == pytest.approx(-0.05, rel=1e-15)
        assert velocity_of_tau(1.5, 0.1) == pytest.approx(-0.15, rel=1e-15)

    def test_tau_of_z_examples(self):
        assert tau_of_z(0.0, 0.1, 1.5, 1e4) == 0.0
        assert tau_of_z(750.0, 0.1, 1.5, 1e4) == pytest.approx(1.0, rel=1e-15)

    @pytest.mark.parametrize("fn", [velocity_of_tau])
    def test_negative_tau_rejected(self, fn):
        with pytest.raises(ValueError):
            fn(-0.1, 0.1)

    @given(st.just(0.0) | st.floats(1e-100, 1e5), st.floats(0.01, 1), st.floats(0.1, 5), st.floats(0.2, 5))
    def test_velocity_composition(self, z, alpha, xi, ratio):
        micro = MicroPhysics(sigma_par=ratio * 1e-25, sigma_perp=1e-25, sigma_bar=1e-25)
        tau = tau_of_z(z, alpha, xi, 1e4, micro)
        v = velocity_of_z(z, alpha, xi, 1e4, micro.sigma_ratio)
        assert v == pytest.approx(velocity_of_tau(tau, alpha), rel=1e-12, abs=1e-300)
        assert z_of_tau(tau, alpha, xi, 1e4, micro) == pytest.approx(z, rel=1e-12, abs=1e-300)


class TestEnergy:
    def test_examples(self):
        kt = K_BOLTZMANN * 1e7
        assert chi_of_energy(kt, 1e7) == pytest.approx(1.0, rel=1e-15)
        assert chi_of_energy(0.1 * kt, 1e7) == pytest.approx(0.1, rel=1e-15)
        assert abs(chi_of_energy(KEV, 1e7) / CHI_1KEV - 1.0) < 1e-14

    def test_rejects_non_positive(self):
        with pytest.raises(ValueError):
            chi_of_energy(0.0, 1e7)


class TestMicroPhysics:
    def test_beta_exact_cancellation(self):
        micro = MicroPhysics(sigma_par=2e-25, sigma_perp=1e-25, sigma_bar=2e-25)
        t_e = ME_C2 / (30.0 * K_BOLTZMANN)
        assert beta_from_microphysics(0.1, micro, t_e) == pytest.approx(1.0, rel=1e-14)

    def test_xi_halves_when_mdot_doubles(self):
        m1 = MicroPhysics(1e-25, 2e-25, 1e-25, mdot=1e17)
        m2 = MicroPhysics(1e-25, 2e-25, 1e-25, mdot=2e17)
        assert xi_from_microphysics(m2, 1e4) == pytest.approx(0.5 * xi_from_microphysics(m1, 1e4), rel=1e-15)

    def test_escape_time(self):
        micro = MicroPhysics(6.652e-25, 6.652e-25, 6.652e-25, ne=1e22)
        assert micro.ne * micro.sigma_perp * 1e4 == pytest.approx(66.52, rel=1e-14)
        assert abs(escape_time(micro, 1e4) / T_ESC - 1.0) < 1e-12

    def test_missing_inputs(self):
        micro = MicroPhysics(1e-25, 1e-25, 1e-25)
        with pytest.raises(ValueError):
            xi_from_microphysics(micro, 1e4)
        with pytest.raises(ValueError):
            escape_time(micro, 1e4)

    def test_rejects_bad_cross_section(self):
        with pytest.raises(ValueError):
            MicroPhysics(0.0, 1e-25, 1e-25)
