"""Core model: thermal distribution, right-hand side, probe elimination, rate scaling."""

import numpy as np
import pytest

import rirsim as rs
from rirsim.errors import EdgePopulationTooLarge, ShapeMismatch, ZeroDetuning
from rirsim.model import ConfigurationWarning, kinetic_phase


def make_params(**overrides):
    base = dict(
        beta=0.1, n_atoms=100.0, kappa=50.0, gamma_pop=0.1, gamma_coh=1.0, a_in=1.0, sigma_p=1.0
    )
    base.update(overrides)
    return rs.ModelParams(**base)


class TestMomentumGrid:
    def test_sizes(self):
        grid = rs.MomentumGrid(5)
        assert grid.n_populations == 11
        assert grid.n_coherences == 10
        assert grid.momenta[0] == -5 and grid.momenta[-1] == 5
        assert grid.coherence_momenta[0] == -5 and grid.coherence_momenta[-1] == 4

    @pytest.mark.parametrize("bad", [0, -3, 1.5])
    def test_invalid_half_width(self, bad):
        with pytest.raises(ValueError):
            rs.MomentumGrid(bad)


class TestThermalDistribution:
    def test_zero_temperature_limit(self):
        pi = rs.thermal_distribution(rs.MomentumGrid(2), 1e-3)
        assert pi[2] == pytest.approx(1.0, abs=1e-12)
        assert pi[0] == 0.0 and pi[4] == 0.0

    def test_symmetry_and_normalization(self):
        pi = rs.thermal_distribution(rs.MomentumGrid(64), 3.7)
        assert np.array_equal(pi, pi[::-1])
        assert abs(pi.sum() - 1.0) < 1e-13
        assert np.all(pi >= 0)

    def test_gaussian_ratio(self):
        # direct evaluation of the Gaussian weight ratio between p = 0 and p = 1
        pi = rs.thermal_distribution(rs.MomentumGrid(64), 3.7)
        expected = np.exp(1.0 / (2.0 * 3.7**2))
        assert pi[64] / pi[65] == pytest.approx(expected, rel=1e-12)
        assert expected == pytest.approx(1.0372, abs=2e-4)

    def test_edge_guard(self):
        with pytest.raises(EdgePopulationTooLarge):
            rs.thermal_distribution(rs.MomentumGrid(4), 3.7)

    def test_invalid_sigma(self):
        with pytest.raises(ValueError):
            rs.thermal_distribution(rs.MomentumGrid(4), 0.0)


class TestModelParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            make_params(kappa=0.0)
        with pytest.raises(ValueError):
            make_params(gamma_pop=-0.1)
        with pytest.raises(ValueError):
            make_params(sigma_p=-1.0)

    def test_slow_coherence_warning(self):
        with pytest.warns(ConfigurationWarning):
            make_params(gamma_pop=0.5, gamma_coh=0.1)

    def test_cooperativity(self):
        params = make_params(beta=0.5, n_atoms=100.0, kappa=10.0, gamma_coh=2.0)
        assert rs.cooperativity(params) == pytest.approx(2 * 100 * 0.25 / (10 * 2))


class TestRhs:
    def test_thermal_fixed_point(self):
        grid = rs.MomentumGrid(8)
        params = make_params(a_in=0.0)
        state = rs.EnsembleState.thermal(grid, params, a2=0.0)
        d = rs.rhs(state, params, delta=3.7)
        assert np.all(d.populations == 0.0)
        assert np.all(d.coherences == 0.0)
        assert d.a2 == 0.0

    def test_decoupled_probe_relaxation(self):
        grid = rs.MomentumGrid(8)
        params = make_params(beta=0.0, kappa=2.0, a_in=1.0)
        state = rs.EnsembleState.thermal(grid, params, a2=0.0)
        d = rs.rhs(state, params, delta=0.0)
        assert np.all(d.populations == 0.0)
        assert np.all(d.coherences == 0.0)
        assert d.a2 == pytest.approx(params.kappa / 2.0)

    def test_single_coherence_hand_values(self):
        # one unit coherence on the (0, 1) pair, beta = i, no damping:
        # da2 = i*beta*N*eta* = -1, deta_0 = -4i*eta_0
        grid = rs.MomentumGrid(8)
        params = make_params(beta=1j, n_atoms=1.0, kappa=10.0, gamma_pop=0.0, gamma_coh=0.0, a_in=0.0)
        eta = np.zeros(grid.n_coherences, dtype=complex)
        eta[grid.half_width] = 1.0
        state = rs.EnsembleState(np.zeros(grid.n_populations), eta, 0.0)
        d = rs.rhs(state, params, delta=0.0)
        assert d.a2 == pytest.approx(-1.0)
        assert d.coherences[grid.half_width] == pytest.approx(-4.0j)
        assert np.all(d.populations == 0.0)

    def test_kinetic_phase_values(self):
        grid = rs.MomentumGrid(3)
        # 4*(p^2 - (p+1)^2) for p = -3..2
        expected = 4.0 * np.array([9 - 4, 4 - 1, 1 - 0, 0 - 1, 1 - 4, 4 - 9], dtype=float)
        assert np.allclose(kinetic_phase(grid, 1.0), expected, atol=0)

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_population_derivative_real_and_conserving(self, seed):
        rng = np.random.default_rng(seed)
        grid = rs.MomentumGrid(12)
        params = make_params(beta=0.3 + 0.1j, gamma_pop=0.25)
        pops = rng.random(grid.n_populations)
        pops /= pops.sum()
        cohs = rng.normal(size=grid.n_coherences) + 1j * rng.normal(size=grid.n_coherences)
        a2 = complex(rng.normal(), rng.normal())
        state = rs.EnsembleState(pops, cohs, a2)
        d = rs.rhs(state, params, delta=rng.normal())
        assert d.populations.dtype == np.float64
        assert np.all(np.isfinite(d.populations))
        # the coupling telescopes: the total only relaxes toward the thermal total
        pi_th = rs.thermal_distribution(grid, params.sigma_p)
        expected_total = -params.gamma_pop * (pops.sum() - pi_th.sum())
        assert d.populations.sum() == pytest.approx(expected_total, abs=1e-13)

    def test_shape_mismatch(self):
        grid = rs.MomentumGrid(4)
        params = make_params(sigma_p=0.5)
        state = rs.EnsembleState.thermal(grid, params)
        with pytest.raises(ShapeMismatch):
            rs.rhs(state, params, 0.0, pi_th=np.zeros(3))
        with pytest.raises(ShapeMismatch):
            rs.EnsembleState(np.zeros(9), np.zeros(9, complex), 0.0)

    def test_nonfinite_delta_rejected(self):
        grid = rs.MomentumGrid(4)
        params = make_params(sigma_p=0.5)
        state = rs.EnsembleState.thermal(grid, params)
        with pytest.raises(ValueError):
            rs.rhs(state, params, np.nan)


class TestAdiabaticProbe:
    def test_no_medium_response(self):
        params = make_params(a_in=0.7 + 0.2j)
        assert rs.adiabatic_probe(np.zeros(8, complex), params) == params.a_in

    def test_zero_coupling(self):
        params = make_params(beta=0.0, a_in=1.5)
        eta = np.full(8, 0.3 + 0.1j)
        assert rs.adiabatic_probe(eta, params) == params.a_in

    def test_closed_form_value(self):
        params = make_params(beta=1.0, n_atoms=10.0, kappa=100.0, a_in=1.0)
        eta = np.zeros(8, dtype=complex)
        eta[0] = 0.1
        assert rs.adiabatic_probe(eta, params) == pytest.approx(1.0 + 0.02j)

    def test_consistency_with_rhs(self):
        # the quasi-steady value is the root of the probe equation
        rng = np.random.default_rng(7)
        grid = rs.MomentumGrid(6)
        params = make_params(beta=0.4 - 0.2j, n_atoms=30.0, kappa=80.0, a_in=0.9 + 0.1j)
        eta = rng.normal(size=grid.n_coherences) + 1j * rng.normal(size=grid.n_coherences)
        a2 = rs.adiabatic_probe(eta, params)
        state = rs.EnsembleState(rs.thermal_distribution(grid, params.sigma_p), eta, a2)
        d = rs.rhs(state, params, delta=1.2)
        assert abs(d.a2) < 1e-12 * params.kappa


class TestScaledRates:
    def test_identity_at_reference(self):
        assert rs.scaled_rates(2.0, (2.0, 0.1, 0.5)) == (0.1, 0.5)

    def test_factor_of_four(self):
        gp, gc = rs.scaled_rates(8.0, (2.0, 0.1, 0.5))
        assert gp == pytest.approx(0.1 / 8.0)
        assert gc == pytest.approx(0.5 / 8.0)

    def test_sign_insensitive_and_decreasing(self):
        gp1, _ = rs.scaled_rates(-3.0, (1.0, 0.2, 1.0))
        gp2, _ = rs.scaled_rates(3.0, (1.0, 0.2, 1.0))
        assert gp1 == gp2
        gp3, _ = rs.scaled_rates(5.0, (1.0, 0.2, 1.0))
        assert gp3 < gp2

    @pytest.mark.parametrize("c", [0.5, 2.0, 7.3])
    def test_scale_covariance(self, c):
        ref = (1.5, 0.12, 0.9)
        gp1, gc1 = rs.scaled_rates(c * 2.0, ref)
        gp2, gc2 = rs.scaled_rates(2.0, ref)
        assert gp1 == pytest.approx(c**-1.5 * gp2, rel=1e-12)
        assert gc1 == pytest.approx(c**-1.5 * gc2, rel=1e-12)

    def test_exponent_recovered_by_fit(self):
        deltas = np.geomspace(1.0, 10.0, 10)
        rates = np.array([rs.scaled_rates(d, (1.0, 0.2, 1.0))[0] for d in deltas])
        fit = rs.fit_power_law(deltas, rates)
        # the model curve behind the measured 1.57 +- 0.09
        assert fit.params["exponent"] == pytest.approx(-1.5, abs=1e-12)

    def test_zero_detuning(self):
        with pytest.raises(ZeroDetuning):
            rs.scaled_rates(0.0, (1.0, 0.1, 0.2))


class TestChirpSchedule:
    def test_between_infers_direction(self):
        s = rs.ChirpSchedule.between(2.0, -45.0, 0.8)
        assert s.direction == -1
        assert s.duration == pytest.approx(47.0 / 0.8)
        assert s.delta_at(s.duration) == pytest.approx(-45.0)

    def test_inconsistent_direction_rejected(self):
        with pytest.raises(ValueError):
            rs.ChirpSchedule(0.0, 10.0, 1.0, -1)
        with pytest.raises(ValueError):
            rs.ChirpSchedule(0.0, 0.0, 1.0, 1)
        with pytest.raises(ValueError):
            rs.ChirpSchedule(0.0, 10.0, -1.0, 1)
