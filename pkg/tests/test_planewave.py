import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nuccr.params import FLAVORS, OscillationParams, default_params
from nuccr.planewave import (FlavorAmplitudes, evolve_amplitudes,
                             pure_density_matrix, transition_probabilities)
from nuccr.qinfo import (coherence_hs, nonlocal_coherence_hs_bipartite,
                         nonlocal_coherence_hs_tripartite, partial_trace)

import oracles


class TestEvolveAmplitudes:
    def test_zero_baseline_is_initial_flavor(self, params):
        for i, flavor in enumerate(FLAVORS):
            a = evolve_amplitudes(flavor, params, 0.0).a
            expected = np.zeros(3)
            expected[i] = 1.0
            assert np.abs(a - expected).max() <= 1e-12

    @given(l_over_e=st.floats(0, 1e6))
    def test_normalization(self, l_over_e):
        a = evolve_amplitudes("e", default_params(), l_over_e).a
        assert abs((np.abs(a) ** 2).sum() - 1.0) <= 1e-12

    @pytest.mark.parametrize("flavor,beta", [("e", 1), ("e", 0), ("mu", 2)])
    @pytest.mark.parametrize("l_over_e", [500.0, 137.0, 12345.6])
    def test_against_extended_precision_sum(self, params, flavor, beta, l_over_e):
        amps = evolve_amplitudes(flavor, params, l_over_e)
        got = abs(amps.a[beta]) ** 2
        want = oracles.transition_probability_sum(
            FLAVORS.index(flavor), beta, params, l_over_e)
        assert abs(got - want) <= 1e-10

    def test_negative_baseline_rejected(self, params):
        with pytest.raises(ValueError):
            evolve_amplitudes("e", params, -1.0)

    def test_non_finite_baseline_rejected(self, params):
        with pytest.raises(ValueError):
            evolve_amplitudes("e", params, math.inf)

    def test_unknown_flavor_rejected(self, params):
        with pytest.raises(ValueError):
            evolve_amplitudes("sterile", params, 1.0)

    def test_unnormalized_amplitudes_rejected(self):
        with pytest.raises(ValueError, match="normalized"):
            FlavorAmplitudes("e", np.array([1.0, 0.5, 0.0]), 100.0)


class TestTransitionProbabilities:
    def test_zero_baseline(self, params):
        assert transition_probabilities(
            evolve_amplitudes("e", params, 0.0)) == pytest.approx((1, 0, 0), abs=1e-12)

    @pytest.mark.parametrize("l_over_e", [0.0, 250.0, 500.0, 3e4])
    def test_sum_to_one_and_bounded(self, params, l_over_e):
        probs = transition_probabilities(evolve_amplitudes("mu", params, l_over_e))
        assert abs(sum(probs) - 1.0) <= 1e-12
        assert all(0.0 <= p <= 1.0 for p in probs)

    def test_matches_oracle_at_500(self, params):
        probs = transition_probabilities(evolve_amplitudes("e", params, 500.0))
        for beta in range(3):
            want = oracles.transition_probability_sum(0, beta, params, 500.0)
            assert abs(probs[beta] - want) <= 1e-10


class TestPureDensityMatrix:
    def test_initial_state_projector(self, params):
        rho = pure_density_matrix(evolve_amplitudes("e", params, 0.0))
        expected = np.zeros((8, 8))
        expected[4, 4] = 1.0  # |100><100|
        assert np.abs(rho.entries - expected).max() <= 1e-12

    def test_printed_matrix_elements(self, params):
        amps = evolve_amplitudes("e", params, 777.0)
        rho = pure_density_matrix(amps)
        a_e, a_mu, a_tau = amps.a
        assert rho.entries[1, 1] == pytest.approx(abs(a_tau) ** 2, abs=1e-15)
        assert rho.entries[4, 4] == pytest.approx(abs(a_e) ** 2, abs=1e-15)
        assert rho.entries[1, 2] == pytest.approx(a_tau * a_mu.conjugate(), abs=1e-15)
        assert rho.entries[2, 4] == pytest.approx(a_mu * a_e.conjugate(), abs=1e-15)

    def test_support_pattern(self, params):
        rho = pure_density_matrix(evolve_amplitudes("tau", params, 321.0))
        live = {1, 2, 4}
        for i in range(8):
            for j in range(8):
                if i not in live or j not in live:
                    assert rho.entries[i, j] == 0

    @pytest.mark.parametrize("l_over_e", [0.0, 64.0, 1.5e3, 1.9e4])
    def test_purity(self, params, l_over_e):
        rho = pure_density_matrix(evolve_amplitudes("e", params, l_over_e))
        assert abs(rho.purity() - 1.0) <= 1e-12
        assert abs(rho.entries.trace().real - 1.0) <= 1e-12


class TestReductions:
    """Partial traces must reproduce the printed 4x4 and 2x2 reductions."""

    @pytest.mark.parametrize("l_over_e", [0.0, 433.0, 8.2e3])
    def test_pair_reductions(self, params, l_over_e):
        amps = evolve_amplitudes("e", params, l_over_e)
        rho = pure_density_matrix(amps)
        a_e, a_mu, a_tau = amps.a
        p_e, p_mu, p_tau = (abs(z) ** 2 for z in amps.a)

        want_emu = np.zeros((4, 4), dtype=complex)
        want_emu[0, 0] = p_tau
        want_emu[1, 1], want_emu[2, 2] = p_mu, p_e
        want_emu[1, 2], want_emu[2, 1] = a_mu * a_e.conjugate(), a_e * a_mu.conjugate()
        got = partial_trace(rho, ("e", "mu"))
        assert np.abs(got.entries - want_emu).max() <= 1e-12
        assert got.qubit_labels == ("e", "mu")

        want_etau = np.zeros((4, 4), dtype=complex)
        want_etau[0, 0] = p_mu
        want_etau[1, 1], want_etau[2, 2] = p_tau, p_e
        want_etau[1, 2], want_etau[2, 1] = a_tau * a_e.conjugate(), a_e * a_tau.conjugate()
        assert np.abs(partial_trace(rho, ("e", "tau")).entries - want_etau).max() <= 1e-12

        want_mutau = np.zeros((4, 4), dtype=complex)
        want_mutau[0, 0] = p_e
        want_mutau[1, 1], want_mutau[2, 2] = p_tau, p_mu
        want_mutau[1, 2], want_mutau[2, 1] = a_tau * a_mu.conjugate(), a_mu * a_tau.conjugate()
        assert np.abs(partial_trace(rho, ("mu", "tau")).entries - want_mutau).max() <= 1e-12

    @pytest.mark.parametrize("l_over_e", [0.0, 433.0, 8.2e3])
    def test_single_reductions_are_diagonal(self, params, l_over_e):
        amps = evolve_amplitudes("e", params, l_over_e)
        rho = pure_density_matrix(amps)
        p_e, p_mu, p_tau = transition_probabilities(amps)
        cases = {"e": (p_tau + p_mu, p_e), "mu": (p_tau + p_e, p_mu),
                 "tau": (p_e + p_mu, p_tau)}
        for flavor, diag in cases.items():
            got = partial_trace(rho, (flavor,)).entries
            assert np.abs(got - np.diag(diag)).max() <= 1e-12


class TestTwoFlavorLimit:
    """theta13 = theta23 = 0 decouples tau and reproduces the 2-flavor case."""

    @pytest.fixture
    def two_flavor_params(self):
        p = default_params()
        return OscillationParams(p.theta12, 0.0, 0.0, 0.0,
                                 p.dm2_21, p.dm2_31, p.dm2_31 - p.dm2_21)

    @pytest.mark.parametrize("l_over_e", [350.0, 5e3, 1.7e4])
    def test_local_coherence_vanishes_and_nonlocal_splits(
            self, two_flavor_params, l_over_e):
        amps = evolve_amplitudes("e", two_flavor_params, l_over_e)
        rho = pure_density_matrix(amps)
        p_ee, p_emu, p_etau = transition_probabilities(amps)
        assert p_etau <= 1e-30

        rho_e = partial_trace(rho, ("e",))
        assert coherence_hs(rho_e) == 0.0

        want = 2.0 * p_ee * p_emu
        assert abs(nonlocal_coherence_hs_tripartite(rho, "e") - want) <= 1e-12
        rho_emu = partial_trace(rho, ("e", "mu"))
        assert abs(nonlocal_coherence_hs_bipartite(rho_emu) - want) <= 1e-12
