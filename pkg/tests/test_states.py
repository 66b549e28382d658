import numpy as np
import pytest

from hqrsim.coherent import RingSpec, norm_constants
from hqrsim.numerics import negativity
from hqrsim.states import (ChannelParams, DispersiveInteraction,
                           PhaseMixtureWeights, loss_weights,
                           matter_light_mixture, matter_light_pure,
                           matter_matter_components, negativity_scan)


class TestChannelParams:
    def test_gamma(self):
        ch = ChannelParams(5.0)
        assert abs(ch.gamma - np.exp(-5 / 22)) < 1e-15
        assert ChannelParams(0.0).gamma == 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            ChannelParams(-1.0)
        with pytest.raises(ValueError):
            ChannelParams(5.0, L_att_km=0.0)


class TestDispersiveInteraction:
    def test_spin_eigenvalues(self):
        assert np.allclose(DispersiveInteraction(2, np.pi).spin_eigenvalues, [-0.5, 0.5])
        assert np.allclose(DispersiveInteraction(3, 2 * np.pi / 3).spin_eigenvalues, [-1, 0, 1])
        assert np.allclose(DispersiveInteraction(4, -np.pi / 2).spin_eigenvalues,
                           [-1.5, -0.5, 0.5, 1.5])

    def test_angle_constraint(self):
        with pytest.raises(ValueError):
            DispersiveInteraction(3, np.pi)


class TestPhaseMixtureWeights:
    def test_validation(self):
        with pytest.raises(ValueError):
            PhaseMixtureWeights(3, [0.5, 0.5, 0.5])
        with pytest.raises(ValueError):
            PhaseMixtureWeights(3, [1.2, -0.2, 0.0])
        w = PhaseMixtureWeights(2, [0.25, 0.75])
        assert w.p.sum() == pytest.approx(1.0)


class TestMatterLightPure:
    def test_d2_expansion(self):
        # (|0>|alpha> + |1>|-alpha>)/sqrt(2) in the even/odd cat basis
        alpha = 0.9
        state = matter_light_pure(2, alpha)
        n = norm_constants(RingSpec(2, alpha))
        expect = np.array([[np.sqrt(n[0]), np.sqrt(n[1])],
                           [np.sqrt(n[0]), -np.sqrt(n[1])]]) / (2 * np.sqrt(2))
        assert np.allclose(state.coefficient_matrix(), expect, atol=1e-12)

    def test_zero_amplitude_product(self):
        state = matter_light_pure(3, 0.0)
        c = state.coefficient_matrix()
        assert np.allclose(c[:, 0], 1 / np.sqrt(3))
        assert np.allclose(c[:, 1:], 0.0)

    @pytest.mark.parametrize("d,alpha", [(2, 0.6), (3, 1.2), (4, 0.4), (5, 2.0)])
    def test_normalized(self, d, alpha):
        v = matter_light_pure(d, alpha).statevector()
        assert abs(np.vdot(v, v).real - 1.0) < 1e-10


class TestMatterLightMixture:
    def test_lossless_is_pure(self):
        dm, w = matter_light_mixture(3, 1.0, ChannelParams(0.0))
        assert np.allclose(w.p, [1, 0, 0], atol=1e-12)
        ev = np.linalg.eigvalsh(dm.matrix)
        assert abs(ev[-1] - 1.0) < 1e-10

    def test_d2_weights(self):
        ch = ChannelParams(8.0)
        _, w = matter_light_mixture(2, 1.1, ch)
        n = norm_constants(RingSpec(2, np.sqrt(1 - ch.gamma) * 1.1))
        assert np.allclose(w.p, n / 4, atol=1e-12)

    def test_d3_default_weights(self):
        # leading weight 0.7494 at the 5 km / alpha 1.2 operating point
        _, w = matter_light_mixture(3, 1.2, ChannelParams(5.0))
        assert np.allclose(w.p, [0.749331796, 0.094219005, 0.156449199], atol=1e-9)
        assert np.allclose(w.p, [0.7494, 0.0942, 0.1564], atol=1e-4)

    def test_d3_gram_weights_differ(self):
        _, w = matter_light_mixture(3, 1.2, ChannelParams(5.0), model="gram")
        assert np.allclose(w.p, [0.749332, 0.031989, 0.218679], atol=5e-6)

    @pytest.mark.parametrize("d", [2, 3, 4])
    @pytest.mark.parametrize("alpha", [0.3, 1.0, 2.0])
    @pytest.mark.parametrize("L0", [2.0, 5.0, 10.0, 20.0])
    def test_density_matrix_invariants(self, d, alpha, L0):
        dm, _ = matter_light_mixture(d, alpha, ChannelParams(L0))
        m = dm.matrix
        assert np.max(np.abs(m - m.conj().T)) < 1e-10
        assert abs(np.trace(m).real - 1.0) < 1e-10
        assert np.linalg.eigvalsh(m).min() > -1e-9

    def test_spot_checked_entries(self):
        # six entries frozen from a 40-digit evaluation of the expansion
        # rho[(q,r),(q',r')] = sum_m w_m e^{-2 pi i (q-q') m / 3}/3 c_r^(q) conj(c_r'^(q'))
        dm, _ = matter_light_mixture(3, 1.2, ChannelParams(5.0))
        m = dm.matrix

        def entry(q, r, qp, rp):
            return m[q * 3 + r, qp * 3 + rp]

        assert entry(0, 0, 0, 0) == pytest.approx(0.132807504570838749, abs=1e-10)
        assert entry(0, 0, 1, 0) == pytest.approx(0.0828715766024365211 - 0.00715738546674012436j, abs=1e-10)
        assert entry(0, 1, 1, 1) == pytest.approx(-0.0189471599116727566 + 0.0405145195061614405j, abs=1e-10)
        assert entry(1, 1, 2, 2) == pytest.approx(0.0599174539445091131 - 0.00517490232053690053j, abs=1e-10)
        assert entry(0, 0, 2, 2) == pytest.approx(-0.0469674026519346923 + 0.0672355586133335605j, abs=1e-10)
        assert entry(2, 1, 0, 2) == pytest.approx(-0.0254771301005665587 + 0.054477488406297461j, abs=1e-10)


class TestMatterMatterComponents:
    def test_lossless_single_component(self):
        mix = matter_matter_components(3, 0.8, ChannelParams(0.0))
        assert np.allclose(mix.weights.p, [1, 0, 0], atol=1e-12)
        assert mix.bell_phase_index(0) == 0

    def test_d3_benchmark_weights(self):
        mix = matter_matter_components(3, 0.5, ChannelParams(20.0))
        assert mix.weights.p[0] == pytest.approx(0.861808, abs=1e-6)
        assert np.allclose(mix.weights.p, [0.8618077, 0.0492632, 0.0889291], atol=1e-7)

    def test_bell_pairing(self):
        # component m couples Bell phase index (d - m) mod d; for d=3 the
        # pairing is C0 -> phi_0j, C1 -> phi_2j, C2 -> phi_1j
        mix = matter_matter_components(3, 1.0, ChannelParams(5.0))
        assert [mix.bell_phase_index(m) for m in range(3)] == [0, 2, 1]

    def test_d4_structure(self):
        mix = matter_matter_components(4, 0.9, ChannelParams(10.0))
        assert [mix.bell_phase_index(m) for m in range(4)] == [0, 3, 2, 1]
        assert abs(mix.weights.p.sum() - 1.0) < 1e-12
        table = mix.pairing_table()
        assert len(table) == 4
        assert table[1][2] == 3

    @pytest.mark.parametrize("d,alpha,L0", [(2, 1.0, 5.0), (3, 1.2, 5.0), (4, 0.7, 15.0)])
    def test_weights_equal_mixture_weights(self, d, alpha, L0):
        # the second interaction is unitary, so the weights cannot change
        ch = ChannelParams(L0)
        _, w_light = matter_light_mixture(d, alpha, ch)
        w_matter = matter_matter_components(d, alpha, ch).weights
        assert np.allclose(w_light.p, w_matter.p, atol=1e-14)

    def test_loss_weights_model_switch(self):
        ch = ChannelParams(5.0)
        with pytest.raises(ValueError):
            loss_weights(3, 1.0, ch, model="bogus")


class TestNegativityScan:
    def test_zero_amplitude_is_product(self):
        (_, n0), = negativity_scan(3, 5.0, [0.0])
        assert n0 <= 1e-9

    def test_lossless_large_amplitude_maximally_entangled(self):
        (_, n), = negativity_scan(3, 0.0, [6.0])
        assert abs(n - 1.0) < 1e-3

    def test_ten_km_beats_qubit_bell(self):
        pts = negativity_scan(3, 10.0, np.linspace(0.0, 2.5, 100))
        assert max(n for _, n in pts) > 0.5

    def test_monotone_in_distance(self):
        alphas = [0.5, 1.0, 1.5]
        prev = None
        for L0 in (2.0, 5.0, 10.0, 20.0):
            ns = np.array([n for _, n in negativity_scan(3, L0, alphas)])
            if prev is not None:
                assert np.all(ns <= prev + 1e-9)
            prev = ns

    def test_matches_direct_negativity(self):
        ch = ChannelParams(5.0)
        dm, _ = matter_light_mixture(3, 1.0, ch, model="gram")
        (_, n), = negativity_scan(3, 5.0, [1.0])
        assert abs(n - negativity(dm)) < 1e-12
