import numpy as np
import pytest

from vortexsteer import bounds as bd
from vortexsteer import experiment as ex
from vortexsteer import steering as st
from vortexsteer.qmath import BlochVector

M3 = st.platonic_set(3)
M4 = st.platonic_set(4)


class TestStrategyPayoff:
    def test_single_aligned_answer(self):
        s = bd.CheatStrategy(BlochVector(0, 0, 1), (1, 0, 0))
        payoff, answered = bd.strategy_payoff(s, M3)
        assert payoff == pytest.approx(1.0)
        assert answered == 1

    def test_diagonal_state_all_answered(self):
        s = bd.CheatStrategy(BlochVector.unit([1, 1, 1]), (1, 1, 1))
        payoff, answered = bd.strategy_payoff(s, M3)
        assert payoff == pytest.approx(np.sqrt(3))
        assert answered == 3

    def test_all_null_rejected(self):
        with pytest.raises(ValueError):
            bd.CheatStrategy(BlochVector(0, 0, 1), (0, 0, 0))


class TestDeterministicBound:
    def test_two_orthogonal_axes(self):
        assert bd.deterministic_bound(st.platonic_set(2)) == pytest.approx(
            1 / np.sqrt(2), abs=1e-12)

    def test_three_pauli_axes(self):
        assert bd.deterministic_bound(M3) == pytest.approx(1 / np.sqrt(3),
                                                           abs=1e-12)

    def test_tetrahedron_against_dense_grid(self):
        # independent oracle: exhaustive sign patterns x dense sphere grid
        analytic = bd.deterministic_bound(M4)
        grid_value = bd.bound_oracle(M4, xi=1.0, sphere_resolution=1e-2)
        assert analytic >= grid_value - 1e-12
        assert analytic == pytest.approx(grid_value, abs=1e-4)


class TestLossTolerantBound:
    def test_xi_one_matches_deterministic(self):
        for mset in (st.platonic_set(2), M3, M4, st.platonic_set(6)):
            c, _ = bd.loss_tolerant_bound(mset, 1.0)
            assert c == pytest.approx(bd.deterministic_bound(mset), abs=1e-9)

    def test_answer_one_setting_perfectly(self):
        c, witness = bd.loss_tolerant_bound(M3, 1 / 3)
        assert c == pytest.approx(1.0, abs=1e-9)
        assert len(witness) <= 2

    def test_oracle_agreement_n3(self):
        c, _ = bd.loss_tolerant_bound(M3, 2 / 3)
        assert c == pytest.approx(bd.bound_oracle(M3, 2 / 3), abs=1e-6)

    @pytest.mark.parametrize("mset", [M3, M4], ids=["n3", "n4"])
    @pytest.mark.parametrize("xi", [0.4, 0.5, 0.7, 1.0])
    def test_lp_within_oracle_band(self, mset, xi):
        lp, _ = bd.loss_tolerant_bound(mset, xi)
        oracle = bd.bound_oracle(mset, xi)
        assert lp >= oracle - 1e-4
        assert lp <= oracle + 1e-3

    def test_invalid_xi(self):
        for xi in (0.0, -0.2, 1.5):
            with pytest.raises(ValueError):
                bd.loss_tolerant_bound(M3, xi)

    def test_witness_support_at_most_two(self):
        for xi in np.linspace(0.35, 1.0, 14):
            _, witness = bd.loss_tolerant_bound(M3, float(xi))
            assert 1 <= len(witness) <= 2
            assert sum(w for w, _ in witness) == pytest.approx(1.0, abs=1e-9)

    def test_per_setting_floor_is_no_easier_for_the_cheater(self):
        for xi in (0.45, 0.6, 0.8):
            avg, _ = bd.loss_tolerant_bound(M3, xi)
            strict, _ = bd.loss_tolerant_bound(M3, xi, per_setting=True)
            assert strict <= avg + 1e-9


class TestOracle:
    def test_monotone_in_xi(self):
        assert bd.bound_oracle(M3, 0.5) >= bd.bound_oracle(M3, 0.9) - 1e-12

    def test_floor_value(self):
        assert bd.bound_oracle(M3, 1 / 3) == pytest.approx(1.0, abs=1e-4)

    def test_resolution_guard(self):
        with pytest.raises(ValueError):
            bd.bound_oracle(M3, 0.5, sphere_resolution=0.5)


class TestBoundCurve:
    def test_n3_endpoints_and_monotonicity(self):
        grid = np.linspace(1 / 3 + 1e-9, 1.0, 30)
        curve = bd.bound_curve(M3, grid)
        assert curve.c_values[0] == pytest.approx(1.0, abs=1e-6)
        assert curve.c_values[-1] == pytest.approx(1 / np.sqrt(3), abs=1e-9)
        assert all(b <= a + 1e-9 for a, b in zip(curve.c_values,
                                                 curve.c_values[1:]))

    def test_n4_versus_n3_relationship(self):
        # n=4 lies at-or-below n=3 at low and high transmission, but NOT in a
        # mid-transmission window: tetrahedral two-setting subsets give the
        # cheater payoff |u_i - u_j|/2 = 0.8165 per answered setting versus
        # 0.7071 for orthogonal axes.  The crossing is confirmed by the
        # independent brute-force oracle, so it is a property of the bound,
        # not an artifact of the LP.
        for xi in (0.42, 0.45, 0.65, 0.8, 1.0):
            c3, _ = bd.loss_tolerant_bound(M3, xi)
            c4, _ = bd.loss_tolerant_bound(M4, xi)
            assert c4 <= c3 + 1e-9
        xi = 0.512
        c3, _ = bd.loss_tolerant_bound(M3, xi)
        c4, _ = bd.loss_tolerant_bound(M4, xi)
        assert c4 > c3
        assert bd.bound_oracle(M4, xi) > bd.bound_oracle(M3, xi)

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            bd.bound_curve(M3, [0.0, 0.5])
        with pytest.raises(ValueError):
            bd.bound_curve(M3, [0.5, 0.4])


def test_quantum_separable_state_never_beats_bound():
    # no false violations: white noise at realistic loss stays below C_3
    mset = M3
    channel = ex.ChannelModel(bob_efficiency=0.45)
    state = ex.prepare_state(ex.NoiseModel(0.0), "polarization")
    for seed in range(5):
        r = ex.run_experiment(state, mset, channel, ex.ThetaPolicy.fixed(0.0),
                              trials=200_000, seed=seed)
        assert r.estimate.s_value <= r.bound_at_observed_xi + 3 * r.estimate.std_err
        assert not r.violated
