import numpy as np
import pytest

from vortexsteer import experiment as ex
from vortexsteer import steering as st
from vortexsteer.qmath import BlochVector, DensityMatrix


class TestPlatonicSets:
    def test_three_settings_are_pauli_axes(self):
        mset = st.platonic_set(3)
        assert sorted(tuple(np.round(v, 12)) for v in mset.as_matrix().tolist()) == \
            sorted([(0.0, 0.0, 1.0), (1.0, 0.0, 0.0), (0.0, 1.0, 0.0)])

    def test_z_member_listed_first(self):
        assert st.platonic_set(2).directions[0] == BlochVector(0, 0, 1)
        assert st.platonic_set(3).directions[0] == BlochVector(0, 0, 1)

    def test_tetrahedron_gram(self):
        mat = st.platonic_set(4).as_matrix()
        gram = mat @ mat.T
        off = gram[~np.eye(4, dtype=bool)]
        assert np.allclose(off, -1 / 3, atol=1e-12)
        assert np.allclose(np.diag(gram), 1.0, atol=1e-12)

    def test_icosahedron_half_vertices(self):
        mat = st.platonic_set(6).as_matrix()
        assert np.allclose(np.linalg.norm(mat, axis=1), 1.0, atol=1e-12)
        gram = np.abs(mat @ mat.T)
        off = gram[~np.eye(6, dtype=bool)]
        assert np.allclose(off, 1 / np.sqrt(5), atol=1e-12)

    def test_unsupported_n(self):
        with pytest.raises(ValueError):
            st.platonic_set(5)

    def test_rejects_antipodal_directions(self):
        with pytest.raises(ValueError):
            st.MeasurementSet((BlochVector(0, 0, 1), BlochVector(0, 0, -1)))


class TestSteeringExact:
    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    @pytest.mark.parametrize("encoding_kind", ["polarization", "vortex"])
    def test_singlet_perfect_correlations(self, n, encoding_kind):
        state = ex.prepare_state(ex.NoiseModel(1.0), encoding_kind)
        est = st.steering_parameter_exact(state, st.platonic_set(n),
                                          encoding_kind, theta=0.0)
        assert est.s_value == pytest.approx(1.0, abs=1e-9)
        assert est.announce_fraction == pytest.approx(1.0, abs=1e-9)

    def test_werner_gives_visibility(self):
        v = 0.73
        state = ex.prepare_state(ex.NoiseModel(v), "polarization")
        est = st.steering_parameter_exact(state, st.platonic_set(3),
                                          "polarization", theta=0.0)
        assert est.s_value == pytest.approx(v, abs=1e-12)

    @pytest.mark.parametrize("theta", np.linspace(0, np.pi, 9))
    def test_polarization_closed_form_in_theta(self, theta):
        v = 0.9693
        state = ex.prepare_state(ex.NoiseModel(v), "polarization")
        est = st.steering_parameter_exact(state, st.platonic_set(3),
                                          "polarization", theta=theta)
        assert est.s_value == pytest.approx(v * (1 + 2 * np.cos(2 * theta)) / 3,
                                            abs=1e-10)

    def test_vortex_orientation_invariance(self):
        state = ex.prepare_state(ex.NoiseModel(0.9693), "vortex")
        values = [st.steering_parameter_exact(state, st.platonic_set(3),
                                              "vortex", theta=t).s_value
                  for t in np.linspace(0, 2 * np.pi, 37)]
        assert np.ptp(values) < 1e-9

    def test_linearity_in_state(self):
        mset = st.platonic_set(3)
        rho1 = ex.werner_state(0.9)
        rho2 = ex.werner_state(0.2)
        alpha = 0.37
        mix = DensityMatrix(alpha * rho1.entries + (1 - alpha) * rho2.entries)
        s1 = st.steering_parameter_exact(rho1, mset, "polarization").s_value
        s2 = st.steering_parameter_exact(rho2, mset, "polarization").s_value
        s_mix = st.steering_parameter_exact(mix, mset, "polarization").s_value
        assert s_mix == pytest.approx(alpha * s1 + (1 - alpha) * s2, abs=1e-10)

    def test_magnitude_never_exceeds_one(self):
        rng = np.random.default_rng(5)
        mset = st.platonic_set(4)
        for _ in range(10):
            g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            m = g @ g.conj().T
            rho = DensityMatrix(m / np.trace(m).real)
            est = st.steering_parameter_exact(rho, mset, "polarization",
                                              theta=rng.uniform(0, np.pi))
            assert abs(est.s_value) <= 1.0 + 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            st.steering_parameter_exact(ex.werner_state(1.0),
                                        st.platonic_set(3), "vortex")


class TestSteeringCounts:
    def test_all_agree_no_nulls(self):
        counts = np.zeros((3, 2, 3), dtype=int)
        counts[:, 0, 1] = 50  # alice +1, bob raw -1: agreement after negation
        counts[:, 1, 0] = 50
        est = st.steering_parameter_counts(counts)
        assert est.s_value == pytest.approx(1.0)
        assert est.announce_fraction == pytest.approx(1.0)
        assert est.std_err == pytest.approx(0.0)

    def test_fifty_fifty_gives_zero(self):
        counts = np.zeros((3, 2, 3), dtype=int)
        counts[:, :, :2] = 25
        est = st.steering_parameter_counts(counts)
        assert est.s_value == pytest.approx(0.0)

    def test_zero_announced_setting_raises(self):
        counts = np.zeros((3, 2, 3), dtype=int)
        counts[:, :, :2] = 10
        counts[1, :, :2] = 0
        counts[1, :, 2] = 10
        with pytest.raises(ValueError):
            st.steering_parameter_counts(counts)

    def test_monte_carlo_matches_exact_value(self):
        v = 0.9693
        state = ex.prepare_state(ex.NoiseModel(v), "polarization")
        result = ex.run_experiment(state, st.platonic_set(3),
                                   ex.ChannelModel(), ex.ThetaPolicy.fixed(0.0),
                                   trials=10**6, seed=99)
        est = result.estimate
        assert abs(est.s_value - v) < 3 * est.std_err

    def test_bad_shape_rejected(self):
        with pytest.raises(ValueError):
            st.steering_parameter_counts(np.zeros((3, 2)))


class TestSteeringEstimateInvariants:
    def test_mean_consistency_enforced(self):
        with pytest.raises(ValueError):
            st.SteeringEstimate(0.5, 0.0, 1.0, (0.1, 0.2, 0.3))

    def test_correlation_range_enforced(self):
        with pytest.raises(ValueError):
            st.SteeringEstimate(1.2, 0.0, 1.0, (1.2, 1.2, 1.2))
