import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sshjump.gaussian import (
    CovarianceState,
    DeePartition,
    SpectrumError,
    dee,
    default_partition,
    entropy_bits,
    entropy_from_eigenvalues,
    ground_state,
    load_covariance_binary,
    parity_block_modes,
    reduced,
    save_covariance_binary,
    save_covariance_csv,
)
from sshjump.model import build_hamiltonian

from conftest import make_spec, random_slater_g, random_valid_g


class TestGroundState:
    def test_dimerized_topological_edge_pair(self, dimerized_gs_l8):
        g = dimerized_gs_l8.g
        for i, j in [(0, 0), (7, 7), (0, 7), (7, 0)]:
            assert abs(g[i, j] - 0.5) < 1e-12
        # each occupied bulk dimer contributes the Bell block [[1,1],[1,1]]/2
        for a in (1, 3, 5):
            assert np.allclose(g[a : a + 2, a : a + 2], 0.5 * np.ones((2, 2)), atol=1e-12)

    def test_dimerized_trivial_blocks(self):
        g = ground_state(build_hamiltonian(make_spec(4, v=1.0, w=0.0))).g
        assert abs(g[0, 7]) < 1e-12
        for a in (0, 2, 4, 6):
            assert np.allclose(g[a : a + 2, a : a + 2], 0.5 * np.ones((2, 2)), atol=1e-12)

    def test_edge_correlation_near_half_l32(self):
        # single-particle diagonalization oracle at L=32, v/w = 0.1
        g = ground_state(build_hamiltonian(make_spec(16, v=0.1, w=1.0))).g
        assert abs(abs(g[0, 31]) - 0.5) < 1e-2
        eps, _, _ = parity_block_modes(build_hamiltonian(make_spec(16, v=0.1, w=1.0)))
        assert abs(eps[16] - eps[15]) < 1e-12  # mid-gap splitting below threshold

    def test_matches_dense_many_body_gs_l8(self, dimerized_gs_l8):
        from sshjump.oracle import covariance_from_dense, dense_ground_state

        dense = dense_ground_state(make_spec(4, v=0.3, w=1.0))
        gauss = ground_state(build_hamiltonian(make_spec(4, v=0.3, w=1.0)))
        assert np.abs(covariance_from_dense(dense) - gauss.g).max() < 1e-10

    def test_rejects_asymmetric_input(self):
        h = np.arange(16.0).reshape(4, 4)
        with pytest.raises(ValueError):
            ground_state(h)

    def test_rejects_parity_breaking_h(self):
        h = build_hamiltonian(make_spec(3, v=1.0, w=2.0))
        h[0, 0] = 0.5  # on-site defect at one edge only
        with pytest.raises(ValueError, match="parity"):
            ground_state(h)

    def test_rejects_bad_filling(self):
        h = build_hamiltonian(make_spec(2, v=1.0, w=2.0))
        with pytest.raises(ValueError):
            ground_state(h, filling=5)

    def test_trace_equals_filling(self):
        h = build_hamiltonian(make_spec(5, v=0.4, w=1.2))
        for filling in (0, 2, 5, 10):
            g = ground_state(h, filling).g
            assert abs(np.trace(g).real - filling) < 1e-10


class TestReduced:
    def test_full_subset_is_identity_operation(self, dimerized_gs_l8):
        g = dimerized_gs_l8.g
        assert np.array_equal(reduced(g, np.arange(8)), g)

    def test_single_edge_site(self, dimerized_gs_l8):
        sub = reduced(dimerized_gs_l8.g, np.array([0]))
        assert sub.shape == (1, 1) and abs(sub[0, 0] - 0.5) < 1e-12

    def test_bulk_dimer_block(self, dimerized_gs_l8):
        sub = reduced(dimerized_gs_l8.g, np.array([1, 2]))
        assert np.allclose(sub, 0.5 * np.ones((2, 2)), atol=1e-12)

    def test_empty_subset(self, dimerized_gs_l8):
        sub = reduced(dimerized_gs_l8.g, np.array([], dtype=int))
        assert sub.shape == (0, 0)
        assert entropy_bits(sub) == 0.0


class TestEntropy:
    def test_half_filled_mode_is_one_bit(self):
        assert abs(entropy_from_eigenvalues(np.array([0.5])) - 1.0) < 1e-12

    def test_product_state_has_zero_entropy(self):
        assert entropy_from_eigenvalues(np.array([0.0, 1.0, 1.0, 0.0])) == 0.0

    def test_post_sbd_jump_reduced_spectrum_value(self):
        # the 4-site post-jump state reduced to A u B has spectrum
        # {3/4, 0, 0}, giving 2 - (3/4) log2 3
        s = entropy_from_eigenvalues(np.array([0.75, 0.0, 0.0]))
        assert abs(s - (2.0 - 0.75 * np.log2(3.0))) < 1e-12

    def test_hard_error_outside_tolerance(self):
        with pytest.raises(SpectrumError):
            entropy_from_eigenvalues(np.array([-1e-5, 0.5]))
        with pytest.raises(SpectrumError):
            entropy_from_eigenvalues(np.array([0.5, 1.0 + 1e-5]))

    def test_clamp_absorbs_tiny_excursions(self):
        assert entropy_from_eigenvalues(np.array([-1e-9, 1.0 + 1e-9])) == 0.0

    @given(st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_unitary_invariance(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 7))
        g = random_valid_g(n, seed)
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        q, _ = np.linalg.qr(m)
        assert abs(entropy_bits(g) - entropy_bits(q @ g @ q.conj().T)) < 1e-8

    @given(st.integers(0, 10_000))
    @settings(max_examples=30, deadline=None)
    def test_complement_entropy_matches_on_pure_states(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 9))
        filling = int(rng.integers(1, n))
        g = random_slater_g(n, filling, seed)
        cut = int(rng.integers(1, n))
        left = np.arange(cut)
        right = np.arange(cut, n)
        s_l = entropy_bits(reduced(g, left))
        s_r = entropy_bits(reduced(g, right))
        assert abs(s_l - s_r) < 1e-8


class TestPartitionAndDee:
    def test_default_partition_l8(self):
        p = default_partition(8)
        assert p.set_a == (1, 4)
        assert p.set_b == ((3, 4), (7, 8))
        assert list(p.idx_a_union_b) == [0, 1, 2, 3, 6, 7]
        assert list(p.idx_a_intersect_b) == [2, 3]

    def test_default_partition_edge_membership(self):
        for L in (4, 8, 16, 32):
            p = default_partition(L)
            a, b, aub, aib = p.subsets()
            assert 0 in a and 0 not in b
            assert L - 1 in b and L - 1 not in a
            assert 0 in aub and L - 1 in aub
            assert 0 not in aib and L - 1 not in aib

    def test_default_partition_requires_multiple_of_four(self):
        with pytest.raises(ValueError):
            default_partition(6)

    def test_custom_partition_bypasses(self):
        p = DeePartition((1, 3), ((2, 3), (5, 6)))
        assert list(p.idx_a_intersect_b) == [1, 2]

    def test_bad_partitions_rejected(self):
        with pytest.raises(ValueError):
            DeePartition((3, 1), ((4, 5), (7, 8)))
        with pytest.raises(ValueError):
            DeePartition((1, 4), ((3, 6), (5, 8)))  # B components overlap

    def test_topological_plateau_exact(self, dimerized_gs_l8):
        assert abs(dee(dimerized_gs_l8, default_partition(8)) - 2.0) < 1e-9

    def test_trivial_plateau_exact(self):
        st8 = ground_state(build_hamiltonian(make_spec(4, v=1.0, w=0.0)))
        assert abs(dee(st8, default_partition(8))) < 1e-9

    def test_slater_product_state_has_zero_dee(self):
        # any product over the partition boundaries: fully empty chain
        assert dee(np.zeros((8, 8), dtype=complex), default_partition(8)) == 0.0

    def test_post_edge_jump_dimerized_dee_drops_to_zero(self, dimerized_gs_l4):
        g = dimerized_gs_l4.g
        gp = g - np.outer(g[:, 0], g[0, :]) / g[0, 0]
        part = default_partition(4)
        assert abs(dee(g, part) - 2.0) < 1e-9
        assert abs(dee(gp, part)) < 1e-9


class TestNumberConservation:
    def test_dense_f_matrix_stays_zero_on_scripted_trajectory(self):
        from sshjump.model import DissipatorKind
        from sshjump.oracle import dense_trajectory

        spec = make_spec(2, 1.0, 2.0, gamma=1.0, alpha=1.0,
                         dissipator=DissipatorKind.SPD)
        res = dense_trajectory(spec, 1.0, 1e-3, 0.25, schedule=[(0.2, 0), (0.6, 1)])
        assert res.f_max < 1e-10


class TestCovarianceExport:
    def test_binary_round_trip(self, tmp_path):
        g = random_valid_g(6, 3)
        state = CovarianceState(g)
        path = tmp_path / "g.bin"
        save_covariance_binary(state, path)
        assert path.stat().st_size == 2 * 36 * 8  # row-major (re, im) float64 pairs
        assert np.abs(load_covariance_binary(path) - g).max() == 0.0

    def test_csv_export(self, tmp_path):
        state = CovarianceState(random_valid_g(3, 7))
        path = tmp_path / "g.csv"
        save_covariance_csv(state, path)
        lines = path.read_text().strip().split("\n")
        assert lines[0] == "i,j,re,im"
        assert len(lines) == 1 + 9
