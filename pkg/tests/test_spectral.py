"""Eigenstructure extraction, rank primitives, and tolerance behavior."""

from __future__ import annotations

import numpy as np
import pytest

from ctrlsparse import (
    EigenClusterError,
    ToleranceConfig,
    compute_eigenstructure,
    gen_jordan,
    numeric_rank,
    reconstruct_state_matrix,
    scaled_rank,
    stabilize,
)


def subspace_gap(x: np.ndarray, y: np.ndarray) -> float:
    """Distance between column spans via orthogonal projectors."""
    qx, _ = np.linalg.qr(x)
    qy, _ = np.linalg.qr(y)
    return float(np.linalg.norm(qx @ qx.T - qy @ qy.T, 2))


class TestExample1:
    def test_eigenvalues_and_multiplicities(self, example1_es):
        got = sorted(
            (round(example1_es.modes[i].eigenvalue.real, 9), example1_es.modes[i].multiplicity)
            for i in example1_es.representatives
        )
        assert got == [(1.0, 2), (2.0, 2), (3.0, 2)]
        assert all(m.is_real for m in example1_es.modes)
        assert all(m.algebraic_multiplicity == 2 for m in example1_es.modes)

    def test_structure_counters(self, example1_es):
        assert example1_es.n == 6
        assert example1_es.n_modes == 3
        assert example1_es.n_real == 3
        assert example1_es.n_complex == 0
        assert example1_es.k_max == 2
        assert example1_es.rank_demand == 6
        assert example1_es.is_diagonalizable

    def test_left_eigenbasis_property(self, example1_a, example1_es):
        for i in example1_es.representatives:
            m = example1_es.modes[i]
            res = m.basis.T @ example1_a - m.eigenvalue.real * m.basis.T
            assert np.abs(res).max() < 1e-12

    def test_computed_spans_match_printed(self, example1_es, example1_printed_es):
        for computed, printed in zip(example1_es.modes, example1_printed_es.modes):
            assert abs(computed.eigenvalue - printed.eigenvalue) < 1e-9
            assert subspace_gap(computed.basis, printed.basis) < 1e-10


class TestRankPrimitives:
    def test_numeric_rank_basics(self):
        assert numeric_rank(np.eye(4)) == 4
        assert numeric_rank(np.zeros((3, 5))) == 0
        assert numeric_rank(np.empty((0, 3))) == 0

    def test_numeric_rank_is_scale_free(self):
        m = np.array([[1.0, 2.0], [2.0, 4.0], [0.0, 1.0]])
        assert numeric_rank(m) == 2
        assert numeric_rank(1e-30 * m) == 2
        assert numeric_rank(1e18 * m) == 2

    def test_numeric_rank_relative_cutoff(self):
        # the tiny direction is noise relative to the dominant one
        m = np.diag([1.0, 1e-20])
        assert numeric_rank(m) == 1
        assert numeric_rank(m, tol=1e-25) == 2

    def test_scaled_rank_absolute_cutoff(self):
        m = np.diag([1.0, 1e-12])
        assert scaled_rank(m, 1e-9) == 1
        assert scaled_rank(m, 1e-15) == 2
        # a pure-noise slice judged at its parent's scale stays rank zero
        noise = np.full((2, 2), 1e-17)
        assert scaled_rank(noise, 1e-12) == 0
        assert scaled_rank(np.empty((0, 2)), 1e-12) == 0

    def test_column_rank_ignores_noise_states(self, example1_es):
        # state 3 carries nothing of the third mode, whatever the slicing
        mode = example1_es.modes[2]
        assert mode.column_rank((3,)) == 0
        assert mode.column_rank((1, 2)) == 2
        assert mode.column_rank(()) == 0


class TestToleranceAndClustering:
    def test_nearby_distinct_eigenvalues_raise(self):
        with pytest.raises(EigenClusterError):
            compute_eigenstructure(np.diag([1.0, 1.0 + 1e-12]))

    def test_tightened_cluster_tol_separates(self):
        es = compute_eigenstructure(
            np.diag([1.0, 1.0 + 1e-12]), tol=ToleranceConfig(cluster_tol=1e-14)
        )
        assert es.n_modes == 2

    def test_true_cluster_merges(self):
        es = compute_eigenstructure(np.diag([1.0, 1.0 + 1e-16]))
        assert es.n_modes == 1
        assert es.modes[0].multiplicity == 2

    def test_near_zero_eigenvalue_snaps_to_zero(self):
        es = compute_eigenstructure(np.diag([1e-15, 1.0]))
        assert es.modes[0].eigenvalue == 0

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            compute_eigenstructure(np.ones((2, 3)))


class TestComplexAndDefective:
    def test_rotation_matrix_pairs_conjugates(self):
        es = compute_eigenstructure(np.array([[0.0, 1.0], [-1.0, 0.0]]))
        assert es.n_modes == 2
        assert es.n_complex == 2 and es.n_real == 0
        assert es.representatives == (0,)
        assert es.modes[0].conjugate_partner == 1
        assert es.modes[1].conjugate_partner == 0
        assert not es.modes[0].is_real
        # one representative of multiplicity one carries the whole demand
        assert es.rank_demand == 1

    def test_circuit_is_defective(self, circuit_es):
        assert not circuit_es.is_diagonalizable
        assert circuit_es.n_modes == 2
        rep = circuit_es.modes[circuit_es.representatives[0]]
        assert rep.multiplicity == 1
        assert rep.algebraic_multiplicity == 2
        assert circuit_es.k_max == 1


class TestRoundTrips:
    def test_reconstruct_diagonalizable(self):
        a = gen_jordan(8, 2, seed=3)
        es = compute_eigenstructure(a)
        assert np.abs(reconstruct_state_matrix(es) - a).max() < 1e-10

    def test_stabilize_makes_hurwitz(self, example1_a):
        shifted = stabilize(example1_a)
        assert np.linalg.eigvals(shifted).real.max() < 0
        # shifting only moves the diagonal
        off = shifted - example1_a
        assert np.abs(off - np.diag(np.diag(off))).max() == 0
