"""Brute-force baselines and the two random system generators."""

from __future__ import annotations

import numpy as np
import pytest

from ctrlsparse import (
    BudgetError,
    brute_macp,
    brute_mscp,
    gen_jordan,
    gen_scale_free,
    greedy_macp,
    mode_rank_sum,
    pattern_feasible,
    simple_greedy_mscp,
    stabilize,
)

from _reference import ref_brute_mscp_sparsity


class TestGenJordan:
    def test_spectrum_is_exact(self):
        a, eigenvalues, ks = gen_jordan(12, 3, seed=7, return_spectrum=True)
        assert list(eigenvalues) == [1.0, 2.0, 3.0, 4.0, 5.0]
        assert ks == (3, 2, 3, 3, 1)
        assert sum(ks) == 12
        got = np.sort(np.linalg.eigvals(a).real)
        want = np.sort(np.repeat(eigenvalues, ks))
        assert np.abs(got - want).max() < 1e-8

    def test_deterministic_per_seed(self):
        assert np.array_equal(gen_jordan(9, 2, seed=(1, 2)), gen_jordan(9, 2, seed=(1, 2)))
        assert not np.array_equal(gen_jordan(9, 2, seed=1), gen_jordan(9, 2, seed=2))

    def test_zero_density_gives_diagonal(self):
        a = gen_jordan(8, 2, density=0.0, seed=0)
        assert np.array_equal(a, np.diag(np.diag(a)))
        assert np.array_equal(np.diag(a), np.sort(np.diag(a)))

    def test_argument_validation(self):
        with pytest.raises(ValueError):
            gen_jordan(0, 2)
        with pytest.raises(ValueError):
            gen_jordan(5, 0)
        with pytest.raises(ValueError):
            gen_jordan(5, 2, density=1.5)


class TestGenScaleFree:
    def test_shape_and_determinism(self):
        a = gen_scale_free(30, seed=5)
        assert a.shape == (30, 30)
        assert np.array_equal(a, gen_scale_free(30, seed=5))
        assert not np.array_equal(a, gen_scale_free(30, seed=6))

    def test_attachment_tree_backbone(self):
        a = gen_scale_free(30, seed=5)
        # every node after the root connects to at least one earlier node
        for j in range(1, 30):
            assert np.count_nonzero(a[:j, j]) + np.count_nonzero(a[j, :j]) >= 1

    def test_stabilized_network_is_hurwitz(self):
        a = stabilize(gen_scale_free(25, seed=9))
        assert np.linalg.eigvals(a).real.max() < 0


class TestBruteforceOracles:
    def test_macp_budget_guard(self):
        with pytest.raises(BudgetError):
            brute_macp(gen_jordan(25, 3, seed=0))

    def test_mscp_budget_guards(self, example1_a):
        with pytest.raises(BudgetError):
            brute_mscp(gen_jordan(25, 3, seed=0), 3)
        with pytest.raises(BudgetError):
            brute_mscp(example1_a, 2, max_checks=10)

    def test_example1_exact_minima(self, example1_a):
        assert brute_macp(example1_a) == (0, 1, 2)
        p2 = brute_mscp(example1_a, 2)
        assert p2.sparsity == 4
        assert p2.support == frozenset({(0, 0), (0, 1), (1, 0), (2, 1)})
        p3 = brute_mscp(example1_a, 3)
        assert p3.sparsity == 3
        assert p3.support == frozenset({(0, 0), (1, 1), (2, 2)})
        # extra columns beyond the third cannot reduce sparsity further
        assert brute_mscp(example1_a, 6).sparsity == 3

    def test_brute_results_are_feasible_lower_bounds(self):
        for trial in range(10):
            a = gen_jordan(4 + trial % 3, 2, seed=(66, trial))
            exact = brute_mscp(a, 2)
            assert pattern_feasible(a, exact)
            heuristic, _ = simple_greedy_mscp(a, 2)
            assert exact.sparsity <= heuristic.sparsity
            assert len(brute_macp(a)) <= len(greedy_macp(a)[0])

    def test_mscp_against_randomized_reference(self, example1_a):
        rng = np.random.default_rng(99)
        assert brute_mscp(example1_a, 2).sparsity == ref_brute_mscp_sparsity(
            example1_a, 2, rng
        )

    def test_macp_demand_reached(self, example1_a):
        chosen = brute_macp(example1_a)
        assert mode_rank_sum(example1_a, chosen) == 6
