"""Actuated-state selection: the mode-rank objective and both greedy routes."""

from __future__ import annotations

from itertools import combinations

import numpy as np
import pytest

from ctrlsparse import (
    NotStableError,
    brute_macp,
    gen_jordan,
    gramian_greedy_macp,
    greedy_column_select,
    greedy_macp,
    input_rank_sum,
    is_controllable,
    mode_rank_sum,
    stabilize,
)

from _reference import ref_brute_macp_size, ref_mode_rank_sum


class TestModeRankSum:
    def test_example1_values(self, example1_a):
        assert mode_rank_sum(example1_a, []) == 0
        assert mode_rank_sum(example1_a, [0]) == 2
        assert mode_rank_sum(example1_a, [1]) == 2
        assert mode_rank_sum(example1_a, [0, 1]) == 4
        assert mode_rank_sum(example1_a, [3, 4, 5]) == 4
        assert mode_rank_sum(example1_a, range(6)) == 6

    def test_matches_reference_ranks(self, example1_es):
        for size in range(4):
            for states in combinations(range(6), size):
                assert mode_rank_sum(example1_es, states) == ref_mode_rank_sum(
                    example1_es, states
                )

    def test_monotone_and_submodular_on_samples(self):
        rng = np.random.default_rng(29)
        for trial in range(25):
            a = gen_jordan(int(rng.integers(4, 9)), 3, seed=(29, trial))
            n = a.shape[0]
            for _ in range(6):
                s = set(rng.choice(n, size=int(rng.integers(0, n - 1)), replace=False).tolist())
                extra = int(rng.choice([v for v in range(n) if v not in s]))
                t = s | {int(rng.choice(n))}
                t.discard(extra)
                if not s <= t:
                    continue
                gain_small = mode_rank_sum(a, s | {extra}) - mode_rank_sum(a, s)
                gain_large = mode_rank_sum(a, t | {extra}) - mode_rank_sum(a, t)
                assert gain_small >= gain_large >= 0


class TestGreedyMacp:
    def test_example1_selection(self, example1_a):
        chosen, trace = greedy_macp(example1_a)
        assert chosen == (0, 1, 2)
        assert trace.chosen == (0, 1, 2)
        assert trace.gains == (2, 2, 2)
        assert trace.final_value == 6

    def test_allowed_restriction(self, example1_a):
        chosen, trace = greedy_macp(example1_a, allowed=[1, 2, 3, 4, 5])
        assert chosen == (1, 2, 3)
        assert trace.gains == (2, 2, 2)

    def test_selection_is_controllable_as_diagonal_inputs(self, example1_a):
        chosen, _ = greedy_macp(example1_a)
        b = np.eye(6)[:, list(chosen)]
        assert is_controllable(example1_a, b)

    def test_infeasible_allowed_raises(self, example1_a):
        with pytest.raises(Exception):
            greedy_macp(example1_a, allowed=[0, 3, 4])


class TestGramianRoute:
    def test_requires_hurwitz(self, example1_a):
        with pytest.raises(NotStableError):
            gramian_greedy_macp(example1_a)

    def test_matches_eigen_route_on_example1(self, example1_a):
        chosen, trace = gramian_greedy_macp(stabilize(example1_a))
        assert chosen == (0, 1, 2)
        assert trace.gains == (2, 2, 2)


class TestBruteMacp:
    def test_example1_minimum(self, example1_a):
        assert brute_macp(example1_a) == (0, 1, 2)

    def test_size_matches_kalman_reference(self):
        for trial in range(12):
            a = gen_jordan(3 + trial % 4, 2, seed=(77, trial))
            assert len(brute_macp(a)) == ref_brute_macp_size(a)

    def test_greedy_within_log_bound(self):
        for trial in range(20):
            a = gen_jordan(4 + trial % 5, 3, seed=(78, trial))
            greedy_size = len(greedy_macp(a)[0])
            brute_size = len(brute_macp(a))
            demand = mode_rank_sum(a, range(a.shape[0]))
            assert greedy_size <= (np.log(demand) + 1) * brute_size + 1e-9


class TestColumnSelection:
    def test_identity_columns_on_example1(self, example1_a):
        chosen, trace = greedy_column_select(example1_a, np.eye(6))
        assert chosen == (0, 1, 2)
        assert trace.gains == (2, 2, 2)
        assert input_rank_sum(example1_a, np.eye(6), chosen) == 6

    def test_input_rank_sum_monotone(self, example1_a):
        b = np.eye(6)
        values = [input_rank_sum(example1_a, b, list(range(k))) for k in range(7)]
        assert values == sorted(values)
        assert values[-1] == 6
