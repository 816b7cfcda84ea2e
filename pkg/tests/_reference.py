"""Independent reference implementations used to cross-check the package.

Everything here is deliberately written the slow, obvious way: plain
Kalman-matrix controllability, Kuhn's augmenting-path matching, and
exhaustive subset enumeration. None of it shares code with the package
beyond reading numpy arrays off the public dataclasses, so an agreement
between the two routes actually means something.
"""

from __future__ import annotations

from itertools import combinations

import numpy as np


def ref_rank(m: np.ndarray) -> int:
    m = np.atleast_2d(np.asarray(m))
    if m.size == 0:
        return 0
    return int(np.linalg.matrix_rank(m))


def ref_kalman_controllable(a: np.ndarray, b: np.ndarray) -> bool:
    """Rank of [B, AB, ..., A^(n-1)B] equals n."""
    n = a.shape[0]
    blocks = [b]
    for _ in range(n - 1):
        blocks.append(a @ blocks[-1])
    return ref_rank(np.hstack(blocks)) == n


def ref_max_matching(adj: dict[int, tuple[int, ...]]) -> int:
    """Kuhn's algorithm; adj maps left vertices to right vertices."""
    match_right: dict[int, int] = {}

    def try_augment(u: int, seen: set[int]) -> bool:
        for v in adj.get(u, ()):
            if v in seen:
                continue
            seen.add(v)
            if v not in match_right or try_augment(match_right[v], seen):
                match_right[v] = u
                return True
        return False

    size = 0
    for u in adj:
        if try_augment(u, set()):
            size += 1
    return size


def ref_generic_rank(n_states: int, n_inputs: int, support) -> int:
    adj: dict[int, tuple[int, ...]] = {}
    for r, c in support:
        adj.setdefault(c, ())
        adj[c] = adj[c] + (r,)
    return ref_max_matching(adj)


def ref_mode_rank_sum(es, states) -> int:
    """Sum of restricted eigenbasis ranks, straight numpy ranks."""
    states = sorted(states)
    total = 0
    for i in es.representatives:
        basis_t = es.modes[i].basis.T
        total += ref_rank(basis_t[:, states]) if states else 0
    return total


def ref_macp_demand(es) -> int:
    return sum(es.modes[i].multiplicity for i in es.representatives)


def ref_brute_macp_size(a: np.ndarray) -> int:
    """Smallest number of actuated states, by identity-column Kalman tests."""
    n = a.shape[0]
    eye = np.eye(n)
    for size in range(1, n + 1):
        for states in combinations(range(n), size):
            if ref_kalman_controllable(a, eye[:, list(states)]):
                return size
    raise AssertionError("no actuated set works, matrix cannot be controllable")


def ref_pattern_feasible(a: np.ndarray, n_inputs: int, support, rng, tries: int = 5) -> bool:
    """Random value assignments on the support; generic in the free entries,
    so one controllable draw certifies feasibility and five misses make
    infeasibility overwhelmingly likely for the small fixtures used here."""
    n = a.shape[0]
    support = list(support)
    if not support:
        return False
    for _ in range(tries):
        b = np.zeros((n, n_inputs))
        for r, c in support:
            b[r, c] = rng.standard_normal() + 2.0 * rng.integers(1, 4)
        if ref_kalman_controllable(a, b):
            return True
    return False


def ref_brute_mscp_sparsity(a: np.ndarray, n_inputs: int, rng) -> int:
    """Fewest support entries over all patterns, by randomized realization."""
    n = a.shape[0]
    cells = [(r, c) for r in range(n) for c in range(n_inputs)]
    for size in range(1, len(cells) + 1):
        for support in combinations(cells, size):
            if ref_pattern_feasible(a, n_inputs, support, rng):
                return size
    raise AssertionError("even the full pattern fails, matrix uncontrollable")


def ref_max_common_independent(ground, indep_a, indep_b) -> int:
    """Largest common independent subset, by exhaustive enumeration."""
    ground = list(ground)
    best = 0
    for size in range(len(ground), 0, -1):
        if size <= best:
            break
        for sub in combinations(ground, size):
            if indep_a(sub) and indep_b(sub):
                best = size
                break
    return best
