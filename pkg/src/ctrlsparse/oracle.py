"""Exhaustive baselines for the two selection problems.

These solvers enumerate candidate sets outright, so they are only usable
on small systems, but they are exact. They exist to certify the greedy
and two-stage methods: tests compare approximate outputs against these on
ensembles of small random systems. Budget guards raise instead of running
unbounded enumerations.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import BudgetError, InfeasibleAccessError, InfeasiblePatternError
from .feasibility import _as_allowed, micp_feasible, pattern_feasible
from .macp import mode_rank_sum
from .pattern import SparsityPattern
from .spectral import EigenStructure, ToleranceConfig, as_eigenstructure


def brute_macp(
    system: np.ndarray | EigenStructure,
    allowed: "list[int] | tuple[int, ...] | None" = None,
    tol: ToleranceConfig | float | None = None,
    max_states: int = 20,
) -> tuple[int, ...]:
    """Smallest actuated-state set reaching the full rank demand.

    Enumerates candidate sets by increasing size and, within a size, in
    lexicographic order, so the minimizer it returns is deterministic.
    Raises BudgetError when the allowed set is larger than max_states and
    InfeasibleAccessError when no subset of the allowed states works.
    """
    es = as_eigenstructure(system, tol)
    allowed_t = _as_allowed(allowed, es.n)
    if len(allowed_t) > max_states:
        raise BudgetError(
            f"brute_macp over {len(allowed_t)} states exceeds the "
            f"max_states budget of {max_states}"
        )
    report = micp_feasible(es, allowed_t, tol)
    if not report:
        raise InfeasibleAccessError(report.failed_mode)

    demand = es.rank_demand
    for size in range(es.k_max, len(allowed_t) + 1):
        for combo in itertools.combinations(allowed_t, size):
            if mode_rank_sum(es, combo, tol) == demand:
                return tuple(combo)
    raise AssertionError("accessible system has no spanning state set")


def _first_use_canonical(cells: tuple[tuple[int, int], ...]) -> bool:
    # feasibility is invariant under column relabeling, so only patterns
    # whose columns appear in first-use order 0,1,2,... are examined
    seen: set[int] = set()
    for _, c in cells:
        if c not in seen:
            if c != len(seen):
                return False
            seen.add(c)
    return True


def brute_mscp(
    system: np.ndarray | EigenStructure,
    n_inputs: int,
    tol: ToleranceConfig | float | None = None,
    max_states: int = 20,
    max_checks: int = 2_000_000,
) -> SparsityPattern:
    """Sparsest feasible pattern at the given column count.

    Enumerates supports by increasing size, pruning by a cached
    row-set rank test and by column-relabeling symmetry. The returned
    pattern is the lexicographically first optimum in canonical column
    order. Raises BudgetError past max_checks candidate supports.
    """
    es = as_eigenstructure(system, tol)
    l = int(n_inputs)
    if l < 1:
        raise ValueError("n_inputs must be positive")
    if l < es.k_max:
        raise InfeasiblePatternError(
            None,
            f"{l} input columns cannot serve a mode of multiplicity "
            f"{es.k_max}",
        )
    if es.n > max_states:
        raise BudgetError(
            f"brute_mscp over {es.n} states exceeds the max_states "
            f"budget of {max_states}"
        )

    base_size = len(brute_macp(es, tol=tol, max_states=max_states))
    demand = es.rank_demand
    cells = [(r, c) for r in range(es.n) for c in range(l)]
    row_ok: dict[frozenset[int], bool] = {}
    checks = 0
    for size in range(max(base_size, es.k_max), len(cells) + 1):
        for combo in itertools.combinations(cells, size):
            checks += 1
            if checks > max_checks:
                raise BudgetError(
                    f"brute_mscp exceeded the budget of {max_checks} "
                    f"candidate supports"
                )
            if not _first_use_canonical(combo):
                continue
            rows = frozenset(r for r, _ in combo)
            if len(rows) < base_size:
                continue
            ok = row_ok.get(rows)
            if ok is None:
                ok = mode_rank_sum(es, sorted(rows), tol) == demand
                row_ok[rows] = ok
            if not ok:
                continue
            pattern = SparsityPattern.from_pairs(es.n, l, combo)
            if pattern_feasible(es, pattern, tol):
                return pattern
    raise AssertionError("full pattern should have been feasible")
