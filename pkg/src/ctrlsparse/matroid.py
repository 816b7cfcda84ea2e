"""Matroid intersection engine for pattern feasibility.

For one mode with left eigenbasis X (shape (n, k)) and an input sparsity
pattern, a state set J is useful exactly when

* the columns of ``X.T`` indexed by J are linearly independent (linear
  matroid), and
* J can be matched to distinct input columns through the pattern's free
  entries (transversal matroid).

The mode is "independently matched" by the pattern when some common
independent set of the two matroids reaches size k. Enumerating candidate
state sets is exponential, so this module finds a maximum common
independent set with the classic exchange-graph augmentation: starting from
any common independent set J, build the digraph where

    y -> x  (y in J, x not in J)  when  J - y + x stays linearly independent
    x -> y                        when  J - y + x stays matchable

and augment J along a shortest path from {x : J + x linearly independent}
to {x : J + x matchable}. No augmenting path means J is maximum.

Every search here iterates states in ascending index order, so results are
deterministic. The ground set is restricted to rows that carry at least one
pattern entry and a nonzero eigenbasis column; no common independent set
can use any other state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .pattern import SparsityPattern, max_bipartite_matching
from .spectral import (
    EigenStructure,
    ToleranceConfig,
    _as_config,
    scaled_rank,
)


@dataclass(frozen=True)
class MatchWitness:
    """Certificate that a mode is independently matched.

    ``states`` are row indices forming a full-multiplicity independent set
    for the mode, ``assignment`` maps each of them to a distinct input
    column through the pattern, and ``columns`` lists the used columns.
    """

    mode_index: int
    states: tuple[int, ...]
    columns: tuple[int, ...]
    assignment: dict[int, int]


class LinearModeMatroid:
    """Independence of state subsets in one mode's left eigenbasis.

    Ground elements are state indices; element ``j`` stands for column
    ``j`` of ``X.T``. Extension tests project candidate columns on the
    orthonormalized span of an independent base set and compare the
    residual norm against an absolute cutoff derived from the relative rank
    tolerance and the largest column norm of the whole basis.
    """

    def __init__(self, basis_t: np.ndarray, tol: ToleranceConfig | float | None = None):
        basis_t = np.atleast_2d(np.asarray(basis_t))
        cfg = _as_config(tol)
        self.m = basis_t  # (k, n)
        self.k, self.n = basis_t.shape
        self._col_norms = np.linalg.norm(basis_t, axis=0)
        scale = float(self._col_norms.max()) if self.n else 0.0
        self.cutoff = cfg.rank_cutoff(basis_t.shape) * scale

    @classmethod
    def for_mode(
        cls,
        es: EigenStructure,
        mode_index: int,
        tol: ToleranceConfig | float | None = None,
    ) -> "LinearModeMatroid":
        return cls(es.modes[mode_index].basis.T, tol)

    def nonzero_states(self) -> tuple[int, ...]:
        """States whose eigenbasis column is not numerically zero."""
        return tuple(np.nonzero(self._col_norms > self.cutoff)[0].tolist())

    def extension_mask(self, base: Sequence[int]) -> np.ndarray:
        """Boolean mask over all states: True where adding that state to
        ``base`` (assumed independent) raises the rank.

        A vectorized projection residual proposes the candidates and each
        positive is then certified by singular values of the actual joint
        submatrix. Residuals alone overclaim near the cutoff: projecting
        against the computed direction of a nearly dependent base column
        inherits that column's relative error, amplified by however badly
        the eigenproblem is conditioned.
        """
        base = sorted(base)
        if not base:
            return self._col_norms > self.cutoff
        q, _ = np.linalg.qr(self.m[:, base])
        rest = self.m - q @ (q.conj().T @ self.m)
        mask = np.linalg.norm(rest, axis=0) > self.cutoff
        mask[np.asarray(base, dtype=int)] = False
        r = len(base)
        for x in np.nonzero(mask)[0]:
            s = np.linalg.svd(self.m[:, base + [int(x)]], compute_uv=False)
            if not (s.size > r and s[r] > self.cutoff):
                mask[x] = False
        return mask

    def extends(self, base: Sequence[int], x: int) -> bool:
        base = sorted(base)
        x = int(x)
        if x in base:
            return False
        if not base:
            return bool(self._col_norms[x] > self.cutoff)
        s = np.linalg.svd(self.m[:, base + [x]], compute_uv=False)
        return bool(s.size > len(base) and s[len(base)] > self.cutoff)

    def indep(self, states: Iterable[int]) -> bool:
        states = sorted(set(states))
        if len(states) > self.k:
            return False
        base: list[int] = []
        for x in states:
            if not self.extends(base, x):
                return False
            base.append(x)
        return True


class TransversalMatroid:
    """Independence of state subsets as matchable row sets of a pattern."""

    def __init__(self, adjacency: dict[int, tuple[int, ...]], n_inputs: int):
        self.adjacency = {r: tuple(sorted(cs)) for r, cs in adjacency.items() if cs}
        self.n_inputs = n_inputs

    @classmethod
    def from_pattern(cls, pattern: SparsityPattern) -> "TransversalMatroid":
        return cls(pattern.row_adjacency(), pattern.n_inputs)

    def with_edge(self, row: int, col: int) -> "TransversalMatroid":
        adj = dict(self.adjacency)
        cur = adj.get(row, ())
        if col not in cur:
            adj[row] = tuple(sorted(cur + (col,)))
        return TransversalMatroid(adj, self.n_inputs)

    def rows(self) -> tuple[int, ...]:
        return tuple(sorted(self.adjacency))

    def matching(self, states: Iterable[int]) -> dict[int, int] | None:
        """A matching saturating ``states``, or None. Deterministic."""
        states = sorted(set(states))
        if len(states) > self.n_inputs:
            return None
        for s in states:
            if s not in self.adjacency:
                return None
        sub = {s: self.adjacency[s] for s in states}
        match = max_bipartite_matching(sub)
        if len(match) != len(states):
            return None
        return match

    def indep(self, states: Iterable[int]) -> bool:
        return self.matching(states) is not None


def _augment_once(
    linear: LinearModeMatroid,
    transversal: TransversalMatroid,
    j: Sequence[int],
    ground: Sequence[int],
    full_mask: np.ndarray | None = None,
    minus_masks: dict[int, np.ndarray] | None = None,
) -> list[int] | None:
    """One exchange-graph augmentation. Returns the larger common
    independent set, or None when ``j`` is already maximum on ``ground``.

    ``full_mask`` (linear extension mask of j) and ``minus_masks`` (one
    mask per y in j for j minus y) can be passed in when the caller
    evaluates many transversal variants against the same j, which keeps the
    linear-algebra work out of the inner loop.
    """
    j = sorted(j)
    j_set = set(j)
    outside = [x for x in ground if x not in j_set]
    if not outside:
        return None

    if full_mask is None:
        full_mask = linear.extension_mask(j)
    x1 = [x for x in outside if full_mask[x]]
    if not x1:
        return None
    x2 = {x for x in outside if transversal.indep(j + [x])}
    if not x2:
        return None
    for x in x1:
        if x in x2:
            return sorted(j + [x])

    if minus_masks is not None:
        minus_mask = minus_masks
    else:
        minus_mask = {y: linear.extension_mask([z for z in j if z != y]) for y in j}

    parent: dict[int, int | None] = {x: None for x in x1}
    queue = list(x1)
    head = 0
    goal: int | None = None
    while head < len(queue) and goal is None:
        u = queue[head]
        head += 1
        if u in j_set:
            neighbors = [x for x in outside if x not in parent and minus_mask[u][x]]
        else:
            neighbors = [
                y
                for y in j
                if y not in parent
                and transversal.indep([z for z in j if z != y] + [u])
            ]
        for v in neighbors:
            parent[v] = u
            if v not in j_set and v in x2:
                goal = v
                break
            queue.append(v)

    if goal is None:
        return None
    path = []
    node: int | None = goal
    while node is not None:
        path.append(node)
        node = parent[node]
    new_j = j_set.symmetric_difference(path)
    return sorted(new_j)


def matroid_intersection(
    linear: LinearModeMatroid,
    transversal: TransversalMatroid,
    target: int | None = None,
    start: Sequence[int] | None = None,
) -> tuple[tuple[int, ...], dict[int, int]]:
    """Maximum common independent set of the two matroids.

    Returns ``(states, assignment)`` where assignment matches every state
    to a distinct input column. ``target`` stops the search early once that
    size is reached; ``start`` warm-starts from a known common independent
    set (the caller must ensure it is one).
    """
    supported = set(transversal.rows())
    usable = set(linear.nonzero_states())
    ground = sorted(supported & usable)

    j = sorted(start) if start is not None else []
    if start is None:
        # cheap greedy seed before the augmentation loop
        for x in ground:
            if len(j) == (target if target is not None else linear.k):
                break
            if transversal.indep(j + [x]) and linear.extends(j, x):
                j.append(x)
                j.sort()

    limit = linear.k if target is None else min(target, linear.k)
    while len(j) < limit:
        bigger = _augment_once(linear, transversal, j, ground)
        if bigger is None:
            break
        j = bigger

    assignment = transversal.matching(j)
    if assignment is None:
        raise AssertionError("intersection invariant violated: result not matchable")
    return tuple(j), assignment


def independently_matched(
    es: EigenStructure,
    mode_index: int,
    pattern: SparsityPattern,
    tol: ToleranceConfig | float | None = None,
) -> tuple[bool, MatchWitness | None]:
    """Whether the pattern can serve this mode at full multiplicity.

    On success the witness carries a full-multiplicity state set, its
    column assignment through the pattern, and the mode index.
    """
    mode = es.modes[mode_index]
    linear = LinearModeMatroid.for_mode(es, mode_index, tol)
    transversal = TransversalMatroid.from_pattern(pattern)
    states, assignment = matroid_intersection(
        linear, transversal, target=mode.multiplicity
    )
    if len(states) < mode.multiplicity:
        return False, None
    witness = MatchWitness(
        mode_index=mode_index,
        states=states,
        columns=tuple(sorted(assignment.values())),
        assignment=assignment,
    )
    return True, witness


def matched_multiplicity(
    es: EigenStructure,
    mode_index: int,
    pattern: SparsityPattern,
    tol: ToleranceConfig | float | None = None,
) -> int:
    """Size of a maximum common independent set for this mode, capped at
    the mode multiplicity."""
    linear = LinearModeMatroid.for_mode(es, mode_index, tol)
    transversal = TransversalMatroid.from_pattern(pattern)
    states, _ = matroid_intersection(
        linear, transversal, target=es.modes[mode_index].multiplicity
    )
    return len(states)


def is_h_set(
    es: EigenStructure,
    mode_index: int,
    states: Iterable[int],
    tol: ToleranceConfig | float | None = None,
) -> bool:
    """True when ``states`` is a minimal full-rank column selection for the
    mode: exactly multiplicity-many states whose eigenbasis columns are
    linearly independent. Basis invariant (any eigenbasis of the mode gives
    the same answer)."""
    mode = es.modes[mode_index]
    states = sorted(set(int(s) for s in states))
    if len(states) != mode.multiplicity:
        return False
    for s in states:
        if not 0 <= s < es.n:
            raise ValueError(f"state index {s} out of range")
    return mode.column_rank(states, tol) == mode.multiplicity


def extract_mode_basis(
    es: EigenStructure,
    mode_index: int,
    ordered_states: Sequence[int],
    tol: ToleranceConfig | float | None = None,
) -> tuple[int, ...]:
    """Scan ``ordered_states`` in the given order and keep each state that
    raises the mode's rank, stopping at full multiplicity. Raises
    ValueError when the states cannot supply full rank.

    Acceptance is judged by singular values of the actual kept submatrix
    at the basis scale, the same test the greedy state selection certifies
    its gains with, so a basis extracted from a greedy selection always
    reproduces the ranks the selection was credited for.
    """
    mode = es.modes[mode_index]
    cfg = _as_config(tol)
    cutoff = cfg.rank_cutoff(mode.basis.T.shape) * mode.column_scale()
    chosen: list[int] = []
    for s in ordered_states:
        if len(chosen) == mode.multiplicity:
            break
        trial = chosen + [int(s)]
        if scaled_rank(mode.basis_columns(trial), cutoff) == len(trial):
            chosen.append(int(s))
    if len(chosen) < mode.multiplicity:
        raise ValueError(
            f"states do not span mode {mode_index}: rank {len(chosen)} "
            f"of {mode.multiplicity}"
        )
    return tuple(sorted(chosen))
