"""Input sparsity patterns and their structural rank.

A sparsity pattern fixes which entries of an ``n x l`` input matrix may be
nonzero (the free entries); the rest are pinned to zero. Its generic rank,
the rank obtained for almost every assignment of the free entries, equals
the maximum bipartite matching between supported rows and columns, which is
what :func:`generic_rank` computes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections import deque
from typing import Iterable

import numpy as np

Entry = tuple[int, int]


@dataclass(frozen=True)
class SparsityPattern:
    """Zero/nonzero structure of an ``n_states x n_inputs`` input matrix.

    ``support`` holds the free entries as 0-based ``(row, column)`` pairs.
    Instances are immutable; use :meth:`with_entry` or :func:`pattern_union`
    to derive new ones.
    """

    n_states: int
    n_inputs: int
    support: frozenset[Entry] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n_states <= 0 or self.n_inputs <= 0:
            raise ValueError("pattern dimensions must be positive")
        norm = frozenset((int(r), int(c)) for r, c in self.support)
        object.__setattr__(self, "support", norm)
        for r, c in norm:
            if not (0 <= r < self.n_states and 0 <= c < self.n_inputs):
                raise ValueError(
                    f"entry ({r}, {c}) outside a "
                    f"{self.n_states} x {self.n_inputs} pattern"
                )

    # -- constructors -----------------------------------------------------

    @classmethod
    def from_pairs(cls, n_states: int, n_inputs: int, pairs: Iterable[Entry]):
        return cls(n_states, n_inputs, frozenset((r, c) for r, c in pairs))

    @classmethod
    def from_mask(cls, mask: np.ndarray):
        mask = np.asarray(mask)
        if mask.ndim != 2:
            raise ValueError("mask must be 2-D")
        rows, cols = np.nonzero(mask)
        return cls(
            mask.shape[0],
            mask.shape[1],
            frozenset(zip(rows.tolist(), cols.tolist())),
        )

    @classmethod
    def full(cls, n_states: int, n_inputs: int):
        return cls(
            n_states,
            n_inputs,
            frozenset((r, c) for r in range(n_states) for c in range(n_inputs)),
        )

    @classmethod
    def diagonal(cls, n_states: int, states: Iterable[int]):
        """One dedicated input per listed state: column ``j`` actuates the
        ``j``-th state of ``sorted(states)``."""
        ordered = sorted(set(int(s) for s in states))
        if not ordered:
            raise ValueError("diagonal pattern needs at least one state")
        return cls(
            n_states,
            len(ordered),
            frozenset((s, j) for j, s in enumerate(ordered)),
        )

    # -- views ------------------------------------------------------------

    @property
    def sparsity(self) -> int:
        """Number of free entries."""
        return len(self.support)

    @property
    def rows(self) -> tuple[int, ...]:
        """Supported rows (states that some input can reach), sorted."""
        return tuple(sorted({r for r, _ in self.support}))

    def row_adjacency(self) -> dict[int, tuple[int, ...]]:
        """row -> sorted columns with a free entry in that row."""
        adj: dict[int, list[int]] = {}
        for r, c in self.support:
            adj.setdefault(r, []).append(c)
        return {r: tuple(sorted(cs)) for r, cs in sorted(adj.items())}

    def mask(self) -> np.ndarray:
        m = np.zeros((self.n_states, self.n_inputs), dtype=bool)
        for r, c in self.support:
            m[r, c] = True
        return m

    def with_entry(self, row: int, col: int) -> "SparsityPattern":
        return SparsityPattern(
            self.n_states, self.n_inputs, self.support | {(int(row), int(col))}
        )

    def __contains__(self, entry: Entry) -> bool:
        return (int(entry[0]), int(entry[1])) in self.support

    def admits(self, b: np.ndarray, atol: float = 0.0) -> bool:
        """True when every entry of ``b`` outside the support is (near) zero."""
        b = np.asarray(b)
        if b.shape != (self.n_states, self.n_inputs):
            return False
        outside = ~self.mask()
        return bool(np.all(np.abs(b[outside]) <= atol))


def pattern_union(*patterns: SparsityPattern) -> SparsityPattern:
    """Entrywise union of same-shape patterns."""
    if not patterns:
        raise ValueError("need at least one pattern")
    shape = (patterns[0].n_states, patterns[0].n_inputs)
    support: set[Entry] = set()
    for p in patterns:
        if (p.n_states, p.n_inputs) != shape:
            raise ValueError("patterns must share the same shape")
        support |= p.support
    return SparsityPattern(shape[0], shape[1], frozenset(support))


def max_bipartite_matching(adj: dict[int, tuple[int, ...]]) -> dict[int, int]:
    """Maximum matching of a bipartite graph, left vertex -> right vertex.

    Hopcroft-Karp: alternate BFS layering with DFS augmentation along
    shortest augmenting paths, O(E sqrt(V)). Left vertices are processed in
    sorted order and adjacency lists are assumed sorted, so the returned
    matching is deterministic.
    """
    left = sorted(adj)
    match_l: dict[int, int | None] = {u: None for u in left}
    match_r: dict[int, int | None] = {}
    for u in left:
        for v in adj[u]:
            match_r.setdefault(v, None)

    INF = float("inf")
    dist: dict[int, float] = {}

    def bfs() -> bool:
        q: deque[int] = deque()
        for u in left:
            if match_l[u] is None:
                dist[u] = 0.0
                q.append(u)
            else:
                dist[u] = INF
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = match_r[v]
                if w is None:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1.0
                    q.append(w)
        return found

    def dfs(u: int) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w is None or (dist[w] == dist[u] + 1.0 and dfs(w)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = INF
        return False

    while bfs():
        for u in left:
            if match_l[u] is None:
                dfs(u)
    return {u: v for u, v in match_l.items() if v is not None}


def generic_rank(pattern: SparsityPattern) -> int:
    """Generic (structural) rank of the pattern: the rank that holds for
    almost every assignment of the free entries, equal to the size of a
    maximum row/column matching of the support."""
    return len(max_bipartite_matching(pattern.row_adjacency()))
