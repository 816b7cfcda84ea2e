"""Sparsest input patterns at a fixed number of input columns.

Given the state matrix and a column budget, the goal is a feasible sparsity
pattern with as few nonzero entries as possible. Two approximations are
provided: a direct greedy over single entries, and a two-stage method that
first picks a small actuated-state set and then assigns columns to those
states by coloring a conflict graph. The two-stage route also emits a
certificate recording which approximation bound applies to its output.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import InfeasiblePatternError
from .macp import greedy_macp
from .matroid import (
    LinearModeMatroid,
    TransversalMatroid,
    _augment_once,
    extract_mode_basis,
    matched_multiplicity,
)
from .pattern import SparsityPattern, max_bipartite_matching
from .spectral import EigenStructure, ToleranceConfig, as_eigenstructure


def matched_rank_sum(
    system: np.ndarray | EigenStructure,
    pattern: SparsityPattern,
    tol: ToleranceConfig | float | None = None,
) -> int:
    """Sum over representative modes of the matched multiplicity the
    pattern achieves. Equals the full rank demand exactly when the pattern
    is feasible."""
    es = as_eigenstructure(system, tol)
    return sum(
        matched_multiplicity(es, i, pattern, tol) for i in es.representatives
    )


@dataclass(frozen=True)
class PatternGreedyTrace:
    """Audit record of the entry-by-entry greedy run."""

    chosen: tuple[tuple[int, int], ...]
    gains: tuple[int, ...]
    final_value: int


def simple_greedy_mscp(
    system: np.ndarray | EigenStructure,
    n_inputs: int,
    tol: ToleranceConfig | float | None = None,
) -> tuple[SparsityPattern, PatternGreedyTrace]:
    """Greedy entry selection until the pattern is feasible.

    Starts from the empty pattern and repeatedly adds the single absent
    entry that raises the matched-rank sum the most, breaking ties toward
    the lexicographically smallest (row, column). The objective is not
    submodular, so no multiplicative guarantee is attached; in practice the
    method is a strong baseline. Requires at least as many columns as the
    largest mode multiplicity, otherwise no feasible pattern exists at all.
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

    reps = es.representatives
    target = es.rank_demand
    lins = {i: LinearModeMatroid.for_mode(es, i, tol) for i in reps}
    nonzero = {i: frozenset(lins[i].nonzero_states()) for i in reps}

    j_sets: dict[int, list[int]] = {i: [] for i in reps}
    adjacency: dict[int, set[int]] = {}
    support: set[tuple[int, int]] = set()
    chosen: list[tuple[int, int]] = []
    gains: list[int] = []
    value = 0

    while value < target:
        unsat = [
            i for i in reps if len(j_sets[i]) < es.modes[i].multiplicity
        ]
        # masks depend only on the current per-mode sets, so they are
        # computed once per step and shared across every candidate entry
        full_masks = {i: lins[i].extension_mask(j_sets[i]) for i in unsat}
        minus_masks = {
            i: {
                y: lins[i].extension_mask([z for z in j_sets[i] if z != y])
                for y in j_sets[i]
            }
            for i in unsat
        }
        ext_states = {
            i: set(np.flatnonzero(full_masks[i]).tolist()) for i in unsat
        }
        supported_rows = set(adjacency)
        base_trans = TransversalMatroid(
            {r: tuple(sorted(cs)) for r, cs in adjacency.items()}, l
        )
        has_sup_ext = {
            i: bool(ext_states[i] & supported_rows) for i in unsat
        }

        rows_of_interest = sorted(set().union(*(nonzero[i] for i in unsat)))
        best_gain = 0
        best_entry: tuple[int, int] | None = None
        for r in rows_of_interest:
            # a new entry in row r can only help modes whose eigenbasis
            # touches r, and only when some extension state is reachable
            row_modes = [
                i
                for i in unsat
                if r in nonzero[i]
                and (has_sup_ext[i] or r in ext_states[i])
            ]
            if len(row_modes) <= best_gain:
                continue
            grounds = {
                i: sorted((supported_rows | {r}) & nonzero[i])
                for i in row_modes
            }
            existing = adjacency.get(r, set())
            for c in range(l):
                if c in existing:
                    continue
                cand = base_trans.with_edge(r, c)
                gain = 0
                for pos, i in enumerate(row_modes):
                    if gain + (len(row_modes) - pos) <= best_gain:
                        break
                    grew = _augment_once(
                        lins[i],
                        cand,
                        j_sets[i],
                        grounds[i],
                        full_masks[i],
                        minus_masks[i],
                    )
                    if grew is not None:
                        gain += 1
                if gain > best_gain:
                    best_gain = gain
                    best_entry = (r, c)

        if best_entry is None:
            raise RuntimeError(
                "no single entry raises the matched-rank sum; the numeric "
                "rank decisions are inconsistent"
            )
        r, c = best_entry
        support.add((r, c))
        adjacency.setdefault(r, set()).add(c)
        new_trans = base_trans.with_edge(r, c)
        applied = 0
        for i in unsat:
            ground = sorted((supported_rows | {r}) & nonzero[i])
            grew = _augment_once(
                lins[i],
                new_trans,
                j_sets[i],
                ground,
                full_masks[i],
                minus_masks[i],
            )
            if grew is not None:
                j_sets[i] = grew
                applied += 1
        assert applied == best_gain, "apply step diverged from evaluation"
        value += best_gain
        chosen.append((r, c))
        gains.append(best_gain)

    pattern = SparsityPattern.from_pairs(es.n, l, support)
    trace = PatternGreedyTrace(tuple(chosen), tuple(gains), value)
    return pattern, trace


@dataclass(frozen=True)
class ConflictGraph:
    """States that must not share an input column.

    Vertices are state indices; an edge joins two states that appear in the
    same mode basis. origins maps each vertex to the representative modes
    whose basis contains it, caps to the largest multiplicity among those
    modes (the number of columns the vertex receives if it is ever assigned
    more than one).
    """

    vertices: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    origins: Mapping[int, tuple[int, ...]]
    caps: Mapping[int, int]


def build_conflict_graph(
    es: EigenStructure,
    mode_bases: Mapping[int, Sequence[int]],
) -> ConflictGraph:
    """Union of one clique per mode basis."""
    origins: dict[int, list[int]] = {}
    edges: set[tuple[int, int]] = set()
    for i in sorted(mode_bases):
        mode = es.modes[i]
        basis = sorted(set(int(s) for s in mode_bases[i]))
        if len(basis) != mode.multiplicity:
            raise ValueError(
                f"mode {i} basis has {len(basis)} states, expected "
                f"{mode.multiplicity}"
            )
        for s in basis:
            if not 0 <= s < es.n:
                raise ValueError(f"state index {s} out of range")
            origins.setdefault(s, []).append(i)
        for a_pos, a in enumerate(basis):
            for b in basis[a_pos + 1 :]:
                edges.add((a, b))
    vertices = tuple(sorted(origins))
    caps = {
        v: max(es.modes[i].multiplicity for i in mods)
        for v, mods in origins.items()
    }
    return ConflictGraph(
        vertices=vertices,
        edges=frozenset(edges),
        origins={v: tuple(mods) for v, mods in origins.items()},
        caps=caps,
    )


@dataclass(frozen=True)
class Coloring:
    """Column assignment produced by the conflict-graph coloring."""

    assignment: Mapping[int, tuple[int, ...]]
    order: tuple[int, ...]
    multi_vertices: tuple[int, ...]
    n_colors_used: int

    @property
    def sparsity(self) -> int:
        return sum(len(cs) for cs in self.assignment.values())


def color_conflict_graph(graph: ConflictGraph, n_colors: int) -> Coloring:
    """Saturation-driven coloring with a budget of n_colors.

    Repeatedly colors the uncolored vertex whose neighbors show the most
    distinct colors (lowest index on ties). A vertex whose neighbors
    already block every color in the budget instead receives the lowest
    caps[v] colors at once and drops out of all its conflicts, which is
    what lets the budget stay fixed. Otherwise the vertex takes the lowest
    already-used color its neighbors allow, or opens the lowest fresh one.
    """
    if n_colors < 1:
        raise ValueError("n_colors must be positive")
    if any(graph.caps[v] > n_colors for v in graph.vertices):
        raise InfeasiblePatternError(
            None,
            f"{n_colors} colors cannot cover a vertex that needs "
            f"{max(graph.caps.values())}",
        )
    adj: dict[int, set[int]] = {v: set() for v in graph.vertices}
    for a, b in graph.edges:
        adj[a].add(b)
        adj[b].add(a)

    assignment: dict[int, tuple[int, ...]] = {}
    used: set[int] = set()
    order: list[int] = []
    multi: list[int] = []
    uncolored = set(graph.vertices)
    while uncolored:
        best_v = -1
        best_sat = -1
        best_blocked: set[int] = set()
        for v in sorted(uncolored):
            blocked = {
                c
                for u in adj[v]
                if u in assignment
                for c in assignment[u]
            }
            if len(blocked) > best_sat:
                best_sat = len(blocked)
                best_v = v
                best_blocked = blocked
        v = best_v
        uncolored.remove(v)
        order.append(v)
        if best_sat >= n_colors:
            # every color is blocked: hand the vertex one column per unit
            # of its largest mode multiplicity and waive its conflicts
            cap = graph.caps[v]
            colors = tuple(range(cap))
            multi.append(v)
            for u in adj[v]:
                adj[u].discard(v)
            adj[v] = set()
        else:
            admissible = sorted(used - best_blocked)
            if admissible:
                colors = (admissible[0],)
            else:
                fresh = 0
                while fresh in used:
                    fresh += 1
                assert fresh < n_colors, "budget exceeded"
                colors = (fresh,)
        assignment[v] = colors
        used.update(colors)
    return Coloring(
        assignment=assignment,
        order=tuple(order),
        multi_vertices=tuple(multi),
        n_colors_used=len(used),
    )


@dataclass(frozen=True)
class BoundCertificate:
    """Which approximation guarantee the two-stage output carries.

    branch is "single_assignment" when every state got exactly one column,
    in which case the sparsity equals the stage-one set size and inherits
    its logarithmic factor against the sparsest feasible pattern. branch is
    "multi_assignment" otherwise, where the factor picks up the largest
    mode multiplicity and the sparsity is capped by
    k_max * (stage1_size - n_inputs) + n_inputs.
    """

    branch: str
    rank_demand: int
    k_max: int
    n_inputs: int
    stage1_size: int
    stage1_states: tuple[int, ...]
    multi_vertices: tuple[int, ...]
    sparsity: int
    approx_factor: float


def two_stage_mscp(
    system: np.ndarray | EigenStructure,
    n_inputs: int,
    tol: ToleranceConfig | float | None = None,
) -> tuple[SparsityPattern, BoundCertificate]:
    """Sparse pattern via state selection followed by column coloring.

    Stage one runs the greedy actuated-state selection. Stage two extracts
    a basis per mode from the greedy order, builds the conflict graph on
    those bases, and colors it with the given column budget; each state's
    colors become its nonzero columns. The result is always feasible and
    the returned certificate says which bound applies.
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

    states, stage1_trace = greedy_macp(es, tol=tol)
    bases = {
        i: extract_mode_basis(es, i, stage1_trace.chosen, tol)
        for i in es.representatives
    }
    graph = build_conflict_graph(es, bases)
    coloring = color_conflict_graph(graph, l)

    # each mode basis must admit distinct columns through the assignment
    for i, basis in sorted(bases.items()):
        match = max_bipartite_matching(
            {s: coloring.assignment[s] for s in basis}
        )
        if len(match) != len(basis):
            raise RuntimeError(
                f"coloring cannot serve mode {i} with distinct columns"
            )

    support = {
        (v, c)
        for v, cs in coloring.assignment.items()
        for c in cs
    }
    pattern = SparsityPattern.from_pairs(es.n, l, support)
    sparsity = len(support)
    stage1_size = len(states)
    demand = es.rank_demand

    if coloring.multi_vertices:
        branch = "multi_assignment"
        factor = es.k_max * (math.log(demand) + 1)
        cap = es.k_max * (stage1_size - l) + l
        assert sparsity <= cap, "multi-assignment sparsity cap violated"
    else:
        branch = "single_assignment"
        factor = math.log(demand) + 1
        assert sparsity == stage1_size, "one column per state expected"

    cert = BoundCertificate(
        branch=branch,
        rank_demand=demand,
        k_max=es.k_max,
        n_inputs=l,
        stage1_size=stage1_size,
        stage1_states=tuple(states),
        multi_vertices=coloring.multi_vertices,
        sparsity=sparsity,
        approx_factor=factor,
    )
    return pattern, cert


class EquivalenceCase(enum.Enum):
    """Sufficient conditions under which the fewest-entry and fewest-state
    problems have the same optimum (a sparsest feasible pattern touching
    exactly a minimum actuated-state set)."""

    ALL_SIMPLE = "all_simple"
    DOMINANT_MODE = "dominant_mode"
    AMPLE_INPUTS = "ample_inputs"
    UNKNOWN = "unknown"


def mscp_matches_macp(
    system: np.ndarray | EigenStructure,
    n_inputs: int,
    tol: ToleranceConfig | float | None = None,
) -> EquivalenceCase:
    """Check the known sufficient conditions in a fixed order.

    ALL_SIMPLE: every representative mode has multiplicity one.
    DOMINANT_MODE: a unique mode attains the largest multiplicity and the
    pairwise-overlap count of the remaining modes stays below it.
    AMPLE_INPUTS: the column budget reaches min(rank demand,
    1 + total pairwise overlap), so no column ever has to be reused where
    it matters. UNKNOWN means none of the tests apply; the optima may
    still coincide.
    """
    es = as_eigenstructure(system, tol)
    ks = [es.modes[i].multiplicity for i in es.representatives]
    if all(k == 1 for k in ks):
        return EquivalenceCase.ALL_SIMPLE
    k_max = max(ks)
    if ks.count(k_max) == 1:
        rest = sorted(ks)
        rest.remove(k_max)
        if sum(k * (k - 1) // 2 for k in rest) < k_max:
            return EquivalenceCase.DOMINANT_MODE
    pairs_total = sum(k * (k - 1) // 2 for k in ks)
    if int(n_inputs) >= min(sum(ks), 1 + pairs_total):
        return EquivalenceCase.AMPLE_INPUTS
    return EquivalenceCase.UNKNOWN
