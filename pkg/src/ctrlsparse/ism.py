"""Input-state-mode digraph of a system and pattern.

Three vertex layers: one vertex per input column, one per state, and one
per basis direction of each mode. Arcs run input -> state where the pattern
has a free entry, and state -> mode direction where the mode's left
eigenbasis has a structurally nonzero entry for that state. Controllability
of a pattern is equivalent to routing, for every mode, a family of k_i
vertex-disjoint input-to-mode paths whose state layer has full rank in the
eigenbasis; the digraph is the visual/diagnostic companion of that test.

The state -> mode arcs depend on the particular basis returned by the
eigensolver; only the per-mode reachable-rank statements are basis
invariant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pattern import SparsityPattern
from .spectral import EigenStructure, ToleranceConfig, _as_config

ModeVertex = tuple[int, int]  # (mode index, basis direction index)


@dataclass(frozen=True)
class IsmGraph:
    """Arc lists of the input-state-mode digraph, all 0-based."""

    n_states: int
    n_inputs: int
    mode_vertices: tuple[ModeVertex, ...]
    input_to_state: tuple[tuple[int, int], ...]  # (input col, state)
    state_to_mode: tuple[tuple[int, ModeVertex], ...]  # (state, mode vertex)

    @property
    def n_arcs(self) -> int:
        return len(self.input_to_state) + len(self.state_to_mode)


def build_ism_graph(
    es: EigenStructure,
    pattern: SparsityPattern,
    tol: ToleranceConfig | float | None = None,
) -> IsmGraph:
    """Assemble the digraph for the representative modes of ``es``.

    An eigenbasis entry counts as structurally nonzero when its magnitude
    exceeds the rank cutoff times the largest magnitude in that basis.
    """
    if pattern.n_states != es.n:
        raise ValueError("pattern row count does not match the state dimension")
    cfg = _as_config(tol)

    input_arcs = tuple(sorted((c, r) for r, c in pattern.support))

    mode_vertices: list[ModeVertex] = []
    state_arcs: list[tuple[int, ModeVertex]] = []
    for i in es.representatives:
        mode = es.modes[i]
        xt = mode.basis.T  # (k_i, n)
        scale = float(np.max(np.abs(xt))) if xt.size else 0.0
        cut = cfg.rank_cutoff(xt.shape) * scale
        for t in range(mode.multiplicity):
            mode_vertices.append((i, t))
            for s in range(es.n):
                if abs(xt[t, s]) > cut:
                    state_arcs.append((s, (i, t)))
    return IsmGraph(
        n_states=es.n,
        n_inputs=pattern.n_inputs,
        mode_vertices=tuple(mode_vertices),
        input_to_state=input_arcs,
        state_to_mode=tuple(sorted(state_arcs)),
    )


def to_dot(g: IsmGraph) -> str:
    """Graphviz DOT rendering with the three layers ranked left to right."""
    lines = [
        "digraph ism {",
        "  rankdir=LR;",
        '  node [shape=circle, fontsize=10];',
    ]
    lines.append("  { rank=source; " + " ".join(f"u{c};" for c in range(g.n_inputs)) + " }")
    for c in range(g.n_inputs):
        lines.append(f'  u{c} [label="u{c + 1}", shape=box];')
    for s in range(g.n_states):
        lines.append(f'  s{s} [label="x{s + 1}"];')
    for i, t in g.mode_vertices:
        lines.append(f'  m{i}_{t} [label="m{i + 1},{t + 1}", shape=doublecircle];')
    for c, s in g.input_to_state:
        lines.append(f"  u{c} -> s{s};")
    for s, (i, t) in g.state_to_mode:
        lines.append(f"  s{s} -> m{i}_{t};")
    lines.append("}")
    return "\n".join(lines) + "\n"
