"""File formats and JSON-friendly summaries.

Matrices travel as MatrixMarket (.mtx/.mm), comma-separated (.csv), or
whitespace text (anything else). Patterns travel as JSON
({"n": ..., "l": ..., "support": [[row, col], ...]}) or as a text file
whose first line is "n l" followed by one "row col" line per entry.

Indices in files and in every dict produced here are 1-based, matching
the MatrixMarket convention; the in-memory API is 0-based throughout.
The converters in this module are the only place that offset lives.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np
from scipy.io import mmread, mmwrite

from .mscp import BoundCertificate, Coloring, PatternGreedyTrace
from .macp import GreedyTrace
from .matroid import MatchWitness
from .pattern import SparsityPattern
from .realization import ConstructionTrace
from .spectral import EigenStructure

MATRIX_SUFFIXES = (".mtx", ".mm", ".csv", ".txt", ".dat")


def load_matrix(path: str | Path) -> np.ndarray:
    """Read a dense real matrix, dispatching on the file suffix."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such matrix file: {path}")
    suffix = path.suffix.lower()
    if suffix in (".mtx", ".mm"):
        m = mmread(str(path))
        a = m.toarray() if hasattr(m, "toarray") else np.asarray(m)
    elif suffix == ".csv":
        a = np.loadtxt(path, delimiter=",", ndmin=2)
    else:
        a = np.loadtxt(path, ndmin=2)
    return np.asarray(a, dtype=float)


def save_matrix(path: str | Path, a: np.ndarray) -> None:
    path = Path(path)
    a = np.asarray(a, dtype=float)
    suffix = path.suffix.lower()
    if suffix in (".mtx", ".mm"):
        # mmwrite silently appends ".mtx" to bare filenames, so hand it an
        # open handle to keep the requested name
        with open(path, "wb") as fh:
            mmwrite(fh, a)
    elif suffix == ".csv":
        np.savetxt(path, a, delimiter=",")
    else:
        np.savetxt(path, a)


def _check_entry(r: int, c: int, n: int, l: int) -> tuple[int, int]:
    if not 1 <= r <= n:
        raise ValueError(
            f"row index {r} out of range 1..{n}; pattern files are 1-based"
        )
    if not 1 <= c <= l:
        raise ValueError(
            f"column index {c} out of range 1..{l}; pattern files are 1-based"
        )
    return r - 1, c - 1


def load_pattern(path: str | Path) -> SparsityPattern:
    """Read a sparsity pattern from JSON or "n l" text format."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"no such pattern file: {path}")
    if path.suffix.lower() == ".json":
        data = json.loads(path.read_text())
        n, l = int(data["n"]), int(data["l"])
        pairs = [
            _check_entry(int(r), int(c), n, l) for r, c in data["support"]
        ]
        return SparsityPattern.from_pairs(n, l, pairs)
    lines = [
        ln.strip()
        for ln in path.read_text().splitlines()
        if ln.strip() and not ln.strip().startswith("#")
    ]
    if not lines:
        raise ValueError(f"{path}: empty pattern file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"{path}: first line must be 'n_states n_inputs'")
    n, l = int(head[0]), int(head[1])
    pairs = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"{path}: expected 'row col', got {ln!r}")
        pairs.append(_check_entry(int(parts[0]), int(parts[1]), n, l))
    return SparsityPattern.from_pairs(n, l, pairs)


def save_pattern(path: str | Path, pattern: SparsityPattern) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        path.write_text(json.dumps(pattern_to_dict(pattern), indent=2) + "\n")
        return
    rows = [f"{pattern.n_states} {pattern.n_inputs}"]
    rows += [f"{r + 1} {c + 1}" for r, c in sorted(pattern.support)]
    path.write_text("\n".join(rows) + "\n")


def pattern_to_dict(pattern: SparsityPattern) -> dict[str, Any]:
    return {
        "n": pattern.n_states,
        "l": pattern.n_inputs,
        "support": [[r + 1, c + 1] for r, c in sorted(pattern.support)],
    }


def structure_to_dict(es: EigenStructure) -> dict[str, Any]:
    """Spectrum summary with 1-based mode labels."""
    reps = set(es.representatives)
    modes = []
    for i, mode in enumerate(es.modes):
        partner = mode.conjugate_partner
        modes.append(
            {
                "index": i + 1,
                "eigenvalue": {
                    "re": float(mode.eigenvalue.real),
                    "im": float(mode.eigenvalue.imag),
                },
                "multiplicity": mode.multiplicity,
                "algebraic_multiplicity": mode.algebraic_multiplicity,
                "residual": float(mode.residual),
                "is_real": mode.is_real,
                "representative": i in reps,
                "conjugate_partner": None if partner is None else partner + 1,
            }
        )
    return {
        "n": es.n,
        "n_modes": len(es.modes),
        "n_representatives": len(es.representatives),
        "k_max": es.k_max,
        "rank_demand": es.rank_demand,
        "min_inputs": es.k_max,
        "diagonalizable": es.is_diagonalizable,
        "modes": modes,
    }


def witness_to_dict(witness: MatchWitness) -> dict[str, Any]:
    return {
        "mode": witness.mode_index + 1,
        "states": [s + 1 for s in witness.states],
        "columns": [c + 1 for c in witness.columns],
        "assignment": {
            str(s + 1): c + 1 for s, c in sorted(witness.assignment.items())
        },
    }


def construction_trace_to_dict(trace: ConstructionTrace) -> dict[str, Any]:
    return {
        "candidate_values": [float(v) for v in trace.candidate_values],
        "final_satisfied": trace.final_satisfied,
        "steps": [
            {
                "mode": step.mode_index + 1,
                "tried_values": [float(v) for v in step.tried_values],
                "chosen_value": float(step.chosen_value),
                "satisfied_modes": step.satisfied_modes,
            }
            for step in trace.steps
        ],
    }


def greedy_trace_to_dict(trace: GreedyTrace) -> dict[str, Any]:
    return {
        "chosen_states": [s + 1 for s in trace.chosen],
        "gains": list(trace.gains),
        "final_value": trace.final_value,
    }


def pattern_trace_to_dict(trace: PatternGreedyTrace) -> dict[str, Any]:
    return {
        "chosen_entries": [[r + 1, c + 1] for r, c in trace.chosen],
        "gains": list(trace.gains),
        "final_value": trace.final_value,
    }


def coloring_to_dict(coloring: Coloring) -> dict[str, Any]:
    return {
        "assignment": {
            str(v + 1): [c + 1 for c in cs]
            for v, cs in sorted(coloring.assignment.items())
        },
        "order": [v + 1 for v in coloring.order],
        "multi_vertices": [v + 1 for v in coloring.multi_vertices],
        "n_colors_used": coloring.n_colors_used,
    }


def certificate_to_dict(cert: BoundCertificate) -> dict[str, Any]:
    return {
        "branch": cert.branch,
        "rank_demand": cert.rank_demand,
        "k_max": cert.k_max,
        "n_inputs": cert.n_inputs,
        "stage1_size": cert.stage1_size,
        "stage1_states": [s + 1 for s in cert.stage1_states],
        "multi_vertices": [v + 1 for v in cert.multi_vertices],
        "sparsity": cert.sparsity,
        "approx_factor": cert.approx_factor,
    }
