"""Deterministic construction of real input matrices.

:func:`construct_input_matrix` turns any feasible sparsity pattern into an
explicit controllable B without randomness. Per representative mode it
first extracts a matched witness (a full-multiplicity state set with a
column assignment); the witness entries of mode i form a partial permutation
inside the pattern, so filling them with a common value m makes the mode's
test determinant a nonzero polynomial in m. The construction walks the
modes once; whenever a mode's determinant is still zero it tries a short
list of candidate values and keeps the one that leaves the most mode
determinants nonzero, breaking ties toward the smallest value. At most one
pass over the modes is needed and every choice is deterministic, so equal
inputs give bit-identical outputs.

:func:`min_input_pattern` builds a sparsest-in-columns pattern for an
allowed state set (as many columns as the largest multiplicity), and
:func:`pattern_from_rows` spreads the same construction over any requested
number of columns. Both produce patterns that are feasible by
construction, so they compose with :func:`construct_input_matrix`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InfeasibleAccessError, InfeasiblePatternError, RealizationNumericError
from .feasibility import _as_allowed, micp_feasible
from .matroid import MatchWitness, extract_mode_basis, independently_matched
from .pattern import SparsityPattern, pattern_union
from .spectral import (
    EigenStructure,
    ToleranceConfig,
    _as_config,
    as_eigenstructure,
)


@dataclass(frozen=True)
class ConstructionStep:
    """One iteration of the value-selection loop."""

    mode_index: int
    tried_values: tuple[float, ...]
    chosen_value: float
    satisfied_modes: int


@dataclass(frozen=True)
class ConstructionTrace:
    steps: tuple[ConstructionStep, ...]
    candidate_values: tuple[float, ...]
    final_satisfied: int


def _det_is_nonzero(m: np.ndarray, cfg: ToleranceConfig, scale: float) -> bool:
    """Zero test for a mode determinant.

    Two causes make the determinant small and they need different
    verdicts. A row sitting at rounding-noise level relative to the data
    scale means the values never actually reach this mode; such a row
    fails the same cutoff every rank decision uses and the determinant
    counts as zero, however the row-relative ratio comes out. Rows that
    clear the cutoff are honest, possibly ill conditioned, and for them
    the classic Hadamard ratio |det| / prod(row norms) decides whether
    the chosen values hit a degenerate combination.
    """
    if m.shape[0] != m.shape[1]:
        raise ValueError("determinant test needs a square matrix")
    if m.shape[0] == 0:
        return True
    row_norms = np.linalg.norm(m, axis=1)
    if np.any(row_norms <= cfg.rank_cutoff(m.shape) * scale):
        return False
    bound = float(np.prod(row_norms))
    det = np.linalg.det(m)
    return abs(det) > cfg.det_rel_tol * bound


def construct_input_matrix(
    system: np.ndarray | EigenStructure,
    pattern: SparsityPattern,
    tol: ToleranceConfig | float | None = None,
    candidate_values: Sequence[float] | None = None,
) -> tuple[np.ndarray, ConstructionTrace]:
    """Deterministic real B respecting the pattern with (A, B) controllable.

    Parameters
    ----------
    system : state matrix or precomputed eigenstructure
    pattern : SparsityPattern
        Must be feasible; otherwise :class:`InfeasiblePatternError` is
        raised naming the first failing mode.
    candidate_values : sequence of distinct reals, optional
        Values tried for the witness entries of a mode whose determinant is
        still zero. The default is ``1, 2, ..., 1 + D`` where D is the
        total multiplicity over representative modes, which is always
        enough in exact arithmetic because each mode determinant is a
        nonzero polynomial of degree at most its multiplicity.

    Returns
    -------
    (b, trace)
        ``b`` is the constructed matrix, supported inside the pattern.
        ``trace`` logs the per-mode choices.

    Raises
    ------
    RealizationNumericError
        If every candidate value leaves some mode determinant below the
        zero threshold, which indicates a tolerance problem rather than
        infeasibility (feasibility was already certified by the witnesses).
    """
    es = as_eigenstructure(system, tol)
    cfg = _as_config(tol)
    if pattern.n_states != es.n:
        raise ValueError("pattern row count does not match the state dimension")

    reps = es.representatives
    witnesses: list[MatchWitness] = []
    for i in reps:
        ok, w = independently_matched(es, i, pattern, tol)
        if not ok:
            raise InfeasiblePatternError(i)
        witnesses.append(w)

    if candidate_values is None:
        candidates = tuple(float(v) for v in range(1, es.rank_demand + 2))
    else:
        candidates = tuple(sorted(float(v) for v in candidate_values))
        if len(set(candidates)) != len(candidates):
            raise ValueError("candidate values must be distinct")
        if not candidates:
            raise ValueError("candidate values must be nonempty")

    def mode_det_ok(b: np.ndarray, idx: int) -> bool:
        w = witnesses[idx]
        mode = es.modes[reps[idx]]
        cols = list(w.columns)
        sub = mode.basis.T @ b[:, cols]
        # the eigenbasis columns are unit vectors, so the witness columns'
        # own largest norm bounds every honest row of the product
        col_norms = np.linalg.norm(b[:, cols], axis=0)
        scale = float(col_norms.max()) if col_norms.size else 0.0
        return _det_is_nonzero(sub, cfg, scale)

    def satisfied_count(b: np.ndarray) -> int:
        return sum(1 for idx in range(len(reps)) if mode_det_ok(b, idx))

    b = np.zeros((es.n, pattern.n_inputs))
    steps: list[ConstructionStep] = []
    for idx in range(len(reps)):
        if mode_det_ok(b, idx):
            continue
        w = witnesses[idx]
        best_value: float | None = None
        best_count = -1
        for value in candidates:
            trial = b.copy()
            for state, col in w.assignment.items():
                trial[state, col] += value
            count = satisfied_count(trial)
            if count > best_count:
                best_count = count
                best_value = value
        assert best_value is not None
        for state, col in w.assignment.items():
            b[state, col] += best_value
        steps.append(
            ConstructionStep(
                mode_index=reps[idx],
                tried_values=candidates,
                chosen_value=best_value,
                satisfied_modes=best_count,
            )
        )
        if best_count == len(reps):
            break

    final = satisfied_count(b)
    if final < len(reps):
        raise RealizationNumericError(
            "construction exhausted its candidate values with "
            f"{len(reps) - final} mode determinant(s) still below the zero "
            "threshold; loosen det_rel_tol or pass a larger candidate set"
        )
    trace = ConstructionTrace(
        steps=tuple(steps), candidate_values=candidates, final_satisfied=final
    )
    return b, trace


def min_input_pattern(
    system: np.ndarray | EigenStructure,
    allowed: Iterable[int] | None = None,
    tol: ToleranceConfig | float | None = None,
) -> SparsityPattern:
    """Feasible pattern on the allowed rows with the minimum number of
    input columns (the largest mode multiplicity).

    Per representative mode, the lowest-index allowed states that span the
    mode are placed one per column in ascending order; the per-mode blocks
    are unioned. Raises :class:`InfeasibleAccessError` when some mode drops
    rank on the allowed states (then no controllable B on those rows exists
    for any number of inputs).
    """
    es = as_eigenstructure(system, tol)
    allowed_t = _as_allowed(allowed, es.n)
    report = micp_feasible(es, allowed_t, tol)
    if not report:
        raise InfeasibleAccessError(report.failed_mode)
    return _spread_pattern(es, allowed_t, es.k_max, tol)


def pattern_from_rows(
    system: np.ndarray | EigenStructure,
    rows: Iterable[int],
    n_inputs: int,
    tol: ToleranceConfig | float | None = None,
) -> SparsityPattern:
    """Feasible ``n x n_inputs`` pattern whose nonzero rows lie in ``rows``.

    Requires ``n_inputs`` at least the largest mode multiplicity and the
    given rows to span every representative mode, mirroring the fact that a
    state set serving a diagonal input matrix serves any input count from
    the largest multiplicity upward.
    """
    es = as_eigenstructure(system, tol)
    rows_t = _as_allowed(rows, es.n)
    if n_inputs < es.k_max:
        raise InfeasiblePatternError(
            None,
            f"{n_inputs} input(s) cannot control a mode of multiplicity "
            f"{es.k_max}; at least k_max columns are necessary",
        )
    report = micp_feasible(es, rows_t, tol)
    if not report:
        raise InfeasibleAccessError(report.failed_mode)
    return _spread_pattern(es, rows_t, n_inputs, tol)


def _spread_pattern(
    es: EigenStructure,
    allowed: tuple[int, ...],
    n_inputs: int,
    tol: ToleranceConfig | float | None,
) -> SparsityPattern:
    blocks = []
    for i in es.representatives:
        basis_states = extract_mode_basis(es, i, allowed, tol)
        blocks.append(
            SparsityPattern.from_pairs(
                es.n, n_inputs, ((s, j) for j, s in enumerate(basis_states))
            )
        )
    return pattern_union(*blocks)
