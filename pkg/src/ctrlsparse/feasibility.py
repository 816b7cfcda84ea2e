"""Controllability tests for explicit input matrices, sparsity patterns,
and accessible state sets.

Three levels of the same question:

* :func:`is_controllable` checks one explicit pair (A, B): every mode's
  left eigenbasis must keep full row rank after multiplication by B.
* :func:`pattern_feasible` checks a sparsity pattern: some assignment of
  the free entries must give a controllable B, which holds if and only if
  every representative mode is independently matched by the pattern.
* :func:`micp_feasible` checks a state set: some B supported on the
  allowed rows must be controllable, which holds if and only if every
  representative mode keeps full rank on the allowed columns of its
  eigenbasis. When feasible, the minimum number of independent inputs is
  the largest mode multiplicity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .matroid import MatchWitness, independently_matched
from .pattern import SparsityPattern
from .spectral import (
    EigenStructure,
    ToleranceConfig,
    _as_config,
    as_eigenstructure,
    numeric_rank,
    scaled_rank,
    validate_state_matrix,
)


def _as_allowed(allowed: Iterable[int] | None, n: int) -> tuple[int, ...]:
    if allowed is None:
        return tuple(range(n))
    out = sorted(set(int(s) for s in allowed))
    for s in out:
        if not 0 <= s < n:
            raise ValueError(f"state index {s} out of range for n={n}")
    if not out:
        raise ValueError("allowed state set is empty")
    return tuple(out)


def kalman_rank(
    a: np.ndarray, b: np.ndarray, tol: ToleranceConfig | float | None = None
) -> int:
    """Rank of the controllability matrix [B, AB, ..., A^(n-1)B].

    Exponentially bad conditioning limits this to small n; it is kept as an
    independent cross-check of the eigenbasis test.
    """
    a = validate_state_matrix(a)
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if b.shape[0] != a.shape[0]:
        raise ValueError("B must have one row per state")
    blocks = [b]
    for _ in range(a.shape[0] - 1):
        blocks.append(a @ blocks[-1])
    return numeric_rank(np.hstack(blocks), tol)


def is_controllable(
    system: np.ndarray | EigenStructure,
    b: np.ndarray,
    tol: ToleranceConfig | float | None = None,
    method: str = "eigen",
) -> bool:
    """Whether (A, B) is controllable.

    method="eigen" checks rank(X_i^T B) == k_i for every representative
    mode; method="kalman" uses the controllability matrix instead.
    """
    es = as_eigenstructure(system, tol)
    b = np.atleast_2d(np.asarray(b, dtype=float))
    if b.ndim != 2 or b.shape[0] != es.n:
        raise ValueError("B must be a 2-D array with one row per state")
    if method == "kalman":
        if isinstance(system, EigenStructure):
            raise ValueError("the kalman method needs the state matrix itself")
        return kalman_rank(system, b, tol) == es.n
    if method != "eigen":
        raise ValueError(f"unknown method {method!r}")
    cfg = _as_config(tol)
    # the eigenbases are orthonormal, so B's own column scale bounds every
    # product X_i^T B; ranking each product against that external scale
    # keeps a product made of pure rounding noise at rank zero
    col_norms = np.linalg.norm(b, axis=0)
    scale = float(col_norms.max()) if col_norms.size else 0.0
    cutoff = cfg.rank_cutoff(b.shape) * scale
    for i in es.representatives:
        mode = es.modes[i]
        if scaled_rank(mode.basis.T @ b, cutoff) < mode.multiplicity:
            return False
    return True


@dataclass(frozen=True)
class FeasibilityReport:
    """Outcome of a pattern feasibility check.

    On success ``witnesses`` holds one :class:`MatchWitness` per
    representative mode. On failure ``failed_mode`` names the first mode
    (in representative order) that cannot be independently matched.
    """

    feasible: bool
    witnesses: tuple[MatchWitness, ...]
    failed_mode: int | None = None

    def __bool__(self) -> bool:
        return self.feasible


def pattern_feasible(
    system: np.ndarray | EigenStructure,
    pattern: SparsityPattern,
    tol: ToleranceConfig | float | None = None,
) -> FeasibilityReport:
    """Whether some assignment of the pattern's free entries gives a
    controllable input matrix.

    Equivalent statements, of which the second is what gets computed: the
    pattern admits a controllable B; every representative mode has a
    full-multiplicity state set that is both linearly independent in its
    eigenbasis and matchable to distinct input columns.
    """
    es = as_eigenstructure(system, tol)
    if pattern.n_states != es.n:
        raise ValueError("pattern row count does not match the state dimension")
    witnesses: list[MatchWitness] = []
    for i in es.representatives:
        ok, w = independently_matched(es, i, pattern, tol)
        if not ok:
            return FeasibilityReport(False, tuple(witnesses), failed_mode=i)
        witnesses.append(w)
    return FeasibilityReport(True, tuple(witnesses))


@dataclass(frozen=True)
class AccessReport:
    """Outcome of an accessible-state analysis.

    ``min_inputs`` is the smallest number of input columns for which a
    controllable input matrix supported on the allowed rows exists (the
    largest mode multiplicity); None when infeasible.
    """

    feasible: bool
    min_inputs: int | None
    failed_mode: int | None = None

    def __bool__(self) -> bool:
        return self.feasible


def micp_feasible(
    system: np.ndarray | EigenStructure,
    allowed: Iterable[int] | None = None,
    tol: ToleranceConfig | float | None = None,
) -> AccessReport:
    """Whether a controllable input matrix exists using only the allowed
    state rows, and how many inputs it needs at minimum.

    Feasibility requires every representative mode's eigenbasis to keep
    full row rank when restricted to the allowed states. The reported
    minimum input count is the largest mode multiplicity.
    """
    es = as_eigenstructure(system, tol)
    allowed = _as_allowed(allowed, es.n)
    for i in es.representatives:
        mode = es.modes[i]
        if mode.column_rank(allowed, tol) < mode.multiplicity:
            return AccessReport(False, None, failed_mode=i)
    return AccessReport(True, es.k_max)
