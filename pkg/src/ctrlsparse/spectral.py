"""Left eigenstructure of a real state matrix.

Everything downstream (feasibility tests, input-matrix construction, the
selection heuristics) is phrased in terms of the distinct eigenvalues of the
state matrix ``A`` and, for each one, a basis of its left null space::

    X_i^T (lambda_i I - A) = 0,      X_i of shape (n, k_i)

where ``k_i`` is the geometric multiplicity. This module computes that
structure numerically:

* eigenvalues are clustered into distinct values with a relative tolerance,
* each basis is the SVD null space of ``(lambda_i I - A)^T``,
* complex eigenvalues of a real matrix are stored as explicit conjugate
  pairs whose bases are entrywise conjugates of each other, so that one
  member of each pair (the "representative") carries all the information.

All rank decisions in the package go through :func:`numeric_rank` with the
same relative cutoff so that results stay consistent between modules.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EigenClusterError

_EPS = float(np.finfo(np.float64).eps)


@dataclass(frozen=True)
class ToleranceConfig:
    """Numeric thresholds used across the package.

    rank_rel_tol:
        Relative singular-value cutoff for rank decisions. ``None`` selects
        the per-matrix default ``max(n_rows, n_cols) * eps * 64``.
    det_rel_tol:
        A determinant is treated as zero when its magnitude does not exceed
        ``det_rel_tol`` times the product of the row norms of the matrix
        (the Hadamard bound, which makes the test scale invariant).
    cluster_tol:
        Two eigenvalues are the same distinct eigenvalue when their distance
        is at most ``cluster_tol * (1 + |lambda|)``.
    """

    rank_rel_tol: float | None = None
    det_rel_tol: float = 1e-10
    cluster_tol: float = 1e-8

    def __post_init__(self):
        if self.rank_rel_tol is not None and not self.rank_rel_tol > 0:
            raise ValueError("rank_rel_tol must be strictly positive")
        if not self.det_rel_tol > 0:
            raise ValueError("det_rel_tol must be strictly positive")
        if not self.cluster_tol > 0:
            raise ValueError("cluster_tol must be strictly positive")

    def rank_cutoff(self, shape: tuple[int, int]) -> float:
        """Relative cutoff to apply to the singular values of a matrix of
        the given shape."""
        if self.rank_rel_tol is not None:
            return self.rank_rel_tol
        return max(max(shape), 1) * _EPS * 64.0


DEFAULT_TOL = ToleranceConfig()


def _as_config(tol: ToleranceConfig | float | None) -> ToleranceConfig:
    if tol is None:
        return DEFAULT_TOL
    if isinstance(tol, ToleranceConfig):
        return tol
    return ToleranceConfig(rank_rel_tol=float(tol))


def validate_state_matrix(a: np.ndarray) -> np.ndarray:
    """Check that ``a`` is a finite real square matrix, return it as float64."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"state matrix must be square, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ValueError("state matrix must be nonempty")
    if not np.all(np.isfinite(a)):
        raise ValueError("state matrix contains non-finite entries")
    return a


def numeric_rank(m: np.ndarray, tol: ToleranceConfig | float | None = None) -> int:
    """Numeric rank of a (possibly complex) matrix.

    Counts singular values above ``cutoff * sigma_max`` where the relative
    cutoff comes from the tolerance configuration. A matrix with no entries
    or with all entries zero has rank 0.
    """
    m = np.atleast_2d(np.asarray(m))
    if m.size == 0:
        return 0
    cfg = _as_config(tol)
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > cfg.rank_cutoff(m.shape) * s[0]))


def scaled_rank(m: np.ndarray, cutoff: float) -> int:
    """Number of singular values strictly above an absolute cutoff.

    Used when a matrix is a slice of a larger object and must be judged
    against the parent's scale: a slice holding only rounding noise has a
    perfectly finite sigma_max of its own, so the plain relative rank
    would report rank one where the parent holds exact zeros.
    """
    m = np.atleast_2d(np.asarray(m))
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.count_nonzero(s > cutoff))


@dataclass(frozen=True)
class EigenMode:
    """One distinct eigenvalue of the state matrix.

    basis has shape (n, multiplicity); its columns span the left null space
    of ``eigenvalue * I - A`` (plain transpose convention, no conjugation:
    ``basis.T @ (eigenvalue * I - A) = 0``). ``conjugate_partner`` is the
    index of the paired mode for complex eigenvalues, None for real ones.
    """

    eigenvalue: complex
    multiplicity: int
    algebraic_multiplicity: int
    basis: np.ndarray
    residual: float
    conjugate_partner: int | None

    @property
    def is_real(self) -> bool:
        return self.conjugate_partner is None

    def basis_columns(self, states) -> np.ndarray:
        """Rows of ``basis.T`` restricted to the given state columns, i.e.
        the (multiplicity x len(states)) matrix whose rank decisions drive
        every feasibility question about those states."""
        idx = np.asarray(sorted(states), dtype=int)
        return self.basis.T[:, idx] if idx.size else self.basis.T[:, :0]

    def column_scale(self) -> float:
        """Largest per-state column norm of the transposed basis."""
        if self.basis.size == 0:
            return 0.0
        return float(np.linalg.norm(self.basis, axis=1).max())

    def column_rank(self, states, tol=None) -> int:
        """Rank of the eigenbasis columns at ``states``, with zeros judged
        against the scale of the whole basis rather than the slice itself.

        A state where the eigenbasis is numerically zero can then never
        contribute rank, no matter how the selection is sliced, which
        keeps this count consistent with the matroid independence tests.
        """
        cfg = _as_config(tol)
        cutoff = cfg.rank_cutoff(self.basis.T.shape) * self.column_scale()
        return scaled_rank(self.basis_columns(states), cutoff)


@dataclass(frozen=True)
class EigenStructure:
    """Distinct eigenvalues of a state matrix with their left eigenbases.

    Mode order: real eigenvalues first (ascending), then one mode per
    conjugate pair (ascending by real then imaginary part), then the paired
    conjugates in the same order. ``representatives`` indexes the first two
    groups; the trailing conjugates add no independent information for real
    input matrices.
    """

    n: int
    modes: tuple[EigenMode, ...]

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def n_real(self) -> int:
        return sum(1 for m in self.modes if m.is_real)

    @property
    def n_complex(self) -> int:
        return self.n_modes - self.n_real

    @property
    def k_max(self) -> int:
        return max(m.multiplicity for m in self.modes)

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(range(self.n_real + self.n_complex // 2))

    @property
    def rank_demand(self) -> int:
        """Sum of multiplicities over representative modes. Any controllable
        configuration must supply this much rank in total, so it is the
        stopping target of the greedy selections."""
        return sum(self.modes[i].multiplicity for i in self.representatives)

    @property
    def is_diagonalizable(self) -> bool:
        return sum(m.multiplicity for m in self.modes) == self.n

    def mode(self, i: int) -> EigenMode:
        return self.modes[i]


def mode_representatives(es: EigenStructure) -> tuple[int, ...]:
    """Indices of the modes that need checking for real input matrices.

    Real modes count once; each complex conjugate pair counts once because
    the paired bases are entrywise conjugates, so any rank or matching
    statement about one member holds for the other.
    """
    return es.representatives


def _cluster_values(values: np.ndarray, cluster_tol: float) -> list[np.ndarray]:
    """Group values (1-D complex array) whose pairwise distance is within
    ``cluster_tol * (1 + |value|)``, transitively. Returns the groups sorted
    by (real, imag) of their means."""
    m = values.size
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            scale = 1.0 + max(abs(values[i]), abs(values[j]))
            if abs(values[i] - values[j]) <= cluster_tol * scale:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[rj] = ri
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    clusters = [values[np.asarray(ix)] for ix in groups.values()]
    clusters.sort(key=lambda c: (c.mean().real, c.mean().imag))
    return clusters


def _left_null_basis(
    a: np.ndarray, lam: complex, cfg: ToleranceConfig
) -> tuple[np.ndarray, float]:
    """Basis of the left null space of ``lam * I - A`` via SVD.

    Returns (basis, residual) where basis has one column per singular value
    below the rank cutoff and residual is the Frobenius norm of
    ``basis.T @ (lam * I - A)``. Real eigenvalues are handled in real
    arithmetic so their bases come out real.
    """
    n = a.shape[0]
    if lam.imag == 0.0:
        m = lam.real * np.eye(n) - a.T
    else:
        m = lam * np.eye(n) - a.T
    _, s, vh = np.linalg.svd(m)
    if s[0] == 0.0:
        # lam*I - A is the zero matrix, the whole space is null
        basis = np.eye(n, dtype=m.dtype)
    else:
        cutoff = cfg.rank_cutoff(m.shape) * s[0]
        null_dim = int(np.count_nonzero(s <= cutoff))
        if null_dim == 0:
            return np.zeros((n, 0), dtype=m.dtype), 0.0
        basis = vh[n - null_dim :].conj().T
    residual = float(np.linalg.norm(basis.T @ (lam * np.eye(n) - a)))
    return basis, residual


def compute_eigenstructure(
    a: np.ndarray, tol: ToleranceConfig | float | None = None
) -> EigenStructure:
    """Distinct eigenvalues of ``a`` with left eigenbases and conjugate links.

    Parameters
    ----------
    a : (n, n) array_like
        Real state matrix.
    tol : ToleranceConfig or float, optional
        Tolerances; a bare float is taken as ``rank_rel_tol``.

    Raises
    ------
    EigenClusterError
        If a cluster of computed eigenvalues has no numeric null space at
        its merged location, which means genuinely distinct eigenvalues sit
        closer together than ``cluster_tol`` allows telling apart.
    """
    a = validate_state_matrix(a)
    cfg = _as_config(tol)
    n = a.shape[0]
    eigs = np.linalg.eigvals(a)

    # split into (numerically) real values and complex ones
    real_mask = np.abs(eigs.imag) <= cfg.cluster_tol * (1.0 + np.abs(eigs))
    reals = eigs[real_mask].real.astype(complex)
    pos = eigs[~real_mask & (eigs.imag > 0)]
    neg = eigs[~real_mask & (eigs.imag < 0)]
    if pos.size != neg.size:
        raise EigenClusterError(
            (complex(eigs[0]),),
            "complex eigenvalues do not pair into conjugates; the matrix "
            "may be too ill conditioned for this tolerance",
        )

    real_clusters = _cluster_values(reals, cfg.cluster_tol) if reals.size else []
    pos_clusters = _cluster_values(pos, cfg.cluster_tol) if pos.size else []

    def make_mode(cluster: np.ndarray, force_real: bool) -> tuple[complex, int, np.ndarray, float]:
        lam = complex(cluster.mean())
        if force_real:
            lam = complex(lam.real)
        if abs(lam) <= cfg.cluster_tol:
            # an eigenvalue indistinguishable from zero is evaluated at
            # exactly zero: for a singular A the null space there is sharp,
            # while at the cluster mean it can be blurred by the scatter
            # that defective chains induce on computed eigenvalues
            lam = complex(0.0)
        basis, residual = _left_null_basis(a, lam, cfg)
        if basis.shape[1] == 0:
            raise EigenClusterError(tuple(complex(c) for c in cluster))
        return lam, cluster.size, basis, residual

    modes: list[EigenMode] = []
    for cluster in real_clusters:
        lam, alg, basis, res = make_mode(cluster, force_real=True)
        modes.append(
            EigenMode(
                eigenvalue=lam,
                multiplicity=basis.shape[1],
                algebraic_multiplicity=alg,
                basis=basis,
                residual=res,
                conjugate_partner=None,
            )
        )

    pos_modes: list[EigenMode] = []
    for cluster in pos_clusters:
        lam, alg, basis, res = make_mode(cluster, force_real=False)
        pos_modes.append(
            EigenMode(
                eigenvalue=lam,
                multiplicity=basis.shape[1],
                algebraic_multiplicity=alg,
                basis=basis,
                residual=res,
                conjugate_partner=None,  # patched below
            )
        )

    n_real = len(modes)
    n_pairs = len(pos_modes)
    out: list[EigenMode] = list(modes)
    for j, pm in enumerate(pos_modes):
        out.append(
            EigenMode(
                eigenvalue=pm.eigenvalue,
                multiplicity=pm.multiplicity,
                algebraic_multiplicity=pm.algebraic_multiplicity,
                basis=pm.basis,
                residual=pm.residual,
                conjugate_partner=n_real + n_pairs + j,
            )
        )
    for j, pm in enumerate(pos_modes):
        out.append(
            EigenMode(
                eigenvalue=pm.eigenvalue.conjugate(),
                multiplicity=pm.multiplicity,
                algebraic_multiplicity=pm.algebraic_multiplicity,
                basis=pm.basis.conj(),
                residual=pm.residual,
                conjugate_partner=n_real + j,
            )
        )
    return EigenStructure(n=n, modes=tuple(out))


def as_eigenstructure(
    system: np.ndarray | EigenStructure, tol: ToleranceConfig | float | None = None
) -> EigenStructure:
    """Accept either a state matrix or a precomputed structure."""
    if isinstance(system, EigenStructure):
        return system
    return compute_eigenstructure(system, tol)


def reconstruct_state_matrix(es: EigenStructure) -> np.ndarray:
    """Rebuild ``A`` from the eigenstructure, for validation.

    Only defined when the matrix is diagonalizable (the left eigenvectors
    then form a complete basis): stacking all left eigenvectors as rows Y
    with their eigenvalues on a diagonal L gives ``Y A = L Y``.
    """
    if not es.is_diagonalizable:
        raise ValueError("reconstruction requires a diagonalizable matrix")
    rows = []
    lams = []
    for mode in es.modes:
        for j in range(mode.multiplicity):
            rows.append(mode.basis[:, j])
            lams.append(mode.eigenvalue)
    y = np.array(rows)
    lam = np.diag(lams)
    a = np.linalg.solve(y, lam @ y)
    return a.real
