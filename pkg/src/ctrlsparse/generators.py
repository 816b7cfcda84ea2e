"""Random test-system generators and a stability shift.

gen_jordan draws diagonalizable systems with a known spectrum: distinct
integer eigenvalues whose geometric multiplicities are capped, conjugated
by a random well-conditioned similarity. gen_scale_free grows a directed
network by preferential attachment, which concentrates eigenvalues at
zero and produces the high-multiplicity modes that separate the spectral
methods from energy-based baselines. stabilize shifts a matrix until it
is Hurwitz without touching its eigenvectors or multiplicities.
"""

from __future__ import annotations

from typing import Any

import numpy as np


def gen_jordan(
    n: int,
    k_max: int = 3,
    density: float = 0.5,
    seed: Any = None,
    return_spectrum: bool = False,
):
    """Diagonalizable matrix with controlled geometric multiplicities.

    Multiplicities are drawn uniformly from 1..k_max until they sum to n
    (the last draw is truncated). Eigenvalue i is the integer i+1, so the
    spectrum is exactly known. The similarity is a sparse random matrix
    made diagonally dominant, redrawn until its condition number is below
    1e6 so the output stays numerically honest.

    With return_spectrum=True also returns (eigenvalues, multiplicities).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if k_max < 1:
        raise ValueError("k_max must be positive")
    if not 0.0 <= density <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    rng = np.random.default_rng(seed)

    ks: list[int] = []
    total = 0
    while total < n:
        k = int(rng.integers(1, k_max + 1))
        k = min(k, n - total)
        ks.append(k)
        total += k
    p = len(ks)
    eigenvalues = np.arange(1, p + 1, dtype=float)
    diag = np.repeat(eigenvalues, ks)

    for _ in range(100):
        x = rng.standard_normal((n, n))
        keep = rng.random((n, n)) < density
        x = x * keep
        np.fill_diagonal(x, 0.0)
        np.fill_diagonal(x, 1.0 + np.sum(np.abs(x), axis=1))
        if np.linalg.cond(x) <= 1e6:
            break
    else:
        raise RuntimeError("could not draw a well-conditioned similarity")

    a = np.linalg.solve(x.T, (x * diag).T).T
    if return_spectrum:
        return a, eigenvalues, tuple(ks)
    return a


def gen_scale_free(
    n: int,
    avg_degree_coeff: float = 0.3,
    seed: Any = None,
) -> np.ndarray:
    """Weighted adjacency matrix of a preferential-attachment digraph.

    Each new node attaches to existing nodes with probability
    proportional to one plus their degree, adding round(coeff * ln n)
    edges whose directions are drawn at random. Weights are uniform on
    [0, 1]. The coefficient controls density: the default keeps the
    graph very sparse (one edge per new node up to a few hundred
    states), where the zero eigenvalue carries high geometric
    multiplicity and many states must be actuated. Denser settings
    drift toward the near-trivial regime where a handful of states
    controls everything.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if avg_degree_coeff <= 0:
        raise ValueError("avg_degree_coeff must be positive")
    rng = np.random.default_rng(seed)
    a = np.zeros((n, n))
    degree = np.zeros(n)
    d_target = int(round(avg_degree_coeff * np.log(n))) if n > 1 else 0
    d_target = min(max(d_target, 1), n - 1) if n > 1 else 0
    for v in range(1, n):
        d = min(d_target, v)
        weights = 1.0 + degree[:v]
        targets = rng.choice(v, size=d, replace=False, p=weights / weights.sum())
        for t in np.sort(targets):
            w = rng.uniform(0.0, 1.0)
            if rng.random() < 0.5:
                a[t, v] = w
            else:
                a[v, t] = w
            degree[t] += 1
            degree[v] += 1
    return a


def stabilize(a: np.ndarray) -> np.ndarray:
    """Shift the matrix so every eigenvalue has negative real part.

    Subtracting a multiple of the identity moves the spectrum left while
    preserving eigenvectors and multiplicities, so state-selection
    answers on the shifted matrix match the original. Matrices already
    Hurwitz are returned unchanged.
    """
    a = np.asarray(a, dtype=float)
    max_re = float(np.max(np.linalg.eigvals(a).real))
    if max_re < 0.0:
        return a
    return a - (1.1 * max_re + 0.1) * np.eye(a.shape[0])
