"""Shared fixtures: the worked 6-state system, its printed eigenbases, and
the 4-state RLC ladder. All index conventions here are 0-based."""

from __future__ import annotations

import numpy as np
import pytest

from ctrlsparse import EigenMode, EigenStructure, SparsityPattern, compute_eigenstructure


@pytest.fixture(scope="session")
def example1_a() -> np.ndarray:
    return np.array(
        [
            [4 / 3, 0, 0, -4 / 3, 0, 0],
            [0, 1, 0, 0, 0, 0],
            [0, 0, 3, 0, 0, 0],
            [-1 / 6, 0, 0, 5 / 3, 0, 0],
            [0, 0, -3, 0, 2, 0],
            [0, 1, 0, 0, 0, 3],
        ]
    )


@pytest.fixture(scope="session")
def example1_es(example1_a) -> EigenStructure:
    return compute_eigenstructure(example1_a)


@pytest.fixture(scope="session")
def example1_printed_es() -> EigenStructure:
    """The eigenbases exactly as printed for the worked system.

    Hand-built rather than computed so tests can pin arc lists and H-sets
    to the published numbers; the computed SVD bases span the same spaces
    but mix the rows.
    """
    x1 = np.array([[1, 0, 0, 2, 0, 0], [0, 1, 0, 0, 0, 0]], dtype=float).T
    x2 = np.array([[0, 0, 3, 0, 1, 0], [-1, 0, 0, 4, 0, 0]], dtype=float).T
    x3 = np.array([[0, 1, 0, 0, 0, 2], [0, 0, 1, 0, 0, 0]], dtype=float).T
    modes = tuple(
        EigenMode(
            eigenvalue=complex(lam),
            multiplicity=2,
            algebraic_multiplicity=2,
            basis=x,
            residual=0.0,
            conjugate_partner=None,
        )
        for lam, x in ((1.0, x1), (2.0, x2), (3.0, x3))
    )
    return EigenStructure(n=6, modes=modes)


@pytest.fixture(scope="session")
def fig2_pattern() -> SparsityPattern:
    return SparsityPattern.from_pairs(6, 2, [(0, 0), (1, 0), (1, 1), (2, 1)])


@pytest.fixture(scope="session")
def circuit_a() -> np.ndarray:
    # two-loop RLC ladder with unit parameters; one conjugate eigenvalue
    # pair, each defective (algebraic 2, geometric 1)
    return np.array(
        [
            [-1, -1, 0, 0],
            [1, 0, -1, 0],
            [0, 0, -1, -1],
            [0, 0, 1, 0],
        ],
        dtype=float,
    )


@pytest.fixture(scope="session")
def circuit_es(circuit_a) -> EigenStructure:
    return compute_eigenstructure(circuit_a)
