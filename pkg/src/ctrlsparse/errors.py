"""Exception types shared across the package."""


class CtrlSparseError(Exception):
    """Base class for errors raised by this package."""


class EigenClusterError(CtrlSparseError, ValueError):
    """Two eigenvalues fell inside the clustering tolerance but the merged
    location carries no numeric null space, so they cannot be treated as one
    eigenvalue. Carries the offending pair for diagnosis."""

    def __init__(self, pair, message=None):
        self.pair = tuple(pair)
        if message is None:
            message = (
                "eigenvalue cluster at {0!r} has no numeric null space; "
                "the members are likely distinct eigenvalues closer than the "
                "clustering tolerance. Tighten cluster_tol or inspect the "
                "spectrum.".format(self.pair)
            )
        super().__init__(message)


class InfeasiblePatternError(CtrlSparseError, ValueError):
    """A sparsity pattern cannot support controllability.

    ``mode_index`` names the first mode whose matching requirement fails.
    """

    def __init__(self, mode_index, message=None):
        self.mode_index = mode_index
        if message is None:
            message = (
                f"pattern infeasible: mode {mode_index} cannot be "
                "independently matched at its full multiplicity"
            )
        super().__init__(message)


class InfeasibleAccessError(CtrlSparseError, ValueError):
    """The allowed state set cannot yield a controllable input matrix.

    ``mode_index`` names the first mode whose eigenbasis loses rank when
    restricted to the allowed states.
    """

    def __init__(self, mode_index, message=None):
        self.mode_index = mode_index
        if message is None:
            message = (
                f"no controllable input matrix exists: mode {mode_index} "
                "drops rank on the allowed state set"
            )
        super().__init__(message)


class NotStableError(CtrlSparseError, ValueError):
    """The state matrix is not Hurwitz but the operation needs a stable one
    (the infinite-horizon Lyapunov equation has no positive solution
    otherwise). Callers should shift the spectrum first, see
    ``generators.stabilize``."""


class BudgetError(CtrlSparseError, RuntimeError):
    """A brute-force oracle refused to run because the enumeration budget
    would be exceeded. Oracles are meant for certification at small sizes,
    not for production use."""


class RealizationNumericError(CtrlSparseError, RuntimeError):
    """The deterministic construction exhausted its candidate values while
    some mode determinant stayed below the zero threshold. Usually a
    tolerance problem: loosen det_rel_tol or supply a larger candidate set."""
