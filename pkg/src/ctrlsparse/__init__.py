"""Sparsity-constrained controllability analysis and actuator selection.

The package answers four questions about a linear time-invariant system
given only its state matrix:

* which zero/nonzero patterns of the input matrix admit a controllable
  realization, decided exactly through the eigenstructure;
* how to build a concrete real input matrix for any feasible pattern,
  deterministically and over a small set of integer values;
* which few states to actuate so the system becomes controllable, with a
  greedy method whose approximation factor is logarithmic;
* how to spread a fixed number of input columns over as few entries as
  possible, with a direct greedy and a certified two-stage method.

Exhaustive oracles, random system generators, a benchmark harness, file
formats, and a command line round the package out.
"""

from .bench import BenchConfig, BenchRecord, run_benchmark, summarize, write_csv
from .errors import (
    BudgetError,
    CtrlSparseError,
    EigenClusterError,
    InfeasibleAccessError,
    InfeasiblePatternError,
    NotStableError,
    RealizationNumericError,
)
from .feasibility import (
    AccessReport,
    FeasibilityReport,
    micp_feasible,
    is_controllable,
    kalman_rank,
    pattern_feasible,
)
from .generators import gen_jordan, gen_scale_free, stabilize
from .io import (
    load_matrix,
    load_pattern,
    pattern_to_dict,
    save_matrix,
    save_pattern,
    structure_to_dict,
)
from .ism import IsmGraph, build_ism_graph, to_dot
from .macp import (
    GreedyTrace,
    gramian_greedy_macp,
    greedy_column_select,
    greedy_macp,
    input_rank_sum,
    mode_rank_sum,
)
from .matroid import (
    LinearModeMatroid,
    MatchWitness,
    TransversalMatroid,
    extract_mode_basis,
    independently_matched,
    is_h_set,
    matched_multiplicity,
    matroid_intersection,
)
from .mscp import (
    BoundCertificate,
    Coloring,
    ConflictGraph,
    EquivalenceCase,
    PatternGreedyTrace,
    build_conflict_graph,
    color_conflict_graph,
    matched_rank_sum,
    mscp_matches_macp,
    simple_greedy_mscp,
    two_stage_mscp,
)
from .oracle import brute_macp, brute_mscp
from .pattern import (
    SparsityPattern,
    generic_rank,
    max_bipartite_matching,
    pattern_union,
)
from .realization import (
    ConstructionStep,
    ConstructionTrace,
    construct_input_matrix,
    min_input_pattern,
    pattern_from_rows,
)
from .spectral import (
    DEFAULT_TOL,
    EigenMode,
    EigenStructure,
    ToleranceConfig,
    as_eigenstructure,
    compute_eigenstructure,
    mode_representatives,
    numeric_rank,
    reconstruct_state_matrix,
    scaled_rank,
)

__version__ = "0.1.0"

__all__ = [
    "AccessReport",
    "as_eigenstructure",
    "BenchConfig",
    "BenchRecord",
    "BoundCertificate",
    "brute_macp",
    "brute_mscp",
    "BudgetError",
    "build_conflict_graph",
    "build_ism_graph",
    "color_conflict_graph",
    "Coloring",
    "compute_eigenstructure",
    "ConflictGraph",
    "construct_input_matrix",
    "ConstructionStep",
    "ConstructionTrace",
    "CtrlSparseError",
    "DEFAULT_TOL",
    "EigenClusterError",
    "EigenMode",
    "EigenStructure",
    "EquivalenceCase",
    "extract_mode_basis",
    "FeasibilityReport",
    "gen_jordan",
    "gen_scale_free",
    "generic_rank",
    "gramian_greedy_macp",
    "greedy_column_select",
    "greedy_macp",
    "GreedyTrace",
    "independently_matched",
    "InfeasibleAccessError",
    "InfeasiblePatternError",
    "input_rank_sum",
    "is_controllable",
    "is_h_set",
    "IsmGraph",
    "kalman_rank",
    "LinearModeMatroid",
    "load_matrix",
    "load_pattern",
    "matched_multiplicity",
    "matched_rank_sum",
    "MatchWitness",
    "matroid_intersection",
    "max_bipartite_matching",
    "micp_feasible",
    "min_input_pattern",
    "mode_rank_sum",
    "mode_representatives",
    "mscp_matches_macp",
    "NotStableError",
    "numeric_rank",
    "pattern_feasible",
    "pattern_from_rows",
    "pattern_to_dict",
    "pattern_union",
    "PatternGreedyTrace",
    "RealizationNumericError",
    "reconstruct_state_matrix",
    "run_benchmark",
    "save_matrix",
    "save_pattern",
    "scaled_rank",
    "simple_greedy_mscp",
    "SparsityPattern",
    "stabilize",
    "structure_to_dict",
    "summarize",
    "to_dot",
    "ToleranceConfig",
    "TransversalMatroid",
    "two_stage_mscp",
    "write_csv",
]
