"""Possibilistic case-based decision support.

Remembered (situation, outcome) pairs induce a possibility distribution
over future outcomes; this package estimates the optimistic qualitative
expected utility of acting, either by a fast level-descent over the
distribution's frontier vertices or by exhaustive lattice evaluation,
and exposes the intermediate geometry (densities, distributions, level
cuts, frontiers) for inspection.
"""

from .bench import BenchReport, BenchRow, random_instance, report_to_csv, run_bench
from .estimator import EstimateResult, estimate, frontier_score, rank_partners
from .grid import (
    DEFAULT_BUDGET,
    BudgetError,
    ClassicalEstimate,
    GridField,
    argmax_sets,
    classical_estimate,
    cone_sup_transform,
    grid_density,
    grid_distribution,
    grid_utility,
    qu_optimistic,
    qu_pessimistic,
)
from .model import (
    AffineMap,
    AttributeSpec,
    Case,
    CaseBase,
    EstimatorConfig,
    Query,
    SimilarityFamily,
    UtilityModel,
    ValidationError,
    best_point,
    normalize,
    utility_at,
    validate_case_base,
    validate_query,
    validate_utility,
)
from .possibility import (
    CutGeometry,
    FrontierPoint,
    Hypercuboid,
    density_alpha_cut,
    density_at,
    distribution_alpha_cut,
    distribution_at,
    frontier,
)
from .similarity import (
    case_similarities,
    kernel_at,
    kernel_values,
    pseudo_inverse,
    pseudo_inverse_values,
    situation_similarity,
    tuple_similarity,
)

__version__ = "0.1.0"

__all__ = [
    "AffineMap",
    "AttributeSpec",
    "BenchReport",
    "BenchRow",
    "BudgetError",
    "Case",
    "CaseBase",
    "ClassicalEstimate",
    "CutGeometry",
    "DEFAULT_BUDGET",
    "EstimateResult",
    "EstimatorConfig",
    "FrontierPoint",
    "GridField",
    "Hypercuboid",
    "Query",
    "SimilarityFamily",
    "UtilityModel",
    "ValidationError",
    "argmax_sets",
    "best_point",
    "case_similarities",
    "classical_estimate",
    "cone_sup_transform",
    "density_alpha_cut",
    "density_at",
    "distribution_alpha_cut",
    "distribution_at",
    "estimate",
    "frontier",
    "frontier_score",
    "grid_density",
    "grid_distribution",
    "grid_utility",
    "kernel_at",
    "kernel_values",
    "normalize",
    "pseudo_inverse",
    "pseudo_inverse_values",
    "qu_optimistic",
    "qu_pessimistic",
    "random_instance",
    "rank_partners",
    "report_to_csv",
    "run_bench",
    "situation_similarity",
    "tuple_similarity",
    "utility_at",
    "validate_case_base",
    "validate_query",
    "validate_utility",
    "__version__",
]
