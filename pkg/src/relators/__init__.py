"""Computational toolkit for tuples of cyclically reduced relators.

The package covers word combinatorics over free groups, small cancellation
checks, exponent-sum (abelianized) invariants, free differential calculus,
a height-profile minimum condition with its commutator-insertion map, graded
truncated-inverse certificates, deficiency-preserving embeddings into
two-generator small-cancellation targets, and a seeded experiment harness.
"""

from .words import (
    CyclicWord,
    Presentation,
    Substitution,
    Word,
    count_cyclically_reduced,
    cyclic_reduce,
    enumerate_cyclically_reduced,
    format_word,
    letter_inverse,
    letter_order,
    parse_cyclic_word,
    parse_word,
    reduce,
    sample_cyclically_reduced,
    sample_reduced,
    substitute,
)
from .smallcanc import (
    PieceLocation,
    PieceReport,
    check_small_cancellation,
    longest_piece,
)
from .abelian import (
    Slope,
    abelianization_matrix,
    count_slope_classes,
    enumerate_kernel_slopes,
    enumerate_valid_slopes,
    first_betti_number,
    hermite_row_basis,
    matrix_rank,
    slope_basis,
    smith_normal_form,
)
from .fox import (
    GroupRingElement,
    JacobianMatrix,
    format_ring_element,
    fox_derivative,
    jacobian,
    parse_ring_element,
    ring_multiply,
)
from .mincond import (
    HeightProfile,
    LowerSection,
    MinConditionFailure,
    MinConditionWitness,
    Relabeling,
    check_minimum_condition,
    height_profile,
    lower_section,
    standard_witness,
    standardize,
    tau_deficiency_one,
    tau_inverse,
    tau_slope,
)
from .novikov import (
    GradedCertificate,
    GradedElement,
    LowestTermReport,
    TermLimitExceeded,
    grade,
    injectivity_certificate,
    min_degree,
    truncated_neumann_inverse,
    verify_fox_lowest_terms,
)
from .embed import (
    EmbeddingPlan,
    EmbeddingReport,
    LengthStats,
    build_w_words,
    embed_presentation,
)
from .experiment import (
    ExperimentConfig,
    ExperimentRow,
    PredicateSpec,
    TauCountResult,
    derive_seed,
    parse_config,
    rows_to_csv,
    run_experiment,
    tau_count,
    wilson_interval,
)

__all__ = [
    "CyclicWord",
    "Presentation",
    "Substitution",
    "Word",
    "count_cyclically_reduced",
    "cyclic_reduce",
    "enumerate_cyclically_reduced",
    "format_word",
    "letter_inverse",
    "letter_order",
    "parse_cyclic_word",
    "parse_word",
    "reduce",
    "sample_cyclically_reduced",
    "sample_reduced",
    "substitute",
    "PieceLocation",
    "PieceReport",
    "check_small_cancellation",
    "longest_piece",
    "Slope",
    "abelianization_matrix",
    "count_slope_classes",
    "enumerate_kernel_slopes",
    "enumerate_valid_slopes",
    "first_betti_number",
    "hermite_row_basis",
    "matrix_rank",
    "slope_basis",
    "smith_normal_form",
    "GroupRingElement",
    "JacobianMatrix",
    "format_ring_element",
    "fox_derivative",
    "jacobian",
    "parse_ring_element",
    "ring_multiply",
    "HeightProfile",
    "LowerSection",
    "MinConditionFailure",
    "MinConditionWitness",
    "Relabeling",
    "check_minimum_condition",
    "height_profile",
    "lower_section",
    "standard_witness",
    "standardize",
    "tau_deficiency_one",
    "tau_inverse",
    "tau_slope",
    "GradedCertificate",
    "GradedElement",
    "LowestTermReport",
    "TermLimitExceeded",
    "grade",
    "injectivity_certificate",
    "min_degree",
    "truncated_neumann_inverse",
    "verify_fox_lowest_terms",
    "EmbeddingPlan",
    "EmbeddingReport",
    "LengthStats",
    "build_w_words",
    "embed_presentation",
    "ExperimentConfig",
    "ExperimentRow",
    "PredicateSpec",
    "TauCountResult",
    "derive_seed",
    "parse_config",
    "rows_to_csv",
    "run_experiment",
    "tau_count",
    "wilson_interval",
]
