"""Nonnegative resultant forms on the line with the antipodal involution.

Exact construction of the restricted resultants of conjugation-symmetric
section pairs of rank-2 bundles, exact verification of their degree,
zero-set and identity structure, characteristic-class arithmetic for the
vanishing-pair locus, and sum-of-squares certification (exact witnesses and
exact non-representability certificates, with a numeric feasibility solver
as fallback).
"""

from .chern import (
    CohomologyClass,
    CurveBundleParams,
    c2_number_sym2,
    chern_character_sym2,
    chern_classes_sym2,
    class_multiply,
    degree_v2,
    pair_with_fundamental,
    sos_obstruction,
)
from .linalg import (
    Matrix,
    exact_determinant,
    exact_kernel,
    exact_rank,
    hessian_at,
    is_psd_exact,
)
from .poly import ComplexScalar, MultiPoly
from .resultants import (
    Bracket,
    ComplexPoly,
    ComplexUniPoly,
    bezout3_resultant,
    bezout3_sign,
    bracket,
    resultant,
    sylvester_matrix,
)
from .sections import (
    BracketInvariants,
    BundleSpec,
    ChartError,
    Flavor,
    InternalConsistencyError,
    RealChart,
    ResultantForm,
    bracket_invariants,
    build_chart,
    build_resultant_form,
    closed_bracket_form,
    common_zero_family,
    kernel_direction_residual,
    positive_part_value,
    section_involution,
)
from .sos import (
    Certificate,
    GramProblem,
    GramUsageError,
    MonomialBasis,
    certify,
    exact_span_check,
    extract_squares,
    facial_reduce,
    gram_system,
    monomial_basis,
    sdp_feasible,
)

__version__ = "0.1.0"

__all__ = [
    "BracketInvariants",
    "Bracket",
    "BundleSpec",
    "Certificate",
    "ChartError",
    "CohomologyClass",
    "ComplexPoly",
    "ComplexScalar",
    "ComplexUniPoly",
    "CurveBundleParams",
    "Flavor",
    "GramProblem",
    "GramUsageError",
    "InternalConsistencyError",
    "Matrix",
    "MonomialBasis",
    "MultiPoly",
    "RealChart",
    "ResultantForm",
    "bezout3_resultant",
    "bezout3_sign",
    "bracket",
    "bracket_invariants",
    "build_chart",
    "build_resultant_form",
    "c2_number_sym2",
    "certify",
    "chern_character_sym2",
    "chern_classes_sym2",
    "class_multiply",
    "closed_bracket_form",
    "common_zero_family",
    "degree_v2",
    "exact_determinant",
    "exact_kernel",
    "exact_rank",
    "exact_span_check",
    "extract_squares",
    "facial_reduce",
    "gram_system",
    "hessian_at",
    "is_psd_exact",
    "kernel_direction_residual",
    "monomial_basis",
    "pair_with_fundamental",
    "positive_part_value",
    "resultant",
    "sdp_feasible",
    "section_involution",
    "sos_obstruction",
    "sylvester_matrix",
]
