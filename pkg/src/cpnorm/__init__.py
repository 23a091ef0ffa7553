"""Schatten p->q norms of completely positive maps.

Computes ||phi||_{S_p -> S_q} for a completely positive map given in Kraus
form, via a duality-map power iteration on the positive semidefinite cone,
together with Hilbert-projective-metric contraction certificates and an
independent brute-force oracle for desk-scale verification.
"""

from .__about__ import __version__
from .config import DISTANCE_OVERFLOW, HERMITIZE_RTOL, RANK_RTOL, subseed
from .errors import (
    CPNormError,
    DegenerateMap,
    DeskScaleExceeded,
    DimMismatch,
    InvalidExponent,
    InvalidInput,
    KrausRedundancyWarning,
    NotApplicable,
    NotPsd,
    ZeroInput,
)
from .hermitian import (
    EigDecomp,
    HermitianMatrix,
    PsdClass,
    PsdKind,
    abs_matrix,
    classify_psd,
    eig_decompose,
    frobenius_inner,
    frobenius_norm,
    hermitian_part,
    loewner_geq,
    matrix_power,
    numerical_rank,
    psd_spectrum,
    random_hermitian,
    random_psd,
    random_unit_vector,
    require_hermitian,
)
from .schatten import SchattenExponent, as_exponent, dual_exponent, duality_map, schatten_norm
from .cpmap import (
    CPMap,
    StructuralProperty,
    StructuralVerdict,
    Verdict,
    check_fully_indecomposable,
    check_positively_improving,
    depolarizing_channel,
    embed_nonnegative_matrix,
    identity_channel,
    objective,
    random_cpmap,
)
from .hilbert import (
    ContractionReport,
    DiagnosticsReport,
    HilbertDistance,
    contraction_report,
    estimate_diameter,
    hilbert_distance,
    m_ratio,
    run_diagnostics,
    same_part,
    sampled_contraction_ratio,
    step_contraction_bound,
)
from .power import (
    IterationStatus,
    NormResult,
    PowerConfig,
    PowerTrace,
    TraceRow,
    critical_point_residual,
    default_start,
    power_step,
    run_power_method,
)
from .oracle import (
    DESK_SCALE_LIMIT,
    CrossValidation,
    OracleMethod,
    OracleResult,
    classical_pq_norm,
    cross_validate,
    oracle_max,
    spectral_grid_max,
)
from .fileio import MapFile, generate_map, load_map, parse_map, save_map, serialize_map

__all__ = [
    "__version__",
    "RANK_RTOL",
    "HERMITIZE_RTOL",
    "DISTANCE_OVERFLOW",
    "subseed",
    "CPNormError",
    "InvalidInput",
    "DimMismatch",
    "NotPsd",
    "InvalidExponent",
    "ZeroInput",
    "DegenerateMap",
    "NotApplicable",
    "DeskScaleExceeded",
    "KrausRedundancyWarning",
    "HermitianMatrix",
    "EigDecomp",
    "PsdKind",
    "PsdClass",
    "hermitian_part",
    "require_hermitian",
    "frobenius_norm",
    "frobenius_inner",
    "eig_decompose",
    "psd_spectrum",
    "matrix_power",
    "abs_matrix",
    "loewner_geq",
    "numerical_rank",
    "classify_psd",
    "random_hermitian",
    "random_psd",
    "random_unit_vector",
    "SchattenExponent",
    "dual_exponent",
    "as_exponent",
    "schatten_norm",
    "duality_map",
    "CPMap",
    "identity_channel",
    "depolarizing_channel",
    "embed_nonnegative_matrix",
    "random_cpmap",
    "objective",
    "StructuralProperty",
    "Verdict",
    "StructuralVerdict",
    "check_fully_indecomposable",
    "check_positively_improving",
    "HilbertDistance",
    "m_ratio",
    "hilbert_distance",
    "same_part",
    "ContractionReport",
    "estimate_diameter",
    "step_contraction_bound",
    "contraction_report",
    "sampled_contraction_ratio",
    "DiagnosticsReport",
    "run_diagnostics",
    "IterationStatus",
    "PowerConfig",
    "TraceRow",
    "PowerTrace",
    "NormResult",
    "default_start",
    "power_step",
    "critical_point_residual",
    "run_power_method",
    "DESK_SCALE_LIMIT",
    "OracleMethod",
    "OracleResult",
    "oracle_max",
    "spectral_grid_max",
    "classical_pq_norm",
    "CrossValidation",
    "cross_validate",
    "MapFile",
    "parse_map",
    "serialize_map",
    "load_map",
    "save_map",
    "generate_map",
]
