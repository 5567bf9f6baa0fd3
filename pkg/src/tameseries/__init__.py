"""Ratio-limit analysis for tame power series."""

__version__ = "0.1.0"

from .polynomials import Poly
from .rational_functions import RationalFunctionRep
from .rational_subsets import RationalPartition, RationalSubset
from .groups_growth import FreeProductSpec, bfs_counts, growth_series
from .sequence_core import (
    CoefficientStream,
    Derivative,
    ExplicitCoeffs,
    FreeProduct,
    GaussianRational,
    NamedIndexSet,
    NotTameError,
    OscillatingModel,
    RationalFunction,
    Rescale,
    SqrtRatioSeries,
    Sum,
    TamenessCertificate,
    certify_tameness,
    coefficients,
    radius_bounds,
    spec_from_json,
    spec_to_rational,
)
from .opposite_space import (
    AccumulationReport,
    InitialEstimate,
    detect_accumulation,
    opposite_polynomial,
)
from .opposite_algebra import (
    CoefficientMatrix,
    DenominatorPair,
    ResidueMatrix,
    StratumLabel,
    coefficient_matrix_and_discriminant,
    denominator_pair,
    enumerate_labels,
    numerators,
    opposite_roots,
    reduced_numerators,
    residue_matrix,
    stratum_classify,
    stratum_sample,
)
from .pole_analysis import (
    NonMeromorphicInput,
    PolarData,
    PoleSet,
    UndecidableBoundary,
    boundary_poles,
    polar_polynomials,
)
from .rational_operators import (
    OperatorIdentityReport,
    SectionedRational,
    operator_identity_suite,
    section_by_subset,
    section_rational,
    section_stream,
)
from .duality import (
    DualityReport,
    TransitionMatrix,
    pole_side_matrix,
    series_side_matrix,
    verify_duality,
)

__all__ = [
    "Poly",
    "RationalFunctionRep",
    "RationalPartition",
    "RationalSubset",
    "FreeProductSpec",
    "bfs_counts",
    "growth_series",
    "CoefficientStream",
    "Derivative",
    "ExplicitCoeffs",
    "FreeProduct",
    "GaussianRational",
    "NamedIndexSet",
    "NotTameError",
    "OscillatingModel",
    "RationalFunction",
    "Rescale",
    "SqrtRatioSeries",
    "Sum",
    "TamenessCertificate",
    "certify_tameness",
    "coefficients",
    "radius_bounds",
    "spec_from_json",
    "spec_to_rational",
    "AccumulationReport",
    "InitialEstimate",
    "detect_accumulation",
    "opposite_polynomial",
    "CoefficientMatrix",
    "DenominatorPair",
    "ResidueMatrix",
    "StratumLabel",
    "coefficient_matrix_and_discriminant",
    "denominator_pair",
    "enumerate_labels",
    "numerators",
    "opposite_roots",
    "reduced_numerators",
    "residue_matrix",
    "stratum_classify",
    "stratum_sample",
    "NonMeromorphicInput",
    "PolarData",
    "PoleSet",
    "UndecidableBoundary",
    "boundary_poles",
    "polar_polynomials",
    "OperatorIdentityReport",
    "SectionedRational",
    "operator_identity_suite",
    "section_by_subset",
    "section_rational",
    "section_stream",
    "DualityReport",
    "TransitionMatrix",
    "pole_side_matrix",
    "series_side_matrix",
    "verify_duality",
]
