"""Partial-transpose moments, spectrum reconstruction and entanglement certification."""

from .certify import (
    CertificationReport,
    MixtureCheck,
    Verdict,
    certify_max_entangled_2q,
    lambda_min_from_max_entangled_moments,
    max_entangled_moment_vector,
    mixture_lambda_min_property,
    negativity,
    ppt_check,
    pure_pt_spectrum,
)
from .config import DEFAULTS, Tolerances
from .errors import (
    ComplexRootsDetected,
    ConvergenceError,
    IncompatibleDimensions,
    InvalidMoments,
    InvalidRank,
    InvalidState,
    NotHermitian,
    NotNormalized,
    NotSquare,
    NotUnitary,
    PTMomentError,
    WrongDimensions,
)
from .moments import (
    ElementarySymmetric,
    PTMomentVector,
    RanaReport,
    characteristic_polynomial,
    check_rana,
    elementary_to_moments,
    moments_to_elementary,
    pt_moments,
    reconstruct_spectrum,
)
from .numkit import hermitian_eigensystem, real_poly_roots, svd, trace_power
from .states import (
    BipartiteState,
    SchmidtForm,
    load_state,
    max_entangled,
    partial_transpose,
    pt_spectrum,
    random_state,
    save_state,
    schmidt,
    swap_operator,
    unvec,
    vec,
)

__version__ = "0.1.0"
