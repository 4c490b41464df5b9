"""Unambiguous comparison of mixed quantum states.

Given k candidate density matrices and a tuple size n, this package decides
whether a measurement can certify "all n states identical" or "not all
identical" without ever being wrong, constructs explicit operators when one
exists, and verifies every claim by exhaustive evaluation on the n-fold
tensor space.
"""

from .comparison import (
    DEFAULT_CAP,
    ConditionReport,
    MeasurementOperator,
    OperatorKind,
    PovmAssembly,
    Provenance,
    assemble_povm,
    build_m1,
    build_m2_pair,
    build_m2_product,
    build_maximal,
    check_conditions,
    check_m1_condition,
    check_m2_necessary,
    check_m2_structural,
    reduce_candidates,
)
from .errors import (
    CandidateSetError,
    CapExceededError,
    ConditionNotMetError,
    InputError,
    InternalCheckError,
    MixcompError,
    NotHermitianError,
    NotPSDError,
    ShapeError,
    TraceError,
    TupleTooShortError,
)
from .linalg import (
    EigenDecomposition,
    Tolerances,
    hermitian_eigen,
    identity,
    is_psd,
    kron,
    kron_all,
    min_eigenvalue,
    numerical_rank,
    orthonormal_columns,
)
from .oracle import (
    NontrivialityResult,
    TupleClass,
    TupleKind,
    UnambiguityResult,
    classify_tuple,
    decide_exists,
    enumerate_tuples,
    outcome_probability,
    verify_nontrivial,
    verify_unambiguous,
)
from .states import (
    DEMO_NAMES,
    CandidateSet,
    DensityMatrix,
    basis_state,
    candidate_set,
    demo_set,
    from_ensemble,
    maximally_mixed,
    random_density,
    validate_density,
)
from .subspace import (
    Subspace,
    complement,
    contains,
    projector,
    subspace_sum,
    support_of,
)

__version__ = "0.1.0"

__all__ = [
    "CandidateSet",
    "CandidateSetError",
    "CapExceededError",
    "ConditionNotMetError",
    "ConditionReport",
    "DEFAULT_CAP",
    "DEMO_NAMES",
    "DensityMatrix",
    "EigenDecomposition",
    "InputError",
    "InternalCheckError",
    "MeasurementOperator",
    "MixcompError",
    "NontrivialityResult",
    "NotHermitianError",
    "NotPSDError",
    "OperatorKind",
    "PovmAssembly",
    "Provenance",
    "ShapeError",
    "Subspace",
    "Tolerances",
    "TraceError",
    "TupleClass",
    "TupleKind",
    "TupleTooShortError",
    "UnambiguityResult",
    "assemble_povm",
    "basis_state",
    "build_m1",
    "build_m2_pair",
    "build_m2_product",
    "build_maximal",
    "candidate_set",
    "check_conditions",
    "check_m1_condition",
    "check_m2_necessary",
    "check_m2_structural",
    "classify_tuple",
    "complement",
    "contains",
    "decide_exists",
    "demo_set",
    "enumerate_tuples",
    "from_ensemble",
    "hermitian_eigen",
    "identity",
    "is_psd",
    "kron",
    "kron_all",
    "maximally_mixed",
    "min_eigenvalue",
    "numerical_rank",
    "orthonormal_columns",
    "outcome_probability",
    "projector",
    "random_density",
    "reduce_candidates",
    "subspace_sum",
    "support_of",
    "validate_density",
    "verify_nontrivial",
    "verify_unambiguous",
    "__version__",
]
