"""Exact construction of (involution-invariant, split) quaternion subalgebras of M_n(F).

Typical use::

    from involquat import GF, Matrix, InvolutionAlgebra, invariant_quat_for_metabolic

    F = GF(3)
    alg = InvolutionAlgebra(F, 2)            # transpose involution
    Q = invariant_quat_for_metabolic(alg, e)  # QuaternionSubalgebra or falsy NoSubalgebra
"""

from .errors import (
    CertificationError,
    ExceptionalCase,
    FieldTooLarge,
    Infeasible,
    InvolquatError,
    NotHyperbolic,
    NotIdempotent,
    NotMetabolic,
    NotSquareCentral,
    NotSymmetric,
    PreconditionViolated,
    ScalarInput,
    SquareNotCentral,
)
from .exactfield import GF, QQ, FieldSpec, Scalar, parse_field_name
from .idempotent import (
    IdempotentClass,
    IdempotentReport,
    classify_idempotent,
    hyperbolize_metabolic,
    idempotent_generator,
    orth_complement_ideal,
    twist_metabolic,
)
from .involalg import (
    InvolutionAlgebra,
    InvolutionType,
    Kind,
    apply_involution,
    classify_involution,
    compute_subspace,
    express_in_alt,
    find_half_unit,
    in_alt,
)
from .matspace import Matrix, idempotent_normal_form, square_central_normal_form
from .quatconstruct import (
    NoSubalgebra,
    QuaternionSubalgebra,
    hyperbolic_splitting,
    invariant_quat_for_alt_element,
    invariant_quat_for_hyperbolic,
    invariant_quat_for_metabolic,
    invariant_quat_for_skew_element,
    invariant_quat_for_symmetric_char2,
    invariant_quat_with_nilpotent,
    make_w,
    quat_char2_alt_shift,
    skew_to_alt_idempotent,
    skew_to_metabolic,
    split_quaternion_containing,
    validate_quaternion_subalgebra,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
