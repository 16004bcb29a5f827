"""Tame and wild automorphisms of the differential polynomial algebra Q{x, y}."""

from .algebra import (
    BOTTOM,
    DiffPolynomial,
    DiffVar,
    Limits,
    compare_monomials,
    deg,
    deg_w,
    derive,
    derive_op,
    get_limits,
    leader,
    leading_part,
    limits,
    multidegree,
    substitute,
)
from .amalgam import (
    A0Element,
    B0Element,
    NormalForm,
    affine_coset_split,
    assert_unique,
    conjugate_B0_through_C,
    degree_formula,
    degree_recursion,
    elementary_to_word,
    evaluate,
    normalize,
    triangular_coset_split,
)
from .automorphism import (
    AffineAuto,
    CElement,
    ElementaryAuto,
    Endomorphism,
    TriangularAuto,
    apply,
    auto_degree,
    classify,
    compose,
    invert_affine,
    invert_triangular,
    to_endo,
    verify_inverse_pair,
)
from .errors import CertificationError, DiffAlgebraError, DomainError, ParameterError, ParseError, ResourceError
from .expr import format_poly, parse_poly
from .linsolve import LinearSystem, solve_linear
from .reduction import (
    anick_analog,
    certify_wild_anick,
    decide_tame,
    enumerate_candidate_monomials,
    hom_membership,
    linear_dependence,
    try_elementary_reduce,
)

__version__ = "0.1.0"
