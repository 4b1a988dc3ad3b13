"""Exact construction, verification, reduction and census of matrix solutions
of YX - gamma XY = I with gamma a primitive l-th root of unity."""
from .canonical import (
    Solution,
    nonsingular_solution,
    singular_alpha_solution,
    singular_solution,
    structural_report,
    verify_relation,
)
from .exactfield import FieldElem, make_cyclotomic_field, make_prime_field
from .matrixcore import Mat
from .reduce import CanonicalForm, are_equivalent, canonicalize

__all__ = [
    "CanonicalForm",
    "FieldElem",
    "Mat",
    "Solution",
    "are_equivalent",
    "canonicalize",
    "make_cyclotomic_field",
    "make_prime_field",
    "nonsingular_solution",
    "singular_alpha_solution",
    "singular_solution",
    "structural_report",
    "verify_relation",
]
