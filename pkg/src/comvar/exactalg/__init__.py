"""Prime-field scalars, dense matrices and univariate polynomials."""

from .field import FieldError, ModulusMismatch, PrimeFieldElement, check_prime, is_prime
from .matrix import (
    FieldMatrix,
    column_span_equal,
    commutator,
    mat_mul,
    mat_rank,
    nullspace,
    poly_eval_matrix,
    row_reduce,
)
from .poly import FieldPolynomial, poly_xgcd

__all__ = [
    "FieldError",
    "ModulusMismatch",
    "PrimeFieldElement",
    "check_prime",
    "is_prime",
    "FieldMatrix",
    "commutator",
    "mat_mul",
    "mat_rank",
    "nullspace",
    "row_reduce",
    "column_span_equal",
    "poly_eval_matrix",
    "FieldPolynomial",
    "poly_xgcd",
]
