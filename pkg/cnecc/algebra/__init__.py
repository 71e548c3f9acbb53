"""GF(2) algebra and the polynomial/code text form."""

from .f2 import (
    BinPoly,
    BinMatrix,
    BinPolyMatrix,
    poly_add,
    poly_mul,
    poly_divmod,
    poly_gcd,
    poly_weight,
    poly_det,
    mat_mul,
    mat_inverse,
    rank,
    row_echelon,
    polymat_eval_compose,
    vec_mat,
    vec_to_int,
    int_to_vec,
    vec_label,
)
from .parser import parse_poly, parse_code, format_code

__all__ = [
    "BinPoly",
    "BinMatrix",
    "BinPolyMatrix",
    "poly_add",
    "poly_mul",
    "poly_divmod",
    "poly_gcd",
    "poly_weight",
    "poly_det",
    "mat_mul",
    "mat_inverse",
    "rank",
    "row_echelon",
    "polymat_eval_compose",
    "vec_mat",
    "vec_to_int",
    "int_to_vec",
    "vec_label",
    "parse_poly",
    "parse_code",
    "format_code",
]
