"""Exact tools for automorphism bounds of smooth hypersurfaces over finite fields."""

from .bounds import curve_bound, projective_bound, surface_bound, threefold_bound, vector_bound
from .exactnum import GF, QQ, parse_field, prime_to_p_part
from .forms import FormTuple, HomogeneousForm, Matrix, parse_form, parse_tuple, random_form, substitute_linear
from .grouporbit import GroupSpec, linear_stabilizer, projective_stabilizer, verify_divisibility
from .resultant import discriminant_polynomial, discriminant_value, is_singular, macaulay_resultant
from .tangent import infinitesimal_symmetries

__all__ = [
    "GF", "QQ", "FormTuple", "GroupSpec", "HomogeneousForm", "Matrix",
    "curve_bound", "discriminant_polynomial", "discriminant_value", "infinitesimal_symmetries",
    "is_singular", "linear_stabilizer", "macaulay_resultant", "parse_field", "parse_form", "parse_tuple",
    "prime_to_p_part", "projective_bound", "projective_stabilizer", "random_form", "substitute_linear",
    "surface_bound", "threefold_bound", "verify_divisibility", "vector_bound",
]
