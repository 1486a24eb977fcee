from hungryqd.exact.scalar import FLOAT_TOL, format_scalar, is_zero, parse_scalar, to_mode
from hungryqd.exact.linalg import det, det_cofactor, minor, solve, sylvester_check
from hungryqd.exact.laurent import LaurentMatrix, LaurentPoly, laurent_matmul

__all__ = [
    "FLOAT_TOL",
    "LaurentMatrix",
    "LaurentPoly",
    "det",
    "det_cofactor",
    "format_scalar",
    "is_zero",
    "laurent_matmul",
    "minor",
    "parse_scalar",
    "solve",
    "sylvester_check",
    "to_mode",
]
