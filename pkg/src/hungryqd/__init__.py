"""Exact lattices, bi-orthogonal polynomials and Lax pairs for the hungry QD family."""

from hungryqd.errors import (
    BasisIndexError,
    BudgetExceeded,
    DimensionError,
    InvalidMeasure,
    LatticeBreakdown,
    LaxConstructionError,
    OutOfDomain,
)

__version__ = "0.1.0"

__all__ = [
    "BasisIndexError",
    "BudgetExceeded",
    "DimensionError",
    "InvalidMeasure",
    "LatticeBreakdown",
    "LaxConstructionError",
    "OutOfDomain",
]
