"""Elliptic-basis determinant lattices, their relations, hHADT/hQQD and block Lax pairs."""

from hungryqd.elliptic.families import DET_FAMILIES, POLY_FAMILIES, EllipticLattice, EllipticPoly
from hungryqd.elliptic.hadt import hhadt_residual, hqqd_residual, telescoping_residuals
from hungryqd.elliptic.lax import (
    build_lax_elliptic,
    lax_compatibility_residual_elliptic,
    wave_vector_check_elliptic,
)
from hungryqd.elliptic.relations import RELATION_IDS, relation_residual, relation_suite, verify_relation

__all__ = [
    "DET_FAMILIES",
    "POLY_FAMILIES",
    "RELATION_IDS",
    "EllipticLattice",
    "EllipticPoly",
    "build_lax_elliptic",
    "hhadt_residual",
    "hqqd_residual",
    "lax_compatibility_residual_elliptic",
    "relation_residual",
    "relation_suite",
    "telescoping_residuals",
    "verify_relation",
    "wave_vector_check_elliptic",
]
