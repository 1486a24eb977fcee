"""One-variable striped moment lattices: tau, bi-orthogonal polynomials, schemes, Lax pairs."""

from hungryqd.qd.lax import build_lax, lax_compatibility_residual, wave_vector_check
from hungryqd.qd.polys import (
    PolyX,
    biorthogonality_report,
    build_poly,
    recurrence_coeffs,
    verify_linear_relations,
)
from hungryqd.qd.schemes import (
    DHLV,
    DHQD,
    SchemeWindow,
    evolve_dhlv,
    evolve_dhqd,
    hirota_check,
    verify_scheme,
)
from hungryqd.qd.tau import TauLattice, qd_var

__all__ = [
    "DHLV",
    "DHQD",
    "PolyX",
    "SchemeWindow",
    "TauLattice",
    "biorthogonality_report",
    "build_lax",
    "build_poly",
    "evolve_dhlv",
    "evolve_dhqd",
    "hirota_check",
    "lax_compatibility_residual",
    "qd_var",
    "recurrence_coeffs",
    "verify_linear_relations",
    "verify_scheme",
    "wave_vector_check",
]
