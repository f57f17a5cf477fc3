"""Exact/numeric scalars, sparse polynomials, determinants and root finding."""
from luroth.polycore.scalar import (
    DEFAULT_PREC,
    DEFAULT_TOL,
    Scalar,
    exact,
    is_exact,
    is_zero,
    numeric,
    precision,
    projectively_equal,
)
from luroth.polycore.poly import MultiPoly, binary_coeffs, linear_form, monomials, ring, univariate_coeffs
from luroth.polycore.matrix import (
    PolyMatrix,
    bareiss_det,
    block_skew,
    det,
    det_laplace,
    nullspace_exact,
    pfaffian,
    pfaffian_expansion,
    rank_exact,
)
from luroth.polycore.resultant import resultant, sylvester_matrix
from luroth.polycore.roots import Root, binary_roots, cluster_radius, roots_numeric
from luroth.polycore.elimination import EliminationCertificate, common_zero_test, smoothness_certificate

__all__ = [
    "DEFAULT_PREC", "DEFAULT_TOL", "Scalar", "exact", "is_exact", "is_zero", "numeric", "precision",
    "projectively_equal", "MultiPoly", "binary_coeffs", "linear_form", "monomials", "ring",
    "univariate_coeffs", "PolyMatrix", "bareiss_det", "block_skew", "det", "det_laplace",
    "nullspace_exact", "pfaffian", "pfaffian_expansion", "rank_exact", "resultant",
    "sylvester_matrix", "Root", "binary_roots", "cluster_radius", "roots_numeric",
    "EliminationCertificate", "common_zero_test", "smoothness_certificate",
]
