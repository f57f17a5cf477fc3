"""Macaulay-matrix test for common projective zeros of n forms in n variables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from luroth.errors import ArityMismatch
from luroth.polycore.matrix import rank_exact, singular_values
from luroth.polycore.poly import MultiPoly, monomials


@dataclass(frozen=True)
class EliminationCertificate:
    """Outcome of the degree-D Macaulay rank test.

    The forms have no common projective zero iff the multiples of degree
    D = sum(d_i - 1) + 1 span all monomials of degree D.  ``rank`` and
    ``columns`` record that comparison; ``sigma`` the relative smallest
    singular value in numeric mode.
    """

    no_common_zero: bool
    degree: int
    rank: int
    columns: int
    exact: bool
    sigma: float | None = None


def macaulay_matrix(forms: Sequence[MultiPoly]):
    n = forms[0].nvars
    if len(forms) != n:
        raise ArityMismatch("need as many forms as variables")
    degs = [f.homogeneous_degree() for f in forms]
    D = sum(d - 1 for d in degs) + 1
    cols = monomials(n, D)
    index = {m: i for i, m in enumerate(cols)}
    rows = []
    for f, d in zip(forms, degs):
        for m in monomials(n, D - d):
            row = [0] * len(cols)
            for e, c in f.terms.items():
                row[index[tuple(a + b for a, b in zip(e, m))]] = c
            rows.append(row)
    return rows, D, len(cols)


def common_zero_test(forms: Sequence[MultiPoly], tol: float = 1e-8) -> EliminationCertificate:
    """Decide whether the forms have a common nontrivial zero.

    Exact input is decided exactly; numeric input by the relative smallest
    singular value of the Macaulay matrix against ``tol``.
    """
    if any(f.is_zero() for f in forms):
        return EliminationCertificate(False, -1, 0, 0, all(f.is_exact() for f in forms))
    rows, D, ncols = macaulay_matrix(forms)
    if all(f.is_exact() for f in forms):
        r = rank_exact(rows)
        return EliminationCertificate(r == ncols, D, r, ncols, True)
    s = singular_values(rows)
    sigma = float(s[ncols - 1] / s[0]) if len(s) >= ncols and s[0] else 0.0
    rank = sum(1 for v in s if v > tol * s[0])
    return EliminationCertificate(sigma > tol, D, rank, ncols, False, sigma)


def smoothness_certificate(form: MultiPoly, tol: float = 1e-8) -> EliminationCertificate:
    """Nonsingularity of the hypersurface {form = 0} via its gradient system."""
    return common_zero_test(form.gradient(), tol)
