"""Sylvester resultants."""
from __future__ import annotations

import mpmath

from luroth.errors import VariableMismatch
from luroth.polycore.matrix import bareiss_det, det
from luroth.polycore.poly import MultiPoly


def sylvester_matrix(f: MultiPoly, g: MultiPoly, var: str):
    """Sylvester matrix of f, g in ``var``; entries are polynomials in the other variables."""
    if f.variables != g.variables:
        raise VariableMismatch(f"{f.variables} vs {g.variables}")
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant of the zero polynomial is undefined")
    fc = f.coeffs_in(var)[::-1]
    gc = g.coeffs_in(var)[::-1]
    m, n = len(fc) - 1, len(gc) - 1
    rest = fc[0].variables
    zero = MultiPoly(rest)
    size = m + n
    rows = []
    for i in range(n):
        rows.append([zero] * i + fc + [zero] * (size - m - 1 - i))
    for i in range(m):
        rows.append([zero] * i + gc + [zero] * (size - n - 1 - i))
    return rows


def resultant(f: MultiPoly, g: MultiPoly, var: str) -> MultiPoly:
    """Resultant eliminating ``var``, as a polynomial in the remaining variables.

    It vanishes at a specialization of the other variables iff the
    specialized f and g share a root in ``var`` or both leading coefficients
    vanish.
    """
    rows = sylvester_matrix(f, g, var)
    rest = f.coeffs_in(var)[0].variables
    if not rows:
        return MultiPoly.const(1, rest)
    if f.is_exact() and g.is_exact():
        return bareiss_det(rows)
    if len(rest) == 0:
        scalar_rows = [[e.coefficient(()) for e in r] for r in rows]
        return MultiPoly.const(det(scalar_rows), rest)
    if len(rest) == 1:
        return _interpolated_resultant(rows, rest)
    return _numeric_bareiss(rows)


def _interpolated_resultant(rows, rest) -> MultiPoly:
    # Degree bound: sum over rows of the largest entry degree.
    bound = sum(max((e.degree() for e in r), default=0) for r in rows)
    npts = bound + 1
    values = []
    omega = [mpmath.expjpi(2 * mpmath.mpf(k) / npts) for k in range(npts)]
    for x in omega:
        sub = [[e.evaluate([x]) for e in r] for r in rows]
        values.append(det(sub))
    coeffs = {}
    scale = max(abs(v) for v in values) if values else 0
    for j in range(npts):
        c = sum(values[k] * mpmath.conj(omega[(j * k) % npts]) for k in range(npts)) / npts
        if scale == 0 or abs(c) > scale * mpmath.mpf(2) ** (-mpmath.mp.prec + 8):
            coeffs[(j,)] = c
    return MultiPoly(rest, coeffs)


def _numeric_bareiss(rows):
    n = len(rows)
    m = [list(r) for r in rows]
    sign = 1
    prev = None
    for k in range(n - 1):
        p = max(range(k, n), key=lambda i: m[i][k].coeff_norm())
        if m[p][k].is_zero():
            return MultiPoly(rows[0][0].variables)
        if p != k:
            m[k], m[p] = m[p], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = m[k][k] * m[i][j] - m[i][k] * m[k][j]
                m[i][j] = num if prev is None else num.exquo(prev, tol=1e-20)
        prev = m[k][k]
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d
