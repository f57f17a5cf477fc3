"""Determinants, pfaffians and small dense linear algebra.

Entries may be exact rationals, mpmath numbers or :class:`MultiPoly`.  Exact
and polynomial determinants use fraction-free (Bareiss) elimination; numeric
ones use mpmath with partial pivoting.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import List, Sequence

import mpmath

from luroth.errors import NotSkewError, NotSquareError
from luroth.polycore.poly import MultiPoly
from luroth.polycore.scalar import numeric


def _is_poly(x) -> bool:
    return isinstance(x, MultiPoly)


def _kind(rows) -> str:
    flat = [x for r in rows for x in r]
    if any(_is_poly(x) for x in flat):
        return "poly"
    if all(isinstance(x, Rational) for x in flat):
        return "exact"
    return "numeric"


def _square(rows) -> int:
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise NotSquareError(f"matrix is not square ({n} rows, row lengths {[len(r) for r in rows]})")
    return n


def _iszero(x) -> bool:
    return x.is_zero() if _is_poly(x) else x == 0


def _exdiv(a, b):
    if _is_poly(a):
        return a.exquo(b if _is_poly(b) else MultiPoly.const(b, a.variables))
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        return q if r == 0 else Fraction(a, b)
    return a / b


def bareiss_det(rows):
    """Fraction-free determinant over an integral domain (ints, Fractions, polynomials)."""
    n = _square(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if _iszero(m[k][k]):
            for i in range(k + 1, n):
                if not _iszero(m[i][k]):
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return _zero_like(rows)
        pivot = m[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = _exdiv(pivot * m[i][j] - m[i][k] * m[k][j], prev)
        prev = pivot
    d = m[n - 1][n - 1]
    return -d if sign < 0 else d


def _zero_like(rows):
    for r in rows:
        for x in r:
            if _is_poly(x):
                return MultiPoly(x.variables)
    return 0


def mp_det(a):
    """mpmath.det, returning 0 where mpmath's pivot search hits an exactly
    zero column (it raises TypeError there instead of reporting singularity)."""
    try:
        return mpmath.det(a)
    except TypeError:
        return mpmath.mpf(0)


def mp_lu_solve(a, b):
    """mpmath.lu_solve raising ZeroDivisionError for every singular matrix."""
    try:
        return mpmath.lu_solve(a, b)
    except TypeError:
        raise ZeroDivisionError("matrix is numerically singular") from None


def det(rows):
    """Determinant, dispatching on entry type."""
    n = _square(rows)
    kind = _kind(rows)
    if kind == "numeric":
        if n == 0:
            return mpmath.mpc(1)
        return mp_det(mpmath.matrix([[numeric(x) for x in r] for r in rows]))
    return bareiss_det(rows)


def det_laplace(rows):
    """Determinant by cofactor expansion with memoized minors (independent oracle)."""
    n = _square(rows)
    if n == 0:
        return 1

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple):
        if row == n:
            return 1
        total = 0
        for pos, c in enumerate(cols):
            entry = rows[row][c]
            if _iszero(entry):
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            total = total + term if pos % 2 == 0 else total - term
        return total

    return minor(0, tuple(range(n)))


def check_skew(rows) -> int:
    n = _square(rows)
    for i in range(n):
        if not _iszero(rows[i][i]):
            raise NotSkewError("nonzero diagonal entry")
        for j in range(i + 1, n):
            s = rows[i][j] + rows[j][i]
            if not _iszero(s):
                if _kind([[s]]) == "numeric" and abs(s) <= 1e-25 * (1 + abs(numeric(rows[i][j]))):
                    continue
                raise NotSkewError(f"entries ({i},{j}) and ({j},{i}) are not opposite")
    return n


def pfaffian(rows):
    """Pfaffian of an even-size skew-symmetric matrix; Pf(M)^2 = det(M)."""
    n = check_skew(rows)
    if n % 2:
        raise NotSkewError("pfaffian needs an even-size matrix")
    kind = _kind(rows)
    if kind == "poly":
        return pfaffian_expansion(rows)
    return _pfaffian_elimination(rows, exact=(kind == "exact"))


def _pfaffian_elimination(rows, exact: bool):
    n = len(rows)
    a = [[(Fraction(x) if exact else numeric(x)) for x in r] for r in rows]
    pf = Fraction(1) if exact else mpmath.mpc(1)
    for k in range(0, n, 2):
        if exact:
            piv = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
            if piv is None:
                return Fraction(0)
        else:
            piv = max(range(k + 1, n), key=lambda j: abs(a[k][j]))
            if a[k][piv] == 0:
                return mpmath.mpc(0)
        if piv != k + 1:
            _swap(a, k + 1, piv)
            pf = -pf
        p = a[k][k + 1]
        pf *= p
        for i in range(k + 2, n):
            c = -a[k][i] / p
            if c != 0:
                _addmul(a, i, k + 1, c)
            d = a[k + 1][i] / p
            if d != 0:
                _addmul(a, i, k, d)
    return pf


def _swap(a, i, j):
    a[i], a[j] = a[j], a[i]
    for r in a:
        r[i], r[j] = r[j], r[i]


def _addmul(a, i, j, c):
    """Congruence: row_i += c*row_j then col_i += c*col_j."""
    ri, rj = a[i], a[j]
    for t in range(len(a)):
        ri[t] += c * rj[t]
    for r in a:
        r[i] += c * r[j]


def pfaffian_expansion(rows):
    """Pfaffian by first-row expansion with memoization over index subsets."""
    n = check_skew(rows)
    if n % 2:
        raise NotSkewError("pfaffian needs an even-size matrix")

    @lru_cache(maxsize=None)
    def pf(idx: tuple):
        if not idx:
            return 1
        i = idx[0]
        total = 0
        for pos in range(1, len(idx)):
            j = idx[pos]
            entry = rows[i][j]
            if _iszero(entry):
                continue
            rest = idx[1:pos] + idx[pos + 1:]
            term = entry * pf(rest)
            total = total + term if pos % 2 == 1 else total - term
        return total

    return pf(tuple(range(n)))


def rref(rows):
    """Exact reduced row echelon form; returns (matrix, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank_exact(rows) -> int:
    return len(rref(rows)[1])


def nullspace_exact(rows, ncols: int | None = None) -> List[List[Fraction]]:
    """Basis of the right kernel; each vector has a 1 in its free column."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    m, pivots = rref(rows)
    ncols = len(m[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][f]
        basis.append(v)
    return basis


def singular_values(rows) -> list:
    """Singular values (descending) of a numeric or exact matrix, as mpf."""
    m = mpmath.matrix([[numeric(x) for x in r] for r in rows])
    s = mpmath.svd_c(m, compute_uv=False)
    return sorted((s[i] for i in range(len(s))), reverse=True)


def null_vector(rows):
    """Right singular vector for the smallest singular value, with the normalized
    singular value ``s_min / s_max`` (the relative rank defect)."""
    m = mpmath.matrix([[numeric(x) for x in r] for r in rows])
    nrows, ncols = m.rows, m.cols
    if nrows < ncols:
        pad = mpmath.matrix(ncols, ncols)
        for i in range(nrows):
            for j in range(ncols):
                pad[i, j] = m[i, j]
        m = pad
    _, s, v = mpmath.svd_c(m)
    vals = [s[i] for i in range(len(s))]
    k = min(range(len(vals)), key=lambda i: vals[i])
    smax = max(vals)
    vec = [mpmath.conj(v[k, j]) for j in range(ncols)]
    return vec, (vals[k] / smax if smax else mpmath.mpf(0))


def solve(rows, rhs):
    """Solve a square linear system exactly or numerically."""
    if _kind(rows) == "exact" and all(isinstance(x, Rational) for x in rhs):
        aug = [list(r) + [b] for r, b in zip(rows, rhs)]
        m, piv = rref(aug)
        n = len(rows)
        if piv != list(range(n)):
            raise ZeroDivisionError("singular system")
        return [m[i][n] for i in range(n)]
    a = mpmath.matrix([[numeric(x) for x in r] for r in rows])
    b = mpmath.matrix([numeric(x) for x in rhs])
    x = mp_lu_solve(a, b)
    return [x[i] for i in range(len(rhs))]


def cofactor_vector(rows: Sequence[Sequence]):
    """Generalized cross product of n-1 vectors in dimension n (kernel of the rows)."""
    n = len(rows) + 1
    if any(len(r) != n for r in rows):
        raise NotSquareError("need n-1 vectors of length n")
    out = []
    for j in range(n):
        sub = [[r[c] for c in range(n) if c != j] for r in rows]
        d = det(sub)
        out.append(d if j % 2 == 0 else -d)
    return out


@dataclass(frozen=True)
class PolyMatrix:
    """Rectangular matrix of polynomial (or scalar) entries."""

    rows: tuple

    def __init__(self, rows):
        object.__setattr__(self, "rows", tuple(tuple(r) for r in rows))
        if len({len(r) for r in self.rows}) > 1:
            raise ValueError("ragged matrix")

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def is_square(self) -> bool:
        return self.shape[0] == self.shape[1]

    def is_symmetric(self) -> bool:
        n, m = self.shape
        return n == m and all(
            _iszero(self.rows[i][j] - self.rows[j][i]) for i in range(n) for j in range(i + 1, n)
        )

    def is_skew(self) -> bool:
        try:
            check_skew(self.rows)
        except (NotSkewError, NotSquareError):
            return False
        return True

    def det(self):
        return det(self.rows)

    def pfaffian(self):
        return pfaffian(self.rows)

    @classmethod
    def identity(cls, n: int, variables: Sequence[str] | None = None):
        if variables is None:
            return cls([[int(i == j) for j in range(n)] for i in range(n)])
        return cls([[MultiPoly.const(int(i == j), variables) for j in range(n)] for i in range(n)])


def block_skew(q0, q1, q2):
    """The 3x3 block skew matrix (0, Q0, -Q1; -Q0, 0, Q2; Q1, -Q2, 0)."""
    n = len(q0)
    zero = [[0] * n for _ in range(n)]

    def neg(m):
        return [[-x for x in r] for r in m]

    blocks = [[zero, q0, neg(q1)], [neg(q0), zero, q2], [q1, neg(q2), zero]]
    out = []
    for brow in blocks:
        for i in range(n):
            out.append([x for b in brow for x in b[i]])
    return out
