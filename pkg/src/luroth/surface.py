"""Hexahedral cubic surfaces sum Z_i^3 = 0, sum Z_i = 0, sum beta_i Z_i = 0.

All geometry is carried out in the chart coordinates of :func:`hex_chart`
(the four free hexahedral coordinates).  The fifteen lines
Z_i + Z_j = Z_k + Z_l = 0 are exact; the twelve remaining lines are found
numerically as residual lines in the tritangent planes through known lines.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp

from luroth.errors import DegenerateInput, InvalidSurface, NoConvergence
from luroth.geometry import (
    CHART_VARS,
    HexChart,
    LineP3,
    PlaneP3,
    PointP3,
    hex_chart,
    lines_meet,
)
from luroth.polycore.elimination import EliminationCertificate, smoothness_certificate
from luroth.polycore.matrix import det_laplace, mp_lu_solve, null_vector, nullspace_exact, solve
from luroth.polycore.poly import MultiPoly, binary_coeffs
from luroth.polycore.roots import binary_roots
from luroth.polycore.scalar import DEFAULT_PREC, DEFAULT_TOL, all_exact, numeric, precision


def _partitions() -> List[Tuple[Tuple[int, int], ...]]:
    """The 15 ways to split {0..5} into three pairs, in lexicographic order."""
    out = []

    def rec(rest, acc):
        if not rest:
            out.append(tuple(acc))
            return
        a = rest[0]
        for b in rest[1:]:
            rec([x for x in rest if x not in (a, b)], acc + [(a, b)])

    rec(list(range(6)), [])
    return out


PARTITIONS = _partitions()


def partition_tag(part) -> str:
    return "|".join(f"{i}{j}" for i, j in part)


def parse_tag(tag: str):
    """Partition from '01|23|45', '{0,1}{2,3}{4,5}' or two pairs such as '01|23'."""
    digits = [int(c) for c in tag if c.isdigit()]
    if len(digits) not in (4, 6) or any(not c.isdigit() and c not in "|{},; " for c in tag):
        raise ValueError(f"bad partition tag {tag!r}")
    pairs = [tuple(sorted(digits[k:k + 2])) for k in range(0, len(digits), 2)]
    if len(pairs) == 2:
        used = {x for p in pairs for x in p}
        rest = sorted(set(range(6)) - used)
        if len(rest) != 2:
            raise ValueError(f"bad partition tag {tag!r}")
        pairs.append(tuple(rest))
    if sorted(x for p in pairs for x in p) != list(range(6)):
        raise ValueError(f"bad partition tag {tag!r}")
    return tuple(sorted(pairs))


@dataclass(frozen=True)
class SurfaceLine:
    index: int
    line: LineP3
    tag: Optional[str]
    residual: float

    @property
    def exact(self) -> bool:
        return self.line.exact


@dataclass(frozen=True)
class DoubleSix:
    """Indices (into the 27 lines) of A_1..A_6 and B_1..B_6; A_i is skew to B_i."""

    a: Tuple[int, ...]
    b: Tuple[int, ...]

    @property
    def lines(self) -> Tuple[int, ...]:
        return self.a + self.b

    def partner(self, index: int) -> int:
        if index in self.a:
            return self.b[self.a.index(index)]
        return self.a[self.b.index(index)]


@dataclass(frozen=True)
class PencilPlane:
    """A tritangent plane through a line: pencil parameter, plane, residual
    lines and their intersection point."""

    parameter: tuple
    plane: PlaneP3
    residual_lines: Tuple[LineP3, LineP3]
    vertex: PointP3


class HexSurface:
    """Validated nonsingular hexahedral cubic surface.

    Use :func:`new_surface` to construct.  Results of the numeric line
    computations are cached per precision.
    """

    def __init__(self, beta, chart: HexChart, cubic: MultiPoly, certificate: EliminationCertificate):
        self.beta = tuple(beta)
        self.chart = chart
        self.cubic = cubic
        self.certificate = certificate
        self._cache: Dict[tuple, object] = {}

    def __repr__(self):
        return f"HexSurface(beta={[str(b) for b in self.beta]})"

    @property
    def relations(self):
        return ((1,) * 6, self.beta)

    def contains(self, pt: PointP3, tol: float = DEFAULT_TOL) -> bool:
        v = self.cubic.evaluate(pt.coords)
        if all_exact(pt.coords):
            return v == 0
        scale = max(abs(numeric(c)) for c in pt.coords) ** 3 * self.cubic.coeff_norm()
        return abs(v) <= tol * scale

    def gradient_at(self, pt: PointP3) -> tuple:
        return tuple(g.evaluate(pt.coords) for g in self._gradient())

    def tangent_plane(self, pt: PointP3) -> PlaneP3:
        return PlaneP3(self.gradient_at(pt))

    def _gradient(self):
        if "grad" not in self._cache:
            self._cache["grad"] = self.cubic.gradient()
        return self._cache["grad"]

    def to_hex(self, pt: PointP3) -> tuple:
        return self.chart.to_hex(pt)

    def from_hex(self, z) -> PointP3:
        return self.chart.from_hex(z)

    # convenience wrappers; see module-level functions
    def fifteen_lines(self):
        return fifteen_lines(self)

    def cremona_plane(self) -> PlaneP3:
        return cremona_plane_hex(self)

    def lines(self, prec: int = DEFAULT_PREC):
        return all_lines_27(self, prec)

    def double_sixes(self, prec: int = DEFAULT_PREC):
        return double_sixes(self, prec)


def check_beta(beta: Sequence) -> tuple:
    try:
        beta = tuple(Fraction(b) for b in beta)
    except (TypeError, ValueError) as exc:
        raise InvalidSurface(f"beta must be rational numbers: {exc}", "beta-type") from None
    if len(beta) != 6:
        raise InvalidSurface(f"need six beta coefficients, got {len(beta)}", "beta-length")
    if len(set(beta)) == 1:
        raise InvalidSurface("beta is constant: dependent linear relations", "dependent-relations")
    for i, j in itertools.combinations(range(6), 2):
        if beta[i] == beta[j]:
            raise InvalidSurface(f"beta distinctness violated: beta{i} = beta{j}", "beta-distinctness")
    return beta


def new_surface(beta: Sequence) -> HexSurface:
    """Build and validate the surface; raises :class:`InvalidSurface` naming the guard."""
    beta = check_beta(beta)
    chart = hex_chart(beta)
    forms = chart.linear_forms(CHART_VARS)
    cubic = forms[0] ** 3
    for f in forms[1:]:
        cubic = cubic + f**3
    cert = smoothness_certificate(cubic)
    if not cert.no_common_zero:
        raise InvalidSurface(
            f"surface is singular (Macaulay rank {cert.rank} < {cert.columns})", "singular"
        )
    return HexSurface(beta, chart, cubic, cert)


# the fifteen explicit lines -------------------------------------------------


def explicit_line(S: HexSurface, part) -> LineP3:
    """Line Z_i + Z_j = Z_k + Z_l = Z_m + Z_n = 0 for the partition {ij}{kl}{mn}."""
    (i, j), (k, l), (m, n) = part
    b = S.beta
    d = (b[i] - b[j], b[k] - b[l], b[m] - b[n])
    # Z = a e_ij + b e_kl + c e_mn with a d0 + b d1 + c d2 = 0
    kernel = nullspace_exact([list(d)])
    pts = []
    for v in kernel:
        z = [Fraction(0)] * 6
        for (p, q), coef in zip(part, v):
            z[p] = coef
            z[q] = -coef
        pts.append(S.from_hex(z))
    return LineP3(pts[0], pts[1])


def fifteen_lines(S: HexSurface) -> List[SurfaceLine]:
    key = ("fifteen",)
    if key not in S._cache:
        out = []
        for idx, part in enumerate(PARTITIONS):
            line = explicit_line(S, part)
            res = restriction_residual(S.cubic, line)
            if res != 0:
                raise AssertionError(f"explicit line {partition_tag(part)} not on the surface")
            out.append(SurfaceLine(idx, line, partition_tag(part), 0.0))
        S._cache[key] = out
    return S._cache[key]


def restricted_cubic(cubic: MultiPoly, line: LineP3) -> MultiPoly:
    st = ("s", "t")
    s, t = MultiPoly.var("s", st), MultiPoly.var("t", st)
    return cubic.compose([s * a + t * b for a, b in zip(line.p.coords, line.q.coords)])


def restriction_residual(cubic: MultiPoly, line: LineP3) -> float:
    """Size of the cubic restricted to the line.

    Exact lines give exactly 0 when contained.  Numeric lines use an
    orthonormal spanning pair, relative to the cubic's coefficient norm.
    """
    if line.exact and cubic.is_exact():
        g = restricted_cubic(cubic, line)
        return 0.0 if g.is_zero() else float(max(abs(c) for c in g.terms.values()))
    u, v = _orthonormal_pair(line)
    g = restricted_cubic(cubic, LineP3(PointP3(u), PointP3(v)))
    return float(max((abs(c) for c in g.terms.values()), default=0) / cubic.coeff_norm())


def line_points(S: "HexSurface", line: LineP3, prec: int = DEFAULT_PREC) -> List[PointP3]:
    """The three points (with multiplicity) where ``line`` meets the surface."""
    with precision(prec):
        g = restricted_cubic(S.cubic, line)
        if g.is_zero():
            raise DegenerateInput("the line lies on the surface")
        out = []
        for r in binary_roots(binary_coeffs(g, 3), prec):
            out.extend([line.point(*r.value)] * r.multiplicity)
        return out


def _orthonormal_pair(line: LineP3):
    p = [numeric(x) for x in line.p.coords]
    q = [numeric(x) for x in line.q.coords]
    n = mpmath.sqrt(sum(abs(x) ** 2 for x in p))
    u = [x / n for x in p]
    proj = sum(y * mpmath.conj(x) for x, y in zip(u, q))
    w = [y - proj * x for x, y in zip(u, q)]
    n2 = mpmath.sqrt(sum(abs(x) ** 2 for x in w))
    return tuple(u), tuple(x / n2 for x in w)


# the Cremona plane from the hexahedral coefficients -------------------------


def cremona_plane_hex(S: HexSurface) -> PlaneP3:
    """The plane sum beta_i^2 Z_i = 0 in chart coordinates."""
    return S.chart.pull_plane([b * b for b in S.beta])


# planes through a line -------------------------------------------------------


def _complement_forms(line: LineP3):
    """Two linear forms cutting out the line, and points c1, c2 with
    L_a(c_b) = delta_ab."""
    rows = [list(line.p.coords), list(line.q.coords)]
    if line.exact:
        n1, n2 = nullspace_exact(rows)
    else:
        m = mpmath.matrix([[numeric(x) for x in r] for r in rows] + [[0] * 4, [0] * 4])
        _, _, v = mpmath.svd_c(m)
        n1, n2 = ([mpmath.conj(v[k, j]) for j in range(4)] for k in (2, 3))
    best = None
    for i, j in itertools.combinations(range(4), 2):
        e_i = [int(k == i) for k in range(4)]
        e_j = [int(k == j) for k in range(4)]
        mat = [list(n1), list(n2), e_i, e_j]
        d = abs(numeric(det_laplace(mat)))
        if best is None or d > best[0]:
            best = (d, mat)
    mat = best[1]
    # columns of the inverse give c1, c2
    c1 = solve(mat, [1, 0, 0, 0])
    c2 = solve(mat, [0, 1, 0, 0])
    return list(n1), list(n2), c1, c2


def pencil_quintic(cubic: MultiPoly, line: LineP3):
    """Residual-conic data over the pencil of planes through ``line``.

    Points of the plane with parameter (lam, mu) are
    alpha*p + beta*q + gamma*(mu*c1 - lam*c2).  Returns the conic matrix
    (entries are binary forms in lam, mu), its determinant (a quintic) and
    the data needed to map plane coordinates back to P^3.
    """
    n1, n2, c1, c2 = _complement_forms(line)
    names = ("al", "be", "ga", "lam", "mu")
    al, be, ga, lam, mu = (MultiPoly.var(v, names) for v in names)
    x = [al * a + be * b + ga * (mu * u - lam * w) for a, b, u, w in zip(line.p.coords, line.q.coords, c1, c2)]
    g = cubic.compose(x)
    # g = gamma * (residual conic); drop gamma-free noise (the line lies on S)
    gi = 2
    conic_terms = {}
    for e, c in g.terms.items():
        if e[gi] >= 1:
            f = list(e)
            f[gi] -= 1
            conic_terms[tuple(f)] = c
    conic = MultiPoly(names, conic_terms)
    ab = ("lam", "mu")

    def coeff(ea, eb, eg):
        terms = {}
        for e, c in conic.terms.items():
            if e[:3] == (ea, eb, eg):
                terms[e[3:]] = c
        return MultiPoly(ab, terms)

    half = Fraction(1, 2)
    M = [
        [coeff(2, 0, 0), coeff(1, 1, 0) * half, coeff(1, 0, 1) * half],
        [None, coeff(0, 2, 0), coeff(0, 1, 1) * half],
        [None, None, coeff(0, 0, 2)],
    ]
    M[1][0], M[2][0], M[2][1] = M[0][1], M[0][2], M[1][2]
    quintic = det_laplace(M)
    return M, quintic, (n1, n2, c1, c2)


def split_conic(C):
    """Vertex and one point on each line of a rank-2 conic (numeric 3x3)."""
    vec, _ = null_vector(C)
    m = mpmath.matrix([[numeric(x) for x in r] for r in C])
    _, _, v = mpmath.svd_c(m)
    basis = [[mpmath.conj(v[k, j]) for j in range(3)] for k in range(3)]
    # the two largest singular directions span a complement of the vertex
    u, w = basis[0], basis[1]

    def bil(x, y):
        return sum(x[i] * m[i, j] * y[j] for i in range(3) for j in range(3))

    roots = binary_roots([bil(u, u), 2 * bil(u, w), bil(w, w)], mp.prec)
    pts = []
    for r in roots:
        s0, s1 = r.value
        pts.extend([[s0 * a + s1 * b for a, b in zip(u, w)]] * r.multiplicity)
    return vec, pts[0], pts[1]


def tritangent_pencil(cubic: MultiPoly, line: LineP3, prec: int = DEFAULT_PREC) -> List[PencilPlane]:
    """The five planes through a line on a cubic surface that cut it in three lines."""
    with precision(prec):
        M, quintic, (n1, n2, c1, c2) = pencil_quintic(cubic, line)
        coeffs = binary_coeffs(quintic, 5)
        roots = binary_roots(coeffs, prec)
        if any(r.multiplicity > 1 for r in roots):
            raise DegenerateInput("pencil quintic has a repeated root (Eckardt-type degeneration)")
        out = []
        for r in roots:
            lam, mu = r.value
            C = [[e.evaluate([lam, mu]) for e in row] for row in M]
            cpt = [mu * u - lam * w for u, w in zip(c1, c2)]
            basis = (line.p.coords, line.q.coords, cpt)

            def lift(v):
                return PointP3(tuple(sum(v[k] * basis[k][i] for k in range(3)) for i in range(4)))

            vertex, r1, r2 = split_conic(C)
            P = lift(vertex)
            plane = PlaneP3(tuple(lam * a + mu * b for a, b in zip(n1, n2)))
            out.append(PencilPlane((lam, mu), plane, (LineP3(P, lift(r1)), LineP3(P, lift(r2))), P))
        return out


# Newton refinement on the line-containment system ----------------------------

_U = ("u0", "u1", "u2", "u3")


def _line_system(S: HexSurface, i: int, j: int):
    key = ("linesys", i, j)
    if key not in S._cache:
        k, l = [c for c in range(4) if c not in (i, j)]
        names = ("s", "t") + _U
        s, t, u0, u1, u2, u3 = (MultiPoly.var(v, names) for v in names)
        one, zero = MultiPoly.const(1, names), MultiPoly(names)
        P = [zero] * 4
        Q = [zero] * 4
        P[i], P[j], P[k], P[l] = one, zero, u0, u1
        Q[i], Q[j], Q[k], Q[l] = zero, one, u2, u3
        g = S.cubic.compose([s * a + t * b for a, b in zip(P, Q)])
        eqs = []
        for m in range(4):
            terms = {e[2:]: c for e, c in g.terms.items() if e[:2] == (3 - m, m)}
            eqs.append(MultiPoly(_U, terms))
        jac = [[e.diff(v) for v in _U] for e in eqs]
        S._cache[key] = (eqs, jac, (k, l))
    return S._cache[key]


def refine_line(S: HexSurface, line: LineP3, prec: int = DEFAULT_PREC, iterations: int = 30) -> LineP3:
    """Newton polish of a numeric line in the affine line chart where it is best
    conditioned (two coordinates as affine functions of the other two)."""
    if line.exact:
        return line
    with precision(prec):
        pl = [abs(numeric(x)) for x in line.plucker]
        pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        i, j = pairs[max(range(6), key=lambda n: pl[n])]
        eqs, jac, (k, l) = _line_system(S, i, j)
        p = [numeric(x) for x in line.p.coords]
        q = [numeric(x) for x in line.q.coords]
        a, b, c, d = p[i], p[j], q[i], q[j]
        det_ = a * d - b * c
        # rows of inv([[a, b], [c, d]]) @ [p; q]
        P = [(d * x - b * y) / det_ for x, y in zip(p, q)]
        Q = [(-c * x + a * y) / det_ for x, y in zip(p, q)]
        u = [P[k], P[l], Q[k], Q[l]]
        tol = mpmath.mpf(2) ** (-prec + 10)
        for _ in range(iterations):
            F = [e.evaluate(u) for e in eqs]
            J = mpmath.matrix([[e.evaluate(u) for e in row] for row in jac])
            try:
                step = mp_lu_solve(J, mpmath.matrix(F))
            except ZeroDivisionError:
                break
            u = [x - step[n] for n, x in enumerate(u)]
            if mpmath.norm(step) <= tol * max(1, max(abs(x) for x in u)):
                break
        P = [0] * 4
        Q = [0] * 4
        P[i], P[j], P[k], P[l] = mpmath.mpc(1), mpmath.mpc(0), u[0], u[1]
        Q[i], Q[j], Q[k], Q[l] = mpmath.mpc(0), mpmath.mpc(1), u[2], u[3]
        return LineP3(PointP3(tuple(P)), PointP3(tuple(Q)))


# all 27 lines ------------------------------------------------------------------


def _line_sort_key(line: LineP3):
    v = line.normalized_plucker()
    return tuple((round(float(mpmath.re(x)), 9), round(float(mpmath.im(x)), 9)) for x in map(numeric, v))


def all_lines_27(S: HexSurface, prec: int = DEFAULT_PREC, tol: float = DEFAULT_TOL) -> List[SurfaceLine]:
    """The 27 lines: indices 0-14 are the explicit lines (partition order),
    15-26 the numeric ones sorted by normalized Plücker vector."""
    key = ("lines27", prec)
    if key in S._cache:
        return S._cache[key]
    explicit = fifteen_lines(S)
    found: List[LineP3] = [sl.line for sl in explicit]
    queue = list(found)
    with precision(prec):
        while len(found) < 27 and queue:
            base = queue.pop(0)
            for pp in tritangent_pencil(S.cubic, base, prec):
                for cand in pp.residual_lines:
                    if any(cand.distance(f) <= tol for f in found):
                        continue
                    cand = refine_line(S, cand, prec)
                    if any(cand.distance(f) <= tol for f in found):
                        continue
                    found.append(cand)
                    queue.append(cand)
        if len(found) != 27:
            raise NoConvergence(f"found {len(found)} distinct lines instead of 27")
        numeric_lines = sorted(found[15:], key=_line_sort_key)
        out = list(explicit)
        for n, line in enumerate(numeric_lines):
            res = restriction_residual(S.cubic, line)
            if res > 1e-10:
                raise NoConvergence(f"numeric line residual {res:.3e} exceeds 1e-10", [res])
            out.append(SurfaceLine(15 + n, line, None, res))
    S._cache[key] = out
    return out


def meeting_matrix(lines: Sequence[SurfaceLine], tol: float = DEFAULT_TOL) -> List[List[bool]]:
    n = len(lines)
    m = [[False] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        m[i][j] = m[j][i] = lines_meet(lines[i].line, lines[j].line, tol)
    return m


def schlafli_degrees(meet) -> Tuple[set, set]:
    """(degrees of the meeting graph, degrees of the skewness graph)."""
    n = len(meet)
    meets = {sum(meet[i]) for i in range(n)}
    skews = {n - 1 - sum(meet[i]) for i in range(n)}
    return meets, skews


def skew_sixes(meet) -> List[Tuple[int, ...]]:
    """All 6-sets of pairwise skew lines (6-cliques of the skewness graph)."""
    n = len(meet)
    out = []

    def extend(clique, cands):
        if len(clique) == 6:
            out.append(tuple(clique))
            return
        for pos, v in enumerate(cands):
            if len(clique) + len(cands) - pos < 6:
                return
            extend(clique + [v], [w for w in cands[pos + 1:] if not meet[v][w]])

    extend([], list(range(n)))
    return out


def double_sixes_from_incidence(meet) -> List[DoubleSix]:
    n = len(meet)
    sixes = skew_sixes(meet)
    six_set = set(sixes)
    found = {}
    for A in sixes:
        B = []
        for jpos in range(6):
            cands = [
                m for m in range(n)
                if m not in A and not meet[m][A[jpos]] and all(meet[m][A[i]] for i in range(6) if i != jpos)
            ]
            if len(cands) != 1:
                break
            B.append(cands[0])
        else:
            if tuple(sorted(B)) not in six_set:
                continue
            pairs = list(zip(A, B))
            if min(B) < min(A):
                pairs = [(b, a) for a, b in pairs]
            pairs.sort()
            ds = DoubleSix(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))
            found[ds.a] = ds
    return sorted(found.values(), key=lambda d: (d.a, d.b))


def check_double_six(ds: DoubleSix, meet) -> bool:
    for i in range(6):
        for j in range(6):
            if i != j and (meet[ds.a[i]][ds.a[j]] or meet[ds.b[i]][ds.b[j]]):
                return False
            if meet[ds.a[i]][ds.b[j]] != (i != j):
                return False
    return True


def double_sixes(S: HexSurface, prec: int = DEFAULT_PREC, tol: float = DEFAULT_TOL) -> List[DoubleSix]:
    key = ("double_sixes", prec)
    if key in S._cache:
        return S._cache[key]
    lines = all_lines_27(S, prec)
    meet = meeting_matrix(lines, tol)
    meets, skews = schlafli_degrees(meet)
    if meets != {10} or skews != {16}:
        raise NoConvergence(f"incidence graph is not the Schläfli graph (degrees {meets})")
    out = double_sixes_from_incidence(meet)
    if len(out) != 36 or not all(check_double_six(d, meet) for d in out):
        raise NoConvergence(f"found {len(out)} double-sixes instead of 36")
    S._cache[key] = out
    return out


def hexahedral_double_six(S: HexSurface, prec: int = DEFAULT_PREC) -> DoubleSix:
    """The double-six formed by the twelve non-explicit lines."""
    target = set(range(15, 27))
    for d in double_sixes(S, prec):
        if set(d.lines) == target:
            return d
    raise AssertionError("the twelve numeric lines do not form a double-six")
