"""Points, lines and planes of P^3 and the chart of the hexahedral P^3 inside P^5.

Every predicate works on exact coordinates (decided exactly) or numeric ones
(decided relative to coordinate norms with tolerance ``tol``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from luroth.errors import DegenerateInput
from luroth.polycore.matrix import cofactor_vector, null_vector, nullspace_exact
from luroth.polycore.poly import MultiPoly
from luroth.polycore.scalar import (
    DEFAULT_TOL,
    all_exact,
    from_str,
    is_zero,
    magnitude,
    norm,
    normalize_projective,
    numeric,
    projective_distance,
    projectively_equal,
    to_str,
)

CHART_VARS = ("x0", "x1", "x2", "x3")


def _l2(xs) -> float:
    return float(mpmath.sqrt(sum(abs(numeric(x)) ** 2 for x in xs)))


def _coerce(xs) -> tuple:
    """Integers become Fractions, so division keeps exact coordinates exact."""
    return tuple(Fraction(x) if all_exact((x,)) else x for x in xs)


@dataclass(frozen=True)
class PointP3:
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", _coerce(self.coords))
        if len(self.coords) != 4:
            raise ValueError("a point of P^3 has 4 coordinates")
        if all(magnitude(c) == 0 for c in self.coords):
            raise DegenerateInput("all coordinates are zero")

    @property
    def exact(self) -> bool:
        return all_exact(self.coords)

    def normalized(self) -> "PointP3":
        return PointP3(normalize_projective(self.coords))

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def same_as(self, other: "PointP3", tol: float = DEFAULT_TOL) -> bool:
        return projectively_equal(self.coords, other.coords, tol)

    def distance(self, other: "PointP3") -> float:
        return projective_distance(self.coords, other.coords)

    def to_json(self):
        return [to_str(c) for c in self.coords]

    @classmethod
    def from_json(cls, data):
        return cls(tuple(from_str(s) for s in data))


@dataclass(frozen=True)
class PlaneP3:
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _coerce(self.coeffs))
        if len(self.coeffs) != 4:
            raise ValueError("a plane of P^3 has 4 coefficients")
        if all(magnitude(c) == 0 for c in self.coeffs):
            raise DegenerateInput("zero linear form")

    @property
    def exact(self) -> bool:
        return all_exact(self.coeffs)

    def __call__(self, point) -> object:
        coords = point.coords if isinstance(point, PointP3) else point
        return sum(c * x for c, x in zip(self.coeffs, coords))

    def form(self, variables=CHART_VARS) -> MultiPoly:
        return MultiPoly(variables, {tuple(int(i == j) for j in range(4)): c for i, c in enumerate(self.coeffs)})

    def same_as(self, other: "PlaneP3", tol: float = DEFAULT_TOL) -> bool:
        return projectively_equal(self.coeffs, other.coeffs, tol)

    def distance(self, other: "PlaneP3") -> float:
        return projective_distance(self.coeffs, other.coeffs)

    def normalized(self) -> "PlaneP3":
        return PlaneP3(normalize_projective(self.coeffs))

    def to_json(self):
        return [to_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data):
        return cls(tuple(from_str(s) for s in data))


PLUCKER_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def plucker(p: Sequence, q: Sequence) -> tuple:
    return tuple(p[i] * q[j] - p[j] * q[i] for i, j in PLUCKER_PAIRS)


def plucker_pairing(u: Sequence, v: Sequence):
    """Bilinear form whose vanishing means the two lines meet."""
    return u[0] * v[5] - u[1] * v[4] + u[2] * v[3] + u[3] * v[2] - u[4] * v[1] + u[5] * v[0]


@dataclass(frozen=True)
class LineP3:
    """Line through two distinct points, with cached Plücker coordinates."""

    p: PointP3
    q: PointP3
    plucker: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pl = plucker(self.p.coords, self.q.coords)
        if all(magnitude(x) == 0 for x in pl) or (
            not all_exact(pl) and norm(pl) <= 1e-30 * _l2(self.p.coords) * _l2(self.q.coords)
        ):
            raise DegenerateInput("coincident points do not span a line")
        object.__setattr__(self, "plucker", pl)

    @property
    def exact(self) -> bool:
        return self.p.exact and self.q.exact

    def point(self, s, t) -> PointP3:
        return PointP3(tuple(s * a + t * b for a, b in zip(self.p.coords, self.q.coords)))

    def normalized_plucker(self) -> tuple:
        return normalize_projective(self.plucker)

    def same_as(self, other: "LineP3", tol: float = DEFAULT_TOL) -> bool:
        return projectively_equal(self.plucker, other.plucker, tol)

    def distance(self, other: "LineP3") -> float:
        return projective_distance(self.plucker, other.plucker)

    def to_json(self):
        return {"points": [self.p.to_json(), self.q.to_json()], "plucker": [to_str(c) for c in self.plucker]}

    @classmethod
    def from_json(cls, data):
        a, b = data["points"]
        return cls(PointP3.from_json(a), PointP3.from_json(b))


# predicates -------------------------------------------------------------


def point_on_plane(pt: PointP3, plane: PlaneP3, tol: float = DEFAULT_TOL) -> bool:
    return is_zero(plane(pt), _l2(plane.coeffs) * _l2(pt.coords), tol)


def point_on_line(pt: PointP3, line: LineP3, tol: float = DEFAULT_TOL) -> bool:
    w = cofactor_vector([line.p.coords, line.q.coords, pt.coords])
    scale = _l2(line.plucker) * _l2(pt.coords)
    return all(is_zero(x, scale, tol) for x in w)


def line_in_plane(line: LineP3, plane: PlaneP3, tol: float = DEFAULT_TOL) -> bool:
    return point_on_plane(line.p, plane, tol) and point_on_plane(line.q, plane, tol)


def lines_meet(l1: LineP3, l2: LineP3, tol: float = DEFAULT_TOL) -> bool:
    v = plucker_pairing(l1.plucker, l2.plucker)
    return is_zero(v, _l2(l1.plucker) * _l2(l2.plucker), tol)


def meet_residual(l1: LineP3, l2: LineP3) -> float:
    return magnitude(plucker_pairing(l1.plucker, l2.plucker)) / (_l2(l1.plucker) * _l2(l2.plucker))


# constructions ----------------------------------------------------------


def span_line(a: PointP3, b: PointP3) -> LineP3:
    return LineP3(a, b)


def span_plane(a: PointP3, b: PointP3, c: PointP3, tol: float = DEFAULT_TOL) -> PlaneP3:
    w = cofactor_vector([a.coords, b.coords, c.coords])
    scale = _l2(a.coords) * _l2(b.coords) * _l2(c.coords)
    if all(is_zero(x, scale, tol) for x in w):
        raise DegenerateInput("points are collinear; they do not span a plane")
    return PlaneP3(tuple(w))


def plane_through_line(line: LineP3, pt: PointP3, tol: float = DEFAULT_TOL) -> PlaneP3:
    return span_plane(line.p, line.q, pt, tol)


def plane_meet_line(plane: PlaneP3, line: LineP3, tol: float = DEFAULT_TOL) -> PointP3:
    a, b = plane(line.p), plane(line.q)
    coords = tuple(a * y - b * x for x, y in zip(line.p.coords, line.q.coords))
    scale = _l2(plane.coeffs) * _l2(line.plucker)
    if all(is_zero(c, scale, tol) for c in coords):
        raise DegenerateInput("line lies in the plane (or the meet is ambiguous at tolerance)")
    return PointP3(coords)


def line_meet_line(l1: LineP3, l2: LineP3, tol: float = DEFAULT_TOL) -> PointP3:
    """Intersection point of two coplanar distinct lines."""
    if not lines_meet(l1, l2, tol):
        raise DegenerateInput(f"lines are skew (residual {meet_residual(l1, l2):.3e})")
    best = None
    for i in range(4):
        e = tuple(Fraction(int(i == j)) for j in range(4))
        w = cofactor_vector([l2.p.coords, l2.q.coords, e])
        if all(magnitude(x) == 0 for x in w):
            continue
        plane = PlaneP3(tuple(w))
        score = max(magnitude(plane(l1.p)), magnitude(plane(l1.q))) / _l2(w)
        if best is None or score > best[0]:
            best = (score, plane)
    if best is None or best[0] <= 1e-30:
        raise DegenerateInput("lines coincide")
    return plane_meet_line(best[1], l1, tol)


def plane_meet_plane(p1: PlaneP3, p2: PlaneP3) -> LineP3:
    rows = [list(p1.coeffs), list(p2.coeffs)]
    if p1.exact and p2.exact:
        basis = nullspace_exact(rows)
        if len(basis) != 2:
            raise DegenerateInput("planes coincide")
        return LineP3(PointP3(tuple(basis[0])), PointP3(tuple(basis[1])))
    m = mpmath.matrix([[numeric(x) for x in r] for r in rows] + [[0] * 4, [0] * 4])
    _, s, v = mpmath.svd_c(m)
    vecs = [[mpmath.conj(v[k, j]) for j in range(4)] for k in (2, 3)]
    if s[1] <= 1e-30 * s[0]:
        raise DegenerateInput("planes coincide")
    return LineP3(PointP3(tuple(vecs[0])), PointP3(tuple(vecs[1])))


def best_fit_plane(points: Sequence[PointP3]):
    """Plane minimizing the stacked residual of unit-normalized points.

    Returns (plane, relative smallest singular value).
    """
    rows = []
    for p in points:
        n = _l2(p.coords)
        rows.append([numeric(c) / n for c in p.coords])
    vec, sigma = null_vector(rows)
    return PlaneP3(tuple(vec)), float(sigma)


@dataclass(frozen=True)
class Incidence:
    relation: str  # "contained", "meets", "skew", "off", "equal"
    point: Optional[PointP3] = None


def incidence(a, b, tol: float = DEFAULT_TOL) -> Incidence:
    """Relation between two of point / line / plane.

    Point and plane or line: "contained" or "off".  Line and plane:
    "contained" or "meets" (with the meet point).  Two lines: "equal",
    "meets" (with the intersection) or "skew".
    """
    if isinstance(b, PointP3) and not isinstance(a, PointP3):
        a, b = b, a
    if isinstance(a, LineP3) and isinstance(b, PlaneP3):
        a, b = b, a
    if isinstance(a, PointP3) and isinstance(b, PlaneP3):
        return Incidence("contained" if point_on_plane(a, b, tol) else "off")
    if isinstance(a, PointP3) and isinstance(b, LineP3):
        return Incidence("contained" if point_on_line(a, b, tol) else "off")
    if isinstance(a, PlaneP3) and isinstance(b, LineP3):
        if line_in_plane(b, a, tol):
            return Incidence("contained")
        return Incidence("meets", plane_meet_line(a, b, tol))
    if isinstance(a, LineP3) and isinstance(b, LineP3):
        if a.same_as(b, tol):
            return Incidence("equal")
        if lines_meet(a, b, tol):
            return Incidence("meets", line_meet_line(a, b, tol))
        return Incidence("skew")
    if isinstance(a, PointP3) and isinstance(b, PointP3):
        return Incidence("equal" if a.same_as(b, tol) else "off")
    raise TypeError(f"unsupported pair {type(a).__name__}, {type(b).__name__}")


# hexahedral chart -------------------------------------------------------


@dataclass(frozen=True)
class HexChart:
    """Kernel of the relations sum Z_i = 0 and sum beta_i Z_i = 0 in Q^6.

    Chart coordinates are the four free hexahedral coordinates of the reduced
    row echelon form; ``basis[j]`` is the kernel vector with a 1 in free
    column ``free[j]``.
    """

    beta: tuple
    basis: tuple
    free: tuple
    pivots: tuple

    def to_hex(self, x: Sequence) -> tuple:
        coords = x.coords if isinstance(x, PointP3) else x
        return tuple(sum(coords[j] * self.basis[j][i] for j in range(4)) for i in range(6))

    def from_hex(self, z: Sequence, tol: float = DEFAULT_TOL) -> PointP3:
        z = tuple(z)
        if len(z) != 6:
            raise ValueError("hexahedral points have 6 coordinates")
        scale = _l2(z) * max(1.0, norm(self.beta))
        if not (is_zero(sum(z), scale, tol) and is_zero(sum(b * c for b, c in zip(self.beta, z)), scale, tol)):
            raise DegenerateInput("point violates the hexahedral linear relations")
        return PointP3(tuple(z[i] for i in self.free))

    def pull_linear(self, c: Sequence) -> tuple:
        """Coefficients in chart coordinates of the hexahedral linear form c . Z."""
        return tuple(sum(c[i] * self.basis[j][i] for i in range(6)) for j in range(4))

    def pull_plane(self, c: Sequence) -> PlaneP3:
        return PlaneP3(self.pull_linear(c))

    def linear_forms(self, variables=CHART_VARS):
        """The six hexahedral coordinates as linear forms in chart variables."""
        return [
            MultiPoly(variables, {tuple(int(k == j) for k in range(4)): self.basis[j][i] for j in range(4)})
            for i in range(6)
        ]

    def residual(self) -> list:
        """Relation values on each basis vector (all zero for a valid chart)."""
        return [(sum(v), sum(b * c for b, c in zip(self.beta, v))) for v in self.basis]


def hex_chart(beta: Sequence) -> HexChart:
    beta = tuple(Fraction(b) for b in beta)
    if len(beta) != 6:
        raise ValueError("need six beta coefficients")
    rows = [[Fraction(1)] * 6, list(beta)]
    m, pivots = _rref_partial_pivot(rows)
    if len(pivots) < 2:
        raise DegenerateInput("beta is constant: the two linear relations are dependent")
    free = tuple(c for c in range(6) if c not in pivots)
    basis = []
    for f in free:
        v = [Fraction(0)] * 6
        v[f] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -m[r][f]
        basis.append(tuple(v))
    return HexChart(beta, tuple(basis), free, tuple(pivots))


def _rref_partial_pivot(rows):
    """RREF choosing the largest-magnitude pivot in each column (result is the
    unique RREF; the pivoting only fixes the elimination order)."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(len(m[0])):
        cand = max(range(r, len(m)), key=lambda i: abs(m[i][c]), default=None)
        if cand is None or m[cand][c] == 0:
            continue
        m[r], m[cand] = m[cand], m[r]
        piv = m[r][c]
        m[r] = [x / piv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


__all__ = [
    "PointP3", "PlaneP3", "LineP3", "HexChart", "Incidence", "incidence", "hex_chart", "plucker",
    "plucker_pairing", "point_on_plane", "point_on_line", "line_in_plane", "lines_meet",
    "meet_residual", "span_line", "span_plane", "plane_through_line", "plane_meet_line",
    "line_meet_line", "plane_meet_plane", "best_fit_plane", "CHART_VARS",
]
