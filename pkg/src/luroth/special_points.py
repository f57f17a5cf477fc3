"""Point constructions on the lines of a hexahedral cubic surface.

* tritangent planes through a line and the meet points of residual pairs;
* the ten non-involutory points on a line;
* the involutory points of a skew pair of lines;
* the plane through the twelve involutory points of a double-six;
* the restriction of the 36 planes to a line and its root profile.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp

from luroth.errors import DegenerateInput, NoConvergence
from luroth.geometry import (
    LineP3,
    PlaneP3,
    PointP3,
    best_fit_plane,
    line_meet_line,
    lines_meet,
    plane_meet_line,
    plane_through_line,
    point_on_line,
    span_plane,
)
from luroth.polycore.poly import MultiPoly
from luroth.polycore.roots import binary_roots
from luroth.polycore.scalar import DEFAULT_PREC, DEFAULT_TOL, numeric, precision, projective_distance
from luroth.surface import (
    DoubleSix,
    HexSurface,
    SurfaceLine,
    all_lines_27,
    cremona_plane_hex,
    double_sixes,
    hexahedral_double_six,
    meeting_matrix,
    tritangent_pencil,
)


# tritangent planes ------------------------------------------------------------


@dataclass(frozen=True)
class TritangentPlane:
    plane: PlaneP3
    residual: Tuple[int, int]  # indices into the 27 lines
    vertex: PointP3


@dataclass(frozen=True)
class TritangentData:
    line: int
    planes: Tuple[TritangentPlane, ...]


def _snap(lines: Sequence[SurfaceLine], cand: LineP3, tol: float) -> int:
    dists = [cand.distance(sl.line) for sl in lines]
    k = min(range(len(lines)), key=lambda i: dists[i])
    if dists[k] > tol:
        raise NoConvergence(f"residual line does not match any of the 27 lines (distance {dists[k]:.2e})")
    return k


def tritangent_planes(S: HexSurface, index: int, prec: int = DEFAULT_PREC, tol: float = DEFAULT_TOL) -> TritangentData:
    """The five tritangent planes through line ``index``.

    Residual lines are identified with the surface's 27 lines; when both are
    exact the plane and meet point are recomputed exactly.  Planes are ordered
    by their residual index pairs.
    """
    key = ("tritangent", index, prec)
    if key in S._cache:
        return S._cache[key]
    lines = all_lines_27(S, prec)
    base = lines[index].line
    out = []
    with precision(prec):
        for pp in tritangent_pencil(S.cubic, base, prec):
            i, j = sorted(_snap(lines, r, tol) for r in pp.residual_lines)
            if i == j or index in (i, j):
                raise NoConvergence("tritangent plane residual lines are not distinct")
            li, lj = lines[i].line, lines[j].line
            if base.exact and li.exact and lj.exact:
                vertex = line_meet_line(li, lj)
                plane = plane_through_line(base, li.p if not point_on_line(li.p, base) else li.q)
            else:
                vertex, plane = pp.vertex, pp.plane
            out.append(TritangentPlane(plane, (i, j), vertex))
    out.sort(key=lambda t: t.residual)
    if len({t.residual for t in out}) != 5:
        raise NoConvergence("tritangent planes are not distinct")
    data = TritangentData(index, tuple(out))
    S._cache[key] = data
    return data


@dataclass(frozen=True)
class NonInvolutoryPoint:
    triple: Tuple[int, int, int]  # positions in TritangentData.planes
    point: PointP3


def non_involutory_points(S: HexSurface, index: int, prec: int = DEFAULT_PREC) -> List[NonInvolutoryPoint]:
    """The ten points cut on the line by the planes through three meet points,
    triples in lexicographic order."""
    data = tritangent_planes(S, index, prec)
    line = all_lines_27(S, prec)[index].line
    out = []
    with precision(prec):
        for tri in itertools.combinations(range(5), 3):
            pts = [data.planes[k].vertex for k in tri]
            try:
                plane = span_plane(*pts)
            except DegenerateInput:
                raise DegenerateInput(f"meet points {tri} do not span a plane") from None
            out.append(NonInvolutoryPoint(tri, plane_meet_line(plane, line)))
    return out


# involutory points ----------------------------------------------------------------


def quadratic_disc_form(q, r):
    """Polarized discriminant b b' - 2(a c' + a' c) of binary quadratics (a, b, c)."""
    return q[1] * r[1] - 2 * (q[0] * r[2] + r[0] * q[2])


def _pencil_jacobian(u, w):
    """Jacobian du/dt0 dw/dt1 - du/dt1 dw/dt0 as coefficients (a, b, c); its roots
    are the ramification points of the map t -> (w : -u)."""
    a0, b0, c0 = u
    a1, b1, c1 = w
    # u = a t0^2 + b t0 t1 + c t1^2; du/dt0 = 2a t0 + b t1, du/dt1 = b t0 + 2c t1
    return (
        2 * a0 * b1 - b0 * 2 * a1,
        4 * a0 * c1 - 4 * c0 * a1,
        b0 * 2 * c1 - 2 * c0 * b1,
    )


@dataclass(frozen=True)
class TangentCover:
    """The degree-2 map source -> target sending p to T_pS meet target.

    ``u``, ``w`` are binary quadratics on the source (coefficients of t0^2,
    t0 t1, t1^2); the fibre over s0*b0 + s1*b1 is s0*u + s1*w = 0.
    """

    source: LineP3
    target: LineP3
    u: tuple
    w: tuple

    def ramification(self):
        return _pencil_jacobian(self.u, self.w)

    def branch(self):
        """Branch divisor on the target as a binary quadratic in (s0, s1)."""
        u, w = self.u, self.w
        return (quadratic_disc_form(u, u), 2 * quadratic_disc_form(u, w), quadratic_disc_form(w, w))

    def image(self, t) -> tuple:
        t0, t1 = t
        uu = self.u[0] * t0 * t0 + self.u[1] * t0 * t1 + self.u[2] * t1 * t1
        ww = self.w[0] * t0 * t0 + self.w[1] * t0 * t1 + self.w[2] * t1 * t1
        return (ww, -uu)


def _gradient_quadratic(grads, a0, a1, b):
    """Coefficients of t -> grad F(t0 a0 + t1 a1) . b."""
    def g(x):
        return sum(gr.evaluate(x) * bi for gr, bi in zip(grads, b))

    s = tuple(x + y for x, y in zip(a0, a1))
    ga, gb = g(a0), g(a1)
    return (ga, g(s) - ga - gb, gb)


def tangent_cover(S: HexSurface, source: LineP3, target: LineP3) -> TangentCover:
    grads = S._gradient()
    a0, a1 = source.p.coords, source.q.coords
    u = _gradient_quadratic(grads, a0, a1, target.p.coords)
    w = _gradient_quadratic(grads, a0, a1, target.q.coords)
    return TangentCover(source, target, u, w)


@dataclass(frozen=True)
class InvolutoryPair:
    a: LineP3
    b: LineP3
    f: TangentCover  # A -> B
    g: TangentCover  # B -> A
    divisor_a: tuple  # common divisor Q1 + Q2 on A (binary quadratic)
    divisor_b: tuple  # common divisor P1 + P2 on B
    p_bar: PointP3  # on A
    q_bar: PointP3  # on B
    check: float  # largest disagreement of the images of the two divisor points


def _common_divisor(cover: TangentCover, ramification):
    """Member of the cover's fibre pencil whose apolar partner is ``ramification``.

    The pencil with prescribed ramification divisor R is the polar line of R
    for the discriminant conic; its meet with span(u, w) is alpha u + beta w.
    """
    alpha = quadratic_disc_form(ramification, cover.w)
    beta = -quadratic_disc_form(ramification, cover.u)
    div = tuple(alpha * x + beta * y for x, y in zip(cover.u, cover.w))
    return (alpha, beta), div


def _image_agreement(cover: TangentCover, div, expected, prec) -> float:
    if all(x == 0 for x in div):
        raise DegenerateInput("common divisor vanishes identically")
    worst = 0.0
    for r in binary_roots(div, prec):
        for _ in range(r.multiplicity):
            worst = max(worst, projective_distance(cover.image(r.value), expected))
    return worst


def involutory_pair(S: HexSurface, A: LineP3, B: LineP3, prec: int = DEFAULT_PREC,
                    tol: float = DEFAULT_TOL) -> InvolutoryPair:
    """Involutory points of the skew pair (A, B): p_bar on A and q_bar on B."""
    if lines_meet(A, B, tol):
        raise DegenerateInput("lines are not skew")
    with precision(prec):
        f = tangent_cover(S, A, B)
        g = tangent_cover(S, B, A)
        for cover, name in ((f, "f"), (g, "g")):
            if all(x == 0 for x in cover.ramification()):
                raise DegenerateInput(f"tangent map {name} has degree < 2")
        # Q1 + Q2 on A from f and the pencil ramified at g's branch points
        (al, be), div_a = _common_divisor(f, g.branch())
        (al2, be2), div_b = _common_divisor(g, f.branch())
        if (al, be) == (0, 0) or (al2, be2) == (0, 0):
            raise DegenerateInput("common divisor is undefined")
        q_bar = PointP3(tuple(al * x + be * y for x, y in zip(B.p.coords, B.q.coords)))
        p_bar = PointP3(tuple(al2 * x + be2 * y for x, y in zip(A.p.coords, A.q.coords)))
        check = max(_image_agreement(f, div_a, (al, be), prec), _image_agreement(g, div_b, (al2, be2), prec))
    return InvolutoryPair(A, B, f, g, div_a, div_b, p_bar, q_bar, check)


# the configuration of a surface -------------------------------------------------------


@dataclass(frozen=True)
class CremonaPlane:
    double_six: DoubleSix
    plane: PlaneP3
    points: Tuple[PointP3, ...]  # P_bar_1..6 then Q_bar_1..6
    sigma: float  # smallest normalized singular value of the 12x4 point matrix


def cremona_plane_of(S: HexSurface, ds: DoubleSix, prec: int = DEFAULT_PREC,
                     tol: float = DEFAULT_TOL) -> CremonaPlane:
    """Plane through the twelve involutory points of a double-six."""
    inv = involutory_points(S, prec)
    pts = [inv[(a, b)] for a, b in zip(ds.a, ds.b)] + [inv[(b, a)] for a, b in zip(ds.a, ds.b)]
    with precision(prec):
        plane, sigma = best_fit_plane(pts)
    if sigma > tol:
        raise NoConvergence(f"involutory points are not coplanar (sigma {sigma:.2e})", [sigma])
    return CremonaPlane(ds, plane, tuple(pts), sigma)


def involutory_points(S: HexSurface, prec: int = DEFAULT_PREC) -> Dict[Tuple[int, int], PointP3]:
    """Map (line, skew partner) -> involutory point on ``line``, for all 216 skew pairs."""
    key = ("involutory", prec)
    if key in S._cache:
        return S._cache[key]
    lines = all_lines_27(S, prec)
    meet = meeting_matrix(lines)
    out = {}
    for i, j in itertools.combinations(range(27), 2):
        if meet[i][j]:
            continue
        pair = involutory_pair(S, lines[i].line, lines[j].line, prec)
        if pair.check > 1e-8:
            raise NoConvergence(f"involutory images disagree for lines {i}, {j}", [pair.check])
        out[(i, j)] = pair.p_bar
        out[(j, i)] = pair.q_bar
    S._cache[key] = out
    return out


def cremona_planes(S: HexSurface, prec: int = DEFAULT_PREC) -> List[CremonaPlane]:
    key = ("cremona_planes", prec)
    if key not in S._cache:
        S._cache[key] = [cremona_plane_of(S, ds, prec) for ds in double_sixes(S, prec)]
    return S._cache[key]


# checks over double-sixes -------------------------------------------------------------


@dataclass(frozen=True)
class OffSixPoint:
    line: int
    planes: Tuple[int, int, int]  # positions in TritangentData.planes
    vertices: Tuple[PointP3, PointP3, PointP3]
    point: PointP3


def off_six_points(S: HexSurface, ds: DoubleSix, prec: int = DEFAULT_PREC) -> List[OffSixPoint]:
    """For each of the 15 lines outside ``ds``: the point cut on it by the plane
    through the meet points of its three residual pairs disjoint from ``ds``."""
    inside = set(ds.lines)
    out = []
    with precision(prec):
        for idx in range(27):
            if idx in inside:
                continue
            data = tritangent_planes(S, idx, prec)
            chosen = [k for k, t in enumerate(data.planes) if not (set(t.residual) & inside)]
            if len(chosen) != 3:
                raise NoConvergence(f"line {idx}: {len(chosen)} planes avoid the double-six, expected 3")
            verts = tuple(data.planes[k].vertex for k in chosen)
            plane = span_plane(*verts)
            pt = plane_meet_line(plane, all_lines_27(S, prec)[idx].line)
            out.append(OffSixPoint(idx, tuple(chosen), verts, pt))
    return out


def plane_residual(plane: PlaneP3, pt: PointP3) -> float:
    """|plane(pt)| relative to the coefficient and coordinate norms (0 when exact)."""
    v = plane(pt)
    if plane.exact and pt.exact:
        return 0.0 if v == 0 else float(abs(v))
    nrm = mpmath.sqrt(sum(abs(numeric(c)) ** 2 for c in plane.coeffs)) * mpmath.sqrt(
        sum(abs(numeric(c)) ** 2 for c in pt.coords))
    return float(abs(numeric(v)) / nrm)


# per-line profile -------------------------------------------------------------------


@dataclass(frozen=True)
class ProfileRoot:
    point: PointP3
    multiplicity: int
    residual: float
    planes: Tuple[int, ...]  # Cremona planes through the point
    kind: str  # "involutory", "non-involutory" or "coincident-involutory"
    partner: Optional[int] = None  # skew partner for involutory points
    triple: Optional[Tuple[int, int, int]] = None  # for non-involutory points
    partners: Tuple[int, ...] = ()  # all skew partners whose involutory point this is


@dataclass(frozen=True)
class LineProfile:
    line: int
    form: Tuple  # degree-36 binary form, coefficients of t0^(36-k) t1^k
    roots: Tuple[ProfileRoot, ...]
    lengths: Dict[str, int] = field(default_factory=dict)

    @property
    def pattern(self) -> Dict[int, int]:
        pat: Dict[int, int] = {}
        for r in self.roots:
            pat[r.multiplicity] = pat.get(r.multiplicity, 0) + 1
        return pat

    @property
    def involutory(self):
        return [r for r in self.roots if r.kind == "involutory"]

    @property
    def coincident(self):
        return [r for r in self.roots if r.kind == "coincident-involutory"]

    @property
    def non_involutory(self):
        return [r for r in self.roots if r.kind == "non-involutory"]


def restricted_product(planes: Sequence[PlaneP3], line: LineP3) -> tuple:
    """Coefficients of the product of the plane forms restricted to s p + t q."""
    st = ("t0", "t1")
    f = MultiPoly.const(1, st)
    t0, t1 = MultiPoly.var("t0", st), MultiPoly.var("t1", st)
    for pl in planes:
        f = f * (t0 * pl(line.p) + t1 * pl(line.q))
    d = len(planes)
    return tuple(f.coefficient((d - k, k)) for k in range(d + 1))


def line_profile(S: HexSurface, index: int, prec: int = DEFAULT_PREC, tol: float = DEFAULT_TOL) -> LineProfile:
    """Root profile of the 36 Cremona planes restricted to line ``index``.

    Simple roots are matched with the involutory points of the line and
    double roots with its non-involutory points; a root that matches neither
    raises :class:`NoConvergence`.
    """
    lines = all_lines_27(S, prec)
    line = lines[index].line
    planes = cremona_planes(S, prec)
    forms = [cp.plane for cp in planes]
    inv = involutory_points(S, prec)
    partners = sorted(j for (i, j) in inv if i == index)
    noninv = non_involutory_points(S, index, prec)
    work = 2 * prec + 32
    with mp.workprec(work):
        coeffs = restricted_product(forms, line)
    with precision(prec):
        roots = binary_roots(coeffs, prec)
        out = []
        for r in roots:
            t0, t1 = r.value
            pt = line.point(t0, t1)
            through = tuple(k for k, pl in enumerate(forms) if plane_residual(pl, pt) <= tol)
            part = [j for j in partners if pt.distance(inv[(index, j)]) <= tol]
            trip = [n.triple for n in noninv if pt.distance(n.point) <= tol]
            if r.multiplicity == 1 and len(part) == 1 and not trip:
                out.append(ProfileRoot(pt, 1, r.residual, through, "involutory", partner=part[0],
                                       partners=tuple(part)))
            elif r.multiplicity == 2 and len(trip) == 1 and not part:
                out.append(ProfileRoot(pt, 2, r.residual, through, "non-involutory", triple=trip[0]))
            elif r.multiplicity == len(part) >= 2 and not trip:
                # special surfaces: involutory points for several partners coincide
                out.append(ProfileRoot(pt, r.multiplicity, r.residual, through, "coincident-involutory",
                                       partners=tuple(part)))
            else:
                raise NoConvergence(
                    f"line {index}: root of multiplicity {r.multiplicity} matches "
                    f"{len(part)} involutory and {len(trip)} non-involutory points"
                )
    order = {"involutory": 0, "coincident-involutory": 1, "non-involutory": 2}
    out.sort(key=lambda x: (order[x.kind], x.partners, x.triple or ()))
    n_inv = sum(len(x.partners) for x in out)
    n_non = sum(1 for x in out if x.kind == "non-involutory")
    # each root lies on the discriminant with multiplicity two (the lines
    # count twice), doubling each length
    lengths = {"involutory": 2 * n_inv, "non_involutory": 2 * 2 * n_non}
    lengths["total"] = lengths["involutory"] + lengths["non_involutory"]
    return LineProfile(index, coeffs, tuple(out), lengths)


def plane_line_pattern(S: HexSurface, k: int, prec: int = DEFAULT_PREC, tol: float = DEFAULT_TOL):
    """For Cremona plane ``k``: per line, the other planes through its meet point.

    Returns (involutory_lines, further, shared): involutory_lines lists lines
    of the plane's double-six whose meet point is their involutory point,
    further maps each remaining line to the other planes through its meet
    point, and shared maps double-six lines to the other planes through their
    involutory point (empty on a general surface).
    """
    planes = cremona_planes(S, prec)
    lines = all_lines_27(S, prec)
    inv = involutory_points(S, prec)
    cp = planes[k]
    ds = cp.double_six
    involutory, further, shared = [], {}, {}
    with precision(prec):
        for idx, sl in enumerate(lines):
            pt = plane_meet_line(cp.plane, sl.line)
            others = tuple(m for m, q in enumerate(planes) if m != k and plane_residual(q.plane, pt) <= tol)
            if idx in ds.lines:
                if pt.distance(inv[(idx, ds.partner(idx))]) <= tol:
                    involutory.append(idx)
                if others:
                    shared[idx] = others
            else:
                further[idx] = others
    return involutory, further, shared


def hexahedral_check(S: HexSurface, prec: int = DEFAULT_PREC):
    """Points of the 15 explicit lines built from their exact meet points, and
    their residuals against the hexahedral Cremona plane (exact zeros)."""
    ds = hexahedral_double_six(S, prec)
    plane = cremona_plane_hex(S)
    pts = off_six_points(S, ds, prec)
    return [(p, plane(p.point)) for p in pts]
