"""Nets of quadrics in P^3: the determinantal quartic, the pfaffian test for
polar nets, base points, and the vanishing implications linking degenerate
nets to singular quartics."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp

from luroth.errors import DegenerateInput, NoConvergence
from luroth.geometry import PointP3
from luroth.polycore.elimination import EliminationCertificate, common_zero_test, smoothness_certificate
from luroth.polycore.matrix import (
    block_skew,
    det_laplace,
    mp_lu_solve,
    nullspace_exact,
    pfaffian,
    rank_exact,
    singular_values,
)
from luroth.polycore.poly import MultiPoly, univariate_coeffs
from luroth.polycore.resultant import resultant
from luroth.polycore.roots import cluster_radius, roots_numeric
from luroth.polycore.scalar import (
    DEFAULT_PREC,
    all_exact,
    from_str,
    numeric,
    precision,
    projective_distance,
    to_str,
)
from luroth.quartics import QVARS, SingularPoint, TernaryQuartic, singular_points

XVARS = ("x0", "x1", "x2", "x3")


def _matrix(m) -> tuple:
    rows = tuple(tuple(r) for r in m)
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ValueError("quadrics of P^3 are 4x4 matrices")
    return rows


def _symmetric(m) -> bool:
    for i in range(4):
        for j in range(i + 1, 4):
            a, b = m[i][j], m[j][i]
            if all_exact((a, b)):
                if a != b:
                    return False
            elif abs(numeric(a) - numeric(b)) > 1e-25 * (1 + abs(numeric(a))):
                return False
    return True


def _upper(m) -> list:
    return [m[i][j] for i in range(4) for j in range(i, 4)]


@dataclass(frozen=True)
class NetOfQuadrics:
    """Three linearly independent symmetric 4x4 matrices Q0, Q1, Q2."""

    q0: tuple
    q1: tuple
    q2: tuple

    def __post_init__(self):
        mats = [_matrix(m) for m in (self.q0, self.q1, self.q2)]
        for name, m in zip(("q0", "q1", "q2"), mats):
            if not _symmetric(m):
                raise ValueError(f"{name} is not symmetric")
            object.__setattr__(self, name, m)
        rows = [_upper(m) for m in mats]
        if all_exact(x for r in rows for x in r):
            independent = rank_exact(rows) == 3
        else:
            s = singular_values(rows)
            independent = len(s) == 3 and s[2] > 1e-25 * s[0]
        if not independent:
            raise DegenerateInput("the three quadrics are linearly dependent")

    @property
    def matrices(self) -> tuple:
        return (self.q0, self.q1, self.q2)

    @property
    def exact(self) -> bool:
        return all_exact(x for m in self.matrices for r in m for x in r)

    def member(self, w: Sequence) -> tuple:
        """The matrix w0 Q0 + w1 Q1 + w2 Q2."""
        return tuple(tuple(sum(wk * m[i][j] for wk, m in zip(w, self.matrices)) for j in range(4))
                     for i in range(4))

    def quadrics(self, variables: Sequence[str] = XVARS) -> List[MultiPoly]:
        out = []
        for m in self.matrices:
            terms = {}
            for i in range(4):
                for j in range(4):
                    e = [0] * 4
                    e[i] += 1
                    e[j] += 1
                    terms[tuple(e)] = terms.get(tuple(e), 0) + m[i][j]
            out.append(MultiPoly(variables, terms))
        return out

    def transform(self, g: Sequence[Sequence]) -> "NetOfQuadrics":
        """The net of the quadrics x -> q(g x), i.e. matrices g^T Q g."""
        def conj(m):
            return tuple(tuple(sum(g[k][i] * m[k][l] * g[l][j] for k in range(4) for l in range(4))
                               for j in range(4)) for i in range(4))
        return NetOfQuadrics(*(conj(m) for m in self.matrices))

    def to_json(self):
        return {"matrices": [[to_str(x) for r in m for x in r] for m in self.matrices]}

    @classmethod
    def from_json(cls, data):
        mats = []
        for flat in data["matrices"]:
            vals = [from_str(s) for s in flat]
            if len(vals) != 16:
                raise ValueError("each matrix needs 16 row-major entries")
            mats.append(tuple(tuple(vals[4 * i:4 * i + 4]) for i in range(4)))
        return cls(*mats)


def delta_map(N: NetOfQuadrics) -> TernaryQuartic:
    """det(x Q0 + y Q1 + z Q2) as a ternary quartic."""
    w = [MultiPoly.var(v, QVARS) for v in QVARS]
    rows = [[sum((wk * m[i][j] for wk, m in zip(w, N.matrices)), MultiPoly(QVARS)) for j in range(4)]
            for i in range(4)]
    d = det_laplace(rows)
    if d.is_zero():
        raise DegenerateInput("determinant vanishes identically: the determinantal map is undefined here")
    return TernaryQuartic.from_poly(d)


def lambda_pfaffian(N: NetOfQuadrics):
    """Pfaffian of the 12x12 block matrix (0, Q0, -Q1; -Q0, 0, Q2; Q1, -Q2, 0)."""
    return pfaffian(block_skew(*[[list(r) for r in m] for m in N.matrices]))


def polar_quadric(F: MultiPoly, p: Sequence) -> tuple:
    """Symmetric matrix of the quadric sum_j p_j dF/dx_j of a cubic form."""
    if F.nvars != 4 or not F.is_homogeneous() or F.homogeneous_degree() != 3:
        raise ValueError("need a quaternary cubic form")
    origin = (0,) * 4
    v = F.variables
    out = [[0] * 4 for _ in range(4)]
    for j in range(4):
        if p[j] == 0:
            continue
        fj = F.diff(v[j])
        for k in range(4):
            fjk = fj.diff(v[k])
            for l in range(k, 4):
                c = fjk.diff(v[l]).coefficient(origin)
                if c != 0:
                    out[k][l] = out[k][l] + p[j] * c
    half = Fraction(1, 2) if all_exact(p) and F.is_exact() else mpmath.mpf(1) / 2
    for k in range(4):
        for l in range(k, 4):
            out[k][l] = out[k][l] * half
            out[l][k] = out[k][l]
    return tuple(tuple(r) for r in out)


def polar_net(F: MultiPoly, a, b, c) -> NetOfQuadrics:
    """The net of polar quadrics of three points with respect to a cubic surface."""
    pts = [p.coords if isinstance(p, PointP3) else tuple(p) for p in (a, b, c)]
    if all_exact(x for p in pts for x in p):
        independent = rank_exact([list(p) for p in pts]) == 3
    else:
        s = singular_values([list(p) for p in pts])
        independent = s[2] > 1e-25 * s[0]
    if not independent:
        raise DegenerateInput("the three points are projectively dependent")
    return NetOfQuadrics(*(polar_quadric(F, p) for p in pts))


# base points -----------------------------------------------------------------------


@dataclass(frozen=True)
class BasePoint:
    point: PointP3
    multiplicity: int
    residual: float


class _FrameRejected(Exception):
    pass


def _random_frame4(rng: random.Random):
    while True:
        g = [[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(4)]
        if det_laplace(g) != 0:
            return g


def _base_residual(forms, pt) -> float:
    nrm = max(abs(numeric(x)) for x in pt)
    return float(max(abs(numeric(f.evaluate(pt))) / (f.coeff_norm() * nrm**2) for f in forms))


def _newton3(forms, x0, steps: int = 300):
    """Newton on three affine quadrics in (x0, x1, x2); linear near a double root."""
    names = XVARS[:3]
    jac = [[f.diff(v) for v in names] for f in forms]
    x = [numeric(c) for c in x0]
    tol = mpmath.mpf(2) ** (-mp.prec + 6)
    for _ in range(steps):
        F = mpmath.matrix([f.evaluate(x) for f in forms])
        J = mpmath.matrix([[e.evaluate(x) for e in row] for row in jac])
        try:
            step = mp_lu_solve(J, F)
        except ZeroDivisionError:
            break
        x = [xi - si for xi, si in zip(x, step)]
        if mpmath.norm(step) <= tol * (1 + sum(abs(c) for c in x)):
            break
    return x


def _transversal(forms, pt, prec) -> bool:
    """The three affine quadrics have independent gradients at ``pt``."""
    jac = [[f.diff(v).evaluate(pt) for v in XVARS[:3]] for f in forms]
    sv = singular_values(jac)
    return sv[0] > 0 and sv[2] > 2.0 ** (-prec / 8) * sv[0]


def base_points(N: NetOfQuadrics, prec: int = DEFAULT_PREC, tol: Optional[float] = None,
                seed: int = 20240517) -> List[BasePoint]:
    """The eight common zeros of the net with multiplicities.

    In a random rational frame, with three random combinations q0, q1, q2 of
    the quadrics, Res_x1(Res_x2(q0, q1), Res_x2(q0, q2)) is a degree-16
    polynomial in x0 (chart x3 = 1) whose roots include the x0 coordinates of
    the base points; spurious roots are discarded by checking all three
    quadrics.  A point where the quadrics meet transversally is simple; a
    single tangential point takes the remaining multiplicity, several take
    their resultant root multiplicities when their x0 are distinct.  ``tol`` bounds the
    relative residual of a refined point (default 2^(-prec/4), loose enough
    for the linearly converging double points).
    """
    if tol is None:
        tol = 2.0 ** (-prec / 4)
    rng = random.Random(seed)
    zero_resultants = 0
    with precision(prec):
        for _attempt in range(8):
            g = _random_frame4(rng)
            combos = [[rng.randint(1, 7) for _ in range(3)] for _ in range(3)]
            try:
                pts = _base_points_in_frame(N, g, combos, prec, tol)
            except (_FrameRejected, NoConvergence):
                continue
            if pts is None:
                zero_resultants += 1
                if zero_resultants >= 3:
                    raise DegenerateInput("positive-dimensional base locus")
                continue
            return pts
    raise NoConvergence("no elimination frame recovered eight base points")


def _base_points_in_frame(N, g, combos, prec, tol):
    moved = N.transform(g).quadrics()
    forms = [sum((f * c for f, c in zip(moved, cc)), MultiPoly(XVARS)) for cc in combos]
    aff_names = XVARS[:3]
    aff = [f.subs({"x3": 1}).in_ring(aff_names) for f in forms]
    if any(f.coefficient((0, 0, 2)) == 0 for f in aff):
        raise _FrameRejected
    r1 = resultant(aff[0], aff[1], "x2")
    r2 = resultant(aff[0], aff[2], "x2")
    if r1.is_zero() or r2.is_zero():
        return None
    plane = ("x0", "x1")
    r1, r2 = r1.in_ring(plane), r2.in_ring(plane)
    if r1.degree_in("x1") != 4 or r2.degree_in("x1") != 4:
        raise _FrameRejected
    r = resultant(r1, r2, "x1")
    if r.is_zero() or (not r.is_exact() and r.coeff_norm() < 1e-30 * r1.coeff_norm() ** 4 * r2.coeff_norm() ** 4):
        return None
    coeffs = univariate_coeffs(r.in_ring(("x0",)))
    if len(coeffs) - 1 != 16:
        raise _FrameRejected
    found = []  # [point (affine), residual, multiplicity]
    for rx in roots_numeric(coeffs, prec):
        x0 = rx.value
        c1 = univariate_coeffs(r1.subs({"x0": x0}).in_ring(("x1",)))
        for ry in roots_numeric(c1, prec):
            x1 = ry.value
            if abs(r2.evaluate((x0, x1))) > 1e-6 * r2.coeff_norm() * max(1, abs(x0), abs(x1)) ** 8:
                continue
            c2 = univariate_coeffs(aff[0].subs({"x0": x0, "x1": x1}).in_ring(("x2",)))
            for rz in roots_numeric(c2, prec):
                cand = [x0, x1, rz.value]
                if _base_residual(aff, cand) > 1e-6:
                    continue
                cand = _newton3(aff, cand)
                res = _base_residual(aff, cand)
                if not res <= tol:  # also rejects NaN
                    continue
                hom = cand + [mpmath.mpc(1)]
                if any(projective_distance(hom, f[0]) < cluster_radius(prec) for f in found):
                    continue
                found.append((hom, res, rx.multiplicity, _transversal(aff, cand, prec)))
    # a transversal point is simple; the remaining count goes to the others
    simple = sum(1 for f in found if f[3])
    tangent = [f for f in found if not f[3]]
    if len(tangent) == 1:
        mults = [1 if f[3] else 8 - simple for f in found]
    else:
        # several tangential points: trust the resultant only when no x0 is shared
        x0s = [f[0][0] for f in tangent]
        if any(abs(a - b) < cluster_radius(prec) for a, b in itertools.combinations(x0s, 2)):
            raise _FrameRejected
        mults = [1 if f[3] else f[2] for f in found]
    if sum(mults) != 8 or min(mults) < 1 or any(m < 2 for m, f in zip(mults, found) if not f[3]):
        raise _FrameRejected
    out = []
    for (hom, res, _, _), m in zip(found, mults):
        pt = tuple(sum(g[i][j] * hom[j] for j in range(4)) for i in range(4))
        out.append(BasePoint(PointP3(pt).normalized(), m, res))
    out.sort(key=lambda b: tuple((round(float(c.real), 8), round(float(c.imag), 8))
                                 for c in b.point.normalized().coords))
    return out


# vanishing implications ---------------------------------------------------------------


def _random_symmetric(rng: random.Random, bound: int = 5) -> tuple:
    m = [[0] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            m[i][j] = m[j][i] = Fraction(rng.randint(-bound, bound))
    return tuple(tuple(r) for r in m)


def random_net(rng: random.Random, bound: int = 5) -> NetOfQuadrics:
    while True:
        try:
            return NetOfQuadrics(*(_random_symmetric(rng, bound) for _ in range(3)))
        except DegenerateInput:
            continue


def _random_vector(rng: random.Random, bound: int = 5) -> list:
    while True:
        v = [Fraction(rng.randint(-bound, bound)) for _ in range(4)]
        if any(v):
            return v


_SYM_INDEX = [(i, j) for i in range(4) for j in range(i, 4)]


def _sym_from_params(params) -> tuple:
    m = [[Fraction(0)] * 4 for _ in range(4)]
    for (i, j), c in zip(_SYM_INDEX, params):
        m[i][j] = m[j][i] = c
    return tuple(tuple(r) for r in m)


def collision_net(rng: random.Random) -> Tuple[NetOfQuadrics, list]:
    """A net with a base point p where the three tangent planes share a
    direction v (p^T Q p = 0 and p^T Q v = 0 for each member), so two base
    points coincide at p.  Exact, built directly on the collision locus."""
    while True:
        p, v = _random_vector(rng), _random_vector(rng)
        cons = []
        for a, b in ((p, p), (p, v)):
            cons.append([a[i] * b[j] + (a[j] * b[i] if i != j else 0) for i, j in _SYM_INDEX])
        if rank_exact(cons) != 2:
            continue
        basis = nullspace_exact(cons, 10)
        mats = []
        for _ in range(3):
            coef = [rng.randint(-3, 3) for _ in basis]
            mats.append(_sym_from_params([sum(c * b[k] for c, b in zip(coef, basis)) for k in range(10)]))
        try:
            return NetOfQuadrics(*mats), p
        except DegenerateInput:
            continue


def rank_two_net(rng: random.Random) -> NetOfQuadrics:
    """A net whose first member l1 l2^T + l2 l1^T has rank 2."""
    while True:
        l1, l2 = _random_vector(rng), _random_vector(rng)
        q0 = tuple(tuple(l1[i] * l2[j] + l2[i] * l1[j] for j in range(4)) for i in range(4))
        if rank_exact([list(r) for r in q0]) != 2:
            continue
        try:
            return NetOfQuadrics(q0, _random_symmetric(rng), _random_symmetric(rng))
        except DegenerateInput:
            continue


def _minors3(N: NetOfQuadrics) -> List[MultiPoly]:
    w = [MultiPoly.var(v, QVARS) for v in QVARS]
    M = [[sum((wk * m[i][j] for wk, m in zip(w, N.matrices)), MultiPoly(QVARS)) for j in range(4)]
         for i in range(4)]
    out = []
    for rows in itertools.combinations(range(4), 3):
        for cols in itertools.combinations(range(4), 3):
            out.append(det_laplace([[M[i][j] for j in cols] for i in rows]))
    return out


def low_rank_certificate(N: NetOfQuadrics, seed: int = 0) -> EliminationCertificate:
    """Certify that no member of the net has rank <= 2.

    Three random combinations of the 3x3 minors are tested for a common
    zero; ``no_common_zero`` therefore certifies the claim (the converse
    needs not hold for an unlucky choice of combinations).
    """
    rng = random.Random(seed)
    minors = [m for m in _minors3(N) if not m.is_zero()]
    if not minors:
        return EliminationCertificate(False, -1, 0, 0, N.exact)
    combos = []
    for _ in range(3):
        coef = [rng.randint(-5, 5) for _ in minors]
        combos.append(sum((m * c for m, c in zip(minors, coef)), MultiPoly(QVARS)))
    return common_zero_test(combos)


@dataclass(frozen=True)
class SalmonTrial:
    kind: str  # "collision", "rank2" or "generic"
    index: int
    net: NetOfQuadrics
    quartic: TernaryQuartic
    singular: Tuple[SingularPoint, ...]
    base: Optional[Tuple[BasePoint, ...]]
    certificate: Optional[EliminationCertificate]  # smoothness of the quartic (generic trials)
    passed: bool

    def to_json(self):
        out = {
            "kind": self.kind,
            "index": self.index,
            "net": self.net.to_json(),
            "quartic": self.quartic.to_json(),
            "singular_points": len(self.singular),
            "passed": self.passed,
        }
        if self.base is not None:
            out["base_multiplicities"] = [b.multiplicity for b in self.base]
        return out


SALMON_KINDS = ("collision", "rank2", "generic")


def salmon_trial(kind: str, index: int, seed: int = 0, prec: int = DEFAULT_PREC) -> SalmonTrial:
    """One trial of a vanishing implication, reproducible from (kind, index, seed).

    collision: coincident base points force a singular quartic; rank2: a
    rank-two member forces one; generic: with eight distinct base points and
    no member of rank <= 2 the quartic is smooth (certified exactly).
    """
    rng = random.Random(f"{kind}:{seed}:{index}")
    if kind == "collision":
        N, p = collision_net(rng)
        Q = delta_map(N)
        sing = tuple(singular_points(Q, prec))
        base = tuple(base_points(N, prec))
        doubled = any(b.multiplicity >= 2 and b.point.distance(PointP3(tuple(p))) < 1e-10 for b in base)
        return SalmonTrial(kind, index, N, Q, sing, base, None, doubled and len(sing) > 0)
    if kind == "rank2":
        N = rank_two_net(rng)
        Q = delta_map(N)
        sing = tuple(singular_points(Q, prec))
        return SalmonTrial(kind, index, N, Q, sing, None, None, len(sing) > 0)
    if kind == "generic":
        while True:
            N = random_net(rng)
            if not low_rank_certificate(N, seed=index).no_common_zero:
                continue
            base = tuple(base_points(N, prec))
            if len(base) == 8:
                break
        Q = delta_map(N)
        cert = smoothness_certificate(Q.poly)
        sing = tuple(singular_points(Q, prec))
        return SalmonTrial(kind, index, N, Q, sing, base, cert, cert.no_common_zero and not sing)
    raise ValueError(f"unknown trial kind {kind!r}; expected one of {SALMON_KINDS}")


def salmon_trials(kind: str, trials: int = 50, seed: int = 0, prec: int = DEFAULT_PREC) -> List[SalmonTrial]:
    return [salmon_trial(kind, i, seed, prec) for i in range(trials)]
