"""Ternary quartics: singular points, the nodal class test, pentalateral
quartics and numeric pentalateral fitting."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import scipy.linalg
import scipy.optimize
from mpmath import mp

from luroth.errors import DegenerateInput
from luroth.polycore.matrix import det_laplace, mp_det, mp_lu_solve, null_vector, rank_exact, singular_values
from luroth.polycore.poly import MultiPoly, binary_coeffs, linear_form, monomials
from luroth.polycore.resultant import resultant
from luroth.polycore.roots import binary_roots, roots_numeric
from luroth.polycore.scalar import (
    DEFAULT_PREC,
    DEFAULT_TOL,
    all_exact,
    from_str,
    numeric,
    precision,
    projective_distance,
    to_str,
)

QVARS = ("x", "y", "z")
QUARTIC_MONOMIALS = monomials(3, 4)  # x^4, x^3 y, x^3 z, x^2 y^2, ... , z^4


@dataclass(frozen=True)
class TernaryQuartic:
    """Plane quartic by its 15 coefficients over QUARTIC_MONOMIALS."""

    coeffs: tuple

    def __post_init__(self):
        c = tuple(self.coeffs)
        if len(c) != 15:
            raise ValueError(f"a ternary quartic has 15 coefficients, got {len(c)}")
        if all(x == 0 for x in c):
            raise DegenerateInput("zero quartic")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "TernaryQuartic":
        if p.nvars != 3:
            raise ValueError("need a polynomial in three variables")
        if not p.is_zero() and not (p.is_homogeneous() and p.homogeneous_degree() == 4):
            raise ValueError("not a homogeneous quartic")
        return cls(tuple(p.coefficient(m) for m in QUARTIC_MONOMIALS))

    @cached_property
    def poly(self) -> MultiPoly:
        return MultiPoly(QVARS, dict(zip(QUARTIC_MONOMIALS, self.coeffs)))

    @property
    def exact(self) -> bool:
        return all_exact(self.coeffs)

    def __call__(self, pt):
        return self.poly.evaluate(pt)

    def norm(self) -> float:
        return float(mpmath.sqrt(sum(abs(numeric(c)) ** 2 for c in self.coeffs)))

    def transform(self, g: Sequence[Sequence]) -> "TernaryQuartic":
        """The quartic X -> Q(g X)."""
        xs = [MultiPoly.var(v, QVARS) for v in QVARS]
        subs = [sum((xs[j] * g[i][j] for j in range(3)), MultiPoly(QVARS)) for i in range(3)]
        return TernaryQuartic.from_poly(self.poly.compose(subs))

    def distance(self, other: "TernaryQuartic") -> float:
        return projective_distance(self.coeffs, other.coeffs)

    def to_json(self):
        return {"monomials": ["".join(f"{v}^{e}" for v, e in zip(QVARS, m) if e) for m in QUARTIC_MONOMIALS],
                "coefficients": [to_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data):
        return cls(tuple(from_str(s) for s in data["coefficients"]))


def fermat_quartic() -> TernaryQuartic:
    x, y, z = (MultiPoly.var(v, QVARS) for v in QVARS)
    return TernaryQuartic.from_poly(x**4 + y**4 + z**4)


# singular points ----------------------------------------------------------


@dataclass(frozen=True)
class SingularPoint:
    point: Optional[tuple]  # None for a non-isolated singular locus
    kind: str  # "node", "cusp" or "worse"
    residual: float
    isolated: bool = True


def _random_frame(rng: random.Random):
    while True:
        g = [[Fraction(rng.randint(-4, 4)) for _ in range(3)] for _ in range(3)]
        if det_laplace(g) != 0:
            return g


def _gradient_residual(grads, pt, scale):
    nrm = max(abs(numeric(c)) for c in pt)
    return float(max(abs(numeric(g.evaluate(pt))) for g in grads) / (scale * nrm**3))


def _refine_pair(g1: MultiPoly, g2: MultiPoly, x0, y0, steps: int = 300):
    """Newton on the square system g1 = g2 = 0 in the chart z = 1.

    Convergence is only linear at a cusp, hence the generous step budget.
    """
    jac = [[g.diff(v) for v in ("x", "y")] for g in (g1, g2)]
    x, y = numeric(x0), numeric(y0)
    tol = mpmath.mpf(2) ** (-mp.prec + 6)
    for _ in range(steps):
        F = mpmath.matrix([g1.evaluate((x, y)), g2.evaluate((x, y))])
        J = mpmath.matrix([[e.evaluate((x, y)) for e in row] for row in jac])
        try:
            step = mp_lu_solve(J, F)
        except ZeroDivisionError:
            break
        x, y = x - step[0], y - step[1]
        if mpmath.norm(step) <= tol * (1 + abs(x) + abs(y)):
            break
    return x, y


def singular_points(Q: TernaryQuartic, prec: int = DEFAULT_PREC, tol: Optional[float] = None,
                    seed: int = 20240517) -> List[SingularPoint]:
    """Common zeros of the three partials, each classified as node, cusp or worse.

    After a random rational change of frame two generic combinations of the
    partials are eliminated with a resultant (z = 1 chart); candidate roots
    are kept when all partials vanish.  An identically zero resultant means
    the singular locus is a curve, reported as one non-isolated "worse" entry.

    A refined candidate counts when its relative gradient residual is at most
    ``tol``, by default 2^(-prec/2): true singular points of the given
    coefficients refine far below that, while near-singular points of a
    badly scaled smooth quartic stall well above it.
    """
    if tol is None:
        tol = 2.0 ** (-prec / 2)
    rng = random.Random(seed)
    with precision(prec):
        for _attempt in range(6):
            g = _random_frame(rng)
            try:
                pts = _singular_in_frame(Q, g, prec, tol, rng)
            except _FrameRejected:
                continue
            if pts is None:
                return [SingularPoint(None, "worse", 0.0, isolated=False)]
            return [SingularPoint(p, classify_singularity(Q, p), r) for p, r in pts]
    raise DegenerateInput("no admissible elimination frame found")


class _FrameRejected(Exception):
    pass


def _singular_in_frame(Q: TernaryQuartic, g, prec, tol, rng):
    P = Q.transform(g)
    grads = P.poly.gradient()
    c1 = [rng.randint(1, 9) for _ in range(3)]
    c2 = [rng.randint(1, 9) for _ in range(3)]
    G1 = sum((gr * c for gr, c in zip(grads, c1)), MultiPoly(QVARS))
    G2 = sum((gr * c for gr, c in zip(grads, c2)), MultiPoly(QVARS))
    if G1.is_zero() and G2.is_zero():
        return None  # the partials all vanish: Q is zero, excluded above
    xy = ("x", "y")
    g1 = G1.subs({"z": 1}).in_ring(xy)
    g2 = G2.subs({"z": 1}).in_ring(xy)
    if g1.coefficient((3, 0)) == 0 or g2.coefficient((3, 0)) == 0:
        raise _FrameRejected
    scale = P.norm()
    with precision(prec):
        r = resultant(g1, g2, "x")
        if r.is_zero() or (not r.is_exact() and r.coeff_norm() < 1e-25 * scale**6):
            return None
        rcoef = [r.coefficient((k,)) for k in range(r.degree() + 1)]
        if len(rcoef) - 1 < 9:
            raise _FrameRejected  # a singular point of the frame may sit at z = 0
        found = []
        for ry in roots_numeric(rcoef, prec):
            y0 = ry.value
            cub = g1.subs({"y": y0}).in_ring(("x",))
            for rx in roots_numeric([cub.coefficient((k,)) for k in range(4)], prec):
                cand = (rx.value, y0, mpmath.mpc(1))
                if _gradient_residual(grads, cand, scale) > 1e-6:
                    continue
                xr, yr = _refine_pair(g1, g2, rx.value, y0)
                cand = (xr, yr, mpmath.mpc(1))
                res = _gradient_residual(grads, cand, scale)
                if not res <= tol:  # also rejects NaN
                    continue
                if any(projective_distance(cand, f[0]) < 1e-10 for f in found):
                    continue
                found.append((cand, res))
        out = []
        for cand, res in found:
            pt = tuple(sum(g[i][j] * cand[j] for j in range(3)) for i in range(3))
            nrm = max(pt, key=abs)
            out.append((tuple(c / nrm for c in pt), res))
        out.sort(key=lambda item: tuple((round(float(c.real), 8), round(float(c.imag), 8)) for c in item[0]))
        return out


def classify_singularity(Q: TernaryQuartic, pt, tol: float = DEFAULT_TOL) -> str:
    """Local type from the Hessian: rank 2 node; rank 1 cusp when the cubic
    term along the tangent direction is nonzero; otherwise "worse"."""
    f = Q.poly
    hess = [[f.diff(a).diff(b).evaluate(pt) for b in QVARS] for a in QVARS]
    pnorm = mpmath.sqrt(sum(abs(numeric(c)) ** 2 for c in pt))
    scale = Q.norm() * pnorm**2
    s = singular_values(hess)
    rank = sum(1 for v in s if v > tol * scale)
    if rank >= 2:
        return "node"
    if rank == 0:
        return "worse"
    # kernel = span(pt, v); take v orthogonal to pt
    m = mpmath.matrix([[numeric(x) for x in r] for r in hess])
    _, _, vh = mpmath.svd_c(m)
    basis = [[mpmath.conj(vh[k, j]) for j in range(3)] for k in (1, 2)]
    u = [numeric(c) / pnorm for c in pt]

    def orth(b):
        proj = sum(bi * mpmath.conj(ui) for bi, ui in zip(b, u))
        return [bi - proj * ui for bi, ui in zip(b, u)]

    v = max((orth(b) for b in basis), key=lambda w: mpmath.norm(mpmath.matrix(w)))
    vn = mpmath.norm(mpmath.matrix(v))
    v = [c / vn for c in v]
    t = MultiPoly.var("t", ("t",))
    line = [MultiPoly.const(numeric(p) / pnorm, ("t",)) + t * vi for p, vi in zip(pt, v)]
    cubic_term = f.compose(line).coefficient((3,))
    return "cusp" if abs(cubic_term) > tol * Q.norm() else "worse"


# nodal class via the contact conic --------------------------------------------------


@dataclass(frozen=True)
class NodalClass:
    kind: str  # "L1" (contact conic nonsingular) or "L2" (singular)
    node: tuple
    contact_points: Tuple[tuple, ...]
    conic: Tuple[tuple, ...]  # symmetric 3x3 matrix
    conic_det: float  # |det| / |C|_F^3
    veronese_gap: float  # second smallest / largest singular value


def nodal_class(Q: TernaryQuartic, prec: int = DEFAULT_PREC, tol: float = DEFAULT_TOL,
                singular: Optional[List[SingularPoint]] = None) -> NodalClass:
    """Classify a one-nodal quartic by the conic through the contact points of
    the six bitangents through the node.

    The conic is computed in the norm-minimizing frame of Q, where the
    relative determinant does not depend on the coordinates Q is given in;
    reported points and conic are mapped back to the input frame.
    """
    sing = singular_points(Q, prec) if singular is None else singular
    if len(sing) != 1 or sing[0].kind != "node":
        raise DegenerateInput(f"expected exactly one node, found {[s.kind for s in sing]}")
    g_np, _ratio = norm_minimizing_frame(Q)
    with precision(prec):
        g = mpmath.matrix([[mpmath.mpc(complex(x)) for x in row] for row in g_np])
        g_inv = g**-1
        Q = Q.transform([[g[i, j] for j in range(3)] for i in range(3)])
        node = tuple(numeric(c) for c in sing[0].point)
        node = tuple(sum(g_inv[i, j] * node[j] for j in range(3)) for i in range(3))
        nn = mpmath.sqrt(sum(abs(c) ** 2 for c in node))
        node = tuple(c / nn for c in node)
        _, _, vh = mpmath.svd_c(mpmath.matrix([list(node), [0] * 3, [0] * 3]))
        w1 = [mpmath.conj(vh[1, j]) for j in range(3)]
        w2 = [mpmath.conj(vh[2, j]) for j in range(3)]
        names = ("s", "t", "l0", "l1")
        s, t, l0, l1 = (MultiPoly.var(v, names) for v in names)
        sub = [s * o + t * (l0 * a + l1 * b) for o, a, b in zip(node, w1, w2)]
        G = Q.poly.compose(sub)
        lam = ("l0", "l1")

        def part(k):
            return MultiPoly(lam, {e[2:]: c for e, c in G.terms.items() if e[:2] == (4 - k, k)})

        a2, a3, a4 = part(2), part(3), part(4)
        disc = a3 * a3 - a2 * a4 * 4
        roots = binary_roots(binary_coeffs(disc, 6), prec)
        if len(roots) != 6:
            raise DegenerateInput(f"{len(roots)} distinct bitangent directions through the node, expected 6")
        contacts = []
        for r in roots:
            lv = list(r.value)
            A2, A3, A4 = a2.evaluate(lv), a3.evaluate(lv), a4.evaluate(lv)
            st = (-A3, 2 * A2) if abs(A2) >= abs(A4) else (2 * A4, -A3)
            w = [lv[0] * a + lv[1] * b for a, b in zip(w1, w2)]
            pt = [st[0] * o + st[1] * wi for o, wi in zip(node, w)]
            n = mpmath.sqrt(sum(abs(c) ** 2 for c in pt))
            contacts.append(tuple(c / n for c in pt))
        rows = [[p[0] ** 2, p[0] * p[1], p[0] * p[2], p[1] ** 2, p[1] * p[2], p[2] ** 2] for p in contacts]
        sv = singular_values(rows)
        gap = float(sv[4] / sv[0])
        if gap < tol:
            raise DegenerateInput("contact points do not determine a unique conic")
        vec, _ = null_vector(rows)
        a, b, c, d, e, f = vec
        C = ((a, b / 2, c / 2), (b / 2, d, e / 2), (c / 2, e / 2, f))
        fro = mpmath.sqrt(sum(abs(x) ** 2 for r in C for x in r))
        Cm = mpmath.matrix([list(r) for r in C])
        rel = float(abs(mp_det(Cm)) / fro**3)
        # back to the input frame: p = g p', C = g^-T C' g^-1
        Cm = g_inv.T * Cm * g_inv
        conic = tuple(tuple(Cm[i, j] for j in range(3)) for i in range(3))

        def back(p):
            q = [sum(g[i, j] * p[j] for j in range(3)) for i in range(3)]
            n = mpmath.sqrt(sum(abs(c) ** 2 for c in q))
            return tuple(c / n for c in q)

        return NodalClass("L2" if rel < tol else "L1", back(node), tuple(back(c) for c in contacts),
                          conic, rel, gap)


# pentalaterals --------------------------------------------------------------------------


@dataclass(frozen=True)
class Pentalateral:
    lines: Tuple[tuple, ...]  # five linear forms (a, b, c) = a x + b y + c z
    weights: tuple

    def vertices(self):
        """The ten pairwise meet points, pairs in lexicographic order."""
        out = []
        for i, j in itertools.combinations(range(5), 2):
            a, b = self.lines[i], self.lines[j]
            out.append((a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]))
        return out

    def is_strict(self) -> bool:
        """Lines three by three independent."""
        for tri in itertools.combinations(self.lines, 3):
            d = det_laplace([list(r) for r in tri])
            if (d == 0) if all_exact(x for r in tri for x in r) else abs(numeric(d)) < 1e-12:
                return False
        return True

    def quartic(self) -> TernaryQuartic:
        return pentalateral_build(self.lines, self.weights)

    def to_json(self):
        return {"lines": [[to_str(c) for c in l] for l in self.lines], "weights": [to_str(w) for w in self.weights]}


def _line_forms(lines):
    return [linear_form(list(l), QVARS) for l in lines]


def pentalateral_build(lines: Sequence[Sequence], weights: Sequence) -> TernaryQuartic:
    """sum_k weight_k * prod_{j != k} line_j."""
    if len(lines) != 5 or len(weights) != 5:
        raise ValueError("need five lines and five weights")
    if all(w == 0 for w in weights):
        raise DegenerateInput("all weights are zero")
    for a, b in itertools.combinations(lines, 2):
        cross = (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])
        if all(c == 0 for c in cross):
            raise DegenerateInput("two pentalateral lines coincide")
    forms = _line_forms(lines)
    total = MultiPoly(QVARS)
    for k in range(5):
        prod = MultiPoly.const(weights[k], QVARS)
        for j in range(5):
            if j != k:
                prod = prod * forms[j]
        total = total + prod
    if total.is_zero():
        raise DegenerateInput("weighted sum of the products vanishes identically")
    return TernaryQuartic.from_poly(total)


def pentalateral_matrix(lines: Sequence[Sequence], weights: Sequence):
    """4x4 matrix diag(l'_1, .., l'_4) + l'_0 * ones with l'_k = l_k / weight_k."""
    forms = [f / w for f, w in zip(_line_forms(lines), weights)]
    zero = MultiPoly(QVARS)
    return [[forms[0] + (forms[i + 1] if i == j else zero) for j in range(4)] for i in range(4)]


def determinant_identity(lines: Sequence[Sequence], weights: Sequence) -> bool:
    """det(pentalateral_matrix) * prod(weights) == the pentalateral quartic, exactly."""
    d = det_laplace(pentalateral_matrix(lines, weights))
    prod = Fraction(1)
    for w in weights:
        prod *= w
    return (d * prod) == pentalateral_build(lines, weights).poly


def matrix_rank_at(rows, pt, tol: float = 1e-12) -> int:
    vals = [[e.evaluate(pt) for e in r] for r in rows]
    if all_exact(x for r in vals for x in r):
        return rank_exact(vals)
    s = singular_values(vals)
    return sum(1 for v in s if v > tol * max(s[0], 1e-300))


# numeric fitting ------------------------------------------------------------------------

_TRIPLES = list(itertools.product(range(3), repeat=4))
_MON_INDEX = {m: i for i, m in enumerate(QUARTIC_MONOMIALS)}
_FOLD = np.zeros((81, 15))
for _n, _t in enumerate(_TRIPLES):
    _FOLD[_n, _MON_INDEX[tuple(_t.count(v) for v in range(3))]] = 1.0
_FOLD_LAST = [_FOLD[i::3] for i in range(3)]  # rows with the last tensor index fixed
# Bombieri weights: the norm sum |c_m|^2 m!/4! is invariant under unitary frames
_BOMBIERI = np.array([np.sqrt(math.prod(math.factorial(e) for e in m) / 24.0) for m in QUARTIC_MONOMIALS])


def _product_columns(lines: np.ndarray) -> np.ndarray:
    """15x5 matrix whose k-th column is prod_{j != k} line_j."""
    cols = []
    for k in range(5):
        rest = [lines[j] for j in range(5) if j != k]
        cols.append(np.einsum("a,b,c,d->abcd", *rest).reshape(81) @ _FOLD)
    return np.array(cols).T


def _coeffs_to_tensor(c: np.ndarray) -> np.ndarray:
    return (_FOLD @ (c * _BOMBIERI**2)).reshape(3, 3, 3, 3)


def _hermitian(p: np.ndarray) -> np.ndarray:
    h = np.zeros((3, 3), dtype=complex)
    h[0, 0], h[1, 1], h[2, 2] = p[0], p[1], -p[0] - p[1]
    iu = np.triu_indices(3, 1)
    h[iu] = p[2:5] + 1j * p[5:8]
    h.T[iu] = np.conj(h[iu])
    return h


def norm_minimizing_frame(Q: TernaryQuartic) -> Tuple[np.ndarray, float]:
    """Positive g in SL(3) minimizing the Bombieri norm of x -> Q(g x).

    Returns g and the ratio of the minimal to the initial norm.  The
    minimizer is unique up to unitary factors, which leave the norm
    unchanged, so distances measured in this frame do not depend on the
    coordinates Q was given in.
    """
    c = np.array([complex(numeric(x)) for x in Q.coeffs])
    T = _coeffs_to_tensor(c)
    T = T / np.linalg.norm(T)

    def log_norm(p):
        g = scipy.linalg.expm(_hermitian(p))
        return 2 * np.log(np.linalg.norm(np.einsum("abcd,ai,bj,ck,dl->ijkl", T, g, g, g, g)))

    opt = scipy.optimize.minimize(log_norm, np.zeros(8), method="BFGS", options={"gtol": 1e-10})
    return scipy.linalg.expm(_hermitian(opt.x)), float(np.exp(opt.fun / 2))


@dataclass(frozen=True)
class FitResult:
    success: bool
    residual: float
    pentalateral: Optional[Pentalateral]
    seed_index: int
    starts: int
    residuals: Tuple[float, ...]
    note: str = "fit failure is evidence, not proof, of non-membership"


class _FitProblem:
    """Weighted residual W (target - sum_k lam_k prod_{j != k} l_j) and its Jacobian."""

    def __init__(self, target: np.ndarray):
        self.target = target

    def evaluate(self, lines, lam):
        M = _product_columns(lines)
        return _BOMBIERI * (self.target - M @ lam), M

    def weights(self, lines):
        M = _product_columns(lines)
        lam, *_ = np.linalg.lstsq(_BOMBIERI[:, None] * M, _BOMBIERI * self.target, rcond=None)
        return lam

    def jacobian(self, lines, lam, M):
        cols = []
        for j in range(5):
            C = np.zeros((3, 3, 3), dtype=complex)
            for k in range(5):
                if k == j:
                    continue
                rest = [lines[m] for m in range(5) if m not in (j, k)]
                C += lam[k] * np.einsum("a,b,c->abc", *rest)
            flat = C.reshape(27)
            for i in range(3):
                cols.append(-(flat @ _FOLD_LAST[i]))
        for k in range(5):
            cols.append(-M[:, k])
        return _BOMBIERI[:, None] * np.array(cols).T


def _lm(problem: _FitProblem, lines: np.ndarray, iterations: int = 2000):
    """Levenberg-Marquardt on the lines alone (variable projection with
    Kaufman's Jacobian); weights are re-solved by linear least squares."""
    lam = problem.weights(lines)
    r, M = problem.evaluate(lines, lam)
    cost = np.vdot(r, r).real
    mu = 1e-3
    for _ in range(iterations):
        J = problem.jacobian(lines, lam, M)[:, :15]
        basis, _ = np.linalg.qr(_BOMBIERI[:, None] * M)
        J = J - basis @ (basis.conj().T @ J)
        A = J.conj().T @ J
        g = J.conj().T @ r
        diag = np.real(np.diag(A)) + 1e-30
        step = np.linalg.solve(A + mu * np.diag(diag), -g)
        new_lines = lines + step.reshape(5, 3)
        new_lines /= np.linalg.norm(new_lines, axis=1)[:, None]
        new_lam = problem.weights(new_lines)
        r_new, M_new = problem.evaluate(new_lines, new_lam)
        c_new = np.vdot(r_new, r_new).real
        if c_new < cost:
            improvement = cost - c_new
            lines, lam, r, M, cost = new_lines, new_lam, r_new, M_new, c_new
            mu = max(mu / 5, 1e-12)
            if cost < 1e-30 or improvement < 1e-16 * cost:
                break
        else:
            mu *= 8
            if mu > 1e12:
                break
    return np.sqrt(cost), lines, lam


def pentalateral_fit(Q: TernaryQuartic, seeds: int = 50, seed: int = 0, threshold: float = 1e-8,
                     stop_at_success: bool = True, prec: int = DEFAULT_PREC) -> FitResult:
    """Multistart least squares for Q ~ pentalateral_build(lines, weights).

    Q is first moved to its norm-minimizing frame (at ``prec`` bits) and
    normalized; the residual is the Bombieri-norm distance there, so it is
    unchanged by linear coordinate changes of Q.  Start k uses the generator
    seeded with (seed, k); the lowest residual wins, ties by start index.
    """
    g, _ratio = norm_minimizing_frame(Q)
    with precision(prec):
        moved = Q.transform([[mpmath.mpc(complex(x)) for x in row] for row in g])
        c = np.array([complex(x) for x in moved.coeffs])
    target = c / np.linalg.norm(_BOMBIERI * c)
    problem = _FitProblem(target)
    best = None
    residuals = []
    for k in range(seeds):
        rng = np.random.default_rng([seed, k])
        start = rng.normal(size=(5, 3)) + 1j * rng.normal(size=(5, 3))
        start /= np.linalg.norm(start, axis=1)[:, None]
        res, lines, lam = _lm(problem, start)
        residuals.append(float(res))
        if best is None or res < best[0]:
            best = (float(res), k, lines, lam)
        if stop_at_success and res < threshold:
            break
    res, k, lines, lam = best
    # Q(y) = s * moved(g^-1 y): lines pick up g^-1 on the right, s goes into the weights
    lines = lines @ np.linalg.inv(g)
    with precision(prec):
        to_mp = lambda v: mpmath.mpc(complex(v))  # noqa: E731
        pent = Pentalateral(tuple(tuple(to_mp(x) for x in l) for l in lines), tuple(to_mp(w) for w in lam))
        built = pent.quartic().coeffs
        qc = [numeric(x) for x in Q.coeffs]
        scale = sum(mpmath.conj(b) * q for b, q in zip(built, qc)) / sum(abs(b) ** 2 for b in built)
        pent = Pentalateral(pent.lines, tuple(w * scale for w in pent.weights))
    return FitResult(res < threshold, res, pent, k, len(residuals), tuple(residuals))
