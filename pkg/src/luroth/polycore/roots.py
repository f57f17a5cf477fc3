"""Numeric roots of univariate polynomials and binary forms, with multiplicities."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence

import mpmath
from mpmath import mp

from luroth.errors import NoConvergence
from luroth.polycore.poly import MultiPoly, univariate_coeffs
from luroth.polycore.scalar import DEFAULT_PREC, numeric, projective_distance


@dataclass(frozen=True)
class Root:
    value: object
    multiplicity: int
    residual: float


def cluster_radius(prec: int) -> float:
    """Roots closer than this (relative) are counted as one multiple root."""
    return 10.0 ** (-prec * 0.15)


def _strip(coeffs: Sequence) -> list:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return c


def _raw_roots(coeffs_low_high: Sequence, work: int):
    high_low = [numeric(x) for x in reversed(coeffs_low_high)]
    lead = high_low[0]
    high_low = [x / lead for x in high_low]
    steps = max(200, 20 * len(high_low))
    for attempt in (steps, 10 * steps):
        try:
            roots, err = mpmath.polyroots(high_low, maxsteps=attempt, extraprec=work, error=True)
            return [mpmath.mpc(r) for r in roots], err
        except mpmath.libmp.libhyper.NoConvergence:
            continue
    # Durand-Kerner stalls on exact multiple roots; companion eigenvalues
    # still give them to about half the working precision
    n = len(high_low) - 1
    comp = mpmath.matrix(n, n)
    for j in range(n):
        comp[0, j] = -high_low[j + 1]
    for i in range(1, n):
        comp[i, i - 1] = 1
    try:
        roots = mpmath.eig(comp, left=False, right=False)
    except (ZeroDivisionError, ValueError) as exc:
        raise NoConvergence(f"root finder did not converge: {exc}") from None
    return [mpmath.mpc(r) for r in roots], None


def _cluster(points, close):
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if close(points[i], points[j]):
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [[points[i] for i in idx] for idx in sorted(groups.values(), key=lambda g: g[0])]


def roots_numeric(f, prec: int = DEFAULT_PREC, radius: float | None = None) -> List[Root]:
    """All complex roots of a nonzero univariate polynomial.

    ``f`` is a :class:`MultiPoly` in one variable or a low-to-high coefficient
    list.  Roots are computed at roughly twice ``prec`` bits so that double
    roots are still resolved to about ``prec`` bits, then grouped into clusters
    of relative radius ``10^(-0.15 prec)``.  Multiplicities sum to the degree.
    """
    coeffs = univariate_coeffs(f) if isinstance(f, MultiPoly) else list(f)
    coeffs = _strip(coeffs)
    if not coeffs:
        raise ValueError("zero polynomial has no finite root set")
    degree = len(coeffs) - 1
    if degree == 0:
        return []
    rad = cluster_radius(prec) if radius is None else radius
    work = 2 * prec + 32
    with mp.workprec(work):
        raw, _ = _raw_roots(coeffs, work)
        groups = _cluster(raw, lambda a, b: abs(a - b) <= rad * max(1, abs(a)))
        cnorm = max(abs(numeric(c)) for c in coeffs)
        out = []
        for g in groups:
            centre = sum(g) / len(g)
            val = sum(numeric(c) * centre**k for k, c in enumerate(coeffs))
            scale = cnorm * max(1, abs(centre)) ** degree
            out.append((centre, len(g), float(abs(val) / scale)))
    with mp.workprec(prec):
        return [Root(+v, m, r) for v, m, r in out]


def binary_roots(coeffs: Sequence, prec: int = DEFAULT_PREC, radius: float | None = None) -> List[Root]:
    """Projective roots (t0, t1) of the binary form sum_k c_k t0^(d-k) t1^k.

    A unitary change of coordinates keeps every root finite in the working
    chart, so roots at or near (0:1) lose no accuracy.
    """
    coeffs = list(coeffs)
    if all(c == 0 for c in coeffs):
        raise ValueError("zero binary form")
    d = len(coeffs) - 1
    rad = cluster_radius(prec) if radius is None else radius
    work = 2 * prec + 32
    with mp.workprec(work):
        c = [numeric(x) for x in coeffs]

        def value(t0, t1):
            return sum(ck * t0 ** (d - k) * t1**k for k, ck in enumerate(c))

        angles = [mpmath.pi * j / 7 + mpmath.mpf(1) / 10 for j in range(7)]
        theta = max(angles, key=lambda a: abs(value(mpmath.cos(a), mpmath.sin(a))))
        co, si = mpmath.cos(theta), mpmath.sin(theta)
        # t = M s with M = [[co, -si], [si, co]]; dehomogenize s1 = 1.
        s0, s1 = MultiPoly.var("s0", ("s0", "s1")), MultiPoly.var("s1", ("s0", "s1"))
        t0 = s0 * co - s1 * si
        t1 = s0 * si + s1 * co
        form = MultiPoly(("t0", "t1"), {(d - k, k): ck for k, ck in enumerate(c)})
        g = form.compose([t0, t1])
        low_high = [g.coefficient((k, d - k)) for k in range(d + 1)]
        raw, _ = _raw_roots(low_high, work) if d > 0 else ([], 0)
        pts = [(co * x - si, si * x + co) for x in raw]
        groups = _cluster(pts, lambda a, b: projective_distance(a, b) <= rad)
        cnorm = max(abs(x) for x in c)
        out = []
        for grp in groups:
            ref = grp[0]
            aligned = []
            for p in grp:
                k = 0 if abs(ref[0]) >= abs(ref[1]) else 1
                aligned.append((p[0] * ref[k] / p[k], p[1] * ref[k] / p[k]))
            centre = (sum(p[0] for p in aligned) / len(aligned), sum(p[1] for p in aligned) / len(aligned))
            nrm = mpmath.sqrt(abs(centre[0]) ** 2 + abs(centre[1]) ** 2)
            centre = (centre[0] / nrm, centre[1] / nrm)
            out.append((centre, len(grp), float(abs(value(*centre)) / cnorm)))
    with mp.workprec(prec):
        return [Root((+v[0], +v[1]), m, r) for v, m, r in out]
