"""Branch quartic of the double cover given by projecting a cubic surface from one of its points."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from luroth.errors import DegenerateInput
from luroth.geometry import PointP3
from luroth.polycore.elimination import EliminationCertificate, smoothness_certificate
from luroth.polycore.poly import MultiPoly
from luroth.polycore.scalar import DEFAULT_PREC, DEFAULT_TOL, all_exact, numeric, precision
from luroth.quartics import QVARS, TernaryQuartic


@dataclass(frozen=True)
class BranchResult:
    """F(p + t v) = t (C1(v) + t C2(v) + t^2 C3(v)) for v in the direction chart.

    The chart spans the coordinate directions other than ``dropped`` (the
    largest coordinate of the center); direction variables are x, y, z.
    """

    cubic: MultiPoly
    center: PointP3
    dropped: int
    c1: MultiPoly
    c2: MultiPoly
    c3: MultiPoly
    quartic: TernaryQuartic
    certificate: Optional[EliminationCertificate] = None

    @property
    def chart(self) -> tuple:
        """4x3 matrix whose columns are the chart directions."""
        cols = [k for k in range(4) if k != self.dropped]
        return tuple(tuple(int(i == c) for c in cols) for i in range(4))

    def chart_image(self, pt: PointP3) -> tuple:
        """Direction of the line from the center to ``pt``, in chart coordinates."""
        p = self.center.coords
        k = self.dropped
        r = pt.coords[k] / p[k]
        v = [a - r * b for a, b in zip(pt.coords, p)]
        return tuple(v[i] for i in range(4) if i != k)

    def to_json(self):
        return {
            "center": self.center.to_json(),
            "chart": [list(r) for r in self.chart],
            "quartic": self.quartic.to_json(),
        }


def branch_quartic(F: MultiPoly, p: PointP3, check_smooth: bool = True, tol: float = DEFAULT_TOL,
                   prec: int = DEFAULT_PREC) -> BranchResult:
    """Branch curve C2^2 - 4 C1 C3 of the projection of {F = 0} from p.

    Numeric input is processed at ``prec`` bits; exact input stays exact.
    """
    with precision(prec):
        return _branch_quartic(F, p, check_smooth, tol)


def _branch_quartic(F, p, check_smooth, tol):
    if F.nvars != 4 or not F.is_homogeneous() or F.homogeneous_degree() != 3:
        raise ValueError("need a quaternary cubic form")
    coords = p.coords
    fp = F.evaluate(coords)
    scale = F.coeff_norm() * max(abs(numeric(c)) for c in coords) ** 3
    if (fp != 0) if all_exact(coords) and F.is_exact() else abs(numeric(fp)) > tol * scale:
        raise DegenerateInput("center is not on the surface")
    cert = None
    if check_smooth:
        cert = smoothness_certificate(F)
        if not cert.no_common_zero:
            raise DegenerateInput("cubic surface is singular")
    k = max(range(4), key=lambda i: abs(numeric(coords[i])))
    names = ("t",) + QVARS
    t = MultiPoly.var("t", names)
    dirs = [MultiPoly.var(v, names) for v in QVARS]
    v = []
    it = iter(dirs)
    for i in range(4):
        v.append(MultiPoly(names) if i == k else next(it))
    G = F.compose([t * vi + c for vi, c in zip(v, coords)])
    parts = []
    for power in range(4):
        parts.append(MultiPoly(QVARS, {e[1:]: c for e, c in G.terms.items() if e[0] == power}))
    c0, c1, c2, c3 = parts
    if c1.is_zero() or (not c1.is_exact() and c1.coeff_norm() <= tol * scale):
        raise DegenerateInput("center is a singular point of the surface")
    B = c2 * c2 - c1 * c3 * 4
    return BranchResult(F, p, k, c1, c2, c3, TernaryQuartic.from_poly(B), cert)


def residual_identity(res: BranchResult) -> MultiPoly:
    """F(p + t v) - t (C1 + t C2 + t^2 C3); identically zero (exact inputs)."""
    names = ("t",) + QVARS
    t = MultiPoly.var("t", names)
    it = iter(MultiPoly.var(v, names) for v in QVARS)
    v = [MultiPoly(names) if i == res.dropped else next(it) for i in range(4)]
    G = res.cubic.compose([t * vi + c for vi, c in zip(v, res.center.coords)])
    lift = [c.in_ring(names) for c in (res.c1, res.c2, res.c3)]
    return G - (t * lift[0] + t * t * lift[1] + t * t * t * lift[2])


