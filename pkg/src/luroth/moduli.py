"""Divisor classes on the moduli space of stable genus-3 curves, in the basis
(lambda, delta0, delta1) of the rational Picard group."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from luroth.polycore.scalar import exact

BASIS = ("lambda", "delta0", "delta1")


@dataclass(frozen=True)
class DivClass:
    """a*lambda + b*delta0 + c*delta1 with exact rational coordinates."""

    coords: Tuple[Fraction, Fraction, Fraction]

    def __post_init__(self):
        c = tuple(exact(x) for x in self.coords)
        if len(c) != 3:
            raise ValueError("a divisor class has three coordinates")
        object.__setattr__(self, "coords", c)

    @classmethod
    def of(cls, lam, d0, d1) -> "DivClass":
        return cls((lam, d0, d1))

    @classmethod
    def zero(cls) -> "DivClass":
        return cls((0, 0, 0))

    def __add__(self, other: "DivClass") -> "DivClass":
        return DivClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivClass") -> "DivClass":
        return DivClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "DivClass":
        return DivClass(tuple(-a for a in self.coords))

    def __mul__(self, k) -> "DivClass":
        k = exact(k)
        return DivClass(tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def ratio(self, other: "DivClass"):
        """The rational k with self = k * other, or None if not proportional."""
        pivot = next((i for i, b in enumerate(other.coords) if b != 0), None)
        if pivot is None:
            return None
        k = self.coords[pivot] / other.coords[pivot]
        return k if self == other * k else None

    def __str__(self):
        terms = []
        for c, name in zip(self.coords, BASIS):
            if c:
                terms.append(f"{c}*{name}")
        return " + ".join(terms).replace("+ -", "- ") or "0"

    def to_json(self):
        return {name: str(c) for name, c in zip(BASIS, self.coords)}


LAMBDA = DivClass.of(1, 0, 0)
DELTA0 = DivClass.of(0, 1, 0)
DELTA1 = DivClass.of(0, 0, 1)

# the class common to the discriminant, the Luroth and the catalecticant divisors
PRIMITIVE = DivClass.of(28, -3, -8)


def named_classes() -> Dict[str, DivClass]:
    """Hyperplane class on the quartic side, discriminant, Luroth and catalecticant divisors."""
    return {
        "h_bar": 9 * LAMBDA - DELTA0 - 3 * DELTA1,
        "D": 9 * PRIMITIVE,
        "L": 18 * PRIMITIVE,
        "Cat": 2 * PRIMITIVE,
    }


@dataclass(frozen=True)
class Derivation:
    result: DivClass
    steps: Tuple[Tuple[str, DivClass], ...]
    checks: Tuple[Tuple[str, bool], ...]

    @property
    def ok(self) -> bool:
        return all(passed for _, passed in self.checks)

    def to_json(self):
        return {
            "result": self.result.to_json(),
            "steps": [{"step": s, "class": c.to_json()} for s, c in self.steps],
            "checks": [{"check": s, "passed": p} for s, p in self.checks],
        }


# vanishing order of the discriminant on double conics and on cuspidal
# quartics, and the base-change degree stable reduction needs at each
DOUBLE_CONIC_MULTIPLICITY = 14
CUSPIDAL_MULTIPLICITY = 2
DOUBLE_CONIC_BASE_CHANGE = 2
CUSPIDAL_BASE_CHANGE = 6
DISCRIMINANT_DEGREE = 27
LUROTH_DEGREE = 54


def discriminant_pipeline() -> Derivation:
    """Rebuild [D] from the pulled-back hyperplane class and the boundary
    corrections, and [L] from [D] by the degree ratio with no boundary
    correction, checking both against named_classes()."""
    named = named_classes()
    h = named["h_bar"]
    steps: List[Tuple[str, DivClass]] = [("h_bar", h)]
    pulled = DOUBLE_CONIC_BASE_CHANGE * DOUBLE_CONIC_MULTIPLICITY * h
    steps.append(("2*14*h_bar", pulled))
    d1 = CUSPIDAL_BASE_CHANGE * CUSPIDAL_MULTIPLICITY * DELTA1
    steps.append(("6*2*delta1", d1))
    D = pulled + d1 + DELTA0
    steps.append(("D = 2*14*h_bar + 12*delta1 + delta0", D))
    ratio = Fraction(LUROTH_DEGREE, DISCRIMINANT_DEGREE)
    correction = DivClass.zero()  # boundary correction a*delta0 + b*delta1 with a = b = 0
    L = ratio * D + correction
    steps.append(("L = 2*D", L))
    checks = (
        ("D matches named class", D == named["D"]),
        ("L matches named class", L == named["L"]),
        ("D = 9 * (28, -3, -8)", D.ratio(PRIMITIVE) == 9),
        ("L = 18 * (28, -3, -8)", L.ratio(PRIMITIVE) == 18),
        ("Cat = 2 * (28, -3, -8)", named["Cat"].ratio(PRIMITIVE) == 2),
    )
    return Derivation(D, tuple(steps), checks)
