"""Scalars: exact rationals (``Fraction``/``int``) or mpmath complex numbers.

Numeric work happens inside :func:`precision`, which sets the mpmath working
precision for the duration of a computation.  Exactness is a property of the
value, so mixed expressions silently become numeric.
"""
from __future__ import annotations

import contextlib
import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import mpmath
from mpmath import mp

Scalar = Union[int, Fraction, mpmath.mpf, mpmath.mpc]

DEFAULT_PREC = 128
DEFAULT_TOL = 1e-8


@contextlib.contextmanager
def precision(bits: int = DEFAULT_PREC):
    """Run the enclosed block with ``bits`` of mpmath working precision."""
    if bits < 53:
        raise ValueError("precision must be at least 53 bits")
    with mp.workprec(bits):
        yield bits


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def all_exact(xs: Iterable) -> bool:
    return all(isinstance(x, Rational) for x in xs)


def exact(x) -> Fraction:
    """Coerce to ``Fraction``; numeric values are rejected."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def numeric(x) -> mpmath.mpc:
    if isinstance(x, Fraction):
        return mpmath.mpc(mpmath.mpf(x.numerator) / x.denominator)
    return mpmath.mpc(x)


def magnitude(x) -> float:
    """|x| as a float, for scaling tolerances."""
    if isinstance(x, Rational):
        return abs(float(x))
    return float(abs(x))


def norm(xs: Sequence) -> float:
    return max((magnitude(x) for x in xs), default=0.0)


def is_zero(x, scale: float = 1.0, tol: float = DEFAULT_TOL) -> bool:
    """Exact zero test for rationals, relative ``tol * scale`` test otherwise."""
    if isinstance(x, Rational):
        return x == 0
    return abs(x) <= tol * scale


def vec_is_zero(xs: Sequence, scale: float = 1.0, tol: float = DEFAULT_TOL) -> bool:
    return all(is_zero(x, scale, tol) for x in xs)


def normalize_projective(xs: Sequence, tol: float = 1e-12) -> tuple:
    """Scale so the first entry of non-negligible size equals 1.

    Exact vectors use the first nonzero entry; numeric vectors skip entries
    below ``tol`` times the vector norm so the choice is stable under noise.
    """
    if all_exact(xs):
        for x in xs:
            if x != 0:
                return tuple(Fraction(y) / x for y in xs)
        raise ValueError("zero vector is not a projective point")
    n = norm(xs)
    if n == 0:
        raise ValueError("zero vector is not a projective point")
    for x in xs:
        if magnitude(x) > tol * n:
            return tuple(numeric(y) / x for y in xs)
    raise AssertionError("unreachable")


def projective_distance(xs: Sequence, ys: Sequence) -> float:
    """Sine of the angle between two complex lines in C^n (0 when equal)."""
    if all_exact(xs) and all_exact(ys):
        na2, nb2 = sum(x * x for x in xs), sum(y * y for y in ys)
        if na2 == 0 or nb2 == 0:
            raise ValueError("zero vector")
        dot = sum(x * y for x, y in zip(xs, ys))
        return math.sqrt(max(0.0, float(1 - Fraction(dot * dot) / (na2 * nb2))))
    a = [numeric(x) for x in xs]
    b = [numeric(y) for y in ys]
    na = mpmath.sqrt(sum(abs(x) ** 2 for x in a))
    nb = mpmath.sqrt(sum(abs(y) ** 2 for y in b))
    if na == 0 or nb == 0:
        raise ValueError("zero vector")
    # |component of a orthogonal to b| / |a|; avoids the cancellation in sqrt(1 - cos^2)
    proj = sum(x * mpmath.conj(y) for x, y in zip(a, b)) / nb**2
    perp = mpmath.sqrt(sum(abs(x - proj * y) ** 2 for x, y in zip(a, b)))
    return float(min(mpmath.mpf(1), perp / na))


def projectively_equal(xs: Sequence, ys: Sequence, tol: float = DEFAULT_TOL) -> bool:
    """Equality in projective space; exact cross-multiplication when possible."""
    if len(xs) != len(ys):
        raise ValueError("dimension mismatch")
    if all_exact(xs) and all_exact(ys):
        n = len(xs)
        if all(x == 0 for x in xs) or all(y == 0 for y in ys):
            raise ValueError("zero vector")
        return all(xs[i] * ys[j] == xs[j] * ys[i] for i in range(n) for j in range(i + 1, n))
    return projective_distance(xs, ys) <= tol


def to_str(x) -> str:
    """Serialize a scalar: fraction string for exact, decimal otherwise."""
    if isinstance(x, Rational):
        return str(Fraction(x))
    z = mpmath.mpc(x)
    digits = max(15, int(mp.prec * 0.30103))
    re_part = mpmath.nstr(z.real, digits)
    if z.imag == 0:
        return re_part
    sign = "-" if z.imag < 0 else "+"
    return f"{re_part}{sign}{mpmath.nstr(abs(z.imag), digits)}j"


def from_str(s: str):
    s = s.strip()
    try:
        return Fraction(s)
    except ValueError:
        return mpmath.mpc(mpmath.mpmathify(s.replace(" ", "")))
