"""Sparse multivariate polynomials over exact or numeric scalars."""
from __future__ import annotations

from fractions import Fraction
from numbers import Number, Rational
from typing import Dict, Mapping, Sequence, Tuple

from luroth.errors import ArityMismatch, VariableMismatch
from luroth.polycore.scalar import is_zero, magnitude

Exps = Tuple[int, ...]


def _grlex_key(e: Exps):
    return (sum(e), e)


class MultiPoly:
    """Polynomial with an ordered tuple of variable names and a sparse term map.

    Zero coefficients are never stored.  Arithmetic between polynomials
    requires identical variable tuples; plain numbers are promoted to
    constants.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exps, object] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: Dict[Exps, object] = {}
        if terms:
            for e, c in terms.items():
                if len(e) != n:
                    raise ArityMismatch(f"exponent {e} has wrong length for {self.variables}")
                if c != 0:
                    clean[tuple(e)] = c
        self.terms = clean

    # construction -----------------------------------------------------
    @classmethod
    def var(cls, name: str, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        e = tuple(1 if v == name else 0 for v in variables)
        if sum(e) != 1:
            raise VariableMismatch(f"{name!r} not in {variables}")
        return cls(variables, {e: 1})

    @classmethod
    def const(cls, c, variables: Sequence[str]) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, monomials: Sequence[Exps], variables: Sequence[str]) -> "MultiPoly":
        return cls(variables, dict(zip((tuple(m) for m in monomials), coeffs)))

    # basic queries ----------------------------------------------------
    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self.terms

    def is_exact(self) -> bool:
        return all(isinstance(c, Rational) for c in self.terms.values())

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self._index(name)
        return max((e[i] for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def homogeneous_degree(self) -> int:
        degs = {sum(e) for e in self.terms}
        if len(degs) != 1:
            raise ValueError("polynomial is not homogeneous (or is zero)")
        return degs.pop()

    def coefficient(self, exps: Sequence[int]):
        return self.terms.get(tuple(exps), 0)

    def coeff_norm(self) -> float:
        return max((magnitude(c) for c in self.terms.values()), default=0.0)

    def sorted_terms(self):
        """Terms in decreasing graded-lex order."""
        return sorted(self.terms.items(), key=lambda t: _grlex_key(t[0]), reverse=True)

    def leading_term(self):
        return max(self.terms.items(), key=lambda t: _grlex_key(t[0]))

    def _index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise VariableMismatch(f"{name!r} not in {self.variables}") from None

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.variables != self.variables:
                raise VariableMismatch(f"{self.variables} vs {other.variables}")
            return other
        if isinstance(other, Number) or hasattr(other, "_mpf_") or hasattr(other, "_mpc_"):
            return MultiPoly.const(other, self.variables)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            if self._coerce(other) is NotImplemented:
                return NotImplemented
            return MultiPoly(self.variables, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        out: Dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.variables, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, MultiPoly):
            return self.exquo(c)
        if isinstance(c, int):
            c = Fraction(c)
        return MultiPoly(self.variables, {e: v / c for e, v in self.terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a non-negative integer")
        result = MultiPoly.const(1, self.variables)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if isinstance(other, Number):
            return self == MultiPoly.const(other, self.variables)
        return NotImplemented

    __hash__ = None

    # calculus and evaluation ------------------------------------------
    def diff(self, name: str) -> "MultiPoly":
        i = self._index(name)
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                out[tuple(f)] = c * e[i]
        return MultiPoly(self.variables, out)

    def gradient(self):
        return [self.diff(v) for v in self.variables]

    def __call__(self, *point):
        if len(point) == 1 and isinstance(point[0], (list, tuple)):
            point = point[0]
        return self.evaluate(point)

    def evaluate(self, point):
        """Evaluate at a sequence (one value per variable) or a name → value map."""
        if isinstance(point, Mapping):
            try:
                point = [point[v] for v in self.variables]
            except KeyError as exc:
                raise ArityMismatch(f"missing value for {exc.args[0]!r}") from None
        point = list(point)
        if len(point) != self.nvars:
            raise ArityMismatch(f"expected {self.nvars} values, got {len(point)}")
        powers = [{} for _ in point]
        total = 0
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    cache = powers[i]
                    if k not in cache:
                        cache[k] = point[i] ** k
                    term = term * cache[k]
            total = total + term
        return total

    def compose(self, values: Sequence["MultiPoly"], variables: Sequence[str] | None = None) -> "MultiPoly":
        """Substitute a polynomial (or scalar) for every variable.

        The result lives in ``variables``, defaulting to the ring of the first
        polynomial among ``values``.
        """
        if len(values) != self.nvars:
            raise ArityMismatch(f"expected {self.nvars} substitutions, got {len(values)}")
        if variables is None:
            for v in values:
                if isinstance(v, MultiPoly):
                    variables = v.variables
                    break
            else:
                raise ValueError("target variables required when substituting scalars")
        variables = tuple(variables)
        vals = [v if isinstance(v, MultiPoly) else MultiPoly.const(v, variables) for v in values]
        for v in vals:
            if v.variables != variables:
                raise VariableMismatch(f"{v.variables} vs {variables}")
        powers = [{0: MultiPoly.const(1, variables), 1: v} for v in vals]

        def power(i, k):
            cache = powers[i]
            if k not in cache:
                cache[k] = power(i, k - 1) * vals[i]
            return cache[k]

        out = MultiPoly(variables)
        for e, c in self.terms.items():
            term = MultiPoly.const(c, variables)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def subs(self, mapping: Mapping[str, object]) -> "MultiPoly":
        """Partial substitution; unmentioned variables are kept."""
        for k in mapping:
            self._index(k)
        values = []
        for name in self.variables:
            if name in mapping:
                v = mapping[name]
                values.append(v if isinstance(v, MultiPoly) else MultiPoly.const(v, self.variables))
            else:
                values.append(MultiPoly.var(name, self.variables))
        return self.compose(values, self.variables)

    def in_ring(self, variables: Sequence[str]) -> "MultiPoly":
        """Re-embed into another variable tuple containing every used variable."""
        variables = tuple(variables)
        pos = {v: i for i, v in enumerate(variables)}
        out = {}
        for e, c in self.terms.items():
            f = [0] * len(variables)
            for i, k in enumerate(e):
                if k:
                    if self.variables[i] not in pos:
                        raise VariableMismatch(f"{self.variables[i]!r} not in {variables}")
                    f[pos[self.variables[i]]] = k
            out[tuple(f)] = c
        return MultiPoly(variables, out)

    def coeffs_in(self, name: str):
        """Coefficients of powers of ``name`` (low to high), as polynomials in the
        remaining variables."""
        i = self._index(name)
        rest = self.variables[:i] + self.variables[i + 1:]
        deg = self.degree_in(name)
        out = [dict() for _ in range(deg + 1)]
        for e, c in self.terms.items():
            out[e[i]][e[:i] + e[i + 1:]] = c
        return [MultiPoly(rest, t) for t in out]

    def map_coeffs(self, f) -> "MultiPoly":
        return MultiPoly(self.variables, {e: f(c) for e, c in self.terms.items()})

    def exquo(self, divisor: "MultiPoly", tol: float | None = None) -> "MultiPoly":
        """Exact quotient ``self / divisor``; raises ``ArithmeticError`` if inexact.

        With numeric coefficients, remainder terms below ``tol`` times the
        coefficient scale are treated as rounding noise.
        """
        divisor = self._coerce(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        ld_e, ld_c = divisor.leading_term()
        scale = max(self.coeff_norm(), 1e-300)
        rem = MultiPoly(self.variables, self.terms)
        quot: Dict[Exps, object] = {}
        while not rem.is_zero():
            e, c = rem.leading_term()
            if tol is not None and not isinstance(c, Rational) and is_zero(c, scale, tol):
                del rem.terms[e]
                continue
            if any(a < b for a, b in zip(e, ld_e)):
                if tol is not None and all(is_zero(v, scale, tol) for v in rem.terms.values()):
                    break
                raise ArithmeticError("polynomial division is not exact")
            qe = tuple(a - b for a, b in zip(e, ld_e))
            qc = Fraction(c, ld_c) if isinstance(c, int) and isinstance(ld_c, int) else c / ld_c
            if isinstance(qc, Fraction) and qc.denominator == 1:
                qc = qc.numerator
            quot[qe] = qc
            rem = rem - MultiPoly(self.variables, {qe: qc}) * divisor
        return MultiPoly(self.variables, quot)

    # display ----------------------------------------------------------
    def __repr__(self):
        return f"MultiPoly({self.variables}, {self!s})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                (v if k == 1 else f"{v}^{k}") for v, k in zip(self.variables, e) if k
            )
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)


def ring(*names: str):
    """Variables of a polynomial ring, e.g. ``x, y, z = ring("x", "y", "z")``."""
    return tuple(MultiPoly.var(n, names) for n in names)


def monomials(nvars: int, degree: int) -> list[Exps]:
    """Exponent vectors of the given total degree in decreasing lex order."""
    if nvars == 1:
        return [(degree,)]
    out = []
    for k in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - k):
            out.append((k,) + rest)
    return out


def linear_form(coeffs: Sequence, variables: Sequence[str]) -> MultiPoly:
    n = len(variables)
    if len(coeffs) != n:
        raise ArityMismatch("coefficient count must match variable count")
    return MultiPoly(variables, {tuple(1 if j == i else 0 for j in range(n)): c for i, c in enumerate(coeffs)})


def univariate_coeffs(p: MultiPoly) -> list:
    """Coefficients (low to high) of a polynomial using at most one variable."""
    used = {i for e in p.terms for i, k in enumerate(e) if k}
    if len(used) > 1:
        raise ValueError("polynomial is not univariate")
    if p.is_zero():
        return []
    i = used.pop() if used else 0
    deg = max(e[i] for e in p.terms)
    out = [0] * (deg + 1)
    for e, c in p.terms.items():
        out[e[i]] = c
    return out


def binary_coeffs(p: MultiPoly, degree: int | None = None) -> list:
    """Coefficients ``c_k`` of ``t0^(d-k) t1^k`` for a binary form in two variables."""
    if p.nvars != 2:
        raise ArityMismatch("binary form needs exactly two variables")
    d = p.homogeneous_degree() if degree is None else degree
    out = [0] * (d + 1)
    for e, c in p.terms.items():
        if sum(e) != d:
            raise ValueError("not homogeneous of the stated degree")
        out[e[1]] = c
    return out


def symmetric_trilinear(f: MultiPoly):
    """Return ``T`` with T(a, b, c) the full polarization of a cubic form, so T(x,x,x) = f(x)."""
    if f.homogeneous_degree() != 3:
        raise ValueError("need a cubic form")
    n = f.nvars
    third = {}
    for i in range(n):
        fi = f.diff(f.variables[i])
        for j in range(i, n):
            fij = fi.diff(f.variables[j])
            for k in range(j, n):
                c = fij.diff(f.variables[k]).coefficient((0,) * n)
                if c != 0:
                    third[(i, j, k)] = c

    def T(a, b, c):
        total = 0
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    coef = third.get(tuple(sorted((i, j, k))))
                    if coef is not None:
                        total = total + coef * a[i] * b[j] * c[k]
        return Fraction(total, 6) if isinstance(total, int) else total / 6

    return T
