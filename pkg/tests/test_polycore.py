import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from luroth.errors import NotSkewError, VariableMismatch
from luroth.polycore.elimination import common_zero_test, smoothness_certificate
from luroth.polycore.matrix import (
    PolyMatrix,
    bareiss_det,
    block_skew,
    det,
    det_laplace,
    mp_det,
    mp_lu_solve,
    nullspace_exact,
    pfaffian,
    pfaffian_expansion,
    rank_exact,
)
from luroth.polycore.poly import MultiPoly, monomials, ring
from luroth.polycore.resultant import resultant
from luroth.polycore.roots import binary_roots, roots_numeric
from luroth.polycore.scalar import from_str, precision, projective_distance, projectively_equal, to_str

Z = ("z0", "z1", "z2", "z3", "z4", "z5")


def sum_of_cubes():
    zs = ring(*Z)
    out = MultiPoly(Z)
    for z in zs:
        out = out + z**3
    return out


def test_derivative_of_sum_of_cubes():
    F = sum_of_cubes()
    assert F.diff("z0").evaluate((1, 0, 0, 0, 0, 0)) == 3


def test_telescoping_linear_sum():
    zs = ring(*Z)
    L = sum(zs[1:], zs[0])
    assert L.evaluate((1, -1, 2, -2, 3, -3)) == 0


def test_cubic_is_homogeneous_of_degree_three():
    F = sum_of_cubes()
    assert F.is_homogeneous() and F.homogeneous_degree() == 3


def test_mismatched_variables_are_rejected():
    with pytest.raises(VariableMismatch):
        MultiPoly.var("w", ("x", "y"))


def test_monomial_count():
    assert len(monomials(3, 4)) == 15
    assert len(monomials(4, 3)) == 20


small = st.integers(min_value=-5, max_value=5)


def poly_strategy(names=("x", "y")):
    exps = st.tuples(*(st.integers(0, 3) for _ in names))
    return st.dictionaries(exps, small, max_size=6).map(lambda d: MultiPoly(names, d))


@settings(max_examples=40, deadline=None)
@given(poly_strategy(), poly_strategy(), poly_strategy())
def test_ring_axioms(p, q, r):
    assert (p + q).terms == (q + p).terms
    assert (p * q).terms == (q * p).terms
    assert (p * (q + r)).terms == (p * q + p * r).terms


@settings(max_examples=40, deadline=None)
@given(poly_strategy(), poly_strategy(), st.tuples(small, small))
def test_evaluation_is_a_ring_map(p, q, pt):
    assert (p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt)
    assert (p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt)


@settings(max_examples=40, deadline=None)
@given(poly_strategy(), poly_strategy())
def test_leibniz_rule(p, q):
    assert (p * q).diff("x").terms == (p.diff("x") * q + p * q.diff("x")).terms


def test_resultant_by_substitution():
    t, x = ring("t", "x")
    r = resultant(t**2 - x, t - 1, "t")
    assert r.variables == ("x",)
    assert r.terms == {(1,): -1, (0,): 1}


def test_resultant_with_common_root_vanishes():
    t, x = ring("t", "x")
    assert resultant(t**2, t**2, "t").is_zero()


@pytest.mark.parametrize("trial", range(5))
def test_resultant_matches_root_product(trial):
    rng = random.Random(trial)
    (t,) = ring("t")
    f = sum((t**k * rng.randint(-6, 6) for k in range(3)), t**3 * rng.randint(1, 4))
    g = sum((t**k * rng.randint(-6, 6) for k in range(2)), t**2 * rng.randint(1, 4))
    r = resultant(f, g, "t")
    value = r.evaluate(()) if r.variables else r.coefficient(())
    with precision(128):
        a = [x.value for x in roots_numeric(f) for _ in range(x.multiplicity)]
        b = [x.value for x in roots_numeric(g) for _ in range(x.multiplicity)]
        lf, lg = f.coefficient((3,)), g.coefficient((2,))
        oracle = lf**2 * lg**3
        for ai in a:
            for bj in b:
                oracle *= ai - bj
        assert abs(oracle - value) <= 1e-25 * max(1, abs(value))


def test_identity_determinant():
    assert PolyMatrix.identity(4).det() == 1


def test_pfaffian_of_equal_blocks_vanishes():
    rng = random.Random(2)
    q = [[0] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            q[i][j] = q[j][i] = Fraction(rng.randint(-5, 5))
    assert pfaffian(block_skew(q, q, q)) == 0


def _random_skew(rng, n):
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            v = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            m[i][j], m[j][i] = v, -v
    return m


@pytest.mark.parametrize("trial", range(3))
def test_pfaffian_squared_is_determinant(trial):
    m = _random_skew(random.Random(trial), 12)
    oracle = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in m]).det()
    pf = pfaffian(m)
    assert Fraction(int(sympy.numer(oracle)), int(sympy.denom(oracle))) == pf**2


def test_pfaffian_elimination_matches_expansion():
    m = _random_skew(random.Random(11), 6)
    assert pfaffian(m) == pfaffian_expansion(m)


def test_pfaffian_rejects_non_skew():
    with pytest.raises(NotSkewError):
        pfaffian([[1, 0], [0, 1]])


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(st.lists(small, min_size=3, max_size=3), min_size=3, max_size=3))
def test_determinant_is_multiplicative(a, b):
    ab = [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert bareiss_det(ab) == bareiss_det(a) * bareiss_det(b)
    assert det_laplace(a) == bareiss_det(a)


def test_rank_and_nullspace():
    rows = [[1, 2, 3], [2, 4, 6], [1, 0, 1]]
    assert rank_exact(rows) == 2
    (v,) = nullspace_exact(rows)
    assert all(sum(r[j] * v[j] for j in range(3)) == 0 for r in rows)


def test_mpmath_zero_column_is_singular():
    a = mpmath.matrix([[1, 0, 2], [3, 0, 4], [5, 0, 6]])
    assert mp_det(a) == 0
    with pytest.raises(ZeroDivisionError):
        mp_lu_solve(a, mpmath.matrix([1, 2, 3]))
    assert det([[mpmath.mpf(1), 0], [mpmath.mpf(2), 0]]) == 0


def test_square_root_of_two():
    roots = sorted(roots_numeric([-2, 0, 1]), key=lambda r: mpmath.re(r.value))
    assert [r.multiplicity for r in roots] == [1, 1]
    assert abs(roots[1].value - mpmath.sqrt(2)) < 1e-12
    assert abs(roots[0].value + mpmath.sqrt(2)) < 1e-12


def test_double_root_is_clustered():
    # (t - 1)^2 (t + 3) = t^3 + t^2 - 5 t + 3
    roots = {round(float(mpmath.re(r.value))): r.multiplicity for r in roots_numeric([3, -5, 1, 1])}
    assert roots == {1: 2, -3: 1}


def test_exact_double_root_with_stalling_iteration():
    ((value, mult),) = [(r.value, r.multiplicity) for r in roots_numeric([1, -4, 4])]  # (2t - 1)^2
    assert mult == 2 and abs(value - 0.5) < 1e-15


def test_binary_roots_include_infinity():
    roots = binary_roots([0, 1, 0])  # the form t0 t1
    pts = sorted((abs(complex(r.value[0])) > 0.5, r.multiplicity) for r in roots)
    assert pts == [(False, 1), (True, 1)]


def test_smoothness_certificate():
    x, y, z = ring("x", "y", "z")
    assert smoothness_certificate(x**3 + y**3 + z**3).no_common_zero
    assert not smoothness_certificate(x**3 + y**3 + x * y * z).no_common_zero
    assert not common_zero_test([x, y, x + y]).no_common_zero
    assert common_zero_test([x, y, z]).no_common_zero


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-50, max_value=50, max_denominator=20), min_size=3, max_size=6),
       st.fractions(min_value=1, max_value=9, max_denominator=5))
def test_projective_comparison_ignores_scale(xs, s):
    if all(x == 0 for x in xs):
        return
    ys = [s * x for x in xs]
    assert projectively_equal(xs, ys)
    assert projective_distance(xs, ys) < 1e-12


def test_scalar_round_trip():
    assert from_str(to_str(Fraction(-7, 3))) == Fraction(-7, 3)
    with precision(128):
        z = mpmath.mpc("1.25", "-3.5")
        assert abs(from_str(to_str(z)) - z) < 1e-30
