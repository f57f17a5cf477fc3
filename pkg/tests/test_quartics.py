import itertools
import random
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from luroth.errors import DegenerateInput
from luroth.polycore.poly import ring
from luroth.polycore.scalar import projective_distance
from luroth.projection import branch_quartic
from luroth.quartics import (
    QUARTIC_MONOMIALS,
    QVARS,
    Pentalateral,
    TernaryQuartic,
    determinant_identity,
    fermat_quartic,
    matrix_rank_at,
    nodal_class,
    norm_minimizing_frame,
    pentalateral_build,
    pentalateral_fit,
    pentalateral_matrix,
    singular_points,
)
from luroth.special_points import involutory_points, non_involutory_points

x, y, z = ring(*QVARS)


def cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def rational_lines(rng, count=5):
    while True:
        lines = [tuple(Fraction(rng.randint(-9, 9)) for _ in range(3)) for _ in range(count)]
        if all(any(cross(a, b)) for a, b in itertools.combinations(lines, 2)):
            return lines


def rational_weights(rng):
    return [Fraction(rng.choice([k for k in range(-9, 10) if k]), rng.randint(1, 5)) for _ in range(5)]


CONCURRENCE = (1, 2, 3)


def concurrent_lines():
    e = CONCURRENCE
    conc = [cross(e, v) for v in ((1, 0, 0), (0, 1, -1), (2, -1, 1))]
    return [tuple(Fraction(c) for c in l) for l in conc + [(1, 1, 1), (3, -2, 5)]]


def test_monomial_order():
    assert len(QUARTIC_MONOMIALS) == 15
    assert QUARTIC_MONOMIALS[0] == (4, 0, 0) and QUARTIC_MONOMIALS[-1] == (0, 0, 4)


def test_fermat_quartic_is_smooth():
    assert singular_points(fermat_quartic()) == []


def test_double_lines_are_worse():
    (s,) = singular_points(TernaryQuartic.from_poly(x**2 * y**2))
    assert s.kind == "worse" and not s.isolated


def test_known_node_and_cusp():
    # sympy finds (0 : 0 : 1) as the only common zero of the partials of both
    X, Y, Z = sympy.symbols("x y z")
    for poly, f, kind in [
        (x * y * z**2 + x**4 + y**4, X * Y * Z**2 + X**4 + Y**4, "node"),
        (y**2 * z**2 + x**3 * z + x**4 + y**4 + z * y**3, Y**2 * Z**2 + X**3 * Z + X**4 + Y**4 + Z * Y**3, "cusp"),
    ]:
        grads = [sympy.diff(f, v) for v in (X, Y, Z)]
        assert sympy.solve([g.subs(Z, 1) for g in grads], [X, Y], dict=True) == [{X: 0, Y: 0}]
        assert sympy.solve([g.subs({Z: 0, Y: 1}) for g in grads], [X], dict=True) == []
        (s,) = singular_points(TernaryQuartic.from_poly(poly))
        assert s.kind == kind
        assert projective_distance(s.point, (0, 0, 1)) < 1e-20


def test_pentalateral_vanishes_at_the_vertices():
    rng = random.Random(3)
    lines = rational_lines(rng)
    pent = Pentalateral(tuple(lines), (1,) * 5)
    Q = pent.quartic()
    assert pent.is_strict()
    assert all(Q(v) == 0 for v in pent.vertices())


def test_pentalateral_is_symmetric_under_relabelling():
    rng = random.Random(4)
    lines, weights = rational_lines(rng), rational_weights(rng)
    base = pentalateral_build(lines, weights)
    for perm in [(1, 0, 2, 3, 4), (4, 3, 2, 1, 0), (2, 4, 1, 0, 3)]:
        assert pentalateral_build([lines[i] for i in perm], [weights[i] for i in perm]) == base


def test_pentalateral_guards():
    lines = concurrent_lines()
    with pytest.raises(DegenerateInput):
        pentalateral_build(lines, [0] * 5)
    with pytest.raises(DegenerateInput):
        pentalateral_build([lines[0], lines[0]] + lines[2:], [1] * 5)


@pytest.mark.parametrize("trial", range(4))
def test_determinant_identity(trial):
    rng = random.Random(100 + trial)
    assert determinant_identity(rational_lines(rng), rational_weights(rng))


def test_matrix_has_rank_two_at_the_concurrence_point():
    rows = pentalateral_matrix(concurrent_lines(), rational_weights(random.Random(8)))
    assert matrix_rank_at(rows, CONCURRENCE) == 2
    assert matrix_rank_at(rows, (1, 0, 0)) == 4


@pytest.mark.parametrize("weights", [(1, 2, -3, Fraction(5, 2), Fraction(1, 3)), (1,) * 5])
def test_concurrent_pentalateral_is_l2(weights):
    Q = pentalateral_build(concurrent_lines(), [Fraction(w) for w in weights])
    assert Q(CONCURRENCE) == 0
    sing = singular_points(Q)
    assert [s.kind for s in sing] == ["node"]
    assert projective_distance(sing[0].point, CONCURRENCE) < 1e-20
    assert nodal_class(Q, singular=sing).kind == "L2"


def test_nodal_class_requires_one_node():
    with pytest.raises(DegenerateInput):
        nodal_class(fermat_quartic())


@pytest.fixture(scope="module")
def special_branch_quartics(generic_surface):
    S = generic_surface
    inv = involutory_points(S)[(4, sorted(k for k in involutory_points(S) if k[0] == 4)[0][1])]
    (non, *_) = non_involutory_points(S, 4)
    return {
        "involutory": branch_quartic(S.cubic, inv, check_smooth=False).quartic,
        "non_involutory": branch_quartic(S.cubic, non.point, check_smooth=False).quartic,
    }


def test_nodal_class_of_special_points(special_branch_quartics):
    assert nodal_class(special_branch_quartics["involutory"]).kind == "L1"
    assert nodal_class(special_branch_quartics["non_involutory"]).kind == "L2"


def test_nodal_class_is_coordinate_free(special_branch_quartics):
    g = [[2, 1, 0], [Fraction(1, 3), -1, 4], [0, 5, 1]]
    for Q in special_branch_quartics.values():
        a, b = nodal_class(Q), nodal_class(Q.transform(g))
        assert a.kind == b.kind
        if a.kind == "L1":
            # the frame is a double-precision optimum, good to a few parts in 1e6
            assert abs(a.conic_det / b.conic_det - 1) < 1e-4


def test_norm_minimizing_frame():
    rng = random.Random(12)
    Q = pentalateral_build(rational_lines(rng), rational_weights(rng))
    g, ratio = norm_minimizing_frame(Q)
    assert abs(np.linalg.det(g) - 1) < 1e-10 and 0 < ratio <= 1 + 1e-12
    # the optimum of the Fermat quartic is the identity frame
    g, ratio = norm_minimizing_frame(fermat_quartic())
    assert np.allclose(g, np.eye(3), atol=1e-5) and abs(ratio - 1) < 1e-8


def test_fit_round_trip():
    rng = random.Random(21)
    Q = pentalateral_build(rational_lines(rng), rational_weights(rng))
    fit = pentalateral_fit(Q, seeds=30, seed=0)
    assert fit.success and fit.residual < 1e-10
    assert fit.pentalateral.quartic().distance(Q) < 1e-8


def test_fit_residual_is_coordinate_free():
    rng = random.Random(21)
    Q = pentalateral_build(rational_lines(rng), rational_weights(rng))
    Q = TernaryQuartic(tuple(c + Fraction(1, 50) * (k % 3) for k, c in enumerate(Q.coeffs)))
    g = [[1, 2, 0], [0, 1, -1], [3, 0, 1]]
    a = pentalateral_fit(Q, seeds=8, seed=0, stop_at_success=False)
    b = pentalateral_fit(Q.transform(g), seeds=8, seed=0, stop_at_success=False)
    assert abs(a.residual - b.residual) < 1e-3 * a.residual + 1e-10


def test_fermat_quartic_fit_fails_over_many_seeds():
    fit = pentalateral_fit(fermat_quartic(), seeds=200, seed=0)
    assert not fit.success and fit.starts == 200
    assert min(fit.residuals) > 1e-4


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(-20, 20), min_size=15, max_size=15).filter(any))
def test_quartic_json_round_trip(coeffs):
    Q = TernaryQuartic(tuple(Fraction(c, 3) for c in coeffs))
    assert TernaryQuartic.from_json(Q.to_json()) == Q
    assert TernaryQuartic.from_poly(Q.poly) == Q
