import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from luroth.errors import DegenerateInput
from luroth.geometry import PointP3
from luroth.polycore.matrix import bareiss_det, block_skew, pfaffian, rank_exact
from luroth.polycore.poly import ring
from luroth.nets import (
    NetOfQuadrics,
    base_points,
    collision_net,
    delta_map,
    lambda_pfaffian,
    polar_net,
    polar_quadric,
    random_net,
    rank_two_net,
    salmon_trial,
)
from luroth.quartics import QVARS, singular_points
from luroth.verify import random_cubic


def diag(*d):
    return tuple(tuple(d[i] if i == j else 0 for j in range(4)) for i in range(4))


def test_diagonal_net_determinant():
    N = NetOfQuadrics(diag(1, 1, 0, 0), diag(0, 0, 1, 0), diag(0, 0, 0, 1))
    x, y, z = ring(*QVARS)
    assert delta_map(N).poly == x**2 * y * z


def test_dependent_quadrics_are_rejected():
    with pytest.raises(DegenerateInput):
        NetOfQuadrics(diag(1, 0, 0, 0), diag(0, 1, 0, 0), diag(1, 1, 0, 0))
    with pytest.raises(ValueError):
        NetOfQuadrics(((0, 1, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0), (0, 0, 0, 0)), diag(1, 0, 0, 0), diag(0, 1, 0, 0))


def test_pfaffian_vanishes_for_equal_quadrics():
    q = random_net(random.Random(1)).q0
    assert pfaffian(block_skew(q, q, q)) == 0


@pytest.mark.parametrize("trial", range(3))
def test_pfaffian_of_polar_nets(trial):
    rng = random.Random(trial)
    F = random_cubic(rng)
    pts = [[rng.randint(-4, 4) for _ in range(4)] for _ in range(3)]
    if rank_exact(pts) != 3:
        pytest.skip("dependent sample")
    N = polar_net(F, *pts)
    assert lambda_pfaffian(N) == 0
    bumped = NetOfQuadrics(N.q0, N.q1, tuple(tuple(c + (i == j == 0) for j, c in enumerate(r))
                                             for i, r in enumerate(N.q2)))
    assert lambda_pfaffian(bumped) != 0


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 10**6), st.fractions(min_value=-5, max_value=5, max_denominator=7).filter(bool))
def test_pfaffian_is_sextic(seed, s):
    N = random_net(random.Random(seed))
    scaled = NetOfQuadrics(*(tuple(tuple(s * c for c in r) for r in m) for m in N.matrices))
    assert lambda_pfaffian(scaled) == s**6 * lambda_pfaffian(N)


def test_determinant_transforms_with_the_square_of_det():
    N = random_net(random.Random(5))
    g = [[1, 2, 0, 0], [0, 1, 3, 0], [0, 0, 1, -1], [2, 0, 0, 1]]
    dg = bareiss_det(g)
    a, b = delta_map(N).coeffs, delta_map(N.transform(g)).coeffs
    assert all(q == dg**2 * p for p, q in zip(a, b))


def test_polar_quadric_of_a_cube():
    x0, x1, x2, x3 = ring("x0", "x1", "x2", "x3")
    q = polar_quadric(x0**3, (1, 0, 0, 0))
    assert rank_exact([list(r) for r in q]) == 1 and q[0][0] == 3


def test_diagonal_net_base_points():
    # x0^2 - x3^2, x1^2 - x3^2, x2^2 - x3^2 meet in the eight points (±1, ±1, ±1, 1)
    N = NetOfQuadrics(diag(1, 0, 0, -1), diag(0, 1, 0, -1), diag(0, 0, 1, -1))
    pts = base_points(N)
    assert len(pts) == 8 and all(b.multiplicity == 1 for b in pts)
    for sx in (1, -1):
        for sy in (1, -1):
            for sz in (1, -1):
                target = PointP3((sx, sy, sz, 1))
                assert sum(b.point.distance(target) < 1e-20 for b in pts) == 1


def test_generic_net_has_eight_distinct_base_points():
    pts = base_points(random_net(random.Random(9)))
    assert sum(b.multiplicity for b in pts) == 8 and len(pts) == 8


def test_collision_net_has_a_double_base_point():
    N, p = collision_net(random.Random(2))
    pts = base_points(N)
    assert sum(b.multiplicity for b in pts) == 8
    (double,) = [b for b in pts if b.multiplicity == 2]
    assert double.point.distance(PointP3(tuple(p))) < 1e-10
    assert singular_points(delta_map(N))


def test_rank_two_member_makes_the_quartic_singular():
    N = rank_two_net(random.Random(3))
    assert rank_exact([list(r) for r in N.q0]) == 2
    assert singular_points(delta_map(N))


@pytest.mark.parametrize("kind", ["collision", "rank2", "generic"])
def test_salmon_trials(kind):
    for index in range(2):
        trial = salmon_trial(kind, index, seed=7)
        assert trial.passed
        assert trial.to_json()["kind"] == kind


def test_unknown_trial_kind():
    with pytest.raises(ValueError):
        salmon_trial("nonsense", 0)


def test_net_json_round_trip():
    N = random_net(random.Random(4))
    N = NetOfQuadrics(N.q0, N.q1, tuple(tuple(Fraction(c, 3) for c in r) for r in N.q2))
    assert NetOfQuadrics.from_json(N.to_json()) == N
