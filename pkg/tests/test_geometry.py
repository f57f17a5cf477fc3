import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from luroth.errors import DegenerateInput
from luroth.geometry import (
    LineP3,
    PlaneP3,
    PointP3,
    hex_chart,
    incidence,
    line_meet_line,
    lines_meet,
    plane_meet_line,
    plane_meet_plane,
    plucker_pairing,
    point_on_line,
    point_on_plane,
    span_plane,
)
from luroth.polycore.matrix import bareiss_det
from luroth.surface import new_surface


def P(*c):
    return PointP3(tuple(Fraction(x) for x in c))


def test_line_contained_in_coordinate_plane():
    plane = PlaneP3((1, 0, 0, 0))
    line = LineP3(P(0, 1, 0, 0), P(0, 0, 1, 0))
    assert incidence(plane, line).relation == "contained"


def test_coplanar_lines_meet_at_common_point():
    a = LineP3(P(1, 0, 0, 0), P(0, 1, 0, 0))
    b = LineP3(P(1, 0, 0, 0), P(0, 1, 1, 0))
    inc = incidence(a, b)
    assert inc.relation == "meets"
    assert inc.point.same_as(P(1, 0, 0, 0))


def test_skew_lines():
    a = LineP3(P(1, 0, 0, 0), P(0, 1, 0, 0))
    b = LineP3(P(0, 0, 1, 0), P(0, 0, 0, 1))
    assert incidence(a, b).relation == "skew"
    with pytest.raises(DegenerateInput):
        line_meet_line(a, b)


def test_degenerate_objects_are_rejected():
    with pytest.raises(DegenerateInput):
        P(0, 0, 0, 0)
    with pytest.raises(DegenerateInput):
        LineP3(P(1, 2, 3, 4), P(2, 4, 6, 8))
    with pytest.raises(DegenerateInput):
        span_plane(P(1, 0, 0, 0), P(0, 1, 0, 0), P(1, 1, 0, 0))


def test_chart_kernel_is_exact():
    chart = hex_chart((0, 1, 2, 3, 4, 5))
    assert all(r == (0, 0) for r in chart.residual())


def test_constant_beta_is_rejected():
    with pytest.raises(DegenerateInput):
        hex_chart((2, 2, 2, 2, 2, 2))


def test_chart_cubic_agrees_with_hexahedral_cubic():
    S = new_surface((0, 1, 3, 7, 15, 31))
    rng = random.Random(5)
    for _ in range(50):
        x = tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 6)) for _ in range(4))
        z = S.chart.to_hex(x)
        assert sum(z) == 0 and sum(b * c for b, c in zip(S.beta, z)) == 0
        assert S.cubic.evaluate(x) == sum(c**3 for c in z)
        assert S.chart.from_hex(z).same_as(PointP3(x))


vec = st.tuples(*(st.integers(-6, 6) for _ in range(4))).filter(any).map(lambda t: P(*t))


@settings(max_examples=60, deadline=None)
@given(vec, vec, vec, vec)
def test_plucker_incidence_matches_coplanarity(a, b, c, d):
    try:
        l1, l2 = LineP3(a, b), LineP3(c, d)
    except DegenerateInput:
        return
    # the pairing vanishes iff the four points are coplanar
    coplanar = bareiss_det([list(p.coords) for p in (a, b, c, d)]) == 0
    assert (plucker_pairing(l1.plucker, l2.plucker) == 0) == coplanar
    assert lines_meet(l1, l2) == coplanar
    # Plücker coordinates satisfy the Klein quadric relation
    assert plucker_pairing(l1.plucker, l1.plucker) == 0


@settings(max_examples=60, deadline=None)
@given(vec, vec, vec)
def test_plane_meet_line_lies_on_both(a, b, c):
    plane = PlaneP3(a.coords)
    try:
        line = LineP3(b, c)
        pt = plane_meet_line(plane, line)
    except DegenerateInput:
        return
    assert point_on_plane(pt, plane) and point_on_line(pt, line)


def test_plane_meet_plane():
    line = plane_meet_plane(PlaneP3((1, 0, 0, 0)), PlaneP3((0, 1, 0, 0)))
    assert point_on_line(P(0, 0, 1, 0), line) and point_on_line(P(0, 0, 0, 1), line)


@settings(max_examples=30, deadline=None)
@given(vec, st.fractions(min_value=-7, max_value=7, max_denominator=4).filter(bool))
def test_points_are_projective(a, s):
    assert a.same_as(PointP3(tuple(s * x for x in a.coords)))


def test_json_round_trip():
    line = LineP3(P(1, 2, 0, -1), P(0, Fraction(1, 3), 5, 2))
    back = LineP3.from_json(line.to_json())
    assert back.same_as(line) and back.exact
