from fractions import Fraction

import pytest

from luroth.errors import DegenerateInput, InvalidSurface
from luroth.geometry import LineP3, PointP3, point_on_line
from luroth.surface import (
    PARTITIONS,
    all_lines_27,
    check_double_six,
    double_sixes,
    fifteen_lines,
    hexahedral_double_six,
    line_points,
    meeting_matrix,
    new_surface,
    parse_tag,
    partition_tag,
    restricted_cubic,
    schlafli_degrees,
)
from luroth.verify import displayed_meet_points


def test_standard_surface_is_nonsingular(standard_surface):
    cert = standard_surface.certificate
    assert cert.no_common_zero and cert.exact and cert.rank == cert.columns


@pytest.mark.parametrize("beta, guard", [
    ((0, 0, 1, 2, 3, 4), "beta-distinctness"),
    ((3, 3, 3, 3, 3, 3), "dependent-relations"),
    ((0, 1, 2, 3, 4), "beta-length"),
    ((2, -5, 7, 11, -3, 4), "singular"),
])
def test_inadmissible_beta(beta, guard):
    with pytest.raises(InvalidSurface) as exc:
        new_surface(beta)
    assert exc.value.guard == guard


def test_distinctness_diagnostic():
    with pytest.raises(InvalidSurface, match="beta distinctness violated"):
        new_surface((0, 0, 1, 2, 3, 4))


def test_fifteen_partitions():
    assert len(PARTITIONS) == 15 == len({partition_tag(p) for p in PARTITIONS})
    assert partition_tag(parse_tag("{4,5}{0,1}{2,3}")) == "01|23|45"
    assert partition_tag(parse_tag("01|23")) == "01|23|45"
    with pytest.raises(ValueError):
        parse_tag("01|12|34")


def test_fifteen_lines_lie_on_surface(standard_surface):
    lines = fifteen_lines(standard_surface)
    assert len(lines) == 15
    assert all(restricted_cubic(standard_surface.cubic, sl.line).is_zero() for sl in lines)


def test_reference_line_is_explicit(standard_surface):
    S = standard_surface
    (sl,) = [sl for sl in fifteen_lines(S) if sl.tag == "01|23|45"]
    for pt in (sl.line.p, sl.line.q):
        z = S.to_hex(pt)
        assert z[0] + z[1] == z[2] + z[3] == z[4] + z[5] == 0


def test_displayed_meet_points_lie_on_residual_pairs(standard_surface):
    S = standard_surface
    lines = all_lines_27(S)
    tags = {sl.tag: sl.line for sl in lines if sl.tag}
    shown = displayed_meet_points(S.beta)
    # pairs coplanar with 01|23|45 avoiding the hexahedral double-six
    pairs = {"P1": ("01|24|35", "01|25|34"), "P2": ("04|15|23", "05|14|23"),
             "P3": ("02|13|45", "03|12|45")}
    for key, (t1, t2) in pairs.items():
        pt = S.from_hex(shown[key])
        assert point_on_line(pt, tags[t1], tol=0) and point_on_line(pt, tags[t2], tol=0)
        assert S.contains(pt)


def test_cremona_plane_contains_displayed_point(standard_surface):
    S = standard_surface
    pt = S.from_hex(displayed_meet_points(S.beta)["point"])
    assert S.cremona_plane()(pt) == 0


def test_cremona_plane_is_invariant_under_affine_renormalization(standard_surface):
    a, b = Fraction(5), Fraction(-2, 3)
    T = new_surface(tuple(a + b * x for x in standard_surface.beta))
    assert T.chart.basis == standard_surface.chart.basis
    assert T.cremona_plane().same_as(standard_surface.cremona_plane(), tol=0)


@pytest.mark.parametrize("fixture", ["standard_surface", "generic_surface"])
def test_schlafli_configuration(fixture, request):
    S = request.getfixturevalue(fixture)
    lines = all_lines_27(S)
    assert len(lines) == 27
    assert [sl.exact for sl in lines] == [True] * 15 + [False] * 12
    assert max(sl.residual for sl in lines[15:]) < 1e-30
    meets, skews = schlafli_degrees(meeting_matrix(lines))
    assert meets == {10} and skews == {16}


@pytest.mark.parametrize("fixture", ["standard_surface", "generic_surface"])
def test_double_sixes(fixture, request):
    S = request.getfixturevalue(fixture)
    sixes = double_sixes(S)
    meet = meeting_matrix(all_lines_27(S))
    assert len(sixes) == 36 == len({frozenset(d.lines) for d in sixes})
    assert all(check_double_six(d, meet) for d in sixes)
    assert set(hexahedral_double_six(S).lines) == set(range(15, 27))
    counts = [sum(idx in d.lines for d in sixes) for idx in range(27)]
    assert counts == [16] * 27


def test_line_points(standard_surface):
    S = standard_surface
    line = LineP3(PointP3((1, 2, 0, 3)), PointP3((0, 1, -1, 2)))
    pts = line_points(S, line)
    assert len(pts) == 3 and all(S.contains(p) for p in pts)
    with pytest.raises(DegenerateInput):
        line_points(S, fifteen_lines(S)[0].line)
