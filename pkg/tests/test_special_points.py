import itertools

import pytest

from luroth.polycore.poly import binary_coeffs
from luroth.polycore.roots import binary_roots
from luroth.polycore.scalar import precision, projective_distance, projectively_equal
from luroth.special_points import (
    cremona_plane_of,
    cremona_planes,
    hexahedral_check,
    involutory_pair,
    involutory_points,
    line_profile,
    non_involutory_points,
    off_six_points,
    plane_line_pattern,
    plane_residual,
    tritangent_planes,
)
from luroth.surface import (
    all_lines_27,
    double_sixes,
    hexahedral_double_six,
    meeting_matrix,
    pencil_quintic,
)
from luroth.verify import displayed_meet_points

REFERENCE = 0  # index of the explicit line 01|23|45


def _tags(S):
    return {sl.index: sl.tag for sl in all_lines_27(S)}


def test_reference_index(standard_surface):
    assert _tags(standard_surface)[REFERENCE] == "01|23|45"


def test_tritangent_pairs_off_the_hexahedral_six(standard_surface):
    S = standard_surface
    tags = _tags(S)
    hexa = set(hexahedral_double_six(S).lines)
    data = tritangent_planes(S, REFERENCE)
    assert len(data.planes) == 5
    off = {tuple(sorted(tags[i] for i in t.residual)) for t in data.planes if not set(t.residual) & hexa}
    assert off == {("01|24|35", "01|25|34"), ("04|15|23", "05|14|23"), ("02|13|45", "03|12|45")}
    assert all(S.contains(t.vertex) for t in data.planes)


def test_pencil_quintic_has_five_simple_roots(standard_surface):
    line = all_lines_27(standard_surface)[REFERENCE].line
    _, quintic, _ = pencil_quintic(standard_surface.cubic, line)
    assert quintic.homogeneous_degree() == 5
    roots = binary_roots(binary_coeffs(quintic, 5))
    assert sum(r.multiplicity for r in roots) == 5 and len(roots) == 5


def test_non_involutory_points_on_reference_line(standard_surface):
    S = standard_surface
    pts = non_involutory_points(S, REFERENCE)
    assert sorted(p.triple for p in pts) == list(itertools.combinations(range(5), 3))
    # the triple of meet points off the hexahedral six gives the displayed point
    hexa = set(hexahedral_double_six(S).lines)
    data = tritangent_planes(S, REFERENCE)
    triple = tuple(k for k, t in enumerate(data.planes) if not set(t.residual) & hexa)
    (chosen,) = [p for p in pts if p.triple == triple]
    assert chosen.point.exact
    assert projective_distance(S.to_hex(chosen.point), displayed_meet_points(S.beta)["point"]) == 0


def test_each_non_involutory_point_lies_on_two_planes(generic_surface):
    S = generic_surface
    planes = cremona_planes(S)
    with precision(128):
        for p in non_involutory_points(S, 20):
            assert sum(plane_residual(cp.plane, p.point) < 1e-20 for cp in planes) == 2


def test_involutory_pair_is_well_formed(standard_surface):
    S = standard_surface
    lines = all_lines_27(S)
    meet = meeting_matrix(lines)
    i = REFERENCE
    j = next(k for k in range(27) if k != i and not meet[i][k])
    ab = involutory_pair(S, lines[i].line, lines[j].line)
    ba = involutory_pair(S, lines[j].line, lines[i].line)
    assert ab.check < 1e-30
    assert ab.p_bar.distance(ba.q_bar) < 1e-30 and ab.q_bar.distance(ba.p_bar) < 1e-30


def test_sixteen_involutory_points_per_line(generic_surface):
    inv = involutory_points(generic_surface)
    assert len(inv) == 27 * 16
    for line in range(27):
        pts = [p for (a, _), p in inv.items() if a == line]
        assert len(pts) == 16
        assert min(p.distance(q) for p, q in itertools.combinations(pts, 2)) > 1e-6


def test_hexahedral_plane_through_involutory_points(standard_surface):
    S = standard_surface
    cp = cremona_plane_of(S, hexahedral_double_six(S))
    assert cp.sigma < 1e-30
    assert cp.plane.distance(S.cremona_plane()) < 1e-8


def test_thirty_six_distinct_planes(standard_surface):
    planes = cremona_planes(standard_surface)
    assert len(planes) == 36
    assert min(a.plane.distance(b.plane) for a, b in itertools.combinations(planes, 2)) > 1e-6


def test_off_six_points_lie_on_hexahedral_plane_exactly(standard_surface):
    checks = hexahedral_check(standard_surface)
    assert len(checks) == 15 and all(value == 0 for _, value in checks)


def test_off_six_points_lie_on_every_involutory_plane(generic_surface):
    S = generic_surface
    planes = cremona_planes(S)
    for k in (3, 17, 30):
        pts = off_six_points(S, planes[k].double_six)
        assert max(plane_residual(planes[k].plane, p.point) for p in pts) < 1e-8


@pytest.mark.parametrize("k", [0, 11, 35])
def test_plane_meets_lines_in_twelve_plus_fifteen(generic_surface, k):
    involutory, further, shared = plane_line_pattern(generic_surface, k)
    assert len(involutory) == 12 and len(further) == 15 and not shared
    assert all(len(o) == 1 for o in further.values())
    assert len({o[0] for o in further.values()}) == 15


@pytest.mark.parametrize("line", [2, 19])
def test_line_profile(generic_surface, line):
    prof = line_profile(generic_surface, line)
    assert len(prof.form) == 37
    assert prof.pattern == {1: 16, 2: 10}
    assert prof.lengths == {"involutory": 32, "non_involutory": 40, "total": 72}
    assert len({r.partner for r in prof.involutory}) == 16
    assert all(len(r.planes) == 1 for r in prof.involutory)
    assert all(len(r.planes) == 2 for r in prof.non_involutory)


# The standard surface is special: on the line 03|14|25 the involutory points
# for the partners 01|23|45 and 04|15|23 coincide (found while running the
# per-plane pattern check; frozen here).

COINCIDENT_LINE = 7
COINCIDENT_PARTNERS = (0, 11)
COINCIDENT_HEX = (2, -5, 2, -2, 5, -2)


def test_standard_surface_has_coincident_involutory_points(standard_surface):
    S = standard_surface
    tags = _tags(S)
    assert tags[COINCIDENT_LINE] == "03|14|25"
    assert [tags[p] for p in COINCIDENT_PARTNERS] == ["01|23|45", "04|15|23"]
    inv = involutory_points(S)
    a, b = (inv[(COINCIDENT_LINE, p)] for p in COINCIDENT_PARTNERS)
    assert a.exact and b.exact
    assert projectively_equal(a.coords, b.coords)
    assert projectively_equal(S.to_hex(a), COINCIDENT_HEX)


def test_coincidence_shows_in_pattern_and_profile(standard_surface):
    S = standard_surface
    planes = cremona_planes(S)
    sharing = [k for k, cp in enumerate(planes) if {COINCIDENT_LINE, *COINCIDENT_PARTNERS} <= set(cp.double_six.lines)]
    assert len(sharing) == 2
    for k in sharing:
        involutory, further, shared = plane_line_pattern(S, k)
        assert len(involutory) == 12 and len(further) == 15
        assert set(shared) == {COINCIDENT_LINE}
    prof = line_profile(S, COINCIDENT_LINE)
    assert prof.pattern == {1: 14, 2: 11}
    (root,) = prof.coincident
    assert root.partners == COINCIDENT_PARTNERS and root.multiplicity == 2
    assert prof.lengths["total"] == 72


def test_double_sixes_through_a_line(standard_surface):
    assert sum(REFERENCE in d.lines for d in double_sixes(standard_surface)) == 16
