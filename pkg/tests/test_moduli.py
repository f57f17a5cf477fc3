from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from luroth.moduli import PRIMITIVE, DivClass, discriminant_pipeline, named_classes


@pytest.mark.parametrize("name, coords", [
    ("h_bar", (9, -1, -3)),
    ("D", (252, -27, -72)),
    ("L", (504, -54, -144)),
    ("Cat", (56, -6, -16)),
])
def test_named_classes(name, coords):
    assert named_classes()[name] == DivClass(coords)


def test_pipeline_recomputes_the_discriminant():
    d = discriminant_pipeline()
    assert d.ok
    assert d.result == DivClass.of(252, -27, -72)
    steps = dict(d.steps)
    assert steps["2*14*h_bar"] == DivClass.of(252, -28, -84)
    assert steps["L = 2*D"] == DivClass.of(504, -54, -144) == 2 * d.result


def test_proportionalities():
    named = named_classes()
    assert named["L"].ratio(named["D"]) == 2
    assert named["D"].ratio(PRIMITIVE) == 9 and named["Cat"].ratio(PRIMITIVE) == 2
    assert named["h_bar"].ratio(PRIMITIVE) is None


def test_display_and_json():
    assert str(named_classes()["h_bar"]) == "9*lambda - 1*delta0 - 3*delta1"
    assert str(DivClass.zero()) == "0"
    assert named_classes()["D"].to_json() == {"lambda": "252", "delta0": "-27", "delta1": "-72"}


fracs = st.fractions(min_value=-100, max_value=100, max_denominator=12)
classes = st.tuples(fracs, fracs, fracs).map(DivClass)


@given(classes, classes, classes, fracs)
def test_vector_space_axioms(a, b, c, k):
    zero = DivClass.zero()
    assert a + zero == a == zero + a
    assert a + b == b + a and (a + b) + c == a + (b + c)
    assert a - a == zero and -a + a == zero
    assert k * (a + b) == k * a + k * b
    assert (k * a).coords == tuple(Fraction(k) * x for x in a.coords)
