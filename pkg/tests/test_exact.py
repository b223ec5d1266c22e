import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cauchyforce.exact import (
    EMPTY, REALS, OpenInterval, Q, fmt_q, interval_intersect, interval_len, is_prefix,
    seq, seq_extend, seq_from_json, seq_to_json,
)

rats = st.fractions(min_value=-100, max_value=100, max_denominator=50)


@st.composite
def intervals(draw):
    a, b = draw(rats), draw(rats)
    lo, hi = min(a, b), max(a, b)
    if draw(st.booleans()) and draw(st.booleans()):
        lo = None
    if draw(st.booleans()) and draw(st.booleans()):
        hi = None
    return OpenInterval(lo, hi)


def I(a, b):
    return OpenInterval.of(a, b)


def test_Q_rejects_floats_and_parses_strings():
    assert Q("3/6") == Fraction(1, 2)
    assert Q(2) == 2
    with pytest.raises(TypeError):
        Q(0.5)
    assert fmt_q(Fraction(-4, 6)) == "-2/3"


@pytest.mark.parametrize("a,b,want", [
    (I(0, 1), I("1/2", 2), I("1/2", 1)),
    (I(0, 1), I(0, 1), I(0, 1)),
    (I(0, "1/3"), I("1/2", 1), EMPTY),
])
def test_intersect_examples(a, b, want):
    assert interval_intersect(a, b) == want


@pytest.mark.parametrize("a,want", [(I(0, 1), 1), (I("-1/2", "1/2"), 1), (OpenInterval(Fraction(0), None), math.inf)])
def test_len_examples(a, want):
    assert interval_len(a) == want


def test_len_of_empty_raises():
    with pytest.raises(ValueError):
        interval_len(EMPTY)


def test_seq_extend_examples():
    h = Fraction(1, 2)
    assert seq_extend((), [h]) == (h,)
    assert seq_extend((h,), ["3/4", "7/8"]) == (h, Fraction(3, 4), Fraction(7, 8))
    assert seq_extend((h,), []) == (h,)


def test_membership_is_strict_and_degenerate_is_empty():
    assert 0 not in I(0, 1) and Fraction(1, 2) in I(0, 1)
    assert I(1, 1).empty and I(2, 1) == EMPTY
    assert 5 in REALS


@given(rats, rats, rats)
def test_field_laws(a, b, c):
    assert (a + b) - b == a
    assert (a + b) + c == a + (b + c) and a * b == b * a
    assert a * (b + c) == a * b + a * c


@given(intervals(), intervals(), intervals())
def test_intersection_laws(a, b, c):
    assert interval_intersect(a, b) == interval_intersect(b, a)
    assert interval_intersect(interval_intersect(a, b), c) == interval_intersect(a, interval_intersect(b, c))
    assert interval_intersect(a, a) == a
    assert interval_intersect(a, REALS) == a
    ab = interval_intersect(a, b)
    if not (ab.empty or a.empty or b.empty):
        assert interval_len(ab) <= min(interval_len(a), interval_len(b))


@given(intervals())
def test_interval_json_roundtrip(a):
    assert OpenInterval.from_json(a.to_json()) == a


@given(st.lists(rats, max_size=6), st.lists(rats, max_size=3))
def test_sequences_roundtrip_and_prefix(p, xs):
    s = seq(p)
    assert seq_from_json(seq_to_json(s)) == s
    assert is_prefix(s, seq_extend(s, xs))
