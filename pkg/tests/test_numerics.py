"""Rounding and interval arithmetic, checked against brute-force
oracles on the small base-10 format and against random sampling."""
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fldx.errors import OverflowAlarm
from fldx.numerics import (FORMATS, TOY, FloatFormat, RInterval,
                           enumerate_floats, interval_arith,
                           is_representable, rat,
                           representation_error_bound, round_directed,
                           round_nearest, unit_roundoff)

# ---------------------------------------------------------------------------
# Brute-force model of the toy format (base 10, two digits), built from
# the format definition only -- the oracle for round_nearest.
# ---------------------------------------------------------------------------


def toy_values():
    """(value, significand) pairs of every finite toy-format number."""
    out = {}
    for e in range(TOY.e_min, TOY.e_max + 1):
        lo_m = 0 if e == TOY.e_min else 10 ** (TOY.p - 1)
        for m in range(lo_m, 10 ** TOY.p):
            v = Fraction(m) * Fraction(10) ** (e - TOY.p + 1)
            if v not in out:  # keep the first (smallest-exponent) form
                out[v] = m
    return out


def brute_round(x: Fraction, table):
    """Nearest value; ties go to the even significand."""
    best = None
    for v, m in table.items():
        d = abs(x - v)
        if best is None or d < best[0] or (d == best[0] and m % 2 == 0):
            best = (d, v, m)
    return best[1]


TABLE = {v: m for v, m in toy_values().items()}
TABLE.update({-v: m for v, m in toy_values().items()})
SORTED_VALS = sorted(TABLE)


def test_enumerate_floats_matches_brute_force_set():
    got = sorted(set(enumerate_floats(TOY)))
    assert got == sorted(set(TABLE))


def test_round_identity_on_representables():
    for v in SORTED_VALS:
        assert round_nearest(v, TOY).value == v


def test_round_every_midpoint_ties_to_even():
    for a, b in zip(SORTED_VALS, SORTED_VALS[1:]):
        mid = (a + b) / 2
        if mid in TABLE:
            continue  # not a tie, mid itself representable
        expected = brute_round(mid, TABLE)
        assert round_nearest(mid, TOY).value == expected, (a, b)


@settings(max_examples=300, deadline=None)
@given(st.fractions(min_value=Fraction(-990), max_value=Fraction(990)))
def test_round_matches_brute_force_everywhere(x):
    assert round_nearest(x, TOY).value == brute_round(x, TABLE)


def test_ten_pi_rounds_to_31():
    ten_pi = Fraction(10) * Fraction(math.pi).limit_denominator(10 ** 12)
    assert round_nearest(ten_pi, TOY).value == 31


def test_third_rounds_to_three_tenths():
    assert round_nearest(Fraction(1, 3), TOY).value == Fraction(3, 10)


def test_round_overflow_raises():
    with pytest.raises(OverflowAlarm):
        round_nearest(Fraction(10000), TOY)


def test_round_directed_brackets_nearest():
    for a, b in zip(SORTED_VALS, SORTED_VALS[1:]):
        x = a + (b - a) / 3
        assert round_directed(x, TOY, up=False).value == a
        assert round_directed(x, TOY, up=True).value == b


def test_unit_roundoff():
    assert unit_roundoff(TOY) == Fraction(1, 10) / 2
    assert unit_roundoff(FORMATS["binary64"]) == Fraction(1, 2 ** 53)


def test_relative_error_bounded_by_unit_roundoff():
    u = unit_roundoff(TOY)
    smallest_normal = Fraction(10) ** (TOY.e_min)
    for v in SORTED_VALS:
        x = v + Fraction(1, 7)
        if abs(x) > TOY.max_finite:
            continue
        r = round_nearest(x, TOY).value
        if abs(x) >= smallest_normal:
            assert abs(r - x) <= u * abs(x)


def test_representation_error_bound_is_sound(rng):
    iv = RInterval(rat("0.5"), rat("9.5"))
    bound = representation_error_bound(iv, TOY)
    for _ in range(200):
        x = rat("0.5") + Fraction(rng.randint(0, 9 * 10 ** 6), 10 ** 6)
        r = round_nearest(x, TOY).value
        assert bound.lo <= r - x <= bound.hi


def test_is_representable():
    assert is_representable(Fraction(31), TOY)
    assert not is_representable(Fraction(1, 3), TOY)
    assert is_representable(Fraction(1, 4), FORMATS["binary64"])
    assert not is_representable(Fraction(1, 10), FORMATS["binary64"])


# ---------------------------------------------------------------------------
# Interval arithmetic: containment under random sampling
# ---------------------------------------------------------------------------

finite_fracs = st.fractions(min_value=Fraction(-100), max_value=Fraction(100))


@st.composite
def intervals(draw):
    a = draw(finite_fracs)
    b = draw(finite_fracs)
    return RInterval(min(a, b), max(a, b))


def _sample(iv: RInterval, t: Fraction) -> Fraction:
    return iv.lo + (iv.hi - iv.lo) * t


@settings(max_examples=200, deadline=None)
@given(intervals(), intervals(),
       st.sampled_from("+-*"),
       st.fractions(min_value=0, max_value=1),
       st.fractions(min_value=0, max_value=1))
def test_interval_arith_contains_pointwise_results(a, b, op, t1, t2):
    r = interval_arith(op, a, b)
    x = _sample(a, t1)
    y = _sample(b, t2)
    z = {"+": x + y, "-": x - y, "*": x * y}[op]
    assert r.lo <= z <= r.hi


@settings(max_examples=200, deadline=None)
@given(intervals(), intervals())
def test_join_meet_lattice_laws(a, b):
    j = a.join(b)
    assert j.lo <= a.lo and j.hi >= a.hi
    assert j.lo <= b.lo and j.hi >= b.hi
    m = a.meet(b)
    if m is not None:
        assert a.lo <= m.lo <= m.hi <= a.hi
        assert b.lo <= m.lo <= m.hi <= b.hi
    else:
        assert a.hi < b.lo or b.hi < a.lo
    assert a.join(a) == a
    assert a.meet(a) == a
    assert a.join(b) == b.join(a)


@settings(max_examples=200, deadline=None)
@given(intervals(), st.fractions(min_value=0, max_value=1))
def test_interval_square_contains_samples(a, t):
    sq = a.square()
    x = _sample(a, t)
    assert sq.lo <= x * x <= sq.hi
    assert sq.lo >= 0


@settings(max_examples=100, deadline=None)
@given(intervals(), intervals(), st.fractions(min_value=0, max_value=1),
       st.fractions(min_value=0, max_value=1))
def test_interval_divide_contains_samples(a, b, t1, t2):
    if b.contains(Fraction(0)):
        return
    r = a.divide(b)
    x = _sample(a, t1)
    y = _sample(b, t2)
    assert r.lo <= x / y <= r.hi
