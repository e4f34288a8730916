"""Annotation typing: carry/compute judgements that decide where exact
rational arithmetic is needed, and the kind/type lattice laws."""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fldx.annot.kinds import (EXEC_TYPES, FKind, IntInterval, Q, ZKind,
                              int_interval_arith, kind_join,
                              smallest_int_type, theta, type_join, type_le)
from fldx.annot.typecheck import TypedCmp, type_pred
from fldx.errors import TypeErrorAt
from fldx.frontend import parse_pred

INT32 = IntInterval(-(2 ** 31), 2 ** 31 - 1)


def typed_cmp(text, var_types):
    t = type_pred(parse_pred(text), var_types)
    assert isinstance(t, TypedCmp)
    return t


# ---------------------------------------------------------------------------
# The three reference judgements: a huge constant pushes one operation to
# big integers while the comparison stays at machine width; a
# non-representable literal forces rationals; an exact literal keeps the
# comparison at the float type.
# ---------------------------------------------------------------------------


def test_big_shift_division_computes_in_bigint_carries_int32():
    vt = {"x": ("int", False), "y": ("int", False)}
    cmp_ = typed_cmp("x / (y + 79228162514264337593543950335) == 0", vt)
    div = cmp_.left
    assert div.compute == "Z"      # the shifted divisor exceeds uint64
    assert div.carry == "int32"    # but the quotient fits the dividend hull
    assert cmp_.compute == "int32"  # so the comparison is machine-width
    shift = div.children[1]
    assert shift.compute == "Z" and shift.carry == "Z"


def test_inexact_literal_forces_rational_comparison():
    vt = {"f": ("float", False), "g": ("float", False)}
    cmp_ = typed_cmp("f - 0.1 <= g", vt)
    assert cmp_.left.compute == "Q"   # 0.1 has no finite binary expansion
    assert cmp_.compute == "Q"


def test_exact_literal_keeps_float_comparison():
    vt = {"f": ("double", False)}
    cmp_ = typed_cmp("f == 0.0", vt)
    assert cmp_.compute == "double"
    # a float variable against an exact literal still decides at a
    # machine float type, never at exact rationals
    vt32 = {"f": ("float", False)}
    assert typed_cmp("f == 0.5", vt32).compute in ("float", "double")


def test_int_only_arithmetic_stays_integer():
    vt = {"i": ("int", False), "j": ("int", False)}
    cmp_ = typed_cmp("i + j < 10", vt)
    add = cmp_.left
    assert isinstance(add.kind, ZKind)
    assert add.compute == "int64"  # sum of two int32 needs one more bit
    assert cmp_.compute == "int64"


def test_small_int_joins_into_float_kind():
    # integers up to 2^24 are exact in binary32, so the join stays F
    vt = {"f": ("float", False)}
    cmp_ = typed_cmp("f <= 3", vt)
    assert cmp_.compute == "float"


def test_unknown_variable_rejected():
    with pytest.raises(TypeErrorAt):
        type_pred(parse_pred("unknown_name < 1"), {})


# ---------------------------------------------------------------------------
# Lattice laws
# ---------------------------------------------------------------------------

bounded_ivs = st.builds(
    lambda a, b: IntInterval(min(a, b), max(a, b)),
    st.integers(min_value=-(2 ** 70), max_value=2 ** 70),
    st.integers(min_value=-(2 ** 70), max_value=2 ** 70))

kinds = st.one_of(
    st.builds(ZKind, bounded_ivs),
    st.sampled_from([FKind("float"), FKind("double"), Q]))


@settings(max_examples=200, deadline=None)
@given(kinds, kinds)
def test_kind_join_commutes_and_is_idempotent(a, b):
    j = kind_join(a, b)
    assert kind_join(b, a) == j
    assert kind_join(a, a) == a
    if isinstance(a, ZKind) and isinstance(b, ZKind):
        assert isinstance(j, ZKind)
        assert j.iv.lo <= min(a.iv.lo, b.iv.lo)
        assert j.iv.hi >= max(a.iv.hi, b.iv.hi)


def test_int_float_join_exactness_boundary():
    lim32, lim64 = 2 ** 24, 2 ** 53
    assert kind_join(ZKind(IntInterval(0, lim32)), FKind("float")) == \
        FKind("float")
    assert kind_join(ZKind(IntInterval(0, lim32 + 1)), FKind("float")) == Q
    assert kind_join(ZKind(IntInterval(-lim64, lim64)), FKind("double")) == \
        FKind("double")
    assert kind_join(ZKind(IntInterval(0, lim64 + 1)), FKind("double")) == Q


@settings(max_examples=200, deadline=None)
@given(kinds, kinds, kinds)
def test_kind_join_associates_up_to_theta(a, b, c):
    left = theta(kind_join(kind_join(a, b), c))
    right = theta(kind_join(a, kind_join(b, c)))
    assert type_join(left, right) in (left, right)


def test_type_le_is_a_partial_order():
    for a in EXEC_TYPES:
        assert type_le(a, a)
        for b in EXEC_TYPES:
            for c in EXEC_TYPES:
                if type_le(a, b) and type_le(b, c):
                    assert type_le(a, c), (a, b, c)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(EXEC_TYPES), st.sampled_from(EXEC_TYPES))
def test_type_join_is_an_upper_bound(a, b):
    j = type_join(a, b)
    assert type_le(a, j) and type_le(b, j)


def test_smallest_int_type_boundaries():
    assert smallest_int_type(IntInterval(0, 255)) == "uint8"
    assert smallest_int_type(IntInterval(-1, 255)) == "int16"
    assert smallest_int_type(IntInterval(0, 2 ** 64 - 1)) == "uint64"
    assert smallest_int_type(IntInterval(0, 2 ** 64)) == "Z"
    assert smallest_int_type(IntInterval(None, 3)) == "Z"


@settings(max_examples=200, deadline=None)
@given(bounded_ivs, bounded_ivs, st.sampled_from("+-*/"),
       st.integers(min_value=0, max_value=100),
       st.integers(min_value=0, max_value=100))
def test_int_interval_arith_contains_samples(a, b, op, p1, p2):
    def pick(iv, p):
        return iv.lo + (iv.hi - iv.lo) * p // 100

    x, y = pick(a, p1), pick(b, p2)
    if op == "/" and (b.lo <= 0 <= b.hi):
        return
    r = int_interval_arith(op, a, b)
    if op == "/":
        z = -(-x // y) if (x < 0) != (y < 0) else x // y  # C truncation
    else:
        z = {"+": x + y, "-": x - y, "*": x * y}[op]
    if r.lo is not None:
        assert r.lo <= z
    if r.hi is not None:
        assert z <= r.hi
