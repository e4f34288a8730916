"""Exact rational arithmetic, rational intervals and a parameterizable
floating-point rounding model.

All arithmetic in the analysis is carried out over exact rationals
(`fractions.Fraction`), so interval endpoints never need outward rounding
and rounding of floats can be modeled exactly for any radix/precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .errors import DivisionByZero, OverflowAlarm

#: The exact rational substrate. Normalization (gcd-reduced, positive
#: denominator) is guaranteed by Fraction itself.
Rational = Fraction

RationalLike = Union[Fraction, int, str]


def rat(x: RationalLike) -> Fraction:
    """Coerce ints, decimal strings ('0.1', '1e-9') to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(str(x))


def rat_arith(op: str, a: Fraction, b: Fraction) -> Fraction:
    """Exact rational arithmetic; '/' raises DivisionByZero on b == 0."""
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise DivisionByZero("rational division by zero")
        return a / b
    raise ValueError(f"unknown operator {op!r}")


# ---------------------------------------------------------------------------
# Rational intervals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RInterval:
    """Closed interval with exact rational endpoints, lo <= hi."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", rat(self.lo))
        object.__setattr__(self, "hi", rat(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @staticmethod
    def point(x: RationalLike) -> "RInterval":
        x = rat(x)
        return RInterval(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def rad(self) -> Fraction:
        return (self.hi - self.lo) / 2

    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "RInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def max_abs(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def __add__(self, other: "RInterval") -> "RInterval":
        return RInterval(self.lo + other.lo, self.hi + other.hi)

    def __sub__(self, other: "RInterval") -> "RInterval":
        return RInterval(self.lo - other.hi, self.hi - other.lo)

    def __neg__(self) -> "RInterval":
        return RInterval(-self.hi, -self.lo)

    def __mul__(self, other: "RInterval") -> "RInterval":
        ps = (self.lo * other.lo, self.lo * other.hi,
              self.hi * other.lo, self.hi * other.hi)
        return RInterval(min(ps), max(ps))

    def scale(self, k: Fraction) -> "RInterval":
        a, b = k * self.lo, k * self.hi
        return RInterval(a, b) if a <= b else RInterval(b, a)

    def shift(self, k: Fraction) -> "RInterval":
        return RInterval(self.lo + k, self.hi + k)

    def divide(self, other: "RInterval") -> "RInterval":
        if other.contains(Fraction(0)):
            raise DivisionByZero("interval division by zero-containing interval")
        inv = RInterval(1 / other.hi, 1 / other.lo)
        return self * inv

    def square(self) -> "RInterval":
        if self.lo >= 0:
            return RInterval(self.lo * self.lo, self.hi * self.hi)
        if self.hi <= 0:
            return RInterval(self.hi * self.hi, self.lo * self.lo)
        m = max(self.lo * self.lo, self.hi * self.hi)
        return RInterval(Fraction(0), m)

    def join(self, other: "RInterval") -> "RInterval":
        return RInterval(min(self.lo, other.lo), max(self.hi, other.hi))

    def meet(self, other: "RInterval") -> Optional["RInterval"]:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return RInterval(lo, hi) if lo <= hi else None

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


def interval_arith(op: str, a: RInterval, b: RInterval) -> Optional[RInterval]:
    """Exact interval arithmetic. 'meet' may return None (empty)."""
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        return a.divide(b)
    if op == "join":
        return a.join(b)
    if op == "meet":
        return a.meet(b)
    raise ValueError(f"unknown interval operator {op!r}")


def hull_of(*xs: RationalLike) -> RInterval:
    vals = [rat(x) for x in xs]
    return RInterval(min(vals), max(vals))


# ---------------------------------------------------------------------------
# Floating-point formats and rounding
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FloatFormat:
    """A radix-beta, precision-p floating-point format with gradual underflow.

    Finite values are (-1)^s * M * beta^(e - p + 1) with integer significand
    M < beta^p (normal: M >= beta^(p-1), subnormal: e == e_min).
    """

    beta: int
    p: int
    e_min: int
    e_max: int

    def __post_init__(self):
        if self.beta < 2 or self.p < 2 or self.e_min > self.e_max:
            raise ValueError("invalid float format parameters")

    @property
    def max_finite(self) -> Fraction:
        return (self.beta**self.p - 1) * Fraction(self.beta) ** (self.e_max - self.p + 1)

    @property
    def unit_roundoff(self) -> Fraction:
        return Fraction(self.beta) ** (1 - self.p) / 2

    @property
    def subnormal_step(self) -> Fraction:
        """Smallest positive value; the absolute-error floor eta."""
        return Fraction(self.beta) ** (self.e_min - self.p + 1)

    def quantum(self, e: int) -> Fraction:
        return Fraction(self.beta) ** (e - self.p + 1)


BINARY32 = FloatFormat(beta=2, p=24, e_min=-126, e_max=127)
BINARY64 = FloatFormat(beta=2, p=53, e_min=-1022, e_max=1023)
TOY = FloatFormat(beta=10, p=2, e_min=0, e_max=2)

FORMATS = {"binary32": BINARY32, "binary64": BINARY64, "toy": TOY}


@dataclass(frozen=True)
class FloatValue:
    """A rational known to be exactly representable in a format."""

    value: Fraction
    fmt: FloatFormat

    def __post_init__(self):
        if not is_representable(self.value, self.fmt):
            raise ValueError(f"{self.value} is not representable in {self.fmt}")


def unit_roundoff(fmt: FloatFormat) -> Fraction:
    return fmt.unit_roundoff


def _ilog(x: Fraction, beta: int) -> int:
    """Largest e with beta^e <= x, for x > 0."""
    approx = (math.log2(x.numerator) - math.log2(x.denominator)) / math.log2(beta)
    e = math.floor(approx)
    b = Fraction(beta)
    while b**e > x:
        e -= 1
    while b ** (e + 1) <= x:
        e += 1
    return e


def _round_half_even(x: Fraction) -> int:
    n, d = x.numerator, x.denominator
    q, r = divmod(n, d)
    twice = 2 * r
    if twice < d:
        return q
    if twice > d:
        return q + 1
    return q if q % 2 == 0 else q + 1


def _decompose(x: Fraction, fmt: FloatFormat) -> tuple[int, int, Fraction]:
    """Exponent, sign and magnitude used by the rounding functions."""
    s = -1 if x < 0 else 1
    a = abs(x)
    e = max(_ilog(a, fmt.beta), fmt.e_min)
    return e, s, a


def round_nearest(x: RationalLike, fmt: FloatFormat) -> FloatValue:
    """Round to nearest representable value, ties to even significand."""
    x = rat(x)
    if x == 0:
        return FloatValue(Fraction(0), fmt)
    e, s, a = _decompose(x, fmt)
    q = fmt.quantum(e)
    m = _round_half_even(a / q)
    if m >= fmt.beta**fmt.p:
        e += 1
        m = fmt.beta ** (fmt.p - 1)
        q = fmt.quantum(e)
    if e > fmt.e_max:
        raise OverflowAlarm(f"{x} rounds beyond the largest finite value")
    return FloatValue(s * m * q, fmt)


def round_directed(x: RationalLike, fmt: FloatFormat, up: bool) -> FloatValue:
    """Round toward +inf (up) or -inf; used to snap interval endpoints."""
    x = rat(x)
    if x == 0:
        return FloatValue(Fraction(0), fmt)
    e, s, a = _decompose(x, fmt)
    q = fmt.quantum(e)
    m = a / q
    outward = (up and s > 0) or (not up and s < 0)
    mi = -(-m.numerator // m.denominator) if outward else m.numerator // m.denominator
    if mi >= fmt.beta**fmt.p:
        e += 1
        mi = fmt.beta ** (fmt.p - 1)
        q = fmt.quantum(e)
    if e > fmt.e_max:
        raise OverflowAlarm(f"{x} rounds beyond the largest finite value")
    return FloatValue(s * mi * q, fmt)


def is_representable(x: RationalLike, fmt: FloatFormat) -> bool:
    x = rat(x)
    if x == 0:
        return True
    a = abs(x)
    if a > fmt.max_finite:
        return False
    e = max(_ilog(a, fmt.beta), fmt.e_min)
    m = a / fmt.quantum(e)
    return m.denominator == 1


def representation_error_bound(iv: RInterval, fmt: FloatFormat) -> RInterval:
    """Sound symmetric bound on x - round(x) for any x in iv."""
    m = iv.max_abs()
    if m == 0:
        return RInterval.point(0)
    e = max(_ilog(m, fmt.beta), fmt.e_min)
    half_ulp = fmt.quantum(e) / 2
    return RInterval(-half_ulp, half_ulp)


def enumerate_floats(fmt: FloatFormat) -> Iterator[Fraction]:
    """All finite values of a (small) format, ascending. Test oracle helper."""
    nonneg = []
    eta = fmt.subnormal_step
    for m in range(0, fmt.beta ** (fmt.p - 1)):
        nonneg.append(m * eta)
    for e in range(fmt.e_min, fmt.e_max + 1):
        q = fmt.quantum(e)
        for m in range(fmt.beta ** (fmt.p - 1), fmt.beta**fmt.p):
            nonneg.append(m * q)
    for v in reversed(nonneg[1:]):
        yield -v
    yield from nonneg
