"""Four-field abstract floats and their arithmetic.

Every float variable of an analyzed program is shadowed by an
AbstractFloat holding:
  * float_iv  -- interval of the machine float value,
  * real      -- zonotope (affine form) of the ideal real value,
  * real_iv   -- interval refinement of the real value,
  * err       -- zonotope of the absolute error (float - real),
  * err_iv    -- interval refinement of the error,
  * rel       -- interval of the relative error, or None when the real
                 value may cross zero (relative error unbounded).

The true triple always satisfies: real in concretize(real) /\\ real_iv,
(float - real) in concretize(err) /\\ err_iv, float in float_iv.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import DivisionByZero, InfeasiblePath, OverflowAlarm
from .numerics import (FloatFormat, RInterval, RationalLike, rat,
                       representation_error_bound, round_directed,
                       round_nearest)
from .zonotope import (AffineForm, Origin, SymbolEnv, SymbolPool, condense,
                       af_div, af_inverse, af_mul, sym_range)

ZERO = Fraction(0)


def _rel_of(err_iv: RInterval, real_iv: RInterval) -> Optional[RInterval]:
    if real_iv.contains(ZERO):
        return None
    return err_iv.divide(real_iv)


def _snap_in(iv: RInterval, fmt: FloatFormat) -> RInterval:
    """Tighten an enclosure of a representable value to representable
    endpoints. Falls back to the original interval when no representable
    value lies inside (the caller will detect infeasibility elsewhere)."""
    try:
        lo = round_directed(iv.lo, fmt, up=True).value
        hi = round_directed(iv.hi, fmt, up=False).value
    except OverflowAlarm:
        return iv
    if lo <= hi:
        return RInterval(lo, hi)
    return iv


@dataclass(frozen=True)
class AbstractFloat:
    float_iv: RInterval
    real: AffineForm
    real_iv: RInterval
    err: AffineForm
    err_iv: RInterval
    rel: Optional[RInterval]

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_input(value_iv: RInterval, err_iv: Optional[RInterval],
                   fmt: FloatFormat, pool: SymbolPool,
                   env: SymbolEnv) -> "AbstractFloat":
        """Program input: real value in value_iv, error in err_iv.

        When err_iv is omitted it defaults to the representation error
        bound of the value interval in the chosen format.
        """
        if err_iv is None:
            err_iv = representation_error_bound(value_iv, fmt)
        real = AffineForm.from_interval(value_iv, pool, Origin.INPUT)
        err = AffineForm.from_interval(err_iv, pool, Origin.INPUT)
        float_iv = _snap_in(value_iv + err_iv, fmt)
        return AbstractFloat(float_iv, real, value_iv, err, err_iv,
                             _rel_of(err_iv, value_iv))

    @staticmethod
    def from_literal(x: RationalLike, fmt: FloatFormat) -> "AbstractFloat":
        """Source literal: ideal value x, machine value round(x)."""
        x = rat(x)
        f = round_nearest(x, fmt).value
        e = f - x
        return AbstractFloat(RInterval.point(f), AffineForm.constant(x),
                             RInterval.point(x), AffineForm.constant(e),
                             RInterval.point(e),
                             _rel_of(RInterval.point(e), RInterval.point(x)))

    @staticmethod
    def exact(x: RationalLike, fmt: FloatFormat) -> "AbstractFloat":
        """A value known exactly and representable (e.g. an int cast)."""
        x = rat(x)
        f = round_nearest(x, fmt).value
        if f != x:
            return AbstractFloat.from_literal(x, fmt)
        return AbstractFloat(RInterval.point(x), AffineForm.constant(x),
                             RInterval.point(x), AffineForm.constant(0),
                             RInterval.point(0), RInterval.point(0)
                             if x != 0 else None)

    # -- refined views ----------------------------------------------------

    def real_refined(self, env: SymbolEnv) -> RInterval:
        m = self.real.concretize(env).meet(self.real_iv)
        if m is None:
            raise InfeasiblePath
        return m

    def err_refined(self, env: SymbolEnv) -> RInterval:
        m = self.err.concretize(env).meet(self.err_iv)
        if m is None:
            raise InfeasiblePath
        return m

    def refresh(self, env: SymbolEnv, fmt: Optional[FloatFormat] = None) -> "AbstractFloat":
        """Re-meet the interval refinements against form concretizations
        and restore mutual consistency (float = real + err)."""
        real_iv = self.real_refined(env)
        err_iv = self.err_refined(env)
        fiv = self.float_iv.meet(real_iv + err_iv)
        if fiv is None:
            raise InfeasiblePath
        real_iv2 = real_iv.meet(fiv - err_iv) or real_iv
        err_iv2 = err_iv.meet(fiv - real_iv) or err_iv
        return AbstractFloat(fiv, self.real, real_iv2, self.err, err_iv2,
                             _rel_of(err_iv2, real_iv2))

    def with_float_iv(self, fiv: RInterval) -> "AbstractFloat":
        return replace(self, float_iv=fiv)


# ---------------------------------------------------------------------------
# Abstract arithmetic
# ---------------------------------------------------------------------------


def _err_pre(op: str, a: AbstractFloat, b: AbstractFloat,
             pool: SymbolPool, env: SymbolEnv,
             quotient: Optional[AffineForm]) -> AffineForm:
    """Error of the exact (pre-rounding) float operation."""
    if op == "+":
        return a.err + b.err
    if op == "-":
        return a.err - b.err
    if op == "*":
        return (af_mul(a.real, b.err, pool, env)
                + af_mul(b.real, a.err, pool, env)
                + af_mul(a.err, b.err, pool, env))
    if op == "/":
        denom = b.real + b.err
        hint = denom.concretize(env).meet(b.float_iv)
        if hint is None or hint.contains(ZERO):
            raise DivisionByZero("abstract division by possibly-zero float")
        numer = a.err - af_mul(quotient, b.err, pool, env)
        return af_div(numer, denom, hint, pool, env)
    raise ValueError(f"unknown operator {op!r}")


def abs_op(op: str, a: AbstractFloat, b: AbstractFloat, fmt: FloatFormat,
           pool: SymbolPool, env: SymbolEnv,
           max_syms: int = 64) -> AbstractFloat:
    """One abstract floating-point operation with rounding-error injection."""
    a_riv = a.real_refined(env)
    b_riv = b.real_refined(env)

    if op == "+":
        real = a.real + b.real
        riv_op = a_riv + b_riv
    elif op == "-":
        real = a.real - b.real
        riv_op = a_riv - b_riv
    elif op == "*":
        real = af_mul(a.real, b.real, pool, env)
        riv_op = a_riv * b_riv
    elif op == "/":
        if b.float_iv.contains(ZERO):
            raise DivisionByZero("abstract division by zero-containing float")
        hint_r = b_riv
        if hint_r.contains(ZERO):
            raise DivisionByZero("abstract division: real divisor may be zero")
        real = af_div(a.real, b.real, hint_r, pool, env)
        riv_op = a_riv.divide(b_riv)
    else:
        raise ValueError(f"unknown operator {op!r}")

    real = condense(real, max_syms, pool, env)
    real_iv = real.concretize(env).meet(riv_op)
    if real_iv is None:
        raise InfeasiblePath

    # float side: thin operands are executed exactly
    if a.float_iv.is_point() and b.float_iv.is_point():
        fa, fb = a.float_iv.lo, b.float_iv.lo
        if op == "/" and fb == 0:
            raise DivisionByZero("float division by zero")
        z = rat_op(op, fa, fb)
        f = round_nearest(z, fmt).value
        float_iv = RInterval.point(f)
        err = AffineForm.constant(f) - real
        err = condense(err, max_syms, pool, env)
        err_iv0 = err.concretize(env).meet(float_iv - real_iv)
        if err_iv0 is None:
            raise InfeasiblePath
        return AbstractFloat(float_iv, real, real_iv, err, err_iv0,
                             _rel_of(err_iv0, real_iv))

    if op == "/":
        z_iv = a.float_iv.divide(b.float_iv)
    elif op == "+":
        z_iv = a.float_iv + b.float_iv
    elif op == "-":
        z_iv = a.float_iv - b.float_iv
    else:
        z_iv = a.float_iv * b.float_iv
    # rounding is monotone, so rounding the exact endpoints is sound
    float_iv = RInterval(round_nearest(z_iv.lo, fmt).value,
                         round_nearest(z_iv.hi, fmt).value)

    err = _err_pre(op, a, b, pool, env,
                   quotient=real if op == "/" else None)
    delta = fmt.unit_roundoff * z_iv.max_abs() + fmt.subnormal_step / 2
    if delta != 0 and not z_iv.is_point():
        err = err + AffineForm(0, {pool.fresh(Origin.ROUNDING): delta})
    elif z_iv.is_point():
        f = round_nearest(z_iv.lo, fmt).value
        err = err.shift(f - z_iv.lo)
    err = condense(err, max_syms, pool, env)

    err_iv = err.concretize(env).meet(float_iv - real_iv)
    if err_iv is None:
        raise InfeasiblePath
    fiv = float_iv.meet(real_iv + err_iv)
    if fiv is None:
        raise InfeasiblePath
    fiv = _snap_in(fiv, fmt)
    return AbstractFloat(fiv, real, real_iv, err, err_iv,
                         _rel_of(err_iv, real_iv))


def rat_op(op: str, x: Fraction, y: Fraction) -> Fraction:
    if op == "+":
        return x + y
    if op == "-":
        return x - y
    if op == "*":
        return x * y
    if op == "/":
        return x / y
    raise ValueError(op)


def abs_neg(a: AbstractFloat) -> AbstractFloat:
    """Unary negation is exact in any binary-or-decimal format."""
    return AbstractFloat(-a.float_iv, -a.real, -a.real_iv, -a.err,
                         -a.err_iv, a.rel)


# ---------------------------------------------------------------------------
# Constraint propagation
# ---------------------------------------------------------------------------


def project_onto_symbols(form: AffineForm, lo: Optional[Fraction],
                         hi: Optional[Fraction],
                         env: SymbolEnv) -> Dict[int, RInterval]:
    """HC4-style projection of `form in [lo, hi]` onto each noise symbol.

    Returns the symbols whose range strictly shrinks. Raises
    InfeasiblePath when the constraint is unsatisfiable.
    """
    conc = form.concretize(env)
    if lo is not None and conc.hi < lo:
        raise InfeasiblePath
    if hi is not None and conc.lo > hi:
        raise InfeasiblePath
    updates: Dict[int, RInterval] = {}
    ranges = {i: sym_range(env, i) for i in form.terms}
    contribs = {i: ranges[i].scale(c) for i, c in form.terms.items()}
    total_lo = form.center + sum(c.lo for c in contribs.values())
    total_hi = form.center + sum(c.hi for c in contribs.values())
    for i, c in form.terms.items():
        other_lo = total_lo - contribs[i].lo
        other_hi = total_hi - contribs[i].hi
        # need: lo <= other + c*eps <= hi for some achievable others
        alo: Optional[Fraction] = None
        ahi: Optional[Fraction] = None
        if lo is not None:
            # c*eps >= lo - other_hi
            bound = lo - other_hi
            if c > 0:
                alo = bound / c
            else:
                ahi = bound / c
        if hi is not None:
            bound = hi - other_lo
            if c > 0:
                ahi2 = bound / c
                ahi = ahi2 if ahi is None else min(ahi, ahi2)
            else:
                alo2 = bound / c
                alo = alo2 if alo is None else max(alo, alo2)
        r = ranges[i]
        nlo = r.lo if alo is None else max(r.lo, alo)
        nhi = r.hi if ahi is None else min(r.hi, ahi)
        if nlo > nhi:
            raise InfeasiblePath
        nr = RInterval(nlo, nhi)
        if nr != r:
            updates[i] = nr
            ranges[i] = nr
            new_contrib = nr.scale(c)
            total_lo += new_contrib.lo - contribs[i].lo
            total_hi += new_contrib.hi - contribs[i].hi
            contribs[i] = nr.scale(c)
    return updates


@dataclass
class Substitution:
    sym: int
    new_range: RInterval
    replacement: AffineForm
    derived_sym: Optional[int]


def make_substitution(sym: int, new_range: RInterval, pool: SymbolPool,
                      env: SymbolEnv) -> Optional[Substitution]:
    """Narrow a symbol's range, producing the derived-symbol rewrite.

    Returns None when the range does not change; raises InfeasiblePath on
    an empty meet. Updates env in place.
    """
    cur = sym_range(env, sym)
    nr = cur.meet(new_range)
    if nr is None:
        raise InfeasiblePath
    if nr == cur:
        return None
    if nr.is_point():
        repl = AffineForm.constant(nr.lo)
        derived = None
    else:
        derived = pool.fresh(Origin.CONSTRAINT)
        repl = AffineForm(nr.mid, {derived: nr.rad})
    env[sym] = nr
    return Substitution(sym, nr, repl, derived)


def apply_substitution(form: AffineForm, sub: Substitution,
                       old_width, env: SymbolEnv,
                       threshold: Fraction) -> AffineForm:
    """Adopt the rewrite on one form if it shrinks its width enough.

    old_width must be the form's width before the symbol's range was
    narrowed; the recorded range shrinks either way, the rewrite only
    changes which symbols carry the correlation.
    """
    if sub.sym not in form.terms:
        return form
    candidate = form.substitute(sub.sym, sub.replacement)
    if old_width <= 0:
        return candidate
    new_width = candidate.width(env)
    if (old_width - new_width) >= threshold * old_width:
        return candidate
    return form


def constrain_forms(forms: List[AffineForm], sym: int, new_range: RInterval,
                    pool: SymbolPool, env: SymbolEnv,
                    threshold: Fraction) -> Tuple[List[AffineForm], Optional[Substitution]]:
    """Spec-level entry point: narrow one symbol across a set of forms."""
    old_widths = [f.width(env) for f in forms]
    sub = make_substitution(sym, new_range, pool, env)
    if sub is None:
        return forms, None
    return [apply_substitution(f, sub, w, env, threshold)
            for f, w in zip(forms, old_widths)], sub


# ---------------------------------------------------------------------------
# Union / merge
# ---------------------------------------------------------------------------


def union(a: AbstractFloat, b: AbstractFloat, pool: SymbolPool,
          env: SymbolEnv) -> AbstractFloat:
    """Join two abstract floats: interval hulls, linear relationships
    dropped (forms are collapsed onto fresh symbols)."""
    fiv = a.float_iv.join(b.float_iv)
    riv = a.real_refined(env).join(b.real_refined(env))
    eiv = a.err_refined(env).join(b.err_refined(env))
    real = AffineForm.from_interval(riv, pool, Origin.NONLINEAR)
    err = AffineForm.from_interval(eiv, pool, Origin.NONLINEAR)
    return AbstractFloat(fiv, real, riv, err, eiv, _rel_of(eiv, riv))


@dataclass
class MergeState:
    """Accumulator for the states reaching a merge point.

    accumulated is None while no feasible path has reached the merge.
    """

    accumulated: Optional[Dict[str, object]] = None

    def is_empty(self) -> bool:
        return self.accumulated is None
