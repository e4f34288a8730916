"""Exact-rational shadow execution.

Runs a program on concrete inputs twice in lockstep: once with machine
floating-point semantics (every operation result rounded to nearest in
the chosen format, all arithmetic on exact rationals so the rounding is
itself exact) and once with ideal real semantics. Control flow follows
the machine values, exactly like hardware would. At every assertion
point the pair (float value, real value) of the asserted variable is
recorded; the difference is the true round-off error of this run.

This is deliberately independent from the abstract interpreter: it
shares only the AST and the rounding function, so it can serve as an
oracle for the analyzer's error enclosures.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional

from ..errors import DivisionByZero, FldxError, TypeErrorAt
from ..frontend import syntax as S
from ..numerics import FloatFormat, round_nearest

ZERO = Fraction(0)


@dataclass(frozen=True)
class CVal:
    """One concrete value: exact machine float and exact real."""
    f: Fraction
    r: Fraction

    @property
    def err(self) -> Fraction:
        return self.f - self.r


@dataclass
class ShadowRecord:
    loc: S.Loc
    builtin: str
    variable: Optional[str]
    float_val: Fraction
    real_val: Fraction
    err: Fraction
    holds: Optional[bool]  # None for prints


class _Return(Exception):
    def __init__(self, value):
        self.value = value


class ShadowRun:
    """One concrete dual execution of a program."""

    def __init__(self, program: S.Program, fmt: FloatFormat,
                 inputs: Optional[Dict[str, Fraction]] = None,
                 int_inputs: Optional[Dict[str, int]] = None,
                 array_inputs: Optional[Dict[str, List[Fraction]]] = None
                 ) -> None:
        self.program = program
        self.fmt = fmt
        self.inputs = dict(inputs or {})
        self.int_inputs = dict(int_inputs or {})
        self.array_inputs = dict(array_inputs or {})
        self.records: List[ShadowRecord] = []
        self.vars: Dict[str, object] = {}
        self._fn: Optional[S.FuncDef] = None
        self._depth = 0

    # -- rounding ----------------------------------------------------------

    def _round(self, x: Fraction) -> Fraction:
        return round_nearest(x, self.fmt).value

    def _input_value(self, x: Fraction) -> CVal:
        return CVal(self._round(x), x)

    # -- expressions -------------------------------------------------------

    def eval(self, e: S.Expr, target: Optional[str] = None):
        if isinstance(e, S.IntLit):
            return e.value
        if isinstance(e, S.FloatLit):
            return CVal(self._round(e.value), e.value)
        if isinstance(e, S.Var):
            return self._load(e.name, e.loc)
        if isinstance(e, S.Index):
            arr = self._load(e.name, e.loc)
            i = self._as_int(self.eval(e.index), e.loc)
            if not isinstance(arr, list) or not 0 <= i < len(arr):
                raise FldxError(f"{e.loc}: bad index {i} into {e.name}")
            return arr[i]
        if isinstance(e, S.Unary):
            if e.op == "-":
                v = self.eval(e.expr)
                return CVal(-v.f, -v.r) if isinstance(v, CVal) else -v
            return 0 if self.truth(e.expr) else 1
        if isinstance(e, S.Binary):
            if e.op in S.COMPARISONS or e.op in ("&&", "||"):
                return 1 if self.truth(e) else 0
            return self._arith(e)
        if isinstance(e, S.Ternary):
            return self.eval(e.then) if self.truth(e.cond) \
                else self.eval(e.els)
        if isinstance(e, S.Cast):
            v = self.eval(e.expr)
            if e.ctype in ("float", "double"):
                if isinstance(v, CVal):
                    return v
                return CVal(self._round(Fraction(v)), Fraction(v))
            if isinstance(v, CVal):
                return _trunc(v.f)
            return v
        if isinstance(e, S.Call):
            return self._call(e, target)
        raise TypeErrorAt(f"unknown expression {e!r}")

    def _arith(self, e: S.Binary):
        a = self.eval(e.left)
        b = self.eval(e.right)
        if isinstance(a, int) and isinstance(b, int):
            if e.op == "+":
                return a + b
            if e.op == "-":
                return a - b
            if e.op == "*":
                return a * b
            if b == 0:
                raise DivisionByZero(f"{e.loc}: integer division by zero")
            if e.op == "/":
                return _trunc(Fraction(a, b))
            if e.op == "%":
                return a - _trunc(Fraction(a, b)) * b
            raise TypeErrorAt(f"{e.loc}: bad integer operator {e.op!r}")
        av = self._as_cval(a)
        bv = self._as_cval(b)
        if e.op == "+":
            f, r = av.f + bv.f, av.r + bv.r
        elif e.op == "-":
            f, r = av.f - bv.f, av.r - bv.r
        elif e.op == "*":
            f, r = av.f * bv.f, av.r * bv.r
        elif e.op == "/":
            if bv.f == 0 or bv.r == 0:
                raise DivisionByZero(f"{e.loc}: float division by zero")
            f, r = av.f / bv.f, av.r / bv.r
        else:
            raise TypeErrorAt(f"{e.loc}: bad float operator {e.op!r}")
        return CVal(self._round(f), r)

    def _as_cval(self, v) -> CVal:
        if isinstance(v, CVal):
            return v
        x = Fraction(v)
        return CVal(x, x)  # int-to-float promotion of small ints is exact

    def _as_int(self, v, loc: S.Loc) -> int:
        if isinstance(v, int):
            return v
        raise TypeErrorAt(f"{loc}: expected an integer")

    def _load(self, name: str, loc: S.Loc):
        if name not in self.vars:
            raise FldxError(f"{loc}: read of unset variable {name!r}")
        return self.vars[name]

    def _call(self, e: S.Call, target: Optional[str]):
        if e.name == "read_double":
            if target is not None and target in self.inputs:
                return self._input_value(self.inputs[target])
            raise FldxError(f"{e.loc}: no concrete input bound for"
                            f" read_double result")
        fn = self.program.functions.get(e.name)
        if fn is None:
            raise TypeErrorAt(f"{e.loc}: unknown function {e.name!r}")
        if self._depth > 64:
            raise FldxError(f"{e.loc}: call depth exceeded")
        args = [self.eval(a) for a in e.args]
        saved, saved_fn = self.vars, self._fn
        self.vars = dict(zip((p.name for p in fn.params), args))
        self._fn = fn
        self._depth += 1
        try:
            self.exec_stmts(fn.body.stmts)
            out = None
        except _Return as r:
            out = r.value
        finally:
            self._depth -= 1
            self.vars, self._fn = saved, saved_fn
        return out

    # -- control -----------------------------------------------------------

    def truth(self, e: S.Expr) -> bool:
        if isinstance(e, S.Unary) and e.op == "!":
            return not self.truth(e.expr)
        if isinstance(e, S.Binary) and e.op == "&&":
            return self.truth(e.left) and self.truth(e.right)
        if isinstance(e, S.Binary) and e.op == "||":
            return self.truth(e.left) or self.truth(e.right)
        if isinstance(e, S.Binary) and e.op in S.COMPARISONS:
            a = self.eval(e.left)
            b = self.eval(e.right)
            x = a.f if isinstance(a, CVal) else a
            y = b.f if isinstance(b, CVal) else b
            if isinstance(a, CVal) or isinstance(b, CVal):
                x, y = Fraction(x), Fraction(y)
            return _cmp(e.op, x, y)
        v = self.eval(e)
        return (v.f if isinstance(v, CVal) else v) != 0

    # -- statements --------------------------------------------------------

    def exec_stmts(self, stmts: List[S.Stmt]) -> None:
        for s in stmts:
            self.exec_stmt(s)

    def exec_stmt(self, s: S.Stmt) -> None:
        if isinstance(s, S.Decl):
            self._decl(s)
        elif isinstance(s, S.Assign):
            self._assign(s)
        elif isinstance(s, S.If):
            if self.truth(s.cond):
                self.exec_stmts(s.then.stmts)
            elif s.els is not None:
                self.exec_stmts(s.els.stmts)
        elif isinstance(s, S.While):
            while self.truth(s.cond):
                self.exec_stmts(s.body.stmts)
        elif isinstance(s, S.DoWhile):
            while True:
                self.exec_stmts(s.body.stmts)
                if not self.truth(s.cond):
                    break
        elif isinstance(s, S.Return):
            raise _Return(self.eval(s.expr) if s.expr is not None else None)
        elif isinstance(s, S.ExprStmt):
            self.eval(s.expr)
        elif isinstance(s, S.AssertStmt):
            self._assert(s)
        elif isinstance(s, S.AssumeStmt):
            pass  # analysis-only hypothesis; concrete runs need none
        elif isinstance(s, S.Block):
            self.exec_stmts(s.stmts)
        elif isinstance(s, S.SectionStmt):
            self.exec_stmts(s.body)  # markers are no-ops concretely
        else:
            raise TypeErrorAt(f"unknown statement {s!r}")

    def _coerce(self, ctype: str, v, loc: S.Loc):
        if ctype == "int":
            if isinstance(v, CVal):
                return _trunc(v.f)
            return self._as_int(v, loc)
        return self._as_cval(v)

    def _decl(self, s: S.Decl) -> None:
        if s.array_size is not None:
            if s.array_init is not None:
                self.vars[s.name] = [self._coerce(s.ctype, self.eval(x), s.loc)
                                     for x in s.array_init]
            elif s.name in self.array_inputs:
                self.vars[s.name] = [self._input_value(x)
                                     for x in self.array_inputs[s.name]]
            else:
                zero = 0 if s.ctype == "int" else CVal(ZERO, ZERO)
                self.vars[s.name] = [zero] * s.array_size
            return
        if s.init is not None:
            self.vars[s.name] = self._coerce(
                s.ctype, self.eval(s.init, target=s.name), s.loc)

    def _assign(self, s: S.Assign) -> None:
        name = s.target.name
        ctype = (self._fn.var_types.get(name, ("double", False))[0]
                 if self._fn else "double")
        v = self._coerce(ctype, self.eval(s.expr, target=name), s.loc)
        if isinstance(s.target, S.Var):
            self.vars[name] = v
            return
        arr = self._load(name, s.loc)
        i = self._as_int(self.eval(s.target.index), s.loc)
        if not isinstance(arr, list) or not 0 <= i < len(arr):
            raise FldxError(f"{s.loc}: bad write index {i} into {name}")
        arr[i] = v

    # -- assertions --------------------------------------------------------

    def _assert(self, s: S.AssertStmt) -> None:
        self._pred(s.pred, {}, s.loc)

    def _pred(self, p: S.Pred, binders: Dict[str, Fraction],
              loc: S.Loc) -> Optional[bool]:
        if isinstance(p, S.PRel):
            a = self._pred(p.left, binders, loc)
            b = self._pred(p.right, binders, loc)
            if p.op == "&&":
                return None if a is None or b is None else a and b
            if p.op == "||":
                return None if a is None or b is None else a or b
            if p.op == "==>":
                if a is False:
                    return True
                return b
            return None
        if isinstance(p, S.PNot):
            a = self._pred(p.pred, binders, loc)
            return None if a is None else not a
        if isinstance(p, S.PCmp):
            return _cmp(p.op, self._term(p.left, binders, loc),
                        self._term(p.right, binders, loc))
        if isinstance(p, S.PLet):
            if isinstance(p.value, S.PBuiltin):
                lo, hi = self._pair_builtin(p.value, binders, loc)
                nb = dict(binders)
                nb[p.names[0]] = lo
                if len(p.names) > 1:
                    nb[p.names[1]] = hi
            else:
                nb = dict(binders)
                nb[p.names[0]] = self._term(p.value, binders, loc)
            return self._pred(p.body, nb, loc)
        if isinstance(p, S.PBuiltin):
            return self._builtin(p, binders, loc)
        raise TypeErrorAt(f"unknown predicate {p!r}")

    def _lvalue_cval(self, t: S.Term, loc: S.Loc) -> CVal:
        if isinstance(t, S.TName):
            v = self._load(t.name, loc)
        elif isinstance(t, S.TIndex):
            arr = self._load(t.name, loc)
            i = int(self._term(t.index, {}, loc))
            v = arr[i]
        else:
            raise TypeErrorAt(f"{loc}: built-in needs an lvalue")
        return self._as_cval(v)

    def _pair_builtin(self, b: S.PBuiltin, binders, loc):
        v = self._lvalue_cval(b.args[0], loc)
        if b.name.endswith("_real"):
            return v.r, v.r
        if b.name.endswith("_relerr"):
            if v.r == 0:
                raise FldxError(f"{loc}: relative error undefined (real"
                                f" value is 0)")
            rel = v.err / abs(v.r)
            return rel, rel
        return v.err, v.err

    def _builtin(self, b: S.PBuiltin, binders, loc) -> Optional[bool]:
        name = b.name
        if name in ("fprint", "dprint"):
            v = self._lvalue_cval(b.args[0], loc)
            self.records.append(ShadowRecord(loc, name, _lv_name(b.args[0]),
                                             v.f, v.r, v.err, None))
            return True
        if name.startswith("accuracy_enlarge"):
            # the concrete run keeps its exact value; widening only
            # affects the abstract analysis
            return True
        if name.startswith("accuracy_assert"):
            v = self._lvalue_cval(b.args[0], loc)
            lo = self._term(b.args[1], binders, loc)
            hi = self._term(b.args[2], binders, loc)
            if name.endswith("relerr"):
                if v.r == 0:
                    raise FldxError(f"{loc}: relative error undefined")
                quantity = v.err / abs(v.r)
            else:
                quantity = v.err
            holds = lo <= quantity <= hi
            self.records.append(ShadowRecord(loc, name, _lv_name(b.args[0]),
                                             v.f, v.r, v.err, holds))
            return holds
        raise TypeErrorAt(f"unknown builtin {name!r}")

    def _term(self, t: S.Term, binders: Dict[str, Fraction],
              loc: S.Loc) -> Fraction:
        if isinstance(t, S.TConst):
            return Fraction(t.value)
        if isinstance(t, S.TName):
            if t.name in binders:
                return binders[t.name]
            v = self._load(t.name, loc)
            return Fraction(v) if isinstance(v, int) else v.f
        if isinstance(t, S.TIndex):
            arr = self._load(t.name, loc)
            i = int(self._term(t.index, binders, loc))
            v = arr[i]
            return Fraction(v) if isinstance(v, int) else v.f
        if isinstance(t, S.TBin):
            a = self._term(t.left, binders, loc)
            b = self._term(t.right, binders, loc)
            if t.op == "+":
                return a + b
            if t.op == "-":
                return a - b
            if t.op == "*":
                return a * b
            if b == 0:
                raise DivisionByZero(f"{loc}: division by zero in term")
            if a.denominator == 1 and b.denominator == 1:
                return Fraction(_trunc(a / b))
            return a / b
        if isinstance(t, S.TCall):
            if t.name == "max_distance":
                return self._max_distance(t, binders, loc)
            args = [self._term(x, binders, loc) for x in t.args]
            if t.name == "min":
                return min(args)
            if t.name == "max":
                return max(args)
            if t.name == "abs":
                return abs(args[0])
            raise TypeErrorAt(f"unknown term builtin {t.name!r}")
        raise TypeErrorAt(f"unknown term {t!r}")

    def _max_distance(self, t: S.TCall, binders, loc) -> Fraction:
        a0 = t.args[0]
        if not isinstance(a0, S.TName):
            raise TypeErrorAt(f"{loc}: max_distance needs an array name")
        arr = self._load(a0.name, loc)
        n = int(self._term(t.args[1], binders, loc))
        best = ZERO
        for i in range(n - 1):
            d = abs(self._as_cval(arr[i + 1]).f - self._as_cval(arr[i]).f)
            best = max(best, d)
        return best

    # -- entry -------------------------------------------------------------

    def run(self, entry: str):
        fn = self.program.functions[entry]
        self._fn = fn
        for p in fn.params:
            if p.is_array:
                if p.name not in self.array_inputs:
                    raise FldxError(f"no concrete array input for {p.name!r}")
                self.vars[p.name] = [self._input_value(x)
                                     for x in self.array_inputs[p.name]]
            elif p.ctype == "int":
                if p.name not in self.int_inputs:
                    raise FldxError(f"no concrete int input for {p.name!r}")
                self.vars[p.name] = self.int_inputs[p.name]
            else:
                if p.name not in self.inputs:
                    raise FldxError(f"no concrete input for {p.name!r}")
                self.vars[p.name] = self._input_value(self.inputs[p.name])
        try:
            self.exec_stmts(fn.body.stmts)
        except _Return as r:
            return r.value
        return None


def _trunc(x: Fraction) -> int:
    return x.numerator // x.denominator if x >= 0 \
        else -((-x.numerator) // x.denominator)


def _cmp(op: str, a: Fraction, b: Fraction) -> bool:
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    if op == "==":
        return a == b
    if op == "!=":
        return a != b
    raise TypeErrorAt(f"unknown comparison {op!r}")


def _lv_name(t: S.Term) -> Optional[str]:
    return t.name if isinstance(t, (S.TName, S.TIndex)) else None
