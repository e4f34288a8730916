"""Typing of annotation terms and predicates.

Every term receives a judgement carry ~> compute: the operation is
evaluated at the compute type (machine int, big int, machine float, or
exact rationals) and its result fits in the carry type, which may be
smaller (downcast rule). The carry/compute pair decides where exact
rational arithmetic is actually needed.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from ..errors import TypeErrorAt
from ..frontend import syntax as S
from ..numerics import BINARY32, BINARY64, is_representable
from .kinds import (INT_RANGE, IntInterval, Kind, FKind, QKind, Q, ZKind,
                    int_interval_arith, kind_join, theta, type_join, type_le)

CTYPE_KIND = {
    "int": ZKind(IntInterval(*INT_RANGE["int32"])),
    "float": FKind("float"),
    "double": FKind("double"),
}


@dataclass
class TypedTerm:
    term: S.Term
    kind: Kind
    carry: str
    compute: str
    children: List["TypedTerm"] = field(default_factory=list)
    #: 'const' | 'lvalue' | 'binder' | 'op' | 'call'
    role: str = "op"


@dataclass
class TypedCmp:
    op: str
    left: TypedTerm
    right: TypedTerm
    compute: str  # type at which the comparison is decided


TypedPred = Union["TypedRel", "TypedNot", TypedCmp, "TypedLet", "TypedBuiltin"]


@dataclass
class TypedRel:
    op: str
    left: "TypedPred"
    right: "TypedPred"


@dataclass
class TypedNot:
    pred: "TypedPred"


@dataclass
class TypedLet:
    names: List[str]
    value: Union[TypedTerm, "TypedBuiltin"]
    body: "TypedPred"


@dataclass
class TypedBuiltin:
    name: str
    args: List[TypedTerm]
    loc: S.Loc = S.NOLOC


#: Environment for binders introduced by \let.
Gamma = Dict[str, Kind]


def const_kind(t: S.TConst) -> Kind:
    if t.is_integer:
        return ZKind(IntInterval.point(int(t.value)))
    if is_representable(t.value, BINARY64):
        return FKind("double")
    return Q


def infer_interval(t: S.Term, var_types: Dict[str, Tuple[str, bool]],
                   gamma: Gamma) -> IntInterval:
    """Sound integer interval for an integer-kinded term."""
    k = _term_kind(t, var_types, gamma)
    if isinstance(k, ZKind):
        return k.iv
    return IntInterval.top()


def _term_kind(t: S.Term, var_types, gamma: Gamma) -> Kind:
    if isinstance(t, S.TConst):
        return const_kind(t)
    if isinstance(t, S.TName):
        if t.name in gamma:
            return gamma[t.name]
        if t.name in var_types:
            return CTYPE_KIND[var_types[t.name][0]]
        raise TypeErrorAt(f"{t.loc}: unknown name {t.name!r} in annotation")
    if isinstance(t, S.TIndex):
        if t.name not in var_types:
            raise TypeErrorAt(f"{t.loc}: unknown array {t.name!r}")
        return CTYPE_KIND[var_types[t.name][0]]
    if isinstance(t, S.TBin):
        kl = _term_kind(t.left, var_types, gamma)
        kr = _term_kind(t.right, var_types, gamma)
        if isinstance(kl, ZKind) and isinstance(kr, ZKind):
            return ZKind(int_interval_arith(t.op, kl.iv, kr.iv))
        # any non-integer operation is mathematical, hence rational
        return Q
    if isinstance(t, S.TCall):
        kinds = [_term_kind(a, var_types, gamma) for a in t.args]
        if t.name in ("min", "max"):
            return kind_join(kinds[0], kinds[1])
        if t.name == "abs":
            k = kinds[0]
            if isinstance(k, ZKind) and k.iv.is_bounded():
                m = max(abs(k.iv.lo), abs(k.iv.hi))
                return ZKind(IntInterval(0, m))
            return k if isinstance(k, FKind) else Q
        return Q  # max_distance
    raise TypeErrorAt(f"unknown term {t!r}")


def type_term(t: S.Term, var_types, gamma: Optional[Gamma] = None) -> TypedTerm:
    gamma = gamma or {}
    if isinstance(t, S.TConst):
        k = const_kind(t)
        tau = theta(k)
        return TypedTerm(t, k, tau, tau, role="const")
    if isinstance(t, (S.TName, S.TIndex)):
        k = _term_kind(t, var_types, gamma)
        tau = theta(k)
        role = "binder" if isinstance(t, S.TName) and t.name in gamma else "lvalue"
        kids = []
        if isinstance(t, S.TIndex):
            kids = [type_term(t.index, var_types, gamma)]
        return TypedTerm(t, k, tau, tau, kids, role=role)
    if isinstance(t, S.TBin):
        tl = type_term(t.left, var_types, gamma)
        tr = type_term(t.right, var_types, gamma)
        k = _term_kind(t, var_types, gamma)
        compute = theta(kind_join(kind_join(tl.kind, tr.kind), k))
        carry = theta(k)
        if not type_le(carry, compute):
            carry = compute
        return TypedTerm(t, k, carry, compute, [tl, tr], role="op")
    if isinstance(t, S.TCall):
        kids = [type_term(a, var_types, gamma) for a in t.args]
        k = _term_kind(t, var_types, gamma)
        compute = theta(k)
        for kid in kids:
            compute = type_join(compute, kid.carry)
        carry = theta(k)
        if not type_le(carry, compute):
            carry = compute
        return TypedTerm(t, k, carry, compute, kids, role="call")
    raise TypeErrorAt(f"unknown term {t!r}")


def type_cmp(op: str, left: S.Term, right: S.Term, var_types,
             gamma: Gamma) -> TypedCmp:
    tl = type_term(left, var_types, gamma)
    tr = type_term(right, var_types, gamma)
    tau = theta(kind_join(tl.kind, tr.kind))
    return TypedCmp(op, tl, tr, tau)


_FLOAT_ARG_BUILTINS = set(S.PRED_BUILTINS) | set(S.PAIR_BUILTINS)


def _type_builtin(b: S.PBuiltin, var_types, gamma: Gamma) -> TypedBuiltin:
    if b.args and b.name in _FLOAT_ARG_BUILTINS \
            and b.name not in ("fprint", "dprint"):
        first = b.args[0]
        if not isinstance(first, (S.TName, S.TIndex)):
            raise TypeErrorAt(
                f"{b.loc}: first argument of {b.name} must be a program"
                f" variable")
    args = [type_term(a, var_types, gamma) for a in b.args]
    if args:
        k0 = args[0].kind
        want = "float" if ("_f" in b.name or b.name == "fprint") else "double"
        if not isinstance(k0, FKind):
            raise TypeErrorAt(f"{b.loc}: {b.name} expects a floating-point"
                              f" variable, got {args[0].carry}")
        if isinstance(k0, FKind) and not type_le(k0.tau, want):
            raise TypeErrorAt(f"{b.loc}: {b.name} expects a {want} variable,"
                              f" got {k0.tau}")
    return TypedBuiltin(b.name, args, b.loc)


def type_pred(p: S.Pred, var_types, gamma: Optional[Gamma] = None) -> TypedPred:
    gamma = gamma or {}
    if isinstance(p, S.PRel):
        return TypedRel(p.op, type_pred(p.left, var_types, gamma),
                        type_pred(p.right, var_types, gamma))
    if isinstance(p, S.PNot):
        return TypedNot(type_pred(p.pred, var_types, gamma))
    if isinstance(p, S.PCmp):
        return type_cmp(p.op, p.left, p.right, var_types, gamma)
    if isinstance(p, S.PLet):
        if isinstance(p.value, S.PBuiltin):
            if p.value.name not in S.PAIR_BUILTINS:
                raise TypeErrorAt(f"{p.loc}: {p.value.name} cannot be bound"
                                  f" by \\let")
            if len(p.names) != 2:
                raise TypeErrorAt(f"{p.loc}: {p.value.name} returns a pair;"
                                  f" bind two names")
            tv: Union[TypedTerm, TypedBuiltin] = \
                _type_builtin(p.value, var_types, gamma)
            g2 = dict(gamma)
            for n in p.names:
                g2[n] = Q
        else:
            if len(p.names) != 1:
                raise TypeErrorAt(f"{p.loc}: a term \\let binds one name")
            tv = type_term(p.value, var_types, gamma)
            g2 = dict(gamma)
            g2[p.names[0]] = tv.kind
        return TypedLet(p.names, tv, type_pred(p.body, var_types, g2))
    if isinstance(p, S.PBuiltin):
        if p.name in S.PAIR_BUILTINS:
            raise TypeErrorAt(f"{p.loc}: {p.name} returns a pair and is only"
                              f" meaningful under \\let")
        return _type_builtin(p, var_types, gamma)
    raise TypeErrorAt(f"unknown predicate {p!r}")
