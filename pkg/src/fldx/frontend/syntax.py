"""AST for the analyzed mini-C subset and its assertion annotations."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union


@dataclass(frozen=True)
class Loc:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


NOLOC = Loc(0, 0)


# -- expressions -------------------------------------------------------------


@dataclass
class IntLit:
    value: int
    loc: Loc = NOLOC


@dataclass
class FloatLit:
    text: str
    value: Fraction
    loc: Loc = NOLOC


@dataclass
class Var:
    name: str
    loc: Loc = NOLOC


@dataclass
class Index:
    name: str
    index: "Expr"
    loc: Loc = NOLOC


@dataclass
class Unary:
    op: str  # '-' or '!'
    expr: "Expr"
    loc: Loc = NOLOC


@dataclass
class Binary:
    op: str  # + - * / % < <= > >= == != && ||
    left: "Expr"
    right: "Expr"
    loc: Loc = NOLOC


@dataclass
class Ternary:
    cond: "Expr"
    then: "Expr"
    els: "Expr"
    loc: Loc = NOLOC


@dataclass
class Cast:
    ctype: str  # 'int', 'float', 'double'
    expr: "Expr"
    loc: Loc = NOLOC


@dataclass
class Call:
    name: str
    args: List["Expr"]
    loc: Loc = NOLOC


Expr = Union[IntLit, FloatLit, Var, Index, Unary, Binary, Ternary, Cast, Call]

COMPARISONS = {"<", "<=", ">", ">=", "==", "!="}
ARITH = {"+", "-", "*", "/", "%"}


# -- annotation predicates and terms ----------------------------------------


@dataclass
class TConst:
    value: Fraction
    text: str
    loc: Loc = NOLOC

    @property
    def is_integer(self) -> bool:
        return "." not in self.text and "e" not in self.text.lower()


@dataclass
class TName:
    """A binder or a program left-value; resolved during typing."""
    name: str
    loc: Loc = NOLOC


@dataclass
class TIndex:
    name: str
    index: "Term"
    loc: Loc = NOLOC


@dataclass
class TBin:
    op: str  # + - * /
    left: "Term"
    right: "Term"
    loc: Loc = NOLOC


@dataclass
class TCall:
    """Term-level built-in: min, max, abs, max_distance."""
    name: str
    args: List["Term"]
    loc: Loc = NOLOC


Term = Union[TConst, TName, TIndex, TBin, TCall]


@dataclass
class PRel:
    op: str  # && || ==>
    left: "Pred"
    right: "Pred"
    loc: Loc = NOLOC


@dataclass
class PNot:
    pred: "Pred"
    loc: Loc = NOLOC


@dataclass
class PCmp:
    op: str  # < <= == > >= !=
    left: Term
    right: Term
    loc: Loc = NOLOC


@dataclass
class PLet:
    names: List[str]  # one name, or two for pair-returning built-ins
    value: Union[Term, "PBuiltin"]
    body: "Pred"
    loc: Loc = NOLOC


@dataclass
class PBuiltin:
    name: str
    args: List[Term]
    loc: Loc = NOLOC


Pred = Union[PRel, PNot, PCmp, PLet, PBuiltin]

#: Predicate built-ins and arities (the 𝔽 argument first).
PRED_BUILTINS = {
    "accuracy_enlarge_fval_err": 5,
    "accuracy_enlarge_dval_err": 5,
    "accuracy_assert_ferr": 3,
    "accuracy_assert_derr": 3,
    "accuracy_assert_frelerr": 3,
    "accuracy_assert_drelerr": 3,
    "fprint": 1,
    "dprint": 1,
}

#: Built-ins returning a pair of rationals; only usable under \let.
PAIR_BUILTINS = {
    "accuracy_get_ferr": 1,
    "accuracy_get_derr": 1,
    "accuracy_get_frelerr": 1,
    "accuracy_get_drelerr": 1,
    "accuracy_get_freal": 1,
    "accuracy_get_dreal": 1,
}

TERM_BUILTINS = {"min": 2, "max": 2, "abs": 1, "max_distance": 2}


# -- statements --------------------------------------------------------------


@dataclass
class Decl:
    ctype: str  # 'int', 'float', 'double'
    name: str
    init: Optional[Expr] = None
    array_size: Optional[int] = None
    array_init: Optional[List[Expr]] = None
    loc: Loc = NOLOC


@dataclass
class Assign:
    target: Union[Var, Index]
    expr: Expr
    loc: Loc = NOLOC


@dataclass
class If:
    cond: Expr
    then: "Block"
    els: Optional["Block"] = None
    loc: Loc = NOLOC


@dataclass
class While:
    cond: Expr
    body: "Block"
    loc: Loc = NOLOC


@dataclass
class DoWhile:
    body: "Block"
    cond: Expr
    loc: Loc = NOLOC


@dataclass
class Return:
    expr: Optional[Expr] = None
    loc: Loc = NOLOC


@dataclass
class ExprStmt:
    expr: Expr
    loc: Loc = NOLOC


@dataclass
class AssertStmt:
    pred: Pred
    loc: Loc = NOLOC


@dataclass
class AssumeStmt:
    cond: Expr
    loc: Loc = NOLOC


@dataclass
class Block:
    stmts: List["Stmt"]
    loc: Loc = NOLOC


@dataclass
class SectionStmt:
    """A split-merge section: body re-executed once per feasible path."""
    section_id: int
    save_list: List[str]
    merge_list: List[str]
    body: List["Stmt"]
    loc: Loc = NOLOC


Stmt = Union[Decl, Assign, If, While, DoWhile, Return, ExprStmt, AssertStmt,
             AssumeStmt, Block, SectionStmt]


@dataclass
class Param:
    ctype: str
    name: str
    is_array: bool = False


@dataclass
class FuncDef:
    ret_type: str  # 'int', 'float', 'double', 'void'
    name: str
    params: List[Param]
    body: Block
    loc: Loc = NOLOC
    #: var name -> ('int'|'float'|'double', is_array); filled by resolve()
    var_types: Dict[str, Tuple[str, bool]] = field(default_factory=dict)


@dataclass
class Program:
    functions: Dict[str, FuncDef]

    def function(self, name: str) -> FuncDef:
        return self.functions[name]


# -- helpers -----------------------------------------------------------------


def stmt_children(s: Stmt) -> List[Stmt]:
    if isinstance(s, Block):
        return list(s.stmts)
    if isinstance(s, If):
        out: List[Stmt] = [s.then]
        if s.els is not None:
            out.append(s.els)
        return out
    if isinstance(s, (While,)):
        return [s.body]
    if isinstance(s, DoWhile):
        return [s.body]
    if isinstance(s, SectionStmt):
        return list(s.body)
    return []


def walk_stmts(s: Stmt):
    """Yield s and all its sub-statements, depth first."""
    yield s
    for c in stmt_children(s):
        yield from walk_stmts(c)


def expr_children(e: Expr) -> List[Expr]:
    if isinstance(e, Unary):
        return [e.expr]
    if isinstance(e, Binary):
        return [e.left, e.right]
    if isinstance(e, Ternary):
        return [e.cond, e.then, e.els]
    if isinstance(e, Cast):
        return [e.expr]
    if isinstance(e, Call):
        return list(e.args)
    if isinstance(e, Index):
        return [e.index]
    return []


def walk_exprs(e: Expr):
    yield e
    for c in expr_children(e):
        yield from walk_exprs(c)


def stmt_exprs(s: Stmt) -> List[Expr]:
    """Expressions evaluated directly by this statement (not sub-statements)."""
    if isinstance(s, Decl):
        out: List[Expr] = []
        if s.init is not None:
            out.append(s.init)
        if s.array_init:
            out.extend(s.array_init)
        return out
    if isinstance(s, Assign):
        out = [s.expr]
        if isinstance(s.target, Index):
            out.append(s.target.index)
        return out
    if isinstance(s, (If, While, DoWhile)):
        return [s.cond]
    if isinstance(s, Return):
        return [s.expr] if s.expr is not None else []
    if isinstance(s, (ExprStmt, AssumeStmt)):
        return [s.expr] if isinstance(s, ExprStmt) else [s.cond]
    return []


def vars_read(e: Expr) -> set:
    out = set()
    for n in walk_exprs(e):
        if isinstance(n, Var):
            out.add(n.name)
        elif isinstance(n, Index):
            out.add(n.name)
    return out


def resolve(program: Program) -> None:
    """Check declare-before-use and record variable types per function."""
    from ..errors import TypeErrorAt

    for fn in program.functions.values():
        types: Dict[str, Tuple[str, bool]] = {}
        for p in fn.params:
            types[p.name] = (p.ctype, p.is_array)

        def check_expr(e: Expr) -> None:
            for n in walk_exprs(e):
                if isinstance(n, (Var, Index)) and n.name not in types:
                    raise TypeErrorAt(
                        f"{n.loc}: use of undeclared variable {n.name!r}")
                if isinstance(n, Call) and n.name != "read_double" \
                        and n.name not in program.functions:
                    raise TypeErrorAt(f"{n.loc}: unknown function {n.name!r}")

        def check_stmt(s: Stmt) -> None:
            if isinstance(s, Decl):
                for e in stmt_exprs(s):
                    check_expr(e)
                types[s.name] = (s.ctype, s.array_size is not None)
                return
            for e in stmt_exprs(s):
                check_expr(e)
            for c in stmt_children(s):
                check_stmt(c)

        check_stmt(fn.body)
        fn.var_types = types


def expr_ctype(e: Expr, var_types: Dict[str, Tuple[str, bool]],
               program: Optional[Program] = None) -> str:
    """Static C type of an expression: 'int', 'float' or 'double'."""
    if isinstance(e, IntLit):
        return "int"
    if isinstance(e, FloatLit):
        return "double"
    if isinstance(e, (Var, Index)):
        return var_types[e.name][0]
    if isinstance(e, Unary):
        return "int" if e.op == "!" else expr_ctype(e.expr, var_types, program)
    if isinstance(e, Binary):
        if e.op in COMPARISONS or e.op in ("&&", "||"):
            return "int"
        lt = expr_ctype(e.left, var_types, program)
        rt = expr_ctype(e.right, var_types, program)
        for t in ("double", "float"):
            if lt == t or rt == t:
                return t
        return "int"
    if isinstance(e, Ternary):
        lt = expr_ctype(e.then, var_types, program)
        rt = expr_ctype(e.els, var_types, program)
        for t in ("double", "float"):
            if lt == t or rt == t:
                return t
        return "int"
    if isinstance(e, Cast):
        return e.ctype
    if isinstance(e, Call):
        if e.name == "read_double":
            return "double"
        if program is not None and e.name in program.functions:
            return program.functions[e.name].ret_type
        return "double"
    raise TypeError(f"unknown expression {e!r}")
