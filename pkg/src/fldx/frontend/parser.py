"""Hand-written lexer and recursive-descent parser for the mini-C subset.

Annotation comments ``/*@ ... */`` carry accuracy assertions and
split/merge section markers; they are lexed as single tokens and parsed
with a dedicated sub-grammar.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from ..errors import SyntaxErrorAt
from . import syntax as S

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<line_comment>//[^\n]*)
  | (?P<annot>/\*@.*?\*/)
  | (?P<comment>/\*.*?\*/)
  | (?P<num>(\d+\.\d*|\.\d+|\d+)([eE][-+]?\d+)?)
  | (?P<ident>[A-Za-z_]\w*)
  | (?P<op><=|>=|==|!=|&&|\|\||[-+*/%<>=!?:;,(){}\[\]])
    """,
    re.VERBOSE | re.DOTALL,
)

KEYWORDS = {"int", "float", "double", "void", "if", "else", "while", "do",
            "return", "assume"}


class Token:
    __slots__ = ("kind", "text", "loc")

    def __init__(self, kind: str, text: str, loc: S.Loc) -> None:
        self.kind = kind  # 'num', 'ident', 'op', 'kw', 'annot', 'eof'
        self.text = text
        self.loc = loc

    def __repr__(self) -> str:
        return f"Token({self.kind}, {self.text!r})"


def tokenize(src: str) -> List[Token]:
    toks: List[Token] = []
    pos = 0
    line, col = 1, 1
    n = len(src)
    while pos < n:
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise SyntaxErrorAt(f"unexpected character {src[pos]!r}", line, col)
        text = m.group(0)
        kind = m.lastgroup
        loc = S.Loc(line, col)
        if kind == "num":
            toks.append(Token("num", text, loc))
        elif kind == "ident":
            toks.append(Token("kw" if text in KEYWORDS else "ident", text, loc))
        elif kind == "op":
            toks.append(Token("op", text, loc))
        elif kind == "annot":
            toks.append(Token("annot", text, loc))
        # whitespace and plain comments are skipped
        nl = text.count("\n")
        if nl:
            line += nl
            col = len(text) - text.rfind("\n")
        else:
            col += len(text)
        pos = m.end()
    toks.append(Token("eof", "", S.Loc(line, col)))
    return toks


def _number_value(text: str) -> Fraction:
    return Fraction(text) if ("." in text or "e" in text or "E" in text) \
        else Fraction(int(text))


def _is_float_literal(text: str) -> bool:
    return "." in text or "e" in text or "E" in text


class _Cursor:
    def __init__(self, toks: List[Token]) -> None:
        self.toks = toks
        self.i = 0

    @property
    def cur(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        if t.kind != "eof":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.cur.text == text and self.cur.kind in ("op", "kw")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            t = self.cur
            raise SyntaxErrorAt(f"expected {text!r}, found {t.text!r}",
                                t.loc.line, t.loc.col)
        return self.advance()

    def expect_kind(self, kind: str) -> Token:
        if self.cur.kind != kind:
            t = self.cur
            raise SyntaxErrorAt(f"expected {kind}, found {t.text!r}",
                                t.loc.line, t.loc.col)
        return self.advance()

    def error(self, msg: str):
        t = self.cur
        raise SyntaxErrorAt(msg, t.loc.line, t.loc.col)


# ---------------------------------------------------------------------------
# Expressions (precedence climbing)
# ---------------------------------------------------------------------------

_BIN_LEVELS = [
    ["||"],
    ["&&"],
    ["==", "!="],
    ["<", "<=", ">", ">="],
    ["+", "-"],
    ["*", "/", "%"],
]


def _parse_expr(c: _Cursor) -> S.Expr:
    return _parse_ternary(c)


def _parse_ternary(c: _Cursor) -> S.Expr:
    cond = _parse_binary(c, 0)
    if c.accept("?"):
        loc = cond.loc
        then = _parse_expr(c)
        c.expect(":")
        els = _parse_ternary(c)
        return S.Ternary(cond, then, els, loc)
    return cond


def _parse_binary(c: _Cursor, level: int) -> S.Expr:
    if level >= len(_BIN_LEVELS):
        return _parse_unary(c)
    left = _parse_binary(c, level + 1)
    while c.cur.kind == "op" and c.cur.text in _BIN_LEVELS[level]:
        op = c.advance().text
        right = _parse_binary(c, level + 1)
        left = S.Binary(op, left, right, left.loc)
    return left


def _parse_unary(c: _Cursor) -> S.Expr:
    t = c.cur
    if c.accept("-"):
        return S.Unary("-", _parse_unary(c), t.loc)
    if c.accept("!"):
        return S.Unary("!", _parse_unary(c), t.loc)
    return _parse_primary(c)


def _parse_primary(c: _Cursor) -> S.Expr:
    t = c.cur
    if t.kind == "num":
        c.advance()
        if _is_float_literal(t.text):
            return S.FloatLit(t.text, _number_value(t.text), t.loc)
        return S.IntLit(int(t.text), t.loc)
    if c.at("("):
        # cast or parenthesized expression
        nxt = c.toks[c.i + 1]
        if nxt.kind == "kw" and nxt.text in ("int", "float", "double") \
                and c.toks[c.i + 2].text == ")":
            c.advance()
            ctype = c.advance().text
            c.advance()
            return S.Cast(ctype, _parse_unary(c), t.loc)
        c.advance()
        e = _parse_expr(c)
        c.expect(")")
        return e
    if t.kind == "ident":
        c.advance()
        if c.at("("):
            c.advance()
            args: List[S.Expr] = []
            if not c.at(")"):
                args.append(_parse_expr(c))
                while c.accept(","):
                    args.append(_parse_expr(c))
            c.expect(")")
            return S.Call(t.text, args, t.loc)
        if c.accept("["):
            idx = _parse_expr(c)
            c.expect("]")
            return S.Index(t.text, idx, t.loc)
        return S.Var(t.text, t.loc)
    c.error(f"unexpected token {t.text!r} in expression")


# ---------------------------------------------------------------------------
# Annotations
# ---------------------------------------------------------------------------

_ANNOT_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(\d+\.\d*|\.\d+|\d+)([eE][-+]?\d+)?)
  | (?P<let>\\let)
  | (?P<ident>[A-Za-z_]\w*)
  | (?P<op>==>|<=|>=|==|!=|&&|\|\||[-+*/<>=!?:;,()\[\]])
    """,
    re.VERBOSE,
)


def _tokenize_annot(body: str, loc: S.Loc) -> List[Token]:
    toks: List[Token] = []
    pos = 0
    while pos < len(body):
        m = _ANNOT_RE.match(body, pos)
        if m is None:
            raise SyntaxErrorAt(f"bad annotation character {body[pos]!r}",
                                loc.line, loc.col)
        kind = m.lastgroup
        text = m.group(0)
        if kind == "num":
            toks.append(Token("num", text, loc))
        elif kind == "ident":
            toks.append(Token("ident", text, loc))
        elif kind == "let":
            toks.append(Token("let", text, loc))
        elif kind == "op":
            toks.append(Token("op", text, loc))
        pos = m.end()
    toks.append(Token("eof", "", loc))
    return toks


def _parse_term(c: _Cursor) -> S.Term:
    return _parse_term_add(c)


def _parse_term_add(c: _Cursor) -> S.Term:
    left = _parse_term_mul(c)
    while c.cur.text in ("+", "-") and c.cur.kind == "op":
        op = c.advance().text
        left = S.TBin(op, left, _parse_term_mul(c), left.loc)
    return left


def _parse_term_mul(c: _Cursor) -> S.Term:
    left = _parse_term_unary(c)
    while c.cur.text in ("*", "/") and c.cur.kind == "op":
        op = c.advance().text
        left = S.TBin(op, left, _parse_term_unary(c), left.loc)
    return left


def _parse_term_unary(c: _Cursor) -> S.Term:
    t = c.cur
    if c.accept("-"):
        inner = _parse_term_unary(c)
        if isinstance(inner, S.TConst):
            return S.TConst(-inner.value, "-" + inner.text, t.loc)
        return S.TBin("-", S.TConst(Fraction(0), "0", t.loc), inner, t.loc)
    return _parse_term_primary(c)


def _parse_term_primary(c: _Cursor) -> S.Term:
    t = c.cur
    if t.kind == "num":
        c.advance()
        return S.TConst(_number_value(t.text), t.text, t.loc)
    if c.accept("("):
        e = _parse_term(c)
        c.expect(")")
        return e
    if t.kind == "ident":
        c.advance()
        if c.at("("):
            if t.text not in S.TERM_BUILTINS:
                raise SyntaxErrorAt(f"unknown term function {t.text!r}",
                                    t.loc.line, t.loc.col)
            c.advance()
            args = [_parse_term(c)]
            while c.accept(","):
                args.append(_parse_term(c))
            c.expect(")")
            if len(args) != S.TERM_BUILTINS[t.text]:
                raise SyntaxErrorAt(f"{t.text} expects "
                                    f"{S.TERM_BUILTINS[t.text]} arguments",
                                    t.loc.line, t.loc.col)
            return S.TCall(t.text, args, t.loc)
        if c.accept("["):
            idx = _parse_term(c)
            c.expect("]")
            return S.TIndex(t.text, idx, t.loc)
        return S.TName(t.text, t.loc)
    c.error(f"unexpected token {t.text!r} in annotation term")


_CMP_OPS = ("<=", ">=", "==", "!=", "<", ">")


def _parse_pred(c: _Cursor) -> S.Pred:
    return _parse_pred_impl(c)


def _parse_pred_impl(c: _Cursor) -> S.Pred:
    left = _parse_pred_or(c)
    if c.accept("==>"):
        return S.PRel("==>", left, _parse_pred_impl(c), left.loc)
    return left


def _parse_pred_or(c: _Cursor) -> S.Pred:
    left = _parse_pred_and(c)
    while c.accept("||"):
        left = S.PRel("||", left, _parse_pred_and(c), left.loc)
    return left


def _parse_pred_and(c: _Cursor) -> S.Pred:
    left = _parse_pred_atom(c)
    while c.accept("&&"):
        left = S.PRel("&&", left, _parse_pred_atom(c), left.loc)
    return left


def _parse_pred_atom(c: _Cursor) -> S.Pred:
    t = c.cur
    if c.accept("!"):
        return S.PNot(_parse_pred_atom(c), t.loc)
    if c.cur.kind == "let":
        c.advance()
        parens = bool(c.accept("("))
        names = [c.expect_kind("ident").text]
        while c.accept(","):
            names.append(c.expect_kind("ident").text)
        if parens:
            c.expect(")")
        c.expect("=")
        value: Union[S.Term, S.PBuiltin]
        if c.cur.kind == "ident" and c.cur.text in S.PAIR_BUILTINS \
                and c.toks[c.i + 1].text == "(":
            name_tok = c.advance()
            c.advance()
            args = [_parse_term(c)]
            while c.accept(","):
                args.append(_parse_term(c))
            c.expect(")")
            value = S.PBuiltin(name_tok.text, args, name_tok.loc)
        else:
            value = _parse_term(c)
        c.expect(";")
        body = _parse_pred(c)
        return S.PLet(names, value, body, t.loc)
    if c.cur.kind == "ident" and c.cur.text in S.PRED_BUILTINS \
            and c.toks[c.i + 1].text == "(":
        name_tok = c.advance()
        c.advance()
        args: List[S.Term] = []
        if not c.at(")"):
            args.append(_parse_term(c))
            while c.accept(","):
                args.append(_parse_term(c))
        c.expect(")")
        if len(args) != S.PRED_BUILTINS[name_tok.text]:
            raise SyntaxErrorAt(
                f"{name_tok.text} expects {S.PRED_BUILTINS[name_tok.text]}"
                f" arguments", name_tok.loc.line, name_tok.loc.col)
        return S.PBuiltin(name_tok.text, args, name_tok.loc)
    if c.at("("):
        # Could be a parenthesized predicate or the start of a term.
        mark = c.i
        try:
            c.advance()
            p = _parse_pred(c)
            c.expect(")")
            return p
        except SyntaxErrorAt:
            c.i = mark
        left = _parse_term(c)
        return _finish_cmp(c, left)
    left = _parse_term(c)
    return _finish_cmp(c, left)


def _finish_cmp(c: _Cursor, left: S.Term) -> S.Pred:
    if c.cur.kind == "op" and c.cur.text in _CMP_OPS:
        op = c.advance().text
        right = _parse_term(c)
        p: S.Pred = S.PCmp(op, left, right, left.loc)
        # allow chained comparisons a <= b <= c
        while c.cur.kind == "op" and c.cur.text in _CMP_OPS:
            op2 = c.advance().text
            mid = right
            right = _parse_term(c)
            p = S.PRel("&&", p, S.PCmp(op2, mid, right, mid.loc), left.loc)
        return p
    c.error("expected a comparison in annotation")


_MARKER_RE = re.compile(r"^\s*(split|merge)\s*\(\s*(\d+)\s*((?:,\s*[A-Za-z_]\w*\s*)*)\)\s*;?\s*$")


def parse_annotation(tok: Token):
    """Parse an /*@ ... */ token into ('assert', pred) or a section marker
    ('split'|'merge', id, [vars])."""
    body = tok.text[3:-2].strip()
    m = _MARKER_RE.match(body)
    if m is not None:
        names = [s.strip() for s in m.group(3).split(",") if s.strip()]
        return (m.group(1), int(m.group(2)), names)
    if body.startswith("assert"):
        body = body[len("assert"):]
    if body.endswith(";"):
        body = body[:-1]
    c = _Cursor(_tokenize_annot(body, tok.loc))
    pred = _parse_pred(c)
    if c.cur.kind != "eof":
        raise SyntaxErrorAt(f"trailing tokens in annotation: {c.cur.text!r}",
                            tok.loc.line, tok.loc.col)
    return ("assert", pred)


# ---------------------------------------------------------------------------
# Statements and programs
# ---------------------------------------------------------------------------


def _parse_block(c: _Cursor) -> S.Block:
    loc = c.expect("{").loc
    stmts: List[S.Stmt] = []
    open_sections: List[Tuple[int, List[str], List[S.Stmt], S.Loc, List[S.Stmt]]] = []

    def sink() -> List[S.Stmt]:
        return open_sections[-1][4] if open_sections else stmts

    while not c.at("}"):
        if c.cur.kind == "annot":
            tok = c.advance()
            parsed = parse_annotation(tok)
            if parsed[0] == "assert":
                sink().append(S.AssertStmt(parsed[1], tok.loc))
            elif parsed[0] == "split":
                open_sections.append((parsed[1], parsed[2], [], tok.loc, []))
            else:  # merge
                if not open_sections or open_sections[-1][0] != parsed[1]:
                    raise SyntaxErrorAt(f"unmatched merge({parsed[1]})",
                                        tok.loc.line, tok.loc.col)
                sid, save, _, sloc, body = open_sections.pop()
                sink().append(S.SectionStmt(sid, save, parsed[2], body, sloc))
            continue
        sink().append(_parse_stmt(c))
    if open_sections:
        sid, _, _, sloc, _ = open_sections[-1]
        raise SyntaxErrorAt(f"split({sid}) without matching merge",
                            sloc.line, sloc.col)
    c.expect("}")
    return S.Block(stmts, loc)


def _parse_stmt(c: _Cursor) -> S.Stmt:
    t = c.cur
    if c.at("{"):
        return _parse_block(c)
    if t.kind == "kw" and t.text in ("int", "float", "double"):
        c.advance()
        name = c.expect_kind("ident").text
        if c.accept("["):
            size_tok = c.expect_kind("num")
            size = int(size_tok.text)
            c.expect("]")
            init_list: Optional[List[S.Expr]] = None
            if c.accept("="):
                c.expect("{")
                init_list = [_parse_expr(c)]
                while c.accept(","):
                    init_list.append(_parse_expr(c))
                c.expect("}")
                if len(init_list) != size:
                    raise SyntaxErrorAt(
                        f"array {name} initializer has {len(init_list)}"
                        f" elements for size {size}", t.loc.line, t.loc.col)
            c.expect(";")
            return S.Decl(t.text, name, None, size, init_list, t.loc)
        init = None
        if c.accept("="):
            init = _parse_expr(c)
        c.expect(";")
        return S.Decl(t.text, name, init, None, None, t.loc)
    if c.accept("if"):
        c.expect("(")
        cond = _parse_expr(c)
        c.expect(")")
        then = _as_block(_parse_stmt(c))
        els = None
        if c.accept("else"):
            els = _as_block(_parse_stmt(c))
        return S.If(cond, then, els, t.loc)
    if c.accept("while"):
        c.expect("(")
        cond = _parse_expr(c)
        c.expect(")")
        return S.While(cond, _as_block(_parse_stmt(c)), t.loc)
    if c.accept("do"):
        body = _as_block(_parse_stmt(c))
        c.expect("while")
        c.expect("(")
        cond = _parse_expr(c)
        c.expect(")")
        c.expect(";")
        return S.DoWhile(body, cond, t.loc)
    if c.accept("return"):
        e = None if c.at(";") else _parse_expr(c)
        c.expect(";")
        return S.Return(e, t.loc)
    if c.accept("assume"):
        c.expect("(")
        cond = _parse_expr(c)
        c.expect(")")
        c.expect(";")
        return S.AssumeStmt(cond, t.loc)
    # assignment or expression statement
    e = _parse_expr(c)
    if c.accept("="):
        if not isinstance(e, (S.Var, S.Index)):
            raise SyntaxErrorAt("assignment target must be a variable or"
                                " array element", t.loc.line, t.loc.col)
        rhs = _parse_expr(c)
        c.expect(";")
        return S.Assign(e, rhs, t.loc)
    c.expect(";")
    return S.ExprStmt(e, t.loc)


def _as_block(s: S.Stmt) -> S.Block:
    return s if isinstance(s, S.Block) else S.Block([s], s.loc)


def _parse_function(c: _Cursor) -> S.FuncDef:
    t = c.cur
    if not (t.kind == "kw" and t.text in ("int", "float", "double", "void")):
        c.error(f"expected a function definition, found {t.text!r}")
    ret = c.advance().text
    name = c.expect_kind("ident").text
    c.expect("(")
    params: List[S.Param] = []
    if not c.at(")"):
        if c.at("void") and c.toks[c.i + 1].text == ")":
            c.advance()
        else:
            params.append(_parse_param(c))
            while c.accept(","):
                params.append(_parse_param(c))
    c.expect(")")
    body = _parse_block(c)
    return S.FuncDef(ret, name, params, body, t.loc)


def _parse_param(c: _Cursor) -> S.Param:
    t = c.cur
    if not (t.kind == "kw" and t.text in ("int", "float", "double")):
        c.error(f"expected a parameter type, found {t.text!r}")
    ctype = c.advance().text
    is_array = False
    if c.accept("*"):
        is_array = True
    name = c.expect_kind("ident").text
    if c.accept("["):
        if c.cur.kind == "num":
            c.advance()
        is_array = True
        c.expect("]")
    return S.Param(ctype, name, is_array)


def parse_program(src: str) -> S.Program:
    c = _Cursor(tokenize(src))
    funcs = {}
    while c.cur.kind != "eof":
        fn = _parse_function(c)
        if fn.name in funcs:
            raise SyntaxErrorAt(f"duplicate function {fn.name!r}",
                                fn.loc.line, fn.loc.col)
        funcs[fn.name] = fn
    prog = S.Program(funcs)
    S.resolve(prog)
    return prog


def parse_expr(src: str) -> S.Expr:
    """Parse a standalone expression (test helper)."""
    c = _Cursor(tokenize(src))
    e = _parse_expr(c)
    if c.cur.kind != "eof":
        c.error("trailing tokens after expression")
    return e


def parse_pred(src: str) -> S.Pred:
    """Parse a standalone annotation predicate (test helper)."""
    c = _Cursor(_tokenize_annot(src, S.NOLOC))
    p = _parse_pred(c)
    if c.cur.kind != "eof":
        c.error("trailing tokens after predicate")
    return p
