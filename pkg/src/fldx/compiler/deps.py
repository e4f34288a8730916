"""Data-dependency analysis backing split/merge placement.

For a statement (or statement sequence) p:
  * mustdef(p): variables necessarily written by p,
  * maydef(p): (variable, writing leaf statement) pairs possibly written,
  * mayref(p): (variable, reading leaf statement) pairs read before being
    written when executing p (sequences kill later reads of variables
    already assigned),
  * data(F): (writer, reader, variable) def-use triples over the whole
    function, computed by reaching definitions on the CFG.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Set, Tuple

from ..frontend import cfg as C
from ..frontend import syntax as S


def _enlarge_targets(p: S.Pred) -> Set[str]:
    """Variables updated by enlarge built-ins inside an assertion."""
    out: Set[str] = set()
    stack = [p]
    while stack:
        q = stack.pop()
        if isinstance(q, S.PRel):
            stack += [q.left, q.right]
        elif isinstance(q, S.PNot):
            stack.append(q.pred)
        elif isinstance(q, S.PLet):
            stack.append(q.body)
        elif isinstance(q, S.PBuiltin):
            if q.name.startswith("accuracy_enlarge") and q.args:
                a = q.args[0]
                if isinstance(a, (S.TName, S.TIndex)):
                    out.add(a.name)
    return out


def _pred_reads(p: S.Pred) -> Set[str]:
    out: Set[str] = set()
    bound: Set[str] = set()

    def term(t: S.Term) -> None:
        if isinstance(t, S.TName):
            if t.name not in bound:
                out.add(t.name)
        elif isinstance(t, S.TIndex):
            out.add(t.name)
            term(t.index)
        elif isinstance(t, S.TBin):
            term(t.left)
            term(t.right)
        elif isinstance(t, S.TCall):
            for a in t.args:
                term(a)

    def pred(q: S.Pred) -> None:
        if isinstance(q, S.PRel):
            pred(q.left)
            pred(q.right)
        elif isinstance(q, S.PNot):
            pred(q.pred)
        elif isinstance(q, S.PCmp):
            term(q.left)
            term(q.right)
        elif isinstance(q, S.PLet):
            if isinstance(q.value, S.PBuiltin):
                for a in q.value.args:
                    term(a)
            else:
                term(q.value)
            bound.update(q.names)
            pred(q.body)
        elif isinstance(q, S.PBuiltin):
            for a in q.args:
                term(a)

    pred(p)
    return out


def leaf_defs(s: S.Stmt) -> Set[str]:
    """Variables a leaf statement may write."""
    if isinstance(s, S.Assign):
        return {s.target.name}
    if isinstance(s, S.Decl):
        if s.init is not None or s.array_init is not None:
            return {s.name}
        return set()
    if isinstance(s, S.AssertStmt):
        return _enlarge_targets(s.pred)
    return set()


def leaf_must_defs(s: S.Stmt) -> Set[str]:
    """Variables a leaf statement certainly and fully overwrites."""
    if isinstance(s, S.Assign):
        # an array-cell write leaves the other cells live
        return {s.target.name} if isinstance(s.target, S.Var) else set()
    if isinstance(s, S.Decl):
        if s.init is not None or s.array_init is not None:
            return {s.name}
        return set()
    if isinstance(s, S.AssertStmt):
        return _enlarge_targets(s.pred)
    return set()


def leaf_reads(s: S.Stmt) -> Set[str]:
    out: Set[str] = set()
    for e in S.stmt_exprs(s):
        out |= S.vars_read(e)
    if isinstance(s, S.AssertStmt):
        out |= _pred_reads(s.pred)
    return out


def must_def(s: S.Stmt) -> Set[str]:
    if isinstance(s, S.Block):
        return must_def_seq(s.stmts)
    if isinstance(s, S.SectionStmt):
        return must_def_seq(s.body)
    if isinstance(s, S.If):
        t = must_def(s.then)
        e = must_def(s.els) if s.els is not None else set()
        return t & e
    if isinstance(s, S.While):
        return set()
    if isinstance(s, S.DoWhile):
        return must_def(s.body)
    return leaf_must_defs(s)


def must_def_seq(stmts: List[S.Stmt]) -> Set[str]:
    out: Set[str] = set()
    for s in stmts:
        out |= must_def(s)
    return out


def may_def(s: S.Stmt) -> Set[Tuple[str, int]]:
    """(variable, id of writing leaf statement) pairs."""
    out: Set[Tuple[str, int]] = set()
    for sub in S.walk_stmts(s):
        for v in leaf_defs(sub):
            out.add((v, id(sub)))
    return out


def may_def_seq(stmts: List[S.Stmt]) -> Set[Tuple[str, int]]:
    out: Set[Tuple[str, int]] = set()
    for s in stmts:
        out |= may_def(s)
    return out


def may_ref(s: S.Stmt) -> Set[Tuple[str, int]]:
    if isinstance(s, S.Block):
        return may_ref_seq(s.stmts)
    if isinstance(s, S.SectionStmt):
        return may_ref_seq(s.body)
    if isinstance(s, S.If):
        out = {(v, id(s)) for v in leaf_reads(s)}
        out |= may_ref(s.then)
        if s.els is not None:
            out |= may_ref(s.els)
        return out
    if isinstance(s, (S.While, S.DoWhile)):
        return {(v, id(s)) for v in leaf_reads(s)} | may_ref(s.body)
    return {(v, id(s)) for v in leaf_reads(s)}


def may_ref_seq(stmts: List[S.Stmt]) -> Set[Tuple[str, int]]:
    """Sequence rule: a variable certainly assigned earlier in the
    sequence is no longer an upward-exposed read."""
    out: Set[Tuple[str, int]] = set()
    killed: Set[str] = set()
    for s in stmts:
        out |= {(v, i) for v, i in may_ref(s) if v not in killed}
        killed |= must_def(s)
    return out


# ---------------------------------------------------------------------------
# Reaching definitions / def-use triples
# ---------------------------------------------------------------------------

Triple = Tuple[int, int, str]  # (writer stmt id, reader stmt id, variable)


@dataclass
class DepSets:
    fn: S.FuncDef
    #: def-use triples over the whole function body
    data: Set[Triple] = field(default_factory=set)
    stmt_by_id: Dict[int, S.Stmt] = field(default_factory=dict)


def compute_dep_sets(fn: S.FuncDef) -> DepSets:
    graph = C.build_cfg(fn)
    g = graph.graph
    stmt_of = graph.stmt_of

    gen: Dict[object, FrozenSet[Tuple[str, int]]] = {}
    kill_vars: Dict[object, Set[str]] = {}
    reads: Dict[object, Set[str]] = {}
    stmt_by_id: Dict[int, S.Stmt] = {}
    for n in g.nodes:
        st = stmt_of.get(n)
        if st is None:
            gen[n] = frozenset()
            kill_vars[n] = set()
            reads[n] = set()
            continue
        stmt_by_id[id(st)] = st
        gen[n] = frozenset((v, id(st)) for v in leaf_defs(st))
        kill_vars[n] = leaf_must_defs(st)
        reads[n] = leaf_reads(st)

    # parameters act as definitions at entry
    entry_defs = frozenset((p.name, id(fn)) for p in fn.params)
    gen[C.ENTRY] = entry_defs

    inn: Dict[object, Set[Tuple[str, int]]] = {n: set() for n in g.nodes}
    out: Dict[object, Set[Tuple[str, int]]] = {n: set(gen[n]) for n in g.nodes}
    work = list(g.nodes)
    while work:
        n = work.pop()
        new_in: Set[Tuple[str, int]] = set()
        for p in g.predecessors(n):
            new_in |= out[p]
        if new_in != inn[n]:
            inn[n] = new_in
        new_out = gen[n] | {(v, d) for v, d in new_in
                            if v not in kill_vars[n]}
        if new_out != out[n]:
            out[n] = new_out
            work.extend(g.successors(n))

    triples: Set[Triple] = set()
    for n in g.nodes:
        st = stmt_of.get(n)
        if st is None:
            continue
        for v in reads[n]:
            for dv, did in inn[n]:
                if dv == v and did != id(fn):
                    triples.add((did, id(st), v))
    return DepSets(fn, triples, stmt_by_id)


def region_descendant_ids(stmts: List[S.Stmt]) -> Set[int]:
    out: Set[int] = set()
    for s in stmts:
        for sub in S.walk_stmts(s):
            out.add(id(sub))
    return out


def save_list(stmts: List[S.Stmt]) -> Set[str]:
    defs = {v for v, _ in may_def_seq(stmts)}
    refs = {v for v, _ in may_ref_seq(stmts)}
    return defs & refs


def merge_list(stmts: List[S.Stmt], deps: DepSets) -> Set[str]:
    inside = region_descendant_ids(stmts)
    defs_in = {(v, i) for v, i in may_def_seq(stmts)}
    out: Set[str] = set()
    for v, writer in defs_in:
        for w, reader, x in deps.data:
            if w == writer and x == v and reader not in inside:
                out.add(v)
                break
    return out
