"""Greedy placement of split/merge sections around unstable-test
candidates.

A candidate is a statement whose evaluation contains a floating-point
comparison or a float-to-int cast. Sections start as the candidate
statement alone and are expanded (merge first, hoisting to the enclosing
block when needed) until:
  1. the split strictly dominates the merge and the merge strictly
     post-dominates the split,
  2. both markers sit in the same syntactic block,
  3. no integer variable written inside the section is read after it.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

from ..errors import PlacementError
from ..frontend import syntax as S
from . import deps as D


@dataclass
class Placement:
    """A placed section: stmts[start..end] of the owning block."""
    block: List[S.Stmt]
    start: int
    end: int
    save_list: List[str] = field(default_factory=list)
    merge_list: List[str] = field(default_factory=list)
    section_id: int = 0

    @property
    def stmts(self) -> List[S.Stmt]:
        return self.block[self.start:self.end + 1]


@dataclass
class PlacementResult:
    placements: List[Placement]
    warnings: List[str] = field(default_factory=list)


def _expr_has_unstable(e: S.Expr, var_types, program) -> bool:
    for sub in S.walk_exprs(e):
        if isinstance(sub, S.Binary) and sub.op in S.COMPARISONS:
            lt = S.expr_ctype(sub.left, var_types, program)
            rt = S.expr_ctype(sub.right, var_types, program)
            if lt in ("float", "double") or rt in ("float", "double"):
                return True
        if isinstance(sub, S.Cast) and sub.ctype == "int":
            if S.expr_ctype(sub.expr, var_types, program) in ("float", "double"):
                return True
    return False


def find_candidates(fn: S.FuncDef,
                    program: Optional[S.Program] = None) -> List[S.Stmt]:
    """Innermost statements containing an unstable-test candidate.

    Statements already covered by a section keep their existing markers
    and are not candidates again.
    """
    covered = {id(s)
               for sec in S.walk_stmts(fn.body)
               if isinstance(sec, S.SectionStmt)
               for s in S.walk_stmts(S.Block(sec.body))}
    out: List[S.Stmt] = []
    for s in S.walk_stmts(fn.body):
        if isinstance(s, (S.Block, S.SectionStmt)) or id(s) in covered:
            continue
        if any(_expr_has_unstable(e, fn.var_types, program)
               for e in S.stmt_exprs(s)):
            out.append(s)
    return out


def _parent_maps(fn: S.FuncDef):
    """For every statement: the block list that directly owns it and its
    index there, plus each block list's owning statement."""
    owner: Dict[int, Tuple[List[S.Stmt], int]] = {}
    block_owner: Dict[int, Optional[S.Stmt]] = {}

    def visit_list(stmts: List[S.Stmt], owning: Optional[S.Stmt]) -> None:
        block_owner[id(stmts)] = owning
        for i, s in enumerate(stmts):
            owner[id(s)] = (stmts, i)
            for child in _child_lists(s):
                visit_list(child, s)

    def _child_lists(s: S.Stmt) -> List[List[S.Stmt]]:
        if isinstance(s, S.Block):
            return [s.stmts]
        if isinstance(s, S.If):
            return [s.then.stmts] + ([s.els.stmts] if s.els else [])
        if isinstance(s, (S.While,)):
            return [s.body.stmts]
        if isinstance(s, S.DoWhile):
            return [s.body.stmts]
        if isinstance(s, S.SectionStmt):
            return [s.body]
        return []

    visit_list(fn.body.stmts, None)
    return owner, block_owner


def _escaping_int_readers(stmts: List[S.Stmt], deps: D.DepSets,
                          var_types) -> List[S.Stmt]:
    """Readers outside the region of int variables written inside it."""
    inside = D.region_descendant_ids(stmts)
    readers: List[S.Stmt] = []
    defs_in = D.may_def_seq(stmts)
    for v, writer in defs_in:
        if var_types.get(v, ("int", False))[0] != "int":
            continue
        for w, reader, x in deps.data:
            if w == writer and x == v and reader not in inside:
                readers.append(deps.stmt_by_id[reader])
    return readers


def _grow(fn: S.FuncDef, cand: S.Stmt, deps: D.DepSets, owner, block_owner,
          warnings: List[str]) -> Placement:
    block, idx = owner[id(cand)]
    start = end = idx
    for _ in range(10000):
        stmts = block[start:end + 1]
        readers = _escaping_int_readers(stmts, deps, fn.var_types)
        if not readers:
            break
        changed = False
        for r in readers:
            anc = r
            while id(anc) in owner and owner[id(anc)][0] is not block:
                owning = block_owner[id(owner[id(anc)][0])]
                if owning is None:
                    break
                anc = owning
            if id(anc) in owner and owner[id(anc)][0] is block:
                k = owner[id(anc)][1]
                if k > end:
                    end = k
                    changed = True
                elif k < start:
                    start = k
                    changed = True
            else:
                # reader lives outside this block: hoist to the statement
                # enclosing the current block
                enclosing = block_owner[id(block)]
                if enclosing is None:
                    raise PlacementError(
                        f"cannot satisfy integer-escape criterion for"
                        f" candidate at {cand.loc}")
                block, idx = owner[id(enclosing)]
                start = end = idx
                changed = True
                break
        if not changed:
            break
    if start == 0 and end == len(fn.body.stmts) - 1 and block is fn.body.stmts:
        warnings.append(f"section for candidate at {cand.loc} spans the"
                        f" whole function body")
    return Placement(block, start, end)


def place_sections(fn: S.FuncDef, deps: D.DepSets,
                   program: Optional[S.Program] = None) -> PlacementResult:
    warnings: List[str] = []
    owner, block_owner = _parent_maps(fn)
    placements: List[Placement] = []
    for cand in find_candidates(fn, program):
        placements.append(_grow(fn, cand, deps, owner, block_owner, warnings))

    # fuse overlaps within a block; drop sections nested inside another
    placements = _fuse(placements, owner, block_owner)

    sid = 1
    for p in placements:
        p.section_id = sid
        sid += 1
        p.save_list = sorted(D.save_list(p.stmts))
        raw_merge = D.merge_list(p.stmts, deps)
        ints = {v for v in raw_merge
                if fn.var_types.get(v, ("double", False))[0] == "int"}
        if ints:
            raise PlacementError(
                f"integer variables {sorted(ints)} would escape section"
                f" {p.section_id}")
        for v in raw_merge:
            if fn.var_types.get(v, (None, False))[1]:
                warnings.append(
                    f"section {p.section_id}: whole array {v!r} merged"
                    f" (element-level tracking not attempted)")
        p.merge_list = sorted(raw_merge)
    return PlacementResult(placements, warnings)


def _fuse(placements: List[Placement], owner, block_owner) -> List[Placement]:
    def covers(outer: Placement, p: Placement) -> bool:
        """p's whole span lies (possibly nested) within outer's span."""
        if p.block is outer.block:
            return outer.start <= p.start and p.end <= outer.end \
                and (outer.start, outer.end) != (p.start, p.end)
        blk = p.block
        while True:
            owning = block_owner.get(id(blk))
            if owning is None:
                return False
            blk, i = owner[id(owning)]
            if blk is outer.block:
                return outer.start <= i <= outer.end

    # merge same-block overlaps first
    changed = True
    while changed:
        changed = False
        for i in range(len(placements)):
            for j in range(i + 1, len(placements)):
                a, b = placements[i], placements[j]
                if a.block is b.block and not (a.end < b.start - 0 or
                                               b.end < a.start - 0):
                    a.start = min(a.start, b.start)
                    a.end = max(a.end, b.end)
                    del placements[j]
                    changed = True
                    break
            if changed:
                break
    # drop nested sections
    out: List[Placement] = []
    for p in placements:
        if any(q is not p and covers(q, p) for q in placements):
            continue
        out.append(p)
    return out


def instrument_function(fn: S.FuncDef, result: PlacementResult) -> None:
    """Rewrite blocks in place, wrapping placed spans in SectionStmt."""
    by_block: Dict[int, List[Placement]] = {}
    for p in result.placements:
        by_block.setdefault(id(p.block), []).append(p)
    for plist in by_block.values():
        plist.sort(key=lambda p: p.start, reverse=True)
        block = plist[0].block
        for p in plist:
            body = block[p.start:p.end + 1]
            sec = S.SectionStmt(p.section_id, list(p.save_list),
                                list(p.merge_list), body,
                                body[0].loc if body else S.NOLOC)
            block[p.start:p.end + 1] = [sec]


def instrument(program: S.Program) -> Tuple[S.Program, List[str]]:
    """Place and insert sections in every function; returns warnings."""
    warnings: List[str] = []
    for fn in program.functions.values():
        deps = D.compute_dep_sets(fn)
        res = place_sections(fn, deps, program)
        warnings.extend(res.warnings)
        instrument_function(fn, res)
    return program, warnings
