"""Master soundness check: for every corpus program, the exact-rational
shadow interpreter is run on many random concrete inputs and its error
and real value at every assertion and print point must lie inside the
hulls the abstract analysis reported."""
import time
from fractions import Fraction

import pytest

from fldx.config import AnalysisConfig
from fldx.executor.interp import Interp, _literal_value
from fldx.executor.oracle import ShadowRun
from fldx.frontend import syntax as S
from fldx.pipeline import pick_entry, prepare
from fldx.report import summarize_assertions
from tests.conftest import all_corpus_names, corpus_source, rand_fraction

RUNS = 1000

WITH_INPUTS = [n for n in all_corpus_names()
               if "read_double(" in corpus_source(n)]


def input_ranges(program, entry):
    """(variable, lo, hi) for every read_double bound to a variable."""
    out = []
    for s in S.walk_stmts(program.functions[entry].body):
        target = init = None
        if isinstance(s, S.Decl) and isinstance(s.init, S.Call):
            target, init = s.name, s.init
        elif isinstance(s, S.Assign) and isinstance(s.expr, S.Call) \
                and isinstance(s.target, S.Var):
            target, init = s.target.name, s.expr
        if init is not None and init.name == "read_double":
            out.append((target, _literal_value(init.args[0]),
                        _literal_value(init.args[1])))
    return out


def analysis_hulls(program, config):
    interp = Interp(program, config)
    interp.run(pick_entry(program, config))
    hulls = {}
    for summ in summarize_assertions(interp.records):
        key = f"{summ.location}:{summ.builtin}:{summ.variable}"
        hulls[key] = summ
    prints = {}
    for rec in interp.records:
        if rec.kind != "print":
            continue
        key = f"{rec.loc}:{rec.builtin}:{rec.variable}"
        if key in prints:
            prev = prints[key]
            prints[key] = (prev[0].join(rec.err_hull),
                           prev[1].join(rec.real_hull))
        else:
            prints[key] = (rec.err_hull, rec.real_hull)
    return hulls, prints


@pytest.mark.parametrize("name", WITH_INPUTS)
def test_shadow_runs_stay_inside_reported_hulls(name, rng):
    config = AnalysisConfig()
    program, _ = prepare(corpus_source(name), config)
    entry = pick_entry(program, config)
    ranges = input_ranges(program, entry)
    assert ranges, "corpus program without inputs selected"
    hulls, prints = analysis_hulls(program, config)
    assert hulls or prints

    violations = []
    for _ in range(RUNS):
        inputs = {v: rand_fraction(rng, lo, hi) for v, lo, hi in ranges}
        shadow = ShadowRun(program, config.fmt, inputs=inputs)
        shadow.run(entry)
        for rec in shadow.records:
            key = f"{rec.loc}:{rec.builtin}:{rec.variable}"
            if rec.holds is None:  # print record
                hull = prints.get(key)
                if hull is None:
                    continue
                err_h, real_h = hull
            else:
                summ = hulls.get(key)
                assert summ is not None, f"unreported assertion {key}"
                err_h, real_h = summ.err_hull, summ.real_hull
            if err_h is not None and not (err_h.lo <= rec.err <= err_h.hi):
                violations.append((key, "err", rec.err, err_h, inputs))
            if real_h is not None and \
                    not (real_h.lo <= rec.real_val <= real_h.hi):
                violations.append((key, "real", rec.real_val, real_h, inputs))
    assert violations == []


def test_corpus_is_large_enough_for_the_soundness_sweep():
    assert len(WITH_INPUTS) >= 10


def test_sweep_touches_every_assertion_at_least_once(rng):
    """Sanity: the shadow actually reaches the assertion points."""
    for name in WITH_INPUTS[:3]:
        config = AnalysisConfig()
        program, _ = prepare(corpus_source(name), config)
        entry = pick_entry(program, config)
        ranges = input_ranges(program, entry)
        inputs = {v: rand_fraction(rng, lo, hi) for v, lo, hi in ranges}
        shadow = ShadowRun(program, config.fmt, inputs=inputs)
        shadow.run(entry)
        assert shadow.records
