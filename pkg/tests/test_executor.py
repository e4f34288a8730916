"""Abstract execution: the six evaluation flows of an unstable test with
their exact constrained states, path enumeration within sections, and
emptiness propagation across nested sections."""
from fractions import Fraction as F

import pytest

from fldx.config import AnalysisConfig
from fldx.domain import AbstractFloat
from fldx.executor.explorer import PathExplorer
from fldx.executor.interp import Interp, SectionCtx
from fldx.frontend import parse_expr, parse_program
from fldx.numerics import RInterval
from fldx.pipeline import analyze
from fldx.zonotope import AffineForm, Origin
from tests.conftest import corpus_source


# ---------------------------------------------------------------------------
# The guard x >= 0 on x with real = eps0, err = 1e-7*eps1, float = [-1,1]
# admits exactly six flows; each constrained state is checked exactly.
# ---------------------------------------------------------------------------


def run_flow(idx):
    program = parse_program("int main() { return 0; }")
    it = Interp(program, AnalysisConfig())
    e0 = it.pool.fresh(Origin.INPUT)
    e1 = it.pool.fresh(Origin.INPUT)
    x = AbstractFloat(RInterval(F(-1), F(1)),
                      AffineForm(F(0), {e0: F(1)}), RInterval(F(-1), F(1)),
                      AffineForm(F(0), {e1: F(1, 10 ** 7)}),
                      RInterval(F(-1, 10 ** 7), F(1, 10 ** 7)), None)
    it.mem.store("x", x)
    ex = PathExplorer()
    ex.trace, ex.limits = [idx], [1]
    it.stack.append(SectionCtx(1, True, ex))
    taken = it.decide(parse_expr("x >= 0.0"))
    assert ex.limits == [6]  # exactly six flows at this decision
    return it, it.mem.vars["x"], taken


def one_term(form):
    assert len(form.terms) == 1
    return next(iter(form.terms.values()))


def test_stable_true_flow_exact():
    it, x, taken = run_flow(0)
    assert taken is True
    assert it.ctx.signature[-1][1] == "sT"
    # real becomes 0.5 + 0.5*eps_d, err is untouched, float = [0, 1]
    assert x.real.center == F(1, 2) and one_term(x.real) == F(1, 2)
    assert x.err.center == 0 and one_term(x.err) == F(1, 10 ** 7)
    assert x.float_iv == RInterval(F(0), F(1))


def test_stable_false_flow_exact():
    it, x, taken = run_flow(1)
    assert taken is False
    assert x.real.center == F(-1, 2) and one_term(x.real) == F(1, 2)
    assert x.float_iv == RInterval(F(-1), F(0))


@pytest.mark.parametrize("idx,interp,taken", [(2, "float", True),
                                              (3, "real", False)])
def test_unstable_true_flows_exact(idx, interp, taken):
    it, x, got = run_flow(idx)
    assert got is taken
    assert it.ctx.signature[-1][1] == "uT"
    assert it.ctx.interp == interp
    # real = -5e-8 + 5e-8*eps_d0, err = 5e-8 + 5e-8*eps_d1, float [0, 1e-7]
    assert x.real.center == F(-1, 2 * 10 ** 7)
    assert one_term(x.real) == F(1, 2 * 10 ** 7)
    assert x.err.center == F(1, 2 * 10 ** 7)
    assert one_term(x.err) == F(1, 2 * 10 ** 7)
    assert x.float_iv == RInterval(F(0), F(1, 10 ** 7))


@pytest.mark.parametrize("idx,interp,taken", [(4, "float", False),
                                              (5, "real", True)])
def test_unstable_false_flows_mirror(idx, interp, taken):
    it, x, got = run_flow(idx)
    assert got is taken
    assert it.ctx.signature[-1][1] == "uF"
    assert it.ctx.interp == interp
    assert x.real.center == F(1, 2 * 10 ** 7)
    assert x.err.center == F(-1, 2 * 10 ** 7)
    assert x.float_iv == RInterval(F(-1, 10 ** 7), F(0))


# ---------------------------------------------------------------------------
# Path enumeration: n independent stable binary decisions -> 2^n paths
# ---------------------------------------------------------------------------


def stable_program(n):
    reads = "\n".join(
        f"  double x{i} = read_double(0.0, 1.0, 0.0, 0.0);"
        for i in range(n))
    tests = "\n".join(
        f"  if (x{i} < 0.5) {{ acc = acc + 1.0; }}" for i in range(n))
    return (f"int main() {{\n{reads}\n  double acc = 0.0;\n"
            f"  /*@ split(1, acc); */\n{tests}\n  /*@ merge(1, acc); */\n"
            f"  return 0;\n}}\n")


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_n_stable_decisions_explore_exactly_2_to_n_paths(n):
    rep = analyze(stable_program(n), AnalysisConfig())
    sec = [s for s in rep.sections if s["id"] == 1]
    assert len(sec) == 1
    assert sec[0]["feasible_paths"] == 2 ** n
    assert sec[0]["started_paths"] == 2 ** n
    assert sec[0]["merged_pairs"] == 0
    assert not rep.has_alarms


def test_path_budget_warns_and_stops():
    cfg = AnalysisConfig(path_budget=5)
    rep = analyze(stable_program(4), cfg)
    assert any("path budget" in w for w in rep.warnings)
    sec = [s for s in rep.sections if s["id"] == 1][0]
    assert sec["started_paths"] == 5


# ---------------------------------------------------------------------------
# Emptiness propagation from an inner all-infeasible section
# ---------------------------------------------------------------------------


EMPTY_INNER = """
int main() {
  double x = read_double(0.0, 1.0, 0.0, 0.0);
  /*@ split(1); */
  double y = x + 1.0;
  /*@ split(2); */
  assume (x < -1.0);
  double z = y;
  /*@ merge(2, z); */
  /*@ merge(1, y, z); */
  return 0;
}
"""


def test_all_infeasible_inner_section_propagates_emptiness():
    rep = analyze(EMPTY_INNER, AnalysisConfig(collect_trace=True))
    assert any("section 2: no feasible path, propagating emptiness" in t
               for t in rep.trace)
    assert any("section 1: path abandoned, inner section 2 empty" in t
               for t in rep.trace)
    assert any("section 1: no feasible path, propagating emptiness" in t
               for t in rep.trace)
    assert any(a["kind"] == "no-feasible-path" for a in rep.alarms)
    inner = [s for s in rep.sections if s["id"] == 2][0]
    outer = [s for s in rep.sections if s["id"] == 1][0]
    assert inner["infeasible"] and outer["infeasible"]


def test_feasible_sibling_paths_survive_an_infeasible_one():
    src = """
    int main() {
      double x = read_double(0.0, 1.0, 0.0, 0.0);
      double y = 0.0;
      /*@ split(1, y); */
      if (x < 0.5) { assume (x > 2.0); y = 1.0; } else { y = 2.0; }
      /*@ merge(1, y); */
      /*@ assert accuracy_assert_derr(y, -0.1, 0.1); */
      return 0;
    }
    """
    rep = analyze(src, AnalysisConfig(collect_trace=True))
    sec = [s for s in rep.sections if s["id"] == 1][0]
    assert sec["feasible_paths"] == 1      # the true branch is contradicted
    assert sec["started_paths"] == 2
    assert not any(a["kind"] == "no-feasible-path" for a in rep.alarms)


# ---------------------------------------------------------------------------
# Unstable flows are paired back into single states at the merge
# ---------------------------------------------------------------------------


def test_discontinuity_section_pairs_unstable_flows():
    rep = analyze(corpus_source("comp_disc.c"), AnalysisConfig())
    sec = [s for s in rep.sections if s["id"] == 1][0]
    assert sec["feasible_paths"] == 6   # 2 stable + 2 unstable x 2 interps
    assert sec["merged_pairs"] == 2
    assert any(a["kind"] == "assertion" for a in rep.alarms)


def test_unstable_cast_enumerates_and_merges():
    src = """
    int main() {
      double in = read_double(0.9999999, 1.0000001);
      double out = 0.0;
      /*@ split(1); */
      int index = (int) in;
      out = (double) index;
      /*@ merge(1, out); */
      /*@ assert dprint(out); */
      return 0;
    }
    """
    rep = analyze(src, AnalysisConfig())
    sec = [s for s in rep.sections if s["id"] == 1][0]
    assert sec["feasible_paths"] == 6
    assert sec["merged_pairs"] == 2
    out = [r for r in rep.prints if r.variable == "out"]
    assert out, "dprint record missing"


def test_unstable_test_outside_sections_raises_instrumentation_gap():
    src = """
    int main() {
      double x = read_double(0.9999999, 1.0000001);
      double z = 0.0;
      if (x < 1.0) { z = x + 0.5; } else { z = x; }
      /*@ assert dprint(z); */
      return 0;
    }
    """
    rep = analyze(src, AnalysisConfig(auto_instrument=False))
    assert any(a["kind"] == "instrumentation-gap" for a in rep.alarms)
