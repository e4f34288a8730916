"""Automatic split/merge placement around unstable floating-point tests,
and the independent validator that re-checks every placed section."""
import re

import pytest

from fldx.compiler.placement import instrument
from fldx.compiler.validator import validate
from fldx.config import AnalysisConfig
from fldx.frontend import parse_program, print_program
from fldx.frontend import syntax as S
from fldx.pipeline import instrumented_source, prepare
from tests.conftest import all_corpus_names, corpus_source


def instrumented(name):
    return instrumented_source(corpus_source(name), AnalysisConfig())


def sections_of(program):
    return [s for fn in program.functions.values()
            for s in S.walk_stmts(fn.body) if isinstance(s, S.SectionStmt)]


# ---------------------------------------------------------------------------
# Reference scenarios
# ---------------------------------------------------------------------------


def test_interpolation_cast_gets_one_section_merging_the_output():
    text = instrumented("motiv_example.c")
    # the split lands right before the float-to-int cast ...
    assert re.search(r"split\(1\); \*/\s*\n\s*int index = \(int\) in;", text)
    # ... and the merge joins the interpolated output just before the
    # robustness assertion
    assert re.search(r"merge\(1, out\); \*/\s*\n\s*/\*@ assert", text)
    assert text.count("split(") == 1 and text.count("merge(") == 1


def test_loop_condition_section_swallows_the_dependent_read():
    text = instrumented("inter_loop.c")
    # the knot index i is written by the unstable loop test, so the
    # section must keep every read of i inside and save its entry value
    assert "split(1, i);" in text
    assert re.search(r"merge\(1, res\); \*/\s*\n\s*/\*@ assert", text)
    sec = text[text.index("split(1"):text.index("merge(1")]
    assert "v[i]" in sec  # the interpolation that reads i stays inside


def test_nested_unstable_tests_fuse_into_one_section():
    text = instrumented("comp_disc_nested.c")
    assert text.count("split(") == 1 and text.count("merge(") == 1
    assert "merge(1, z);" in text
    sec = text[text.index("split(1"):text.index("merge(1")]
    assert sec.count("if (") == 2  # both unstable tests are inside


def test_simple_discontinuity_section():
    text = instrumented("comp_disc.c")
    assert "split(1);" in text and "merge(1, z);" in text


def test_stable_only_program_gets_no_sections():
    text = instrumented("absorption.c")
    assert "split(" not in text and "merge(" not in text


# ---------------------------------------------------------------------------
# Invariants over the whole corpus
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", all_corpus_names())
def test_corpus_placements_pass_the_validator(name):
    program, _ = prepare(corpus_source(name), AnalysisConfig())
    assert validate(program) == []


@pytest.mark.parametrize("name", all_corpus_names())
def test_instrumentation_is_idempotent(name):
    cfg = AnalysisConfig()
    once = instrumented_source(corpus_source(name), cfg)
    twice = instrumented_source(once, cfg)
    assert once == twice


def test_existing_sections_are_preserved():
    src = corpus_source("comp_disc.c")
    text = instrumented_source(src, AnalysisConfig())
    program = parse_program(text)
    ids_before = [s.section_id for s in sections_of(program)]
    program2, warnings = instrument(program)
    assert [s.section_id for s in sections_of(program2)] == ids_before


# ---------------------------------------------------------------------------
# Validator rejections
# ---------------------------------------------------------------------------


def test_validator_flags_escaping_int_write():
    src = """
    int main() {
      double x = read_double(0.0, 1.0);
      int k = 0;
      /*@ split(1); */
      if (x < 0.5) { k = 1; }
      /*@ merge(1); */
      int m = k + 1;
      return m;
    }
    """
    problems = validate(parse_program(src))
    assert any("int variable 'k'" in p for p in problems)


def test_validator_flags_missing_merge_variable():
    src = """
    int main() {
      double x = read_double(0.0, 1.0);
      double z = 0.0;
      /*@ split(1); */
      if (x < 0.5) { z = x + 0.5; } else { z = x; }
      /*@ merge(1); */
      /*@ assert accuracy_assert_derr(z, -1.0, 1.0); */
      return 0;
    }
    """
    problems = validate(parse_program(src))
    assert any("merge_list misses" in p and "'z'" in p for p in problems)


def test_validator_accepts_complete_manual_section():
    src = """
    int main() {
      double x = read_double(0.0, 1.0);
      double z = 0.0;
      /*@ split(1); */
      if (x < 0.5) { z = x + 0.5; } else { z = x; }
      /*@ merge(1, z); */
      /*@ assert accuracy_assert_derr(z, -1.0, 1.0); */
      return 0;
    }
    """
    assert validate(parse_program(src)) == []


def test_section_round_trips_through_the_printer():
    src = instrumented("comp_disc_nested.c")
    assert print_program(parse_program(src)) == src
