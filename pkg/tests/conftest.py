import random
from fractions import Fraction
from pathlib import Path

import pytest

CORPUS = Path(__file__).resolve().parent.parent / "src" / "fldx" / "corpus"


def corpus_path(name: str) -> Path:
    return CORPUS / name


def corpus_source(name: str) -> str:
    return corpus_path(name).read_text()


def all_corpus_names():
    return sorted(p.name for p in CORPUS.glob("*.c"))


@pytest.fixture
def rng():
    return random.Random(20260823)


def rand_fraction(rng: random.Random, lo: Fraction, hi: Fraction,
                  denom: int = 10**9) -> Fraction:
    """A random rational in [lo, hi] with a moderate denominator."""
    span = hi - lo
    return lo + span * Fraction(rng.randint(0, denom), denom)
