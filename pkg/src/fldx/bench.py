"""Timing harness over the bundled example programs."""
from __future__ import annotations

import statistics
import time
from importlib import resources
from typing import List

from .config import AnalysisConfig
from .numerics import FORMATS
from .pipeline import analyze

#: example programs and the format they are meant to be analyzed with
CORPUS_FORMATS = {"patriot.c": "binary32"}


def corpus_files() -> List[str]:
    root = resources.files("fldx") / "corpus"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".c"))


def corpus_source(name: str) -> str:
    return (resources.files("fldx") / "corpus" / name).read_text()


def run_bench(runs: int = 3) -> None:
    for name in corpus_files():
        src = corpus_source(name)
        fmt = FORMATS[CORPUS_FORMATS.get(name, "binary64")]
        times = []
        rep = None
        for _ in range(runs):
            t0 = time.perf_counter()
            rep = analyze(src, AnalysisConfig(fmt=fmt), source_name=name)
            times.append(time.perf_counter() - t0)
        worst = max((abs(float(a.err_hull.lo)), abs(float(a.err_hull.hi)))
                    for a in rep.assertions if a.err_hull is not None) \
            if any(a.err_hull for a in rep.assertions) else (0.0, 0.0)
        status = "alarm" if rep.has_alarms else "ok"
        print(f"{name:24s} {statistics.median(times)*1000:8.1f} ms"
              f"  err<= {max(worst):.3g}  [{status}]")
