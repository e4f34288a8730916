"""Depth-first enumeration of the feasible flows of a section.

A path is a sequence of choices, one per decision point met while
re-executing the section body. The explorer replays the recorded prefix
and extends it with first alternatives; next_path() advances the last
non-exhausted decision, giving plain DFS over the decision tree.
"""
from __future__ import annotations

from typing import List


class PathBudgetExceeded(Exception):
    pass


class PathExplorer:
    def __init__(self, budget: int = 256) -> None:
        self.trace: List[int] = []
        self.limits: List[int] = []
        self.pos = 0
        self.budget = budget
        self.paths_started = 1
        self.exhausted = False
        self.budget_hit = False

    def choose(self, n: int) -> int:
        """Return the alternative to take at the current decision point."""
        if n < 1:
            raise ValueError("decision point with no alternatives")
        if self.pos < len(self.trace):
            i = self.trace[self.pos]
            self.limits[self.pos] = n
        else:
            self.trace.append(0)
            self.limits.append(n)
            i = 0
        self.pos += 1
        return i

    def next_path(self) -> bool:
        """Advance to the next path; False when the tree is exhausted or
        the budget is spent."""
        while self.trace and self.trace[-1] + 1 >= self.limits[-1]:
            self.trace.pop()
            self.limits.pop()
        if not self.trace:
            self.exhausted = True
            return False
        if self.paths_started >= self.budget:
            self.budget_hit = True
            return False
        self.trace[-1] += 1
        self.pos = 0
        self.paths_started += 1
        return True
