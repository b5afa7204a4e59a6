"""Satisfiability backends.

The internal backend is a conflict-driven clause-learning solver with two
watched literals per clause, first-UIP learning, activity-based decisions
and Luby restarts.  ``REMEDY_SOLVER=exec:<path>`` switches to an external
program that reads DIMACS CNF on stdin and prints ``SAT`` with a model or
``UNSAT``.
"""

from __future__ import annotations

import logging
import os
import subprocess
from typing import Hashable

from .formula import FALSE, TRUE, Cnf, Formula, tseitin, variables

log = logging.getLogger(__name__)

Assignment = dict[Hashable, bool]


class SolverBudgetExceeded(Exception):
    pass


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i + 1:
        k += 1
    while True:
        if i + 1 == (1 << k) - 1:
            return 1 << (k - 1)
        if i + 1 >= 1 << (k - 1):
            i -= (1 << (k - 1)) - 1
            k = 1
            while (1 << k) - 1 < i + 1:
                k += 1
        else:
            k -= 1


class CdclSolver:
    def __init__(self, nvars: int, clauses: list[list[int]], max_conflicts: int = 1_000_000):
        self.n = nvars
        self.max_conflicts = max_conflicts
        self.value = [0] * (nvars + 1)  # 1 true, -1 false, 0 unassigned
        self.level = [0] * (nvars + 1)
        self.reason: list[list[int] | None] = [None] * (nvars + 1)
        self.activity = [0.0] * (nvars + 1)
        self.phase = [-1] * (nvars + 1)
        self.bump = 1.0
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.watches: dict[int, list[list[int]]] = {}
        for v in range(1, nvars + 1):
            self.watches[v] = []
            self.watches[-v] = []
        self.ok = True
        self.units: list[int] = []
        for c in clauses:
            self._add_input(c)

    def _lit_value(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _add_input(self, clause: list[int]) -> None:
        c = list(dict.fromkeys(clause))
        if any(-l in c for l in c):
            return
        if not c:
            self.ok = False
            return
        if len(c) == 1:
            self.units.append(c[0])
            return
        self.watches[c[0]].append(c)
        self.watches[c[1]].append(c)

    def _assign(self, lit: int, reason: list[int] | None) -> None:
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self) -> list[int] | None:
        while self.qhead < len(self.trail):
            p = self.trail[self.qhead]
            self.qhead += 1
            false_lit = -p
            ws = self.watches[false_lit]
            i = 0
            keep: list[list[int]] = []
            while i < len(ws):
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                if self._lit_value(c[0]) == 1:
                    keep.append(c)
                    continue
                moved = False
                for k in range(2, len(c)):
                    if self._lit_value(c[k]) != -1:
                        c[1], c[k] = c[k], c[1]
                        self.watches[c[1]].append(c)
                        moved = True
                        break
                if moved:
                    continue
                keep.append(c)
                if self._lit_value(c[0]) == -1:
                    keep.extend(ws[i:])
                    self.watches[false_lit] = keep
                    return c
                self._assign(c[0], c)
            self.watches[false_lit] = keep
        return None

    def _analyze(self, conflict: list[int]) -> tuple[list[int], int]:
        seen = set()
        learnt: list[int] = []
        counter = 0
        lit = 0
        idx = len(self.trail) - 1
        clause = conflict
        cur = len(self.trail_lim)
        while True:
            for q in clause:
                if lit and q == lit:
                    continue
                v = abs(q)
                if v in seen or self.level[v] == 0:
                    continue
                seen.add(v)
                self._bump(v)
                if self.level[v] == cur:
                    counter += 1
                else:
                    learnt.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            lit = self.trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            clause = self.reason[abs(lit)]
        learnt.insert(0, -lit)
        back = 0
        if len(learnt) > 1:
            j = max(range(1, len(learnt)), key=lambda k: self.level[abs(learnt[k])])
            learnt[1], learnt[j] = learnt[j], learnt[1]
            back = self.level[abs(learnt[1])]
        return learnt, back

    def _bump(self, v: int) -> None:
        self.activity[v] += self.bump
        if self.activity[v] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.bump *= 1e-100

    def _backtrack(self, level: int) -> None:
        if len(self.trail_lim) <= level:
            return
        start = self.trail_lim[level]
        for lit in self.trail[start:]:
            v = abs(lit)
            self.phase[v] = self.value[v]
            self.value[v] = 0
            self.reason[v] = None
        del self.trail[start:]
        del self.trail_lim[level:]
        self.qhead = len(self.trail)

    def _decide(self) -> int:
        best, best_act = 0, -1.0
        value, act = self.value, self.activity
        for v in range(1, self.n + 1):
            if value[v] == 0 and act[v] > best_act:
                best, best_act = v, act[v]
        if not best:
            return 0
        return best if self.phase[best] > 0 else -best

    def solve(self) -> list[bool] | None:
        if not self.ok:
            return None
        for u in self.units:
            val = self._lit_value(u)
            if val == -1:
                return None
            if val == 0:
                self._assign(u, None)
        if self._propagate() is not None:
            return None
        conflicts = 0
        restart_idx = 0
        limit = 64 * _luby(restart_idx)
        since_restart = 0
        while True:
            conflict = self._propagate()
            if conflict is not None:
                conflicts += 1
                since_restart += 1
                if conflicts > self.max_conflicts:
                    raise SolverBudgetExceeded()
                if not self.trail_lim:
                    return None
                learnt, back = self._analyze(conflict)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    self.watches[learnt[0]].append(learnt)
                    self.watches[learnt[1]].append(learnt)
                    self._assign(learnt[0], learnt)
                self.bump *= 1.05
                continue
            if since_restart >= limit:
                self._backtrack(0)
                restart_idx += 1
                limit = 64 * _luby(restart_idx)
                since_restart = 0
            lit = self._decide()
            if lit == 0:
                return [False] + [self.value[v] == 1 for v in range(1, self.n + 1)]
            self.trail_lim.append(len(self.trail))
            self._assign(lit, None)


def solve_cnf(cnf: Cnf, max_conflicts: int = 1_000_000) -> list[bool] | None:
    """Model indexed by variable number (slot 0 unused), or None if UNSAT."""
    backend = os.environ.get("REMEDY_SOLVER", "internal")
    if backend.startswith("exec:"):
        return _external(cnf, backend[5:])
    if backend != "internal":
        raise ValueError(f"unknown REMEDY_SOLVER backend {backend!r}")
    return CdclSolver(cnf.nvars, cnf.clauses, max_conflicts).solve()


def _external(cnf: Cnf, path: str) -> list[bool] | None:
    proc = subprocess.run([path], input=cnf.dimacs(), capture_output=True, text=True, check=False)
    tokens = proc.stdout.split()
    words = [t for t in tokens if not t.lstrip("-").isdigit()]
    if any(w in ("UNSAT", "UNSATISFIABLE") for w in words):
        return None
    if not any(w in ("SAT", "SATISFIABLE") for w in words):
        raise RuntimeError(f"external solver gave no verdict: {proc.stdout[:200]!r}")
    model = [False] * (cnf.nvars + 1)
    for t in tokens:
        if t.lstrip("-").isdigit():
            k = int(t)
            if 0 < abs(k) <= cnf.nvars:
                model[abs(k)] = k > 0
    return model


def solve(f: Formula, max_conflicts: int = 1_000_000) -> Assignment | None:
    """A satisfying assignment total on f's variables, or None if unsatisfiable."""
    keys = variables(f)
    if f is TRUE:
        return {k: False for k in keys}
    if f is FALSE:
        return None
    cnf = tseitin(f)
    model = solve_cnf(cnf, max_conflicts)
    if model is None:
        return None
    return {k: model[cnf.var_of[k]] for k in keys}
