"""Best-first template search for an LTP-satisfying repair."""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable

from . import ast as A
from .alphabet import relevant_alphabet
from .constraints import (
    EncodeBudgetExceeded,
    Infeasible,
    consistency_constraint,
    instantiate,
    ltp_constraint,
)
from .formula import FALSE, conj
from .ltp import check_ltp
from .matcher import BudgetExhausted, Matcher
from .sampling import ExampleSet, widen_char_sets
from .sat import SolverBudgetExceeded, solve
from .template import add_holes, distance, expand_holes, feasible

REPAIRED = "Repaired"
ALREADY_LTP = "AlreadyLtp"
TIMEOUT = "Timeout"
INFEASIBLE = "Infeasible"

NODE_SLACK = 10
SOLVER_CONFLICTS = 100_000
VERIFY_BUDGET = 1_000_000


@dataclass(frozen=True)
class RepairConfig:
    timeout: float = 30.0
    max_nodes: int = 50
    max_queue: int = 1_000_000
    example_count: int = 10
    widen: bool = False
    localize: bool = False
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("timeout", "max_nodes", "max_queue", "example_count"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be non-negative")


@dataclass
class RepairStats:
    templates_popped: int = 0
    templates_pruned: int = 0
    solver_calls: int = 0
    elapsed: float = 0.0

    def to_json(self) -> dict:
        return {
            "templatesPopped": self.templates_popped,
            "templatesPruned": self.templates_pruned,
            "solverCalls": self.solver_calls,
            "elapsed": round(self.elapsed, 6),
        }


@dataclass
class RepairResult:
    status: str
    output: A.Node | None = None
    cost: int | None = None
    stats: RepairStats = field(default_factory=RepairStats)
    trace: list | None = None

    def __post_init__(self):
        if self.status in (REPAIRED, ALREADY_LTP) and self.output is None:
            raise ValueError("a successful result needs an output")


def consistent(r: A.Node, positives: Iterable[str], negatives: Iterable[str]) -> bool:
    m = Matcher(r, VERIFY_BUDGET, memo=True)
    try:
        return all(m.accepts(w) for w in positives) and not any(m.accepts(w) for w in negatives)
    except BudgetExhausted:
        return False


def verify(r: A.Node, positives: Iterable[str], negatives: Iterable[str]) -> bool:
    """Independent check of a candidate: LTP and agreement with every example."""
    return not A.has_holes(r) and check_ltp(r).satisfies and consistent(r, positives, negatives)


# -- localization ------------------------------------------------------------

def _closed(sub: A.Node) -> A.Node:
    """Backreferences to captures outside the subtree become ε."""
    caps = set(A.capture_indexes(sub))
    return A.transform(sub, lambda n: A.Epsilon(span=n.span)
                       if isinstance(n, A.Backref) and n.index not in caps else n)


def localize(r: A.Node) -> list[tuple[tuple[int, int] | None, A.Node]]:
    """Minimal subtrees violating the LTP, found bottom-up."""
    out: list[tuple[tuple[int, int] | None, A.Node]] = []

    def go(n: A.Node) -> bool:
        bad_below = False
        for c in A.children(n):
            bad_below = go(c) or bad_below
        if bad_below:
            return True
        if not check_ltp(_closed(n)).satisfies:
            out.append((n.span, n))
            return True
        return False

    go(r)
    return out


def _flag_filter(r: A.Node) -> Callable[[A.Node, bool], bool] | None:
    found = localize(r)
    if not found:
        return None
    flagged = {id(n) for _, n in found}
    spans = [s for s, _ in found if s is not None]

    def allowed(n: A.Node, inherited: bool) -> bool:
        if inherited or id(n) in flagged:
            return True
        # templates are rebuilt on every step, so fall back to source spans
        return n.span is not None and any(s[0] <= n.span[0] and n.span[1] <= s[1] for s in spans)

    return allowed


# -- search ------------------------------------------------------------------

def _distance_cost(origin: A.Node):
    def cost(parent: A.Template, new: A.Node, removed: int, inserted: int) -> int:
        return max(parent.cost, distance(origin, new))

    return cost


def repair(r: A.Node, ex: ExampleSet, cfg: RepairConfig | None = None,
           record: bool = False) -> RepairResult:
    """Search templates in cost order; the first verified instantiation wins.

    With ``record`` the result carries the popped (cost, template) sequence.
    """
    cfg = cfg or RepairConfig()
    start = time.monotonic()
    deadline = start + cfg.timeout
    P, N = list(ex.positives), list(ex.negatives)
    stats = RepairStats()
    trace: list | None = [] if record else None

    def done(status: str, out: A.Node | None = None) -> RepairResult:
        stats.elapsed = time.monotonic() - start
        cost = distance(r, out) if out is not None else None
        return RepairResult(status, out, cost, stats, trace)

    alphabet = relevant_alphabet(r, P + N)
    max_nodes = max(cfg.max_nodes, A.size(r) + NODE_SLACK)
    cost_fn = _distance_cost(r)
    allowed = _flag_filter(r) if cfg.localize else None

    counter = itertools.count()
    heap: list = [(0, next(counter), A.Template(r, 0))]
    seen = {r}

    def push(ts: list[A.Template]) -> None:
        for t in ts:
            if t.ast in seen:
                continue
            seen.add(t.ast)
            if A.size(t.ast) > max_nodes or len(heap) >= cfg.max_queue:
                stats.templates_pruned += 1
                continue
            heapq.heappush(heap, (t.cost, next(counter), t))

    while heap:
        if time.monotonic() > deadline:
            return done(TIMEOUT)
        _, _, t = heapq.heappop(heap)
        stats.templates_popped += 1
        if trace is not None:
            trace.append((t.cost, t.ast))
        ast = t.ast

        if not A.has_holes(ast):
            if verify(ast, P, N):
                return done(ALREADY_LTP if ast == r else REPAIRED, ast)
            push(add_holes(t, cost_fn, allowed))
            continue

        expand = False
        if feasible(ast, P, N):
            phi_l = ltp_constraint(ast, alphabet)
            if isinstance(phi_l, Infeasible):
                # expansions only add bracket paths, so the conflict persists
                stats.templates_pruned += 1
            else:
                expand = True
                try:
                    phi = conj([consistency_constraint(ast, P, N, alphabet), phi_l])
                except EncodeBudgetExceeded:
                    phi = None
                if phi is not None and phi is not FALSE:
                    stats.solver_calls += 1
                    try:
                        model = solve(phi, SOLVER_CONFLICTS)
                    except SolverBudgetExceeded:
                        model = None
                    if model is not None:
                        out = instantiate(ast, model, alphabet)
                        if verify(out, P, N):
                            if cfg.widen:
                                out = widen_char_sets(out, P, N, alphabet)
                            return done(REPAIRED, out)
        else:
            stats.templates_pruned += 1
        if expand:
            push(expand_holes(t, cost_fn))
        push(add_holes(t, cost_fn, allowed))

    return done(INFEASIBLE)
