"""Backtracking matching semantics with derivation-size accounting.

Each node of the derivation tree (one rule application) adds one to the
running time.  A backreference to a captured string ``x`` is matched by
direct comparison but charged ``|x| + 1`` extra nodes, the size of the
sub-derivation that matches ``x`` as a literal expression.
"""

from __future__ import annotations

import itertools
import sys
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from . import ast as A
from .charset import CharSet

DEFAULT_BUDGET = 10_000_000
# Stand-in for an out-of-range lookbehind slice; a surrogate is never in Σ.
OUT_OF_RANGE = "\ud800"

CaptureMap = tuple  # index -> str | None, slot 0 unused
State = tuple  # (position, CaptureMap)


class BudgetExhausted(Exception):
    """Raised internally when a match exceeds its node budget."""


class Exhausted(int):
    """Time value returned when the budget ran out; the int is the budget."""

    def __repr__(self) -> str:
        return f"Exhausted({int(self)})"


@dataclass(frozen=True)
class MatchResultSet:
    states: tuple[State, ...]
    size: int

    @property
    def positions(self) -> set[int]:
        return {p for p, _ in self.states}

    def captures(self) -> list[dict[int, str | None]]:
        return [capture_dict(g) for _, g in self.states]


def capture_dict(g: CaptureMap) -> dict[int, str | None]:
    return {i: g[i] for i in range(1, len(g))}


def _member(cs: CharSet) -> Callable[[str], bool]:
    if len(cs) <= 512:
        return frozenset(cs).__contains__
    comp = cs.complement()
    if len(comp) <= 512:
        excluded = frozenset(comp)
        return lambda c: c not in excluded and c != OUT_OF_RANGE
    return cs.__contains__


def literal_cost(x: str, w: str, p: int) -> tuple[bool, int]:
    """Whether x occurs in w at p, and the size of the derivation that matches
    x read as a left-nested concatenation of single characters."""
    k = len(x)
    if k == 0:
        return True, 1
    m = 0
    while m < k and p + m < len(w) and w[p + m] == x[m]:
        m += 1
    if m == k:
        return True, 2 * k - 1
    return False, m + k


def _fixed_length(r: A.Node) -> int:
    return sum(1 for n in A.walk(r) if isinstance(n, (A.Chars, A.Hole)))


class Matcher:
    """Compiled matcher for one expression; reusable across strings."""

    def __init__(self, r: A.Node, budget: int = DEFAULT_BUDGET, memo: bool = False):
        self.r = r
        self.budget = budget
        self.memo_enabled = memo
        self.ncap = max([0] + A.capture_indexes(r) + A.backref_indexes(r)) + 1
        self.w = ""
        self.count = 0
        self.memo: dict | None = None
        self._ids = itertools.count()
        self.fn = self._build(r)

    # -- public
    def run(self, w: str, p: int = 0, caps: Mapping[int, str | None] | CaptureMap | None = None) -> MatchResultSet:
        if not 0 <= p <= len(w):
            raise ValueError("position out of range")
        g = self._caps(caps)
        try:
            states = self._run(w, p, g)
        except RecursionError:
            states = _deep(lambda: self._run(w, p, g))
        return MatchResultSet(tuple(states), self.count)

    def accepts(self, w: str) -> bool:
        res = self.run(w)
        n = len(w)
        return any(p == n for p, _ in res.states)

    # -- internals
    def _caps(self, caps) -> CaptureMap:
        g = [None] * self.ncap
        if caps is None:
            return tuple(g)
        if isinstance(caps, tuple):
            return caps
        for k, v in caps.items():
            if k >= len(g):
                g.extend([None] * (k - len(g) + 1))
            g[k] = v
        return tuple(g)

    def _run(self, w: str, p: int, g: CaptureMap):
        self.w = w
        self.count = 0
        self.active: set = set()
        self.cuts = 0
        self.memo = {} if self.memo_enabled else None
        return self.fn(p, g)

    def _tick(self, k: int = 1) -> None:
        self.count += k
        if self.count > self.budget:
            raise BudgetExhausted()

    def _build(self, r: A.Node):
        fn = self._build_raw(r)
        if not self.memo_enabled:
            return fn
        key = next(self._ids)

        def memo(p, g):
            m = self.memo
            k = (key, p, g)
            hit = m.get(k)
            if hit is None:
                cuts = self.cuts
                hit = fn(p, g)
                if self.cuts == cuts:
                    m[k] = hit
            return hit

        return memo

    def _build_raw(self, r: A.Node):
        m = self
        if isinstance(r, A.Chars):
            member = _member(r.cs)

            def chars(p, g):
                m.count += 1
                if m.count > m.budget:
                    raise BudgetExhausted()
                w = m.w
                if p < len(w) and member(w[p]):
                    return {(p + 1, g): None}
                return {}

            return chars

        if isinstance(r, A.Epsilon):
            def eps(p, g):
                m._tick()
                return {(p, g): None}

            return eps

        if isinstance(r, A.Concat):
            f1, f2 = self._build(r.left), self._build(r.right)

            def concat(p, g):
                m._tick()
                out = {}
                for q, h in f1(p, g):
                    out.update(f2(q, h))
                return out

            return concat

        if isinstance(r, A.Union):
            f1, f2 = self._build(r.left), self._build(r.right)

            def union(p, g):
                m._tick()
                out = dict(f1(p, g))
                out.update(f2(p, g))
                return out

            return union

        if isinstance(r, A.Star):
            fb = self._build(r.body)

            key = next(self._ids)

            def star(p, g):
                m._tick()
                out = {(p, g): None}
                here = (p, g)
                # zero-width iterations can cycle through capture states; such
                # a derivation is infinite, so take the reachable states instead
                # and keep the partial results out of the memo table
                tag = (key, p, g)
                if tag in m.active:
                    m.cuts += 1
                    return out
                m.active.add(tag)
                try:
                    for s in fb(p, g):
                        if s != here:
                            out.update(star_ref(*s))
                finally:
                    m.active.discard(tag)
                return out

            star_ref = self._wrap_memo(star)
            return star

        if isinstance(r, A.Capture):
            fb = self._build(r.body)
            j = r.index

            def capture(p, g):
                m._tick()
                w = m.w
                out = {}
                for q, h in fb(p, g):
                    out[(q, h[:j] + (w[p:q],) + h[j + 1:])] = None
                return out

            return capture

        if isinstance(r, A.Backref):
            i = r.index

            def backref(p, g):
                m._tick()
                x = g[i] if i < len(g) else None
                if x is None:
                    return {}
                ok, cost = literal_cost(x, m.w, p)
                m._tick(cost)
                return {(p + len(x), g): None} if ok else {}

            return backref

        if isinstance(r, A.Lookaround):
            fb = self._build(r.body)
            if r.ahead and not r.negative:
                def pos_ahead(p, g):
                    m._tick()
                    return {(p, h): None for _, h in fb(p, g)}

                return pos_ahead
            if r.ahead:
                def neg_ahead(p, g):
                    m._tick()
                    return {} if fb(p, g) else {(p, g): None}

                return neg_ahead
            k = _fixed_length(r.body)
            negative = r.negative

            def behind(p, g):
                m._tick()
                w, memo = m.w, m.memo
                x = w[p - k:p] if p - k >= 0 else OUT_OF_RANGE
                m.w = x
                m.memo = {} if memo is not None else None
                try:
                    hit = bool(fb(0, g))
                finally:
                    m.w, m.memo = w, memo
                return {(p, g): None} if hit != negative else {}

            return behind

        if isinstance(r, A.Hole):
            raise TypeError("cannot match a template with holes; instantiate it first")
        raise TypeError(f"unknown node {r!r}")

    def _wrap_memo(self, fn):
        if not self.memo_enabled:
            return fn
        key = next(self._ids)

        def memo(p, g):
            k = (key, p, g)
            hit = self.memo.get(k)
            if hit is None:
                cuts = self.cuts
                hit = fn(p, g)
                if self.cuts == cuts:
                    self.memo[k] = hit
            return hit

        return memo


def _deep(thunk):
    """Run thunk on a thread with a large stack and recursion limit."""
    box: dict = {}

    def target():
        old = sys.getrecursionlimit()
        sys.setrecursionlimit(1_000_000)
        try:
            box["value"] = thunk()
        except BaseException as exc:  # re-raised in the caller
            box["error"] = exc
        finally:
            sys.setrecursionlimit(old)

    prev = threading.stack_size()
    threading.stack_size(512 * 1024 * 1024)
    try:
        t = threading.Thread(target=target)
        t.start()
        t.join()
    finally:
        threading.stack_size(prev)
    if "error" in box:
        raise box["error"]
    return box["value"]


# -- functional API ------------------------------------------------------

def step(r: A.Node, w: str, p: int = 0, caps: Mapping[int, str | None] | None = None,
         budget: int = DEFAULT_BUDGET) -> MatchResultSet:
    """The full result set of (r, w, p, Γ) together with the derivation size."""
    return Matcher(r, budget).run(w, p, caps)


def accepts(r: A.Node, w: str, budget: int = DEFAULT_BUDGET) -> bool:
    """Language membership.  Uses memoized evaluation, which yields the same
    result set as the plain derivation without its running time."""
    return Matcher(r, budget, memo=True).accepts(w)


def time(r: A.Node, w: str, budget: int = DEFAULT_BUDGET) -> int:
    """Derivation size of (r, w, 0, ∅); an Exhausted value past the budget."""
    m = Matcher(r, budget)
    try:
        return m.run(w).size
    except BudgetExhausted:
        return Exhausted(budget)


def language_sample(r: A.Node, max_len: int, alphabet: Iterable[str], budget: int = 200_000) -> set[str]:
    """Every string of length <= max_len over alphabet that r accepts."""
    chars = sorted(set(alphabet))
    total = sum(len(chars) ** k for k in range(max_len + 1))
    if total > budget:
        raise ValueError(f"{total} strings exceed the enumeration budget {budget}")
    m = Matcher(r, memo=True)
    out = set()
    for k in range(max_len + 1):
        for t in itertools.product(chars, repeat=k):
            s = "".join(t)
            if m.accepts(s):
                out.add(s)
    return out
