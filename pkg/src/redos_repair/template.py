"""Templates: distance, approximations, feasibility, hole expansion and addition."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Iterable

from . import ast as A
from .charset import ANY, EMPTY
from .matcher import Matcher


# -- distance --------------------------------------------------------------

def distance(r1: A.Node, r2: A.Node) -> int:
    """Least total size of non-overlapping subtree replacements turning r1
    into r2; a replacement of s by s' costs |s| + |s'|."""
    sizes: dict[int, int] = {}

    def sz(n: A.Node) -> int:
        k = id(n)
        if k not in sizes:
            sizes[k] = 1 + sum(sz(c) for c in A.children(n))
        return sizes[k]

    def go(a: A.Node, b: A.Node) -> int:
        if a is b or a == b:
            return 0
        whole = sz(a) + sz(b)
        ka, kb = A.children(a), A.children(b)
        if ka and len(ka) == len(kb) and A.label(a) == A.label(b):
            return min(whole, sum(go(x, y) for x, y in zip(ka, kb)))
        return whole

    return go(r1, r2)


# -- approximations --------------------------------------------------------

@dataclass(frozen=True)
class ApproxPair:
    over: A.Node
    under: A.Node


_SIGMA_STAR = A.Star(A.Chars(ANY))
_FAIL = A.Chars(EMPTY)


def approximate(t: A.Node) -> ApproxPair:
    """Over- and under-approximation of every filling of t's holes.

    Holes become Σ* and ∅, or Σ and ∅ inside a lookbehind where a hole
    stands for one character.  Polarity flips under negative lookarounds.
    Capturing groups keep their wrapper so backreferences still resolve.
    """

    def go(n: A.Node, behind: bool) -> tuple[A.Node, A.Node]:
        if isinstance(n, A.Hole):
            return (A.Chars(ANY) if behind else _SIGMA_STAR), _FAIL
        if isinstance(n, (A.Chars, A.Epsilon, A.Backref)):
            return n, n
        if isinstance(n, (A.Concat, A.Union)):
            lo, lu = go(n.left, behind)
            ro, ru = go(n.right, behind)
            return replace(n, left=lo, right=ro), replace(n, left=lu, right=ru)
        if isinstance(n, (A.Star, A.Capture)):
            o, u = go(n.body, behind)
            return replace(n, body=o), replace(n, body=u)
        if isinstance(n, A.Lookaround):
            o, u = go(n.body, behind or not n.ahead)
            if n.negative:
                o, u = u, o
            return replace(n, body=o), replace(n, body=u)
        raise TypeError(n)

    o, u = go(t, False)
    return ApproxPair(o, u)


def feasible(t: A.Node, positives: Iterable[str], negatives: Iterable[str]) -> bool:
    """P ⊆ L(t⊤) and N ∩ L(t⊥) = ∅."""
    pair = approximate(t)
    over = Matcher(pair.over, memo=True)
    if not all(over.accepts(w) for w in positives):
        return False
    if not A.has_holes(t):
        return not any(over.accepts(w) for w in negatives)
    under = Matcher(pair.under, memo=True)
    return not any(under.accepts(w) for w in negatives)


# -- hole contexts ---------------------------------------------------------

@dataclass(frozen=True)
class HoleContext:
    index: int
    in_lookaround: bool
    in_lookbehind: bool
    captures_before: tuple[int, ...]  # closed to the left, not enclosing


def hole_contexts(t: A.Node) -> list[HoleContext]:
    out: list[HoleContext] = []
    closed: list[int] = []

    def go(n: A.Node, look: bool, behind: bool) -> None:
        if isinstance(n, A.Hole):
            out.append(HoleContext(n.index, look, behind, tuple(closed)))
            return
        if isinstance(n, A.Lookaround):
            go(n.body, True, behind or not n.ahead)
            return
        for c in A.children(n):
            go(c, look, behind)
        if isinstance(n, A.Capture):
            closed.append(n.index)

    go(t, False, False)
    return out


def _replace_hole(t: A.Node, index: int, new: A.Node) -> A.Node:
    def fn(n: A.Node) -> A.Node:
        if isinstance(n, A.Hole) and n.index == index:
            return _with_span(new, n.span)
        return n

    return A.transform(t, fn)


def _with_span(n: A.Node, span) -> A.Node:
    if span is None:
        return n
    return A.transform(n, lambda x: replace(x, span=span) if x.span is None else x)


def productions(ctx: HoleContext, fresh_hole: int, fresh_cap: int) -> list[A.Node]:
    """Replacements for one hole, following the template grammar."""
    h1, h2 = A.Hole(fresh_hole), A.Hole(fresh_hole + 1)
    if ctx.in_lookbehind:
        # fixed-length bodies only
        return [A.Concat(h1, h2), A.Epsilon()]
    out: list[A.Node] = [A.Concat(h1, h2), A.Union(h1, h2)]
    if not ctx.in_lookaround:
        out.append(A.Star(h1))
    out.append(A.Capture(fresh_cap, h1))
    out.extend(A.Backref(i) for i in ctx.captures_before)
    out.extend([
        A.Lookaround(h1, True, False),
        A.Lookaround(h1, True, True),
        A.Lookaround(h1, False, False),
        A.Lookaround(h1, False, True),
        A.Epsilon(),
    ])
    return out


def additive_cost(parent: A.Template, new: A.Node, removed: int, inserted: int) -> int:
    return parent.cost + removed + inserted


def expand_holes(t: A.Template, cost: Callable[[A.Template, A.Node, int, int], int] = additive_cost) -> list[A.Template]:
    """One successor per hole and production, canonically renumbered."""
    ast = t.ast
    holes = A.hole_indexes(ast)
    if not holes:
        return []
    fresh_hole = max(holes) + 1
    fresh_cap = A.max_capture(ast) + 1
    out = []
    for ctx in hole_contexts(ast):
        for prod in productions(ctx, fresh_hole, fresh_cap):
            new = A.canonical(_replace_hole(ast, ctx.index, prod))
            out.append(A.Template(new, cost(t, new, 1, A.size(prod))))
    return out


def add_holes(t: A.Template, cost: Callable[[A.Template, A.Node, int, int], int] = additive_cost,
              allowed: Callable[[A.Node, bool], bool] | None = None) -> list[A.Template]:
    """Turn one leaf into a hole, or collapse a node whose children are all holes.

    ``allowed(node, inherited)`` restricts where holes may be introduced.
    """
    ast = t.ast
    fresh = max(A.hole_indexes(ast), default=-1) + 1
    referenced = set(A.backref_indexes(ast))
    out: list[A.Template] = []
    seen: set = set()
    targets: list[tuple[int, A.Node]] = []

    def collect(n: A.Node, pos: list[int], inside: bool) -> None:
        me = pos[0]
        pos[0] += 1
        here = allowed(n, inside) if allowed else True
        kids = A.children(n)
        if not kids:
            if isinstance(n, (A.Chars, A.Epsilon, A.Backref)) and here:
                targets.append((me, n))
        elif here and all(isinstance(k, A.Hole) for k in kids):
            if not (isinstance(n, A.Capture) and n.index in referenced):
                targets.append((me, n))
        for k in kids:
            collect(k, pos, here if allowed else True)

    collect(ast, [0], False)
    for pos, node in targets:
        new = A.canonical(_replace_at(ast, pos, A.Hole(fresh, span=node.span)))
        key = new
        if key in seen:
            continue
        seen.add(key)
        out.append(A.Template(new, cost(t, new, A.size(node), 1)))
    return out


def _replace_at(t: A.Node, target: int, new: A.Node) -> A.Node:
    counter = [0]

    def go(n: A.Node) -> A.Node:
        me = counter[0]
        counter[0] += 1
        if me == target:
            counter[0] += A.size(n) - 1
            return new
        kids = A.children(n)
        if not kids:
            return n
        return A.with_children(n, tuple(go(k) for k in kids))

    return go(t)
