"""Random expressions and templates for property tests, plus small oracles."""

from __future__ import annotations

import itertools
import random

from redos_repair import ast as A
from redos_repair.charset import CharSet

AB = ("a", "b")
FILLS = (CharSet.from_chars("a"), CharSet.from_chars("b"), CharSet.from_chars("ab"), CharSet.empty())


def strings(alphabet=AB, max_len=4) -> list[str]:
    return ["".join(t) for k in range(max_len + 1) for t in itertools.product(alphabet, repeat=k)]


def _leaf(rng: random.Random, chars: str) -> A.Node:
    k = rng.random()
    if k < 0.15:
        return A.Epsilon()
    pool = [CharSet.from_chars(c) for c in chars] + [CharSet.from_chars(chars)]
    if k < 0.25:
        pool.append(CharSet.empty())
    return A.Chars(rng.choice(pool))


class RandomRegex:
    """Random trees of at most ``max_nodes`` nodes.

    Stars and groups stay out of lookarounds unless ``free_lookaheads`` is
    set, lookbehind bodies are fixed-length and backreferences only point at
    groups closed to their left.
    """

    def __init__(self, rng: random.Random, max_nodes: int = 8, max_holes: int = 0, chars: str = "ab",
                 lookarounds: bool = True, backrefs: bool = True, stars: bool = True,
                 free_lookaheads: bool = False):
        self.rng = rng
        self.max_nodes = max_nodes
        self.max_holes = max_holes
        self.chars = chars
        self.lookarounds = lookarounds
        self.backrefs = backrefs
        self.stars = stars
        self.free = free_lookaheads

    def __call__(self) -> A.Node:
        self.holes = 0
        self.closed: list[int] = []
        self.next_cap = 1
        budget = self.rng.randint(1, self.max_nodes)
        return A.canonical(self.node(budget, False, False))

    def leaf(self, look: bool, behind: bool) -> A.Node:
        rng = self.rng
        if self.holes < self.max_holes and rng.random() < 0.45:
            self.holes += 1
            return A.Hole(self.holes - 1)
        if self.backrefs and not behind and self.closed and rng.random() < 0.2:
            return A.Backref(rng.choice(self.closed))
        return _leaf(rng, self.chars)

    def node(self, budget: int, look: bool, behind: bool) -> A.Node:
        rng = self.rng
        if budget <= 1:
            return self.leaf(look, behind)
        kinds = ["cat"]
        if not behind:
            kinds.append("alt")
            if (not look or self.free) and self.stars:
                kinds.append("star")
            if not look or self.free:
                kinds.append("cap")
            if self.lookarounds and not look:
                kinds.append("look")
        elif budget >= 3:
            kinds = ["cat"]
        if budget == 2:
            kinds = [k for k in kinds if k != "cat" and k != "alt"] or ["leaf"]
        k = rng.choice(kinds)
        if k == "leaf":
            return self.leaf(look, behind)
        if k in ("cat", "alt"):
            left = rng.randint(1, budget - 2)
            a = self.node(left, look, behind)
            b = self.node(budget - 1 - left, look, behind)
            return A.Concat(a, b) if k == "cat" else A.Union(a, b)
        if k == "star":
            return A.Star(self.node(budget - 1, look, behind))
        if k == "cap":
            i = self.next_cap
            self.next_cap += 1
            body = self.node(budget - 1, look, behind)
            self.closed.append(i)
            return A.Capture(i, body)
        ahead = rng.random() < 0.6
        negative = rng.random() < 0.5
        saved = list(self.closed)
        body = self.node(budget - 1, True, not ahead)
        self.closed = saved
        return A.Lookaround(body, ahead, negative)


def random_regex(seed: int, **kw) -> A.Node:
    return RandomRegex(random.Random(seed), **kw)()


def random_template(seed: int, max_nodes: int = 8, max_holes: int = 3, **kw) -> A.Node:
    return RandomRegex(random.Random(seed), max_nodes=max_nodes, max_holes=max_holes, **kw)()


def fill(t: A.Node, sets) -> A.Node:
    """Replace hole i by ``sets[i]``."""
    return A.transform(t, lambda n: A.Chars(sets[n.index]) if isinstance(n, A.Hole) else n)


def fillings(t: A.Node, choices=FILLS):
    k = len(A.hole_indexes(t))
    for combo in itertools.product(choices, repeat=k):
        yield combo, fill(t, combo)


# -- brute-force distance ------------------------------------------------------

def _tree(n: A.Node):
    return (A.label(n),) + tuple(_tree(c) for c in A.children(n))


def _cuts(t):
    """Every (skeleton, cost) obtained by cutting out disjoint subtrees."""
    size = _size(t)
    yield ("#",), size
    kids = t[1:]
    options = [list(_cuts(k)) for k in kids]
    for combo in itertools.product(*options):
        yield (t[0],) + tuple(s for s, _ in combo), sum(c for _, c in combo)


def _size(t) -> int:
    return 1 + sum(_size(k) for k in t[1:])


def brute_distance(r1: A.Node, r2: A.Node) -> int:
    """Minimum cost over matching pairs of cut skeletons.

    A cut is paired with the cut at the same place in the other tree, so
    skeletons must coincide; each pair costs the sizes of both subtrees.
    Cutting two equal subtrees is allowed but never cheaper than keeping them.
    """
    a, b = _tree(r1), _tree(r2)
    if a == b:
        return 0
    best = None
    right: dict = {}
    for s, c in _cuts(b):
        right[s] = min(c, right.get(s, c))
    for s, c in _cuts(a):
        if s in right:
            total = c + right[s]
            if best is None or total < best:
                best = total
    return best


def all_trees(max_nodes: int, leaves=("a", "b")):
    """Every tree over concat, union, star and the given literals."""
    lits = [A.Chars(CharSet.from_chars(c)) for c in leaves]
    by_size: dict[int, list[A.Node]] = {1: list(lits)}
    for n in range(2, max_nodes + 1):
        out = [A.Star(t) for t in by_size[n - 1]]
        for k in range(1, n - 1):
            for x in by_size[k]:
                for y in by_size[n - 1 - k]:
                    out.append(A.Concat(x, y))
                    out.append(A.Union(x, y))
        by_size[n] = out
    return [t for n in sorted(by_size) for t in by_size[n]]


# -- translation to Python's re, used as a membership oracle --------------------

def _py_class(cs: CharSet) -> str:
    if not cs:
        return "(?!)"
    parts = []
    for lo, hi in cs.intervals:
        if lo == hi:
            parts.append("\\x{:02x}".format(lo) if lo < 256 else "\\U{:08x}".format(lo))
        else:
            f = (lambda x: "\\x{:02x}".format(x) if x < 256 else "\\U{:08x}".format(x))
            parts.append(f(lo) + "-" + f(hi))
    return "[" + "".join(parts) + "]"


def to_python_re(r: A.Node) -> str:
    if isinstance(r, A.Chars):
        return _py_class(r.cs)
    if isinstance(r, A.Epsilon):
        return ""
    if isinstance(r, A.Concat):
        return "(?:" + to_python_re(r.left) + to_python_re(r.right) + ")"
    if isinstance(r, A.Union):
        return "(?:" + to_python_re(r.left) + "|" + to_python_re(r.right) + ")"
    if isinstance(r, A.Star):
        return "(?:" + to_python_re(r.body) + ")*"
    if isinstance(r, A.Capture):
        return "(?P<g%d>" % r.index + to_python_re(r.body) + ")"
    if isinstance(r, A.Backref):
        return "(?P=g%d)" % r.index
    if isinstance(r, A.Lookaround):
        op = ("(?=" if not r.negative else "(?!") if r.ahead else ("(?<=" if not r.negative else "(?<!")
        return op + to_python_re(r.body) + ")"
    raise TypeError(r)


# -- random propositional formulas and a vectorised truth table ---------------

def random_formula(rng: random.Random, nvars: int, depth: int = 5):
    from redos_repair.formula import conj, disj, neg, var

    def go(d):
        if d == 0 or rng.random() < 0.25:
            x = var(rng.randrange(nvars))
            return neg(x) if rng.random() < 0.5 else x
        k = rng.random()
        if k < 0.2:
            return neg(go(d - 1))
        parts = [go(d - 1) for _ in range(rng.randint(2, 3))]
        return conj(parts) if k < 0.6 else disj(parts)

    return go(depth)


def random_3cnf(rng: random.Random, nvars: int, nclauses: int):
    from redos_repair.formula import conj, disj, neg, var

    clauses = []
    for _ in range(nclauses):
        lits = [var(v) if rng.random() < 0.5 else neg(var(v)) for v in rng.sample(range(nvars), 3)]
        clauses.append(disj(lits))
    return conj(clauses)


def truth_table(f, nvars: int):
    """Value of f under all 2**nvars assignments of variables 0..nvars-1."""
    import numpy as np

    rows = np.arange(2 ** nvars, dtype=np.int64)
    cols = [((rows >> i) & 1).astype(bool) for i in range(nvars)]
    memo: dict[int, object] = {}

    def go(g):
        if id(g) in memo:
            return memo[id(g)]
        if g.op == "const":
            out = np.full(rows.shape, g.args[0], dtype=bool)
        elif g.op == "var":
            out = cols[g.args[0]]
        elif g.op == "not":
            out = ~go(g.args[0])
        elif g.op == "and":
            out = np.logical_and.reduce([go(a) for a in g.args])
        else:
            out = np.logical_or.reduce([go(a) for a in g.args])
        memo[id(g)] = out
        return out

    return go(f)


# examples for .*.*=.* used throughout the walkthrough tests
EQ_POS = ["=", "abcd==", "==abcd", "ab=c"]
EQ_NEG = ["abc"]
