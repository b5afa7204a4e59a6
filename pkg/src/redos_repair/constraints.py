"""Constraints over hole variables v_i^a.

``v_i^a`` true means the set filled into hole i contains the class of a,
where a ranges over a relevant alphabet (named characters plus ⊛).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from . import ast as A
from .alphabet import RelevantAlphabet
from .charset import EMPTY
from .formula import FALSE, TRUE, Formula, conj, disj, neg, var
from .ltp import bracket, enfa_translate, star_in_lookaround, targets

DEFAULT_STATE_BUDGET = 100_000


def hole_var(i: int, symbol: str) -> Formula:
    return var((i, symbol))


class EncodeBudgetExceeded(Exception):
    """The template has too many constrained matching states to encode."""


# -- example consistency -----------------------------------------------------

class _Encoder:
    """Runs the matching rules with every state guarded by the condition on
    hole variables under which it belongs to the result set.

    Guards are exact: a state is produced by the instantiation chosen by an
    assignment iff the assignment satisfies its guard.  Negative lookarounds
    negate the disjunction of the body's guards.
    """

    def __init__(self, t: A.Node, alphabet: RelevantAlphabet, budget: int):
        self.alphabet = alphabet
        self.budget = budget
        self.states = 0
        self.ncap = max([0] + A.capture_indexes(t) + A.backref_indexes(t)) + 1
        self.w = ""
        self.memo: dict = {}
        self.fn = self.build(t)

    def run(self, w: str) -> Formula:
        self.w = w
        self.memo = {}
        self.states = 0
        out = self.fn(0, (None,) * self.ncap)
        return disj(phi for (p, _), phi in out.items() if p == len(w))

    def count(self, k: int) -> None:
        self.states += k
        if self.states > self.budget:
            raise EncodeBudgetExceeded()

    def build(self, n: A.Node):
        fn = self.build_raw(n)
        key = id(fn)

        def memo(p, g):
            k = (key, p, g)
            hit = self.memo.get(k)
            if hit is None:
                hit = fn(p, g)
                self.memo[k] = hit
                self.count(len(hit) + 1)
            return hit

        return memo

    @staticmethod
    def merge(out: dict, state, phi: Formula) -> None:
        old = out.get(state)
        out[state] = phi if old is None else disj([old, phi])

    def build_raw(self, n: A.Node):
        e = self
        if isinstance(n, A.Chars):
            cs = n.cs

            def chars(p, g):
                w = e.w
                return {(p + 1, g): TRUE} if p < len(w) and w[p] in cs else {}

            return chars
        if isinstance(n, A.Hole):
            i = n.index

            def hole(p, g):
                w = e.w
                if p < len(w) and w[p] in _OUT_OF_RANGE:
                    return {}
                if p < len(w):
                    return {(p + 1, g): hole_var(i, e.alphabet.classify(w[p]))}
                return {}

            return hole
        if isinstance(n, A.Epsilon):
            return lambda p, g: {(p, g): TRUE}
        if isinstance(n, A.Concat):
            f1, f2 = self.build(n.left), self.build(n.right)

            def concat(p, g):
                out: dict = {}
                for s, phi in f1(p, g).items():
                    for s2, psi in f2(*s).items():
                        e.merge(out, s2, conj([phi, psi]))
                return out

            return concat
        if isinstance(n, A.Union):
            f1, f2 = self.build(n.left), self.build(n.right)

            def union(p, g):
                out = dict(f1(p, g))
                for s, phi in f2(p, g).items():
                    e.merge(out, s, phi)
                return out

            return union
        if isinstance(n, A.Star):
            fb = self.build(n.body)
            ref: list = []

            def star(p, g):
                here = (p, g)
                out = {here: TRUE}
                for s, phi in fb(p, g).items():
                    if s == here:
                        continue
                    for s2, psi in ref[0](*s).items():
                        e.merge(out, s2, conj([phi, psi]))
                return out

            ref.append(self.memoize(star))
            return star
        if isinstance(n, A.Capture):
            fb = self.build(n.body)
            j = n.index

            def capture(p, g):
                w = e.w
                out: dict = {}
                for (q, h), phi in fb(p, g).items():
                    e.merge(out, (q, h[:j] + (w[p:q],) + h[j + 1:]), phi)
                return out

            return capture
        if isinstance(n, A.Backref):
            i = n.index

            def backref(p, g):
                x = g[i] if i < len(g) else None
                if x is None or not e.w.startswith(x, p):
                    return {}
                return {(p + len(x), g): TRUE}

            return backref
        if isinstance(n, A.Lookaround):
            fb = self.build(n.body)
            if n.ahead and not n.negative:
                def pos_ahead(p, g):
                    out: dict = {}
                    for (_, h), phi in fb(p, g).items():
                        e.merge(out, (p, h), phi)
                    return out

                return pos_ahead
            if n.ahead:
                def neg_ahead(p, g):
                    ok = neg(disj(fb(p, g).values()))
                    return {} if ok is FALSE else {(p, g): ok}

                return neg_ahead
            k = sum(1 for x in A.walk(n.body) if isinstance(x, (A.Chars, A.Hole)))
            negative = n.negative

            def behind(p, g):
                w, memo = e.w, e.memo
                e.w = w[p - k:p] if p - k >= 0 else _OUT_OF_RANGE
                e.memo = {}
                try:
                    hit = disj(fb(0, g).values())
                finally:
                    e.w, e.memo = w, memo
                ok = neg(hit) if negative else hit
                return {} if ok is FALSE else {(p, g): ok}

            return behind
        raise TypeError(n)

    def memoize(self, fn):
        key = id(fn)

        def memo(p, g):
            k = (key, p, g)
            hit = self.memo.get(k)
            if hit is None:
                hit = fn(p, g)
                self.memo[k] = hit
                self.count(len(hit) + 1)
            return hit

        return memo


_OUT_OF_RANGE = "\ud800"


def encode(t: A.Node, w: str, alphabet: RelevantAlphabet, budget: int = DEFAULT_STATE_BUDGET) -> Formula:
    """Condition on hole variables under which the instantiation accepts w."""
    return _Encoder(t, alphabet, budget).run(w)


def consistency_constraint(t: A.Node, positives: Iterable[str], negatives: Iterable[str],
                           alphabet: RelevantAlphabet, budget: int = DEFAULT_STATE_BUDGET) -> Formula:
    enc = _Encoder(t, alphabet, budget)
    parts = [enc.run(w) for w in positives]
    for w in negatives:
        parts.append(neg(enc.run(w)))
        if parts[-1] is FALSE:
            return FALSE
    return conj(parts)


# -- linear-time property ---------------------------------------------------

@dataclass(frozen=True)
class Infeasible:
    """No filling of the holes can satisfy the property."""

    reason: str

    def __bool__(self) -> bool:
        return False


def ltp_constraint(t: A.Node, alphabet: RelevantAlphabet) -> Formula | Infeasible:
    """Condition on hole variables under which the instantiation has the LTP.

    Holes act as one-symbol sets in the translation.  For every open bracket,
    a concrete set reachable by two bracket paths, or two sets reachable by
    different paths that overlap, make the template infeasible; a hole in
    that position must avoid every symbol of the competing set, and two
    holes must be disjoint.  A hole reachable along two paths must be empty.
    """
    if star_in_lookaround(t) is not None:
        return Infeasible("repetition in a lookaround")
    b = bracket(A.rmla(t))
    nfa = enfa_translate(b)
    symbols = alphabet.symbols
    empty_holes: set[int] = set()
    banned: set[tuple[int, str]] = set()
    pairs: set[tuple[int, int]] = set()
    for x in b.walk():
        ts = targets(nfa, nfa.bracket_source[x.index])
        for t1 in ts:
            if t1.paths > 1:
                if t1.label.cs:
                    return Infeasible(f"bracket {x.index}: a character is reachable along two paths")
                empty_holes.update(t1.label.holes)
        acc = EMPTY
        for k, t2 in enumerate(ts):
            if acc & t2.label.cs:
                return Infeasible(f"bracket {x.index}: two paths reach a common character")
            acc = acc | t2.label.cs
            for t1 in ts[:k]:
                for h in t2.label.holes:
                    for a in alphabet.symbols_in(t1.label.cs):
                        banned.add((h, a))
                    for h1 in t1.label.holes:
                        if h1 == h:
                            empty_holes.add(h)
                        else:
                            pairs.add((min(h, h1), max(h, h1)))
                for h in t1.label.holes:
                    for a in alphabet.symbols_in(t2.label.cs):
                        banned.add((h, a))
    parts: list[Formula] = []
    for h in sorted(empty_holes):
        parts.extend(neg(hole_var(h, a)) for a in symbols)
    for h, a in sorted(banned):
        if h not in empty_holes:
            parts.append(neg(hole_var(h, a)))
    for i, j in sorted(pairs):
        if i in empty_holes or j in empty_holes:
            continue
        for a in symbols:
            if (i, a) in banned or (j, a) in banned:
                continue
            parts.append(disj([neg(hole_var(i, a)), neg(hole_var(j, a))]))
    return conj(parts)


def invulnerable_constraint(t: A.Node, positives: Iterable[str], negatives: Iterable[str],
                            alphabet: RelevantAlphabet, budget: int = DEFAULT_STATE_BUDGET) -> Formula:
    """φ_c ∧ φ_l, or false when the template is infeasible for the LTP."""
    phi_l = ltp_constraint(t, alphabet)
    if isinstance(phi_l, Infeasible):
        return FALSE
    phi_c = consistency_constraint(t, positives, negatives, alphabet, budget)
    return conj([phi_c, phi_l])


# -- instantiation ----------------------------------------------------------

def instantiate(t: A.Node, assignment: Mapping[Hashable, bool], alphabet: RelevantAlphabet) -> A.Node:
    """Fill hole i with the union of the classes a where v_i^a is true."""
    fill = {}
    for i in set(A.hole_indexes(t)):
        fill[i] = alphabet.to_charset(a for a in alphabet.symbols if assignment.get((i, a), False))

    def fn(n: A.Node) -> A.Node:
        if isinstance(n, A.Hole):
            return A.Chars(fill[n.index], span=n.span)
        return n

    return A.transform(t, fn)
