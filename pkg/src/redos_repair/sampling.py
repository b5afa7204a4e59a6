"""Example generation, language similarity and character-set widening."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Sequence

from . import ast as A
from .alphabet import relevant_alphabet
from .charset import ANY, PRINTABLE, CharSet
from .ltp import check_ltp
from .matcher import BudgetExhausted, Matcher

ENUM_BUDGET = 20_000
MATCH_BUDGET = 200_000
DEFAULT_CAP = 12


class EmptyPositives(ValueError):
    """The expression accepts nothing within the length cap."""


@dataclass(frozen=True)
class ExampleSet:
    positives: tuple[str, ...]
    negatives: tuple[str, ...]

    def __post_init__(self):
        if set(self.positives) & set(self.negatives):
            raise ValueError("a string is both a positive and a negative example")

    def validate(self, r: A.Node) -> None:
        m = Matcher(r, memo=True)
        for w in self.positives:
            if not m.accepts(w):
                raise ValueError(f"positive example {w!r} is rejected")
        for w in self.negatives:
            if m.accepts(w):
                raise ValueError(f"negative example {w!r} is accepted")


def _accepts(m: Matcher, w: str) -> bool | None:
    try:
        return m.accepts(w)
    except BudgetExhausted:
        return None


# -- seeds -----------------------------------------------------------------

def _factors(r: A.Node) -> list[A.Node]:
    if isinstance(r, A.Concat):
        return _factors(r.left) + _factors(r.right)
    return [r]


def _pick(cs: CharSet, rng: random.Random) -> str:
    return cs.sample_printable(rng)


def build_seed_strings(r: A.Node, rng: random.Random | int = 0) -> list[str]:
    """One random member per set node, literal runs as whole words, plus a
    fresh character; order of first discovery."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    seeds: dict[str, None] = {}

    def visit(n: A.Node) -> None:
        if isinstance(n, A.Concat):
            run: list[str] = []
            for f in _factors(n):
                if isinstance(f, A.Chars) and f.cs.is_singleton():
                    run.append(f.cs.first())
                    continue
                if run:
                    seeds["".join(run)] = None
                    run = []
                visit(f)
            if run:
                seeds["".join(run)] = None
            return
        if isinstance(n, A.Chars):
            if n.cs:
                seeds[_pick(n.cs, rng)] = None
            return
        for c in A.children(n):
            visit(c)

    visit(r)
    used = {c for s in seeds for c in s}
    pool = [c for c in PRINTABLE if c not in used and c.isalnum()] or [c for c in PRINTABLE if c not in used]
    if pool:
        seeds[rng.choice(pool)] = None
    return list(seeds)


# -- enumeration helpers -----------------------------------------------------

def _sequences(seeds: Sequence[str], k: int) -> Iterable[str]:
    for t in itertools.product(seeds, repeat=k):
        yield "".join(t)


def _count(s: int, upto: int) -> int:
    return sum(s ** j for j in range(upto + 1))


def shortest_witness(r: A.Node, seeds: Sequence[str] = ()) -> str | None:
    """A short string built structurally from r (lookarounds ignored),
    returned only if r really accepts it."""
    pref = [c for s in seeds for c in s]

    def member(cs: CharSet) -> str | None:
        for c in pref:
            if c in cs:
                return c
        if not cs:
            return None
        return cs.sample_printable(random.Random(0))

    caps: dict[int, str] = {}

    def go(n: A.Node) -> str | None:
        if isinstance(n, A.Chars):
            return member(n.cs)
        if isinstance(n, (A.Epsilon, A.Star, A.Lookaround)):
            return ""
        if isinstance(n, A.Concat):
            a = go(n.left)
            b = go(n.right) if a is not None else None
            return None if b is None else a + b
        if isinstance(n, A.Union):
            saved = dict(caps)
            a = go(n.left)
            left_caps = dict(caps)
            caps.clear()
            caps.update(saved)
            b = go(n.right)
            if a is None or (b is not None and len(b) < len(a)):
                return b
            caps.clear()
            caps.update(left_caps)
            return a
        if isinstance(n, A.Capture):
            x = go(n.body)
            if x is not None:
                caps[n.index] = x
            return x
        if isinstance(n, A.Backref):
            return caps.get(n.index)
        return None

    w = go(r)
    if w is None:
        return None
    m = Matcher(r, MATCH_BUDGET, memo=True)
    return w if _accepts(m, w) else None


def random_member(r: A.Node, rng: random.Random, chars: CharSet = PRINTABLE, star_p: float = 0.5,
                  max_len: int = 64) -> str | None:
    """A random string generated along r's structure; may be rejected by r."""
    caps: dict[int, str] = {}
    out: list[str] = []

    def go(n: A.Node, depth: int) -> bool:
        if len(out) > max_len or depth > 200:
            return False
        if isinstance(n, A.Chars):
            cs = (n.cs & chars) or n.cs
            if not cs:
                return False
            out.append(cs.sample(rng))
            return True
        if isinstance(n, (A.Epsilon, A.Lookaround)):
            return True
        if isinstance(n, A.Concat):
            return go(n.left, depth + 1) and go(n.right, depth + 1)
        if isinstance(n, A.Union):
            return go(n.left if rng.random() < 0.5 else n.right, depth + 1)
        if isinstance(n, A.Star):
            while rng.random() < star_p:
                if not go(n.body, depth + 1):
                    return False
            return True
        if isinstance(n, A.Capture):
            start = len("".join(out))
            ok = go(n.body, depth + 1)
            caps[n.index] = "".join(out)[start:]
            return ok
        if isinstance(n, A.Backref):
            out.append(caps.get(n.index, ""))
            return True
        return False

    return "".join(out) if go(r, 0) else None


# -- minimum accepted length -------------------------------------------------

def min_accept_length(r: A.Node, seeds: Sequence[str] | None = None, cap: int = DEFAULT_CAP,
                      budget: int = ENUM_BUDGET) -> int | None:
    """Least number of seed strings whose concatenation r accepts, by
    iterative deepening; None if none is found within the cap."""
    if seeds is None:
        seeds = build_seed_strings(r)
    m = Matcher(r, MATCH_BUDGET, memo=True)
    spent = 0
    s = len(seeds)
    for k in range(cap + 1):
        if spent + s ** k > budget:
            break
        for w in _sequences(seeds, k):
            spent += 1
            if _accepts(m, w):
                return k
    w = shortest_witness(r, seeds)
    if w is None:
        return None
    k = _seed_count(w, seeds)
    return k if k is not None and k <= cap else None


def _seed_count(w: str, seeds: Sequence[str]) -> int | None:
    """Fewest seeds whose concatenation is w (None if w cannot be split)."""
    best = [0] + [None] * len(w)
    for i in range(1, len(w) + 1):
        for s in seeds:
            j = i - len(s)
            if s and j >= 0 and best[j] is not None and w[j:i] == s:
                if best[i] is None or best[j] + 1 < best[i]:
                    best[i] = best[j] + 1
    return best[len(w)]


# -- sampling ----------------------------------------------------------------

def candidate_strings(r: A.Node, seeds: Sequence[str], upto: int, rng: random.Random,
                      budget: int = ENUM_BUDGET) -> list[str]:
    """Concatenations of at most ``upto`` seeds, all of them when the budget
    allows and otherwise a seeded random selection around a witness."""
    if _count(len(seeds), upto) <= budget:
        return list(dict.fromkeys(w for k in range(upto + 1) for w in _sequences(seeds, k)))
    found: dict[str, None] = {}
    base = shortest_witness(r, seeds)
    base_seq = _split(base, seeds) if base is not None else None
    for _ in range(budget // 2):
        k = rng.randint(0, upto)
        found["".join(rng.choice(seeds) for _ in range(k))] = None
    if base_seq is not None:
        for _ in range(budget // 2):
            seq = list(base_seq)
            for _ in range(rng.randint(1, 2)):
                op = rng.random()
                if op < 0.4 and seq:
                    seq[rng.randrange(len(seq))] = rng.choice(seeds)
                elif op < 0.7 and len(seq) < upto:
                    seq.insert(rng.randint(0, len(seq)), rng.choice(seeds))
                elif seq:
                    del seq[rng.randrange(len(seq))]
            if len(seq) <= upto:
                found["".join(seq)] = None
        found[base] = None
    return list(found)


def _split(w: str, seeds: Sequence[str]) -> list[str] | None:
    back: list[tuple[int, str] | None] = [None] * (len(w) + 1)
    ok = [True] + [False] * len(w)
    for i in range(1, len(w) + 1):
        for s in seeds:
            j = i - len(s)
            if s and j >= 0 and ok[j] and w[j:i] == s:
                ok[i] = True
                back[i] = (j, s)
                break
    if not ok[len(w)]:
        return None
    out = []
    i = len(w)
    while i:
        j, s = back[i]
        out.append(s)
        i = j
    return out[::-1]


def sample_examples(r: A.Node, k: int = 10, rng_seed: int = 0, cap: int = DEFAULT_CAP) -> ExampleSet:
    """Positive and negative examples drawn from seed concatenations of at
    most n+1 seeds, n being the least accepted seed count."""
    rng = random.Random(rng_seed)
    seeds = build_seed_strings(r, rng)
    n = min_accept_length(r, seeds, cap)
    if n is None:
        raise EmptyPositives("no accepted string within the length cap")
    m = Matcher(r, MATCH_BUDGET, memo=True)
    pos, negs = [], []
    for w in candidate_strings(r, seeds, n + 1, rng):
        verdict = _accepts(m, w)
        if verdict is True:
            pos.append(w)
        elif verdict is False:
            negs.append(w)
    if not pos:
        raise EmptyPositives("no accepted string among the candidates")
    pos.sort(key=lambda s: (len(s), s))
    negs.sort(key=lambda s: (len(s), s))
    P = pos if len(pos) <= k else rng.sample(pos, k)
    N = negs if len(negs) <= k else rng.sample(negs, k)
    return ExampleSet(tuple(P), tuple(N))


# -- similarity --------------------------------------------------------------

@dataclass(frozen=True)
class SimilarityReport:
    precision: Fraction
    recall: Fraction
    f1: Fraction
    sample_sizes: tuple[int, int]

    def to_json(self) -> dict:
        return {
            "precision": float(self.precision),
            "recall": float(self.recall),
            "f1": float(self.f1),
            "sample_sizes": list(self.sample_sizes),
        }


def approximate_language(r: A.Node, count: int = 100, rng: random.Random | int = 0,
                         budget: int = ENUM_BUDGET) -> list[str]:
    """Up to ``count`` accepted strings of length at most n+1 over printable
    ASCII; exhaustive when small, otherwise generated along r's structure."""
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    m = Matcher(r, MATCH_BUDGET, memo=True)
    alphabet = list(PRINTABLE)
    base = shortest_witness(r)
    n = len(base) if base is not None else None
    if n is None:
        for k in range(4):
            if _count(len(alphabet), k) > budget:
                break
            if any(_accepts(m, w) for w in _sequences(alphabet, k)):
                n = k
                break
    if n is None:
        return []
    if _count(len(alphabet), n + 1) <= budget:
        S = [w for k in range(n + 2) for w in _sequences(alphabet, k) if _accepts(m, w)]
    else:
        found: dict[str, None] = {}
        for _ in range(budget):
            w = random_member(r, rng, star_p=0.5, max_len=n + 1)
            if w is not None and len(w) <= n + 1 and w not in found and _accepts(m, w):
                found[w] = None
                if len(found) >= 4 * count:
                    break
        if base is not None:
            found.setdefault(base, None)
        S = sorted(found, key=lambda s: (len(s), s))
    return S if len(S) <= count else rng.sample(S, count)


def similarity(r1: A.Node, r2: A.Node, sample_count: int = 100, rng_seed: int = 0) -> SimilarityReport:
    """Precision of r2 and recall of r1 on approximate languages."""
    l1 = approximate_language(r1, sample_count, random.Random(rng_seed))
    l2 = approximate_language(r2, sample_count, random.Random(rng_seed + 1))
    m1 = Matcher(r1, MATCH_BUDGET, memo=True)
    m2 = Matcher(r2, MATCH_BUDGET, memo=True)
    prec = Fraction(sum(1 for w in l2 if _accepts(m1, w)), len(l2)) if l2 else Fraction(0)
    rec = Fraction(sum(1 for w in l1 if _accepts(m2, w)), len(l1)) if l1 else Fraction(0)
    f1 = 2 * prec * rec / (prec + rec) if prec + rec else Fraction(0)
    return SimilarityReport(prec, rec, f1, (len(l1), len(l2)))


# -- widening ----------------------------------------------------------------

def widen_char_sets(r: A.Node, positives: Iterable[str], negatives: Iterable[str], alphabet=None) -> A.Node:
    """Greedily add alphabet classes to each set while the expression stays
    consistent with the examples and keeps the LTP; repeated to a fixpoint."""
    P, N = list(positives), list(negatives)
    if alphabet is None:
        alphabet = relevant_alphabet(r, P + N)
    symbols = alphabet.symbols

    def ok(t: A.Node) -> bool:
        m = Matcher(t, MATCH_BUDGET, memo=True)
        try:
            if not all(m.accepts(w) for w in P) or any(m.accepts(w) for w in N):
                return False
        except BudgetExhausted:
            return False
        return check_ltp(t).satisfies

    positions = [i for i, n in enumerate(A.walk(r)) if isinstance(n, A.Chars)]
    changed = True
    while changed:
        changed = False
        for pos in positions:
            for a in symbols:
                node = _node_at(r, pos)
                if node.cs.is_universe():
                    break
                extra = alphabet.members(a)
                if extra.issubset(node.cs):
                    continue
                cand = _set_at(r, pos, replace(node, cs=node.cs | extra))
                if ok(cand):
                    r = cand
                    changed = True
    return r


def _node_at(r: A.Node, pos: int) -> A.Node:
    for i, n in enumerate(A.walk(r)):
        if i == pos:
            return n
    raise IndexError(pos)


def _set_at(r: A.Node, pos: int, new: A.Node) -> A.Node:
    counter = [0]

    def go(n: A.Node) -> A.Node:
        me = counter[0]
        counter[0] += 1
        if me == pos:
            counter[0] += A.size(n) - 1
            return new
        kids = A.children(n)
        return A.with_children(n, tuple(go(k) for k in kids)) if kids else n

    return go(r)


__all__ = [
    "ANY",
    "ExampleSet",
    "EmptyPositives",
    "SimilarityReport",
    "approximate_language",
    "build_seed_strings",
    "candidate_strings",
    "min_accept_length",
    "random_member",
    "sample_examples",
    "shortest_witness",
    "similarity",
    "widen_char_sets",
]
