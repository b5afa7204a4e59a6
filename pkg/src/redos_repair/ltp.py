"""The linear-time property.

Every subexpression of the lookaround-free expression is wrapped in a
unique bracket pair, the bracketed expression is translated to an NFA whose
bracket symbols are ordinary transitions, and the property asks that from
the source of every open bracket there is at most one bracket-only path to
an edge reading any given character.  Lookarounds must also be free of
repetition.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from . import ast as A
from .charset import EMPTY, CharSet


# -- bracketing ------------------------------------------------------------

@dataclass(frozen=True)
class Bracketed:
    """A subexpression wrapped as [i s ]i; kids are the bracketed children."""

    index: int
    node: A.Node
    kids: tuple[Bracketed, ...] = ()

    def unwrap(self) -> A.Node:
        if not self.kids:
            return self.node
        return A.with_children(self.node, tuple(k.unwrap() for k in self.kids))

    def text(self) -> str:
        n, i = self.node, self.index
        k = [c.text() for c in self.kids]
        if isinstance(n, A.Chars):
            from .printer import charset_text
            body = charset_text(n.cs)
        elif isinstance(n, A.Epsilon):
            body = "ε"
        elif isinstance(n, A.Hole):
            body = f"□{n.index}"
        elif isinstance(n, A.Backref):
            body = f"\\{n.index}"
        elif isinstance(n, A.Concat):
            body = k[0] + k[1]
        elif isinstance(n, A.Union):
            body = f"{k[0]}|{k[1]}"
        elif isinstance(n, A.Star):
            body = f"({k[0]})*"
        elif isinstance(n, A.Capture):
            body = f"({k[0]})_{n.index}"
        else:
            head = {(True, False): "?=", (True, True): "?!", (False, False): "?<=", (False, True): "?<!"}
            body = f"({head[n.ahead, n.negative]}{k[0]})"
        return f"[{i}{body}]{i}"

    def walk(self) -> Iterator[Bracketed]:
        stack = [self]
        while stack:
            b = stack.pop()
            yield b
            stack.extend(reversed(b.kids))


def bracket(r: A.Node) -> Bracketed:
    """Wrap every subexpression, numbering brackets from 1 in preorder."""
    counter = [0]

    def go(n: A.Node) -> Bracketed:
        counter[0] += 1
        i = counter[0]
        return Bracketed(i, n, tuple(go(c) for c in A.children(n)))

    return go(r)


# -- the extended NFA ------------------------------------------------------

@dataclass(frozen=True)
class Sym:
    """Edge label: a set of characters plus a set of hole indexes."""

    cs: CharSet = EMPTY
    holes: frozenset[int] = frozenset()

    def __bool__(self) -> bool:
        return bool(self.cs) or bool(self.holes)

    def __or__(self, other: Sym) -> Sym:
        return Sym(self.cs | other.cs, self.holes | other.holes)


EPS = ("eps", 0)


@dataclass
class BracketNfa:
    """States are 0..size-1.  Edge labels are ("eps", 0), ("[", i),
    ("]", i), ("sym", Sym) or ("ref", capture index)."""

    size: int = 0
    out: list[list[tuple[tuple, int]]] = field(default_factory=list)
    initial: int = 0
    final: int = 0
    capture_origin: dict[int, int] = field(default_factory=dict)
    backref_labels: dict[int, Sym] = field(default_factory=dict)
    bracket_source: dict[int, int] = field(default_factory=dict)

    def new(self) -> int:
        self.out.append([])
        self.size += 1
        return self.size - 1

    def edge(self, a: int, label: tuple, b: int) -> None:
        self.out[a].append((label, b))

    @property
    def edges(self) -> list[tuple[int, tuple, int]]:
        return [(a, lab, b) for a in range(self.size) for lab, b in self.out[a]]

    def symbol(self, label: tuple) -> Sym | None:
        if label[0] == "sym":
            return label[1]
        if label[0] == "ref":
            return self.backref_labels.get(label[1], Sym())
        return None

    def state_label(self, q: int) -> Sym:
        acc = Sym()
        for lab, _ in self.out[q]:
            s = self.symbol(lab)
            if s is not None:
                acc = acc | s
        return acc

    def bracket_moves(self, q: int) -> Iterator[tuple[tuple, int]]:
        for lab, b in self.out[q]:
            if lab[0] in ("eps", "[", "]"):
                yield lab, b


def enfa_translate(b: Bracketed | A.Node) -> BracketNfa:
    """Thompson-style translation with bracket transitions.

    Lookarounds must have been removed.  A repetition loops from the end of
    its body back to its entry state.  Backreference edges are labelled by
    what can be read first from the start of the referenced group's body.
    """
    if not isinstance(b, Bracketed):
        b = bracket(b)
    nfa = BracketNfa()

    def tr(x: Bracketed) -> tuple[int, int]:
        n = x.node
        src, dst = nfa.new(), nfa.new()
        nfa.bracket_source[x.index] = src
        a, z = nfa.new(), nfa.new()
        nfa.edge(src, ("[", x.index), a)
        nfa.edge(z, ("]", x.index), dst)
        if isinstance(n, A.Chars):
            if n.cs:
                nfa.edge(a, ("sym", Sym(n.cs)), z)
        elif isinstance(n, A.Hole):
            nfa.edge(a, ("sym", Sym(EMPTY, frozenset([n.index]))), z)
        elif isinstance(n, A.Epsilon):
            nfa.edge(a, EPS, z)
        elif isinstance(n, A.Backref):
            nfa.edge(a, ("ref", n.index), z)
        elif isinstance(n, A.Concat):
            l0, l1 = tr(x.kids[0])
            r0, r1 = tr(x.kids[1])
            nfa.edge(a, EPS, l0)
            nfa.edge(l1, EPS, r0)
            nfa.edge(r1, EPS, z)
        elif isinstance(n, A.Union):
            for k in x.kids:
                k0, k1 = tr(k)
                nfa.edge(a, EPS, k0)
                nfa.edge(k1, EPS, z)
        elif isinstance(n, A.Star):
            k0, k1 = tr(x.kids[0])
            nfa.edge(a, EPS, k0)
            nfa.edge(k1, EPS, a)
            nfa.edge(a, EPS, z)
        elif isinstance(n, A.Capture):
            k0, k1 = tr(x.kids[0])
            nfa.capture_origin[n.index] = k0
            nfa.edge(a, EPS, k0)
            nfa.edge(k1, EPS, z)
        else:
            raise ValueError("lookarounds must be removed before translation")
        return src, dst

    nfa.initial, nfa.final = tr(b)
    _resolve_backrefs(nfa)
    return nfa


def _resolve_backrefs(nfa: BracketNfa) -> None:
    refs = {lab[1] for q in range(nfa.size) for lab, _ in nfa.out[q] if lab[0] == "ref"}
    labels = {i: Sym() for i in refs}
    nfa.backref_labels = labels
    changed = True
    while changed:
        changed = False
        for i in refs:
            origin = nfa.capture_origin.get(i)
            if origin is None:
                continue
            acc = Sym()
            for q in _reach(nfa, origin):
                acc = acc | nfa.state_label(q)
            if acc != labels[i]:
                labels[i] = acc
                changed = True


def _reach(nfa: BracketNfa, s: int) -> list[int]:
    seen = {s}
    order = [s]
    todo = [s]
    while todo:
        q = todo.pop()
        for _, b in nfa.bracket_moves(q):
            if b not in seen:
                seen.add(b)
                order.append(b)
                todo.append(b)
    return order


# -- First and Bpaths ------------------------------------------------------

@dataclass(frozen=True)
class FirstItem:
    """A bracket path from q followed by an edge reading ``symbol``.

    ``infinite`` marks a family of paths through a bracket cycle; ``path``
    is then the prefix up to the cycle's entry.
    """

    path: tuple[str, ...]
    symbol: Sym
    infinite: bool = False


def _token(label: tuple) -> str | None:
    if label[0] == "[":
        return f"[{label[1]}"
    if label[0] == "]":
        return f"]{label[1]}"
    return None


def first(nfa: BracketNfa, q: int, limit: int = 10_000) -> list[FirstItem]:
    """Enumerate bracket paths from q to symbol edges by depth-first search."""
    out: list[FirstItem] = []
    on_path: set[int] = set()

    def emit(item: FirstItem) -> None:
        if item not in out:
            out.append(item)

    def dfs(state: int, path: tuple[str, ...]) -> None:
        if len(out) >= limit:
            return
        here = nfa.state_label(state)
        if here:
            emit(FirstItem(path, here))
        on_path.add(state)
        for lab, b in nfa.bracket_moves(state):
            tok = _token(lab)
            p2 = path + (tok,) if tok else path
            if b in on_path:
                reach = Sym()
                for t in _reach(nfa, b):
                    reach = reach | nfa.state_label(t)
                if reach:
                    emit(FirstItem(p2, reach, infinite=True))
                continue
            dfs(b, p2)
        on_path.discard(state)

    dfs(q, ())
    return out


@dataclass(frozen=True)
class Target:
    """A state with outgoing symbol edges, reached from a bracket source."""

    state: int
    label: Sym
    paths: int  # 1, or 2 meaning "two or more"
    infinite: bool


def targets(nfa: BracketNfa, s: int) -> list[Target]:
    """States with symbol edges reachable by bracket-only paths from s, with
    the number of such paths capped at two."""
    region = _reach(nfa, s)
    inside = set(region)
    succ = {q: [b for _, b in nfa.bracket_moves(q)] for q in region}
    cyclic = _cyclic_states(region, succ)
    infinite: set[int] = set()
    todo = list(cyclic)
    infinite.update(cyclic)
    while todo:
        q = todo.pop()
        for b in succ[q]:
            if b not in infinite:
                infinite.add(b)
                todo.append(b)
    # path counts over the acyclic remainder, in topological order
    indeg = {q: 0 for q in region if q not in infinite}
    for q in indeg:
        for b in succ[q]:
            if b in indeg:
                indeg[b] += 1
    count = {q: 0 for q in indeg}
    if s in count:
        count[s] = 1
    ready = deque(q for q, d in indeg.items() if d == 0)
    while ready:
        q = ready.popleft()
        for b in succ[q]:
            if b in indeg:
                count[b] = min(2, count[b] + count[q])
                indeg[b] -= 1
                if indeg[b] == 0:
                    ready.append(b)
    out = []
    for q in region:
        lab = nfa.state_label(q)
        if not lab:
            continue
        if q in infinite:
            out.append(Target(q, lab, 2, True))
        elif count[q]:
            out.append(Target(q, lab, count[q], False))
    assert all(t.state in inside for t in out)
    return out


def _cyclic_states(region: list[int], succ: dict[int, list[int]]) -> set[int]:
    """States on some cycle (iterative Tarjan)."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    stack: list[int] = []
    on_stack: set[int] = set()
    cyclic: set[int] = set()
    counter = 0
    for root in region:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            recurse = False
            kids = succ[v]
            while i < len(kids):
                w = kids[i]
                i += 1
                if w not in index:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                if len(comp) > 1 or v in succ[v]:
                    cyclic.update(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return cyclic


def bpaths(nfa: BracketNfa, i: int, c: str, limit: int = 64) -> list[tuple[str, ...]] | None:
    """Bracket paths from the source of [i to an edge reading c.

    Returns None when there are infinitely many.
    """
    s = nfa.bracket_source[i]
    for t in targets(nfa, s):
        if t.infinite and c in t.label.cs:
            return None
    return [p for p in _simple_paths(nfa, s, lambda q: c in nfa.state_label(q).cs, limit)]


def _simple_paths(nfa: BracketNfa, s: int, goal, limit: int, budget: int = 200_000) -> list[tuple[str, ...]]:
    found: list[tuple[str, ...]] = []
    steps = 0
    stack = [(s, (), frozenset([s]))]
    while stack and len(found) < limit and steps < budget:
        q, path, seen = stack.pop()
        steps += 1
        if goal(q):
            found.append(path)
        for lab, b in reversed(list(nfa.bracket_moves(q))):
            if b in seen:
                continue
            tok = _token(lab)
            stack.append((b, path + (tok,) if tok else path, seen | {b}))
    return found


def _path_to(nfa: BracketNfa, s: int, t: int) -> tuple[str, ...]:
    paths = _simple_paths(nfa, s, lambda q: q == t, 1)
    return paths[0] if paths else ()


# -- the property ----------------------------------------------------------

@dataclass(frozen=True)
class Witness:
    bracket: int
    symbol: str
    paths: tuple[tuple[str, ...], ...] = ()
    cycle: bool = False
    reason: str = "ambiguous"  # or "repetition-in-lookaround"

    def to_json(self) -> dict:
        return {
            "bracket": self.bracket,
            "symbol": self.symbol,
            "paths": ["".join(p) for p in self.paths],
            "cycle": self.cycle,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class LtpVerdict:
    satisfies: bool
    witness: Witness | None = None

    def __bool__(self) -> bool:
        return self.satisfies


def star_in_lookaround(r: A.Node) -> A.Lookaround | None:
    for n in A.walk(r):
        if isinstance(n, A.Lookaround) and A.has_star(n.body):
            return n
    return None


def _show(c: str) -> str:
    return c if c.isprintable() else f"\\u{ord(c):04x}"


def check_ltp(r: A.Node) -> LtpVerdict:
    """Decide the linear-time property of a hole-free expression."""
    bad = star_in_lookaround(r)
    if bad is not None:
        return LtpVerdict(False, Witness(0, "", reason="repetition-in-lookaround"))
    b = bracket(A.rmla(r))
    nfa = enfa_translate(b)
    for x in b.walk():
        s = nfa.bracket_source[x.index]
        w = _ambiguity(nfa, s, x.index)
        if w is not None:
            return LtpVerdict(False, w)
    return LtpVerdict(True)


def _ambiguity(nfa: BracketNfa, s: int, i: int) -> Witness | None:
    ts = targets(nfa, s)
    for t in ts:
        if t.paths > 1 and t.label.cs:
            c = _show(t.label.cs.first())
            if t.infinite:
                return Witness(i, c, (_path_to(nfa, s, t.state),), cycle=True)
            paths = _simple_paths(nfa, s, lambda q: q == t.state, 2)
            return Witness(i, c, tuple(paths))
    acc = EMPTY
    for k, t in enumerate(ts):
        hit = acc & t.label.cs
        if hit:
            for u in ts[:k]:
                common = u.label.cs & t.label.cs
                if common:
                    return Witness(i, _show(common.first()), (_path_to(nfa, s, u.state), _path_to(nfa, s, t.state)))
        acc = acc | t.label.cs
    return None
