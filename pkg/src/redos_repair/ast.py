"""Syntax trees for real-world regexes and templates."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Iterator, Union as _U

from .charset import CharSet

Span = tuple[int, int] | None


@dataclass(frozen=True, slots=True)
class Chars:
    cs: CharSet
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Epsilon:
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Concat:
    left: Node
    right: Node
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Union:
    left: Node
    right: Node
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Star:
    body: Node
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Capture:
    index: int
    body: Node
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Backref:
    index: int
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Lookaround:
    """(?=r), (?!r), (?<=r) or (?<!r) depending on the two flags."""

    body: Node
    ahead: bool = True
    negative: bool = False
    span: Span = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Hole:
    index: int
    span: Span = field(default=None, compare=False, repr=False)


Node = _U[Chars, Epsilon, Concat, Union, Star, Capture, Backref, Lookaround, Hole]


def PosLookahead(body: Node) -> Lookaround:
    return Lookaround(body, True, False)


def NegLookahead(body: Node) -> Lookaround:
    return Lookaround(body, True, True)


def PosLookbehind(body: Node) -> Lookaround:
    return Lookaround(body, False, False)


def NegLookbehind(body: Node) -> Lookaround:
    return Lookaround(body, False, True)


def lit(text: str) -> Node:
    """Concatenation of singleton sets, or epsilon for the empty string."""
    return concat_all([Chars(CharSet.char(c)) for c in text])


def concat_all(parts: list[Node]) -> Node:
    if not parts:
        return Epsilon()
    out = parts[0]
    for p in parts[1:]:
        out = Concat(out, p)
    return out


def union_all(parts: list[Node]) -> Node:
    out = parts[0]
    for p in parts[1:]:
        out = Union(out, p)
    return out


# -- generic traversal ---------------------------------------------------

def children(r: Node) -> tuple[Node, ...]:
    if isinstance(r, (Concat, Union)):
        return (r.left, r.right)
    if isinstance(r, (Star, Capture, Lookaround)):
        return (r.body,)
    return ()


def with_children(r: Node, kids: tuple[Node, ...]) -> Node:
    if isinstance(r, (Concat, Union)):
        return replace(r, left=kids[0], right=kids[1])
    if isinstance(r, (Star, Capture, Lookaround)):
        return replace(r, body=kids[0])
    return r


def walk(r: Node) -> Iterator[Node]:
    """Preorder traversal."""
    stack = [r]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(reversed(children(n)))


def size(r: Node) -> int:
    return sum(1 for _ in walk(r))


def transform(r: Node, fn: Callable[[Node], Node]) -> Node:
    """Bottom-up rebuild; fn sees nodes whose children are already rebuilt."""
    kids = children(r)
    if kids:
        new = tuple(transform(k, fn) for k in kids)
        if any(a is not b for a, b in zip(new, kids)):
            r = with_children(r, new)
    return fn(r)


def label(r: Node) -> tuple:
    """Node identity ignoring children (used by distance and similar)."""
    if isinstance(r, Chars):
        return ("C", r.cs)
    if isinstance(r, Capture):
        return ("G", r.index)
    if isinstance(r, Backref):
        return ("B", r.index)
    if isinstance(r, Lookaround):
        return ("L", r.ahead, r.negative)
    if isinstance(r, Hole):
        return ("H", r.index)
    return (type(r).__name__,)


# -- captures and holes --------------------------------------------------

def capture_indexes(r: Node) -> list[int]:
    return [n.index for n in walk(r) if isinstance(n, Capture)]


def backref_indexes(r: Node) -> list[int]:
    return [n.index for n in walk(r) if isinstance(n, Backref)]


def max_capture(r: Node) -> int:
    return max(capture_indexes(r), default=0)


def hole_indexes(r: Node) -> list[int]:
    return [n.index for n in walk(r) if isinstance(n, Hole)]


def has_holes(r: Node) -> bool:
    return any(isinstance(n, Hole) for n in walk(r))


def has_star(r: Node) -> bool:
    return any(isinstance(n, Star) for n in walk(r))


def map_indexes(r: Node, cap: Callable[[int], int] | None = None, hole: Callable[[int], int] | None = None) -> Node:
    def fn(n: Node) -> Node:
        if cap and isinstance(n, (Capture, Backref)):
            return replace(n, index=cap(n.index))
        if hole and isinstance(n, Hole):
            return replace(n, index=hole(n.index))
        return n

    return transform(r, fn)


def shift_captures(r: Node, k: int) -> Node:
    return map_indexes(r, cap=lambda i: i + k) if k else r


def renumber_concat(r1: Node, r2: Node) -> Node:
    """Concat(r1, r2) with r2's capture indexes shifted past r1's."""
    return Concat(r1, shift_captures(r2, max_capture(r1)))


def canonical(r: Node) -> Node:
    """Renumber captures from 1 and holes from 0, both in preorder.

    Backrefs to a group follow it; a backref to an absent group keeps a
    fresh index past every group so it still fails under matching.
    """
    caps: dict[int, int] = {}
    holes: dict[int, int] = {}
    for n in walk(r):
        if isinstance(n, Capture) and n.index not in caps:
            caps[n.index] = len(caps) + 1
        elif isinstance(n, Hole) and n.index not in holes:
            holes[n.index] = len(holes)
    extra = len(caps)

    def cap(i: int) -> int:
        nonlocal extra
        if i not in caps:
            extra += 1
            caps[i] = extra
        return caps[i]

    if all(k == v for k, v in caps.items()) and all(k == v for k, v in holes.items()):
        if all(i in caps for i in backref_indexes(r)):
            return r
    return map_indexes(r, cap=cap, hole=lambda i: holes[i])


def check_indexes(r: Node) -> None:
    """Raise ValueError if capture indexes repeat or hole indexes are not 0..k-1."""
    caps = capture_indexes(r)
    if len(caps) != len(set(caps)):
        raise ValueError(f"duplicate capture indexes {caps}")
    holes = sorted(hole_indexes(r))
    if holes != list(range(len(holes))):
        raise ValueError(f"hole indexes {holes} are not 0..{len(holes) - 1}")


def rmla(r: Node) -> Node:
    """Replace every lookaround with epsilon."""
    return transform(r, lambda n: Epsilon(span=n.span) if isinstance(n, Lookaround) else n)


def strip_spans(r: Node) -> Node:
    return transform(r, lambda n: replace(n, span=None) if n.span is not None else n)


@dataclass(frozen=True)
class Template:
    """An expression with holes plus the edit cost accumulated so far."""

    ast: Node
    cost: int = 0

    @property
    def hole_count(self) -> int:
        return len(hole_indexes(self.ast))
