"""Finite stand-in for Σ used by constraint variables.

Every character the constraints can talk about is named.  All remaining
characters share a single class, the other-symbol ``⊛``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from . import ast as A
from .charset import EMPTY, MAX_CODE, PRINTABLE, CharSet

OTHER = "⊛other"  # longer than one character, so never a real symbol


@dataclass(frozen=True)
class RelevantAlphabet:
    chars: frozenset[str]

    @property
    def symbols(self) -> list[str]:
        """Named characters in code-point order, then the other-symbol."""
        return sorted(self.chars) + [OTHER]

    def classify(self, c: str) -> str:
        return c if c in self.chars else OTHER

    def other_set(self) -> CharSet:
        return CharSet.from_chars(self.chars).complement()

    def members(self, symbol: str) -> CharSet:
        return self.other_set() if symbol == OTHER else CharSet.char(symbol)

    def symbols_in(self, cs: CharSet) -> list[str]:
        """Symbols whose class meets cs."""
        out = [c for c in sorted(self.chars) if c in cs]
        if cs & self.other_set():
            out.append(OTHER)
        return out

    def to_charset(self, symbols: Iterable[str]) -> CharSet:
        acc = EMPTY
        for s in symbols:
            acc = acc | self.members(s)
        return acc


def atoms(sets: Iterable[CharSet]) -> list[CharSet]:
    """Partition refinement of the universe by the given sets."""
    sets = list(dict.fromkeys(sets))
    cuts = {0, MAX_CODE + 1}
    for s in sets:
        for lo, hi in s.intervals:
            cuts.add(lo)
            cuts.add(hi + 1)
    points = sorted(cuts)
    groups: dict[tuple[bool, ...], list[tuple[int, int]]] = {}
    for lo, nxt in zip(points, points[1:]):
        sig = tuple(lo in s for s in sets)
        groups.setdefault(sig, []).append((lo, nxt - 1))
    return [a for a in (CharSet.of(v) for v in groups.values()) if a]


def _representative(cs: CharSet) -> str:
    printable = cs & PRINTABLE
    return (printable or cs).first()


def relevant_alphabet(r: A.Node, examples: Iterable[str] = ()) -> RelevantAlphabet:
    """Example characters plus one representative per atom of r's sets,
    except the atom holding the top code point, which ⊛ stands for."""
    chars = {c for w in examples for c in w}
    sets = [n.cs for n in A.walk(r) if isinstance(n, A.Chars)]
    for atom in atoms(sets):
        if MAX_CODE in atom:
            continue
        if not any(c in atom for c in chars):
            chars.add(_representative(atom))
    return RelevantAlphabet(frozenset(chars))
