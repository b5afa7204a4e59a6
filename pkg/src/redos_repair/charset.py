"""Canonical interval sets over Unicode scalar values."""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from typing import Iterable, Iterator

MAX_CODE = 0x10FFFF
SURROGATES = (0xD800, 0xDFFF)

# Scalar values: every code point except the surrogate block.
UNIVERSE: tuple[tuple[int, int], ...] = ((0, SURROGATES[0] - 1), (SURROGATES[1] + 1, MAX_CODE))


def _normalize(ranges: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    items = sorted((lo, hi) for lo, hi in ranges if lo <= hi)
    merged: list[list[int]] = []
    for lo, hi in items:
        if merged and lo <= merged[-1][1] + 1:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    # clip to the universe so semantic equality is structural equality
    out: list[tuple[int, int]] = []
    for lo, hi in merged:
        for ulo, uhi in UNIVERSE:
            a, b = max(lo, ulo), min(hi, uhi)
            if a <= b:
                out.append((a, b))
    return tuple(out)


@dataclass(frozen=True, slots=True)
class CharSet:
    """A set of characters stored as sorted, disjoint, non-adjacent ranges.

    Negated classes are complemented at construction time, so every stored
    set is positive.
    """

    intervals: tuple[tuple[int, int], ...] = ()

    @classmethod
    def of(cls, ranges: Iterable[tuple[int, int]]) -> CharSet:
        return cls(_normalize(ranges))

    @classmethod
    def from_chars(cls, chars: Iterable[str]) -> CharSet:
        return cls.of((ord(c), ord(c)) for c in chars)

    @classmethod
    def char(cls, c: str) -> CharSet:
        return cls.from_chars(c)

    @classmethod
    def empty(cls) -> CharSet:
        return cls(())

    @classmethod
    def any(cls) -> CharSet:
        return cls(UNIVERSE)

    def __contains__(self, c: str | int) -> bool:
        code = ord(c) if isinstance(c, str) else c
        iv = self.intervals
        i = bisect.bisect_right(iv, (code, MAX_CODE + 1)) - 1
        return i >= 0 and iv[i][0] <= code <= iv[i][1]

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __len__(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    def __iter__(self) -> Iterator[str]:
        for lo, hi in self.intervals:
            for code in range(lo, hi + 1):
                yield chr(code)

    def __or__(self, other: CharSet) -> CharSet:
        return CharSet.of(self.intervals + other.intervals)

    def __and__(self, other: CharSet) -> CharSet:
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo, hi = max(a[i][0], b[j][0]), min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return CharSet(tuple(out))

    def __sub__(self, other: CharSet) -> CharSet:
        return self & other.complement()

    def complement(self) -> CharSet:
        out = []
        prev = 0
        for lo, hi in self.intervals:
            if lo > prev:
                out.append((prev, lo - 1))
            prev = hi + 1
        if prev <= MAX_CODE:
            out.append((prev, MAX_CODE))
        return CharSet.of(out)

    def is_universe(self) -> bool:
        return self.intervals == UNIVERSE

    def is_singleton(self) -> bool:
        return len(self.intervals) == 1 and self.intervals[0][0] == self.intervals[0][1]

    def issubset(self, other: CharSet) -> bool:
        return (self & other) == self

    def first(self) -> str:
        return chr(self.intervals[0][0])

    def sample(self, rng: random.Random) -> str:
        """Uniform choice of one member."""
        n = len(self)
        k = rng.randrange(n)
        for lo, hi in self.intervals:
            if k <= hi - lo:
                return chr(lo + k)
            k -= hi - lo + 1
        raise AssertionError("unreachable")

    def sample_printable(self, rng: random.Random) -> str:
        """Prefer a printable ASCII member when there is one."""
        ascii_part = self & CharSet.of([(0x20, 0x7E)])
        return (ascii_part or self).sample(rng)


EMPTY = CharSet.empty()
ANY = CharSet.any()
DIGIT = CharSet.of([(ord("0"), ord("9"))])
WORD = CharSet.of([(ord("0"), ord("9")), (ord("A"), ord("Z")), (ord("a"), ord("z")), (ord("_"), ord("_"))])
SPACE = CharSet.from_chars(" \t\n\r")
PRINTABLE = CharSet.of([(0x20, 0x7E)])
