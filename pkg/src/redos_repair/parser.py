"""Recursive-descent parser for the concrete regex and template syntax.

Sugars are removed while parsing: ``r?`` becomes ``r|ε``, ``r+`` becomes
``rr*`` and ``r{i,j}`` becomes i copies of r followed by j-i optional
copies.  Copies of a subtree that contains capturing groups get fresh group
indexes, and at the end all groups are renumbered in preorder.
"""

from __future__ import annotations

from dataclasses import replace

from . import ast as A
from .charset import ANY, DIGIT, EMPTY, SPACE, WORD, CharSet

HOLE_MARK = "□"
EMPTY_MARK = "∅"
MAX_REPEAT = 100

_SIMPLE_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", "f": "\f", "v": "\v", "0": "\0"}
_CLASS_ESCAPES = {"d": DIGIT, "w": WORD, "s": SPACE}


class RegexSyntaxError(ValueError):
    def __init__(self, message: str, offset: int, text: str = ""):
        super().__init__(f"{message} at offset {offset}")
        self.message = message
        self.offset = offset
        self.text = text


class _Parser:
    def __init__(self, text: str, allow_holes: bool):
        self.text = text
        self.pos = 0
        self.allow_holes = allow_holes
        self.next_group = 1
        self.closed: set[int] = set()
        # index range [lo, hi) of groups opened inside each subtree
        self.max_group = 0

    # -- helpers
    def error(self, msg: str, at: int | None = None) -> RegexSyntaxError:
        return RegexSyntaxError(msg, self.pos if at is None else at, self.text)

    def peek(self, k: int = 0) -> str | None:
        i = self.pos + k
        return self.text[i] if i < len(self.text) else None

    def take(self) -> str:
        c = self.peek()
        if c is None:
            raise self.error("unexpected end of pattern")
        self.pos += 1
        return c

    def startswith(self, s: str) -> bool:
        return self.text.startswith(s, self.pos)

    # -- grammar
    def parse(self) -> A.Node:
        r = self.alternation(in_behind=False)
        if self.pos != len(self.text):
            raise self.error("unbalanced ')'" if self.peek() == ")" else f"unexpected {self.peek()!r}")
        return r

    def alternation(self, in_behind: bool) -> A.Node:
        start = self.pos
        r = self.sequence(in_behind)
        while self.peek() == "|":
            self.pos += 1
            r = A.Union(r, self.sequence(in_behind), span=(start, self.pos))
        return r

    def sequence(self, in_behind: bool) -> A.Node:
        start = self.pos
        parts: list[A.Node] = []
        while self.peek() is not None and self.peek() not in "|)":
            parts.append(self.repeat(in_behind))
        if not parts:
            return A.Epsilon(span=(start, start))
        r = parts[0]
        for p in parts[1:]:
            r = A.Concat(r, p, span=(start, p.span[1] if p.span else self.pos))
        return r

    def repeat(self, in_behind: bool) -> A.Node:
        start = self.pos
        r = self.atom(in_behind)
        while True:
            c = self.peek()
            if c in ("*", "+", "?"):
                if in_behind:
                    raise self.error("repetition inside a lookbehind")
                self.pos += 1
                if c == "*":
                    r = A.Star(r, span=(start, self.pos))
                elif c == "+":
                    r = A.Concat(r, A.Star(self.copy(r)), span=(start, self.pos))
                else:
                    r = A.Union(r, A.Epsilon(), span=(start, self.pos))
            elif c == "{" and self._quantifier_ahead():
                if in_behind:
                    raise self.error("repetition inside a lookbehind")
                at = self.pos
                lo, hi = self.braces()
                r = self.expand_interval(r, lo, hi, (start, self.pos), at)
            else:
                return r

    def _quantifier_ahead(self) -> bool:
        j = self.pos + 1
        t = self.text
        while j < len(t) and (t[j].isdigit() or t[j] == ","):
            j += 1
        return j < len(t) and t[j] == "}" and t[self.pos + 1].isdigit()

    def braces(self) -> tuple[int, int]:
        at = self.pos
        self.take()
        body = ""
        while self.peek() != "}":
            body += self.take()
        self.take()
        parts = body.split(",")
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            if parts[1] == "":
                raise self.error("unbounded interval {i,} is not supported; use *", at)
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise self.error("malformed interval quantifier", at)
        if lo > hi:
            raise self.error("interval quantifier with i > j", at)
        if hi > MAX_REPEAT:
            raise self.error(f"interval bound above {MAX_REPEAT}", at)
        return lo, hi

    def copy(self, r: A.Node) -> A.Node:
        """A duplicate of r whose own groups get fresh indexes."""
        inner = sorted(set(A.capture_indexes(r)))
        if not inner:
            return r
        fresh = {i: self.next_group + k for k, i in enumerate(inner)}
        self.next_group += len(inner)
        self.closed.update(fresh.values())
        return A.map_indexes(r, cap=lambda i: fresh.get(i, i))

    def expand_interval(self, r: A.Node, lo: int, hi: int, span, at: int) -> A.Node:
        if hi == 0:
            return A.Epsilon(span=span)
        copies = [r] + [self.copy(r) for _ in range(hi - 1)]
        parts = copies[:lo] + [A.Union(c, A.Epsilon()) for c in copies[lo:]]
        out = A.concat_all(parts)
        return replace(out, span=span) if not isinstance(out, A.Epsilon) else out

    def atom(self, in_behind: bool) -> A.Node:
        start = self.pos
        c = self.take()
        if c == "(":
            return self.group(start, in_behind)
        if c == "[":
            return A.Chars(self.char_class(start), span=(start, self.pos))
        if c == ".":
            return A.Chars(ANY, span=(start, self.pos))
        if c == "\\":
            return self.escape(start, in_behind)
        if c == HOLE_MARK:
            if not self.allow_holes:
                raise self.error("holes are only allowed in templates", start)
            digits = ""
            while self.peek() is not None and self.peek().isdigit():
                digits += self.take()
            if not digits:
                raise self.error("hole without index", start)
            return A.Hole(int(digits), span=(start, self.pos))
        if c in "*+?":
            raise self.error(f"nothing to repeat before {c!r}", start)
        if c == "{" and self.pos - 1 == start and self._quantifier_ahead_from(start):
            raise self.error("nothing to repeat before '{'", start)
        if c in "^$":
            raise self.error("anchors are not supported", start)
        return A.Chars(CharSet.char(c), span=(start, self.pos))

    def _quantifier_ahead_from(self, at: int) -> bool:
        save = self.pos
        self.pos = at
        try:
            return self._quantifier_ahead()
        finally:
            self.pos = save

    def group(self, start: int, in_behind: bool) -> A.Node:
        if self.startswith("?:"):
            self.pos += 2
            body = self.alternation(in_behind)
            self.expect_close(start)
            return body
        for prefix, ahead, negative in (("?=", True, False), ("?!", True, True), ("?<=", False, False), ("?<!", False, True)):
            if self.startswith(prefix):
                self.pos += len(prefix)
                body = self.alternation(in_behind or not ahead)
                self.expect_close(start)
                if not ahead:
                    self.check_fixed(body, start)
                return A.Lookaround(body, ahead, negative, span=(start, self.pos))
        if self.peek() == "?":
            raise self.error("unsupported group syntax", start)
        if in_behind:
            raise self.error("capturing group inside a lookbehind", start)
        index = self.next_group
        self.next_group += 1
        body = self.alternation(in_behind)
        self.expect_close(start)
        self.closed.add(index)
        return A.Capture(index, body, span=(start, self.pos))

    def check_fixed(self, body: A.Node, at: int) -> None:
        for n in A.walk(body):
            if isinstance(n, A.Star):
                raise self.error("repetition inside a lookbehind", at)
            if not isinstance(n, (A.Chars, A.Concat, A.Epsilon, A.Hole)):
                raise self.error("non-fixed-string lookbehind", at)

    def expect_close(self, start: int) -> None:
        if self.peek() != ")":
            raise self.error("missing ')'", start)
        self.pos += 1

    def escape(self, start: int, in_behind: bool) -> A.Node:
        c = self.take()
        if c.isdigit() and c != "0":
            digits = c
            while self.peek() is not None and self.peek().isdigit():
                digits += self.take()
            k = int(digits)
            if k >= self.next_group:
                raise self.error(f"backreference to nonexistent group {k}", start)
            if k not in self.closed:
                raise self.error(f"backreference to group {k} from inside it", start)
            if in_behind:
                raise self.error("non-fixed-string lookbehind", start)
            return A.Backref(k, span=(start, self.pos))
        return A.Chars(self.escape_set(c), span=(start, self.pos))

    def escape_set(self, c: str) -> CharSet:
        if c in _CLASS_ESCAPES:
            return _CLASS_ESCAPES[c]
        if c.lower() in _CLASS_ESCAPES and c.isupper():
            return _CLASS_ESCAPES[c.lower()].complement()
        if c in _SIMPLE_ESCAPES:
            return CharSet.char(_SIMPLE_ESCAPES[c])
        if c in "xu":
            n = 2 if c == "x" else 4
            digits = "".join(self.take() for _ in range(n))
            try:
                return CharSet.char(chr(int(digits, 16)))
            except ValueError:
                raise self.error(f"bad \\{c} escape", self.pos - n - 2) from None
        if c.isalnum():
            raise self.error(f"unknown escape \\{c}", self.pos - 2)
        return CharSet.char(c)

    def char_class(self, start: int) -> CharSet:
        if self.startswith(EMPTY_MARK + "]"):
            self.pos += 2
            return EMPTY
        negate = False
        if self.peek() == "^":
            negate = True
            self.pos += 1
        acc = EMPTY
        while True:
            c = self.peek()
            if c is None:
                raise self.error("unterminated character class", start)
            if c == "]":
                self.pos += 1
                break
            lo = self.class_atom()
            if isinstance(lo, CharSet):
                acc = acc | lo
                continue
            if self.peek() == "-" and self.peek(1) not in (None, "]"):
                self.pos += 1
                hi = self.class_atom()
                if isinstance(hi, CharSet):
                    raise self.error("class escape as range bound", self.pos)
                if ord(hi) < ord(lo):
                    raise self.error("reversed range in character class", self.pos)
                acc = acc | CharSet.of([(ord(lo), ord(hi))])
            else:
                acc = acc | CharSet.char(lo)
        return acc.complement() if negate else acc

    def class_atom(self) -> str | CharSet:
        c = self.take()
        if c != "\\":
            return c
        e = self.take()
        s = self.escape_set(e)
        if s.is_singleton() and e not in _CLASS_ESCAPES:
            return s.first()
        return s


def parse(text: str) -> A.Node:
    """Parse a hole-free regex into a desugared AST."""
    return _finish(_Parser(text, allow_holes=False).parse())


def parse_template(text: str) -> A.Node:
    """Parse a template; holes are written as the box sign plus an index."""
    return _finish(_Parser(text, allow_holes=True).parse(), keep_holes=True)


def _finish(r: A.Node, keep_holes: bool = False) -> A.Node:
    caps: dict[int, int] = {}
    for n in A.walk(r):
        if isinstance(n, A.Capture):
            caps.setdefault(n.index, len(caps) + 1)
    if all(k == v for k, v in caps.items()):
        return r
    return A.map_indexes(r, cap=lambda i: caps[i])
