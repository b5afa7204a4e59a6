"""Render ASTs back to concrete syntax that parses to the same tree."""

from __future__ import annotations

from . import ast as A
from .charset import ANY, DIGIT, EMPTY, PRINTABLE, SPACE, WORD, CharSet

_META = set("\\.|()[]*+?{}^$-□∅/")
_CLASS_META = set("\\]^-[∅")
_NAMED = {"\n": "\\n", "\t": "\\t", "\r": "\\r", "\f": "\\f", "\v": "\\v"}


def _char(c: str, meta: set[str]) -> str:
    if c in _NAMED:
        return _NAMED[c]
    if c in meta:
        return "\\" + c
    code = ord(c)
    if c in PRINTABLE:
        return c
    if code < 0x100:
        return f"\\x{code:02x}"
    if code < 0x10000:
        return f"\\u{code:04x}"
    return c


def charset_text(cs: CharSet) -> str:
    if cs == EMPTY:
        return "[∅]"
    if cs == ANY:
        return "."
    if cs.is_singleton():
        return _char(cs.first(), _META)
    for name, s in (("\\d", DIGIT), ("\\w", WORD), ("\\s", SPACE)):
        if cs == s:
            return name
        if cs == s.complement():
            return name.upper()
    pos = _class_body(cs)
    neg = _class_body(cs.complement())
    if len(neg) < len(pos):
        return f"[^{neg}]"
    return f"[{pos}]"


def _class_body(cs: CharSet) -> str:
    out = []
    for lo, hi in cs.intervals:
        a = _class_char(chr(lo))
        if lo == hi:
            out.append(a)
        elif hi == lo + 1:
            out.append(a + _class_char(chr(hi)))
        else:
            out.append(f"{a}-{_class_char(chr(hi))}")
    return "".join(out)


def _class_char(c: str) -> str:
    if c in _NAMED:
        return _NAMED[c]
    if c in _CLASS_META:
        return "\\" + c
    if c in PRINTABLE:
        return c
    code = ord(c)
    if code < 0x100:
        return f"\\x{code:02x}"
    if code < 0x10000:
        return f"\\u{code:04x}"
    return c


def _atomic(r: A.Node) -> bool:
    return isinstance(r, (A.Chars, A.Backref, A.Hole, A.Capture, A.Lookaround))


def to_text(r: A.Node) -> str:
    """Concrete syntax; ``parse(to_text(r)) == r`` for canonically numbered r."""
    if isinstance(r, A.Chars):
        return charset_text(r.cs)
    if isinstance(r, A.Epsilon):
        return ""
    if isinstance(r, A.Hole):
        return f"□{r.index}"
    if isinstance(r, A.Backref):
        return f"\\{r.index}"
    if isinstance(r, A.Capture):
        return f"({to_text(r.body)})"
    if isinstance(r, A.Lookaround):
        head = ("?=" if not r.negative else "?!") if r.ahead else ("?<=" if not r.negative else "?<!")
        return f"({head}{to_text(r.body)})"
    if isinstance(r, A.Star):
        b = r.body
        inner = to_text(b) if _atomic(b) else f"(?:{to_text(b)})"
        return inner + "*"
    if isinstance(r, A.Concat):
        right = _cat_part(r.right, left=False)
        if right[:1].isdigit() and _ends_with_index(r.left):
            right = f"(?:{right})"
        return _cat_part(r.left, left=True) + right
    if isinstance(r, A.Union):
        right = to_text(r.right)
        if isinstance(r.right, A.Union):
            right = f"(?:{right})"
        return f"{to_text(r.left)}|{right}"
    raise TypeError(r)


def _cat_part(r: A.Node, left: bool) -> str:
    if isinstance(r, A.Union) or isinstance(r, A.Epsilon):
        return f"(?:{to_text(r)})"
    if isinstance(r, A.Concat) and not left:
        return f"(?:{to_text(r)})"
    return to_text(r)


def _ends_with_index(r: A.Node) -> bool:
    while isinstance(r, A.Concat):
        r = r.right
    return isinstance(r, (A.Backref, A.Hole))


def pretty(r: A.Node) -> str:
    """Human-oriented rendering: the empty set shows as ∅ and ε as ε."""
    if isinstance(r, A.Epsilon):
        return "ε"
    return to_text(r)
