"""Hash-consed propositional formulas and Tseitin clause conversion."""

from __future__ import annotations

import weakref
from typing import Hashable, Iterable, Mapping

_TABLE: weakref.WeakValueDictionary = weakref.WeakValueDictionary()


class Formula:
    """Immutable formula node.  Structurally equal formulas are identical
    objects, so ``is`` and ``==`` coincide."""

    __slots__ = ("op", "args", "_hash", "__weakref__")

    def __new__(cls, op: str, args: tuple):
        key = (op, args)
        hit = _TABLE.get(key)
        if hit is not None:
            return hit
        self = object.__new__(cls)
        self.op = op
        self.args = args
        self._hash = hash(key)
        _TABLE[key] = self
        return self

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return self is other

    def __reduce__(self):
        return (Formula, (self.op, self.args))

    def __and__(self, other: Formula) -> Formula:
        return conj([self, other])

    def __or__(self, other: Formula) -> Formula:
        return disj([self, other])

    def __invert__(self) -> Formula:
        return neg(self)

    def __repr__(self) -> str:
        return show(self)


TRUE = Formula("const", (True,))
FALSE = Formula("const", (False,))


def var(key: Hashable) -> Formula:
    return Formula("var", (key,))


def neg(f: Formula) -> Formula:
    if f is TRUE:
        return FALSE
    if f is FALSE:
        return TRUE
    if f.op == "not":
        return f.args[0]
    return Formula("not", (f,))


def _nary(op: str, parts: Iterable[Formula]) -> Formula:
    unit, zero = (TRUE, FALSE) if op == "and" else (FALSE, TRUE)
    seen: dict[Formula, None] = {}
    for p in parts:
        if p is zero:
            return zero
        if p is unit:
            continue
        if p.op == op:
            for q in p.args:
                seen[q] = None
        else:
            seen[p] = None
    for p in seen:
        if neg(p) in seen:
            return zero
    if not seen:
        return unit
    if len(seen) == 1:
        return next(iter(seen))
    return Formula(op, tuple(seen))


def conj(parts: Iterable[Formula]) -> Formula:
    return _nary("and", parts)


def disj(parts: Iterable[Formula]) -> Formula:
    return _nary("or", parts)


def variables(f: Formula) -> set:
    out: set = set()
    seen: set[int] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        if g.op == "var":
            out.add(g.args[0])
        elif g.op in ("not", "and", "or"):
            stack.extend(g.args)
    return out


def evaluate(f: Formula, assignment: Mapping[Hashable, bool]) -> bool:
    """Truth value; variables missing from the assignment are false."""
    memo: dict[int, bool] = {}

    def go(g: Formula) -> bool:
        k = id(g)
        if k in memo:
            return memo[k]
        if g.op == "const":
            v = g.args[0]
        elif g.op == "var":
            v = bool(assignment.get(g.args[0], False))
        elif g.op == "not":
            v = not go(g.args[0])
        elif g.op == "and":
            v = all(go(a) for a in g.args)
        else:
            v = any(go(a) for a in g.args)
        memo[k] = v
        return v

    return go(f)


def show(f: Formula) -> str:
    if f.op == "const":
        return "true" if f.args[0] else "false"
    if f.op == "var":
        key = f.args[0]
        if isinstance(key, tuple) and len(key) == 2:
            return f"v{key[0]}^{key[1]}"
        return f"v{key}"
    if f.op == "not":
        return "¬" + show(f.args[0])
    sep = " ∧ " if f.op == "and" else " ∨ "
    return "(" + sep.join(show(a) for a in f.args) + ")"


def size(f: Formula) -> int:
    seen: set[int] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if id(g) in seen:
            continue
        seen.add(id(g))
        if g.op in ("not", "and", "or"):
            stack.extend(g.args)
    return len(seen)


class Cnf:
    """Clauses over positive integer variables; literals are signed ints."""

    def __init__(self):
        self.clauses: list[list[int]] = []
        self.nvars = 0
        self.var_of: dict[Hashable, int] = {}

    def fresh(self) -> int:
        self.nvars += 1
        return self.nvars

    def named(self, key: Hashable) -> int:
        v = self.var_of.get(key)
        if v is None:
            v = self.var_of[key] = self.fresh()
        return v

    def dimacs(self) -> str:
        lines = [f"p cnf {self.nvars} {len(self.clauses)}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"


def tseitin(f: Formula, cnf: Cnf | None = None) -> Cnf:
    """Equisatisfiable clauses; each named variable keeps its own literal."""
    cnf = cnf or Cnf()
    for key in sorted(variables(f), key=repr):
        cnf.named(key)
    if f is TRUE:
        return cnf
    if f is FALSE:
        cnf.clauses.append([])
        return cnf
    lit_of: dict[int, int] = {}

    def lit(g: Formula) -> int:
        k = id(g)
        if k in lit_of:
            return lit_of[k]
        if g.op == "var":
            out = cnf.named(g.args[0])
        elif g.op == "not":
            out = -lit(g.args[0])
        elif g.op == "const":
            t = cnf.fresh()
            cnf.clauses.append([t] if g.args[0] else [-t])
            out = t
        else:
            kids = [lit(a) for a in g.args]
            t = cnf.fresh()
            if g.op == "and":
                for a in kids:
                    cnf.clauses.append([-t, a])
                cnf.clauses.append([t] + [-a for a in kids])
            else:
                for a in kids:
                    cnf.clauses.append([t, -a])
                cnf.clauses.append([-t] + kids)
            out = t
        lit_of[k] = out
        return out

    # top-level conjunctions become separate clauses directly
    tops = f.args if f.op == "and" else (f,)
    for g in tops:
        if g.op == "or":
            cnf.clauses.append([lit(a) for a in g.args])
        else:
            cnf.clauses.append([lit(g)])
    return cnf
