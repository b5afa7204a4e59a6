"""Repair of the header regex .*.*=.* step by step."""

from redos_repair.alphabet import relevant_alphabet
from redos_repair.constraints import consistency_constraint, instantiate, ltp_constraint
from redos_repair.formula import conj, show
from redos_repair.ltp import check_ltp
from redos_repair.matcher import time
from redos_repair.parser import parse, parse_template
from redos_repair.printer import to_text
from redos_repair.repair import repair
from redos_repair.sampling import ExampleSet
from redos_repair.sat import solve
from redos_repair.template import approximate

POS = ["=", "abcd==", "==abcd", "ab=c"]
NEG = ["abc"]

r = parse(".*.*=.*")
v = check_ltp(r)
print("input:", to_text(r))
print("LTP:", v.satisfies, "| ambiguous on", repr(v.witness.symbol), "via", v.witness.paths)

# one template by hand
t = parse_template("□0*□1*=.*")
pair = approximate(t)
print("\ntemplate:", to_text(t))
print("  over :", to_text(pair.over))
print("  under:", to_text(pair.under))

al = relevant_alphabet(r, POS + NEG)
phi_c = consistency_constraint(t, POS, NEG, al)
phi_l = ltp_constraint(t, al)
print("  examples  :", show(phi_c))
print("  linear    :", show(phi_l))
model = solve(conj([phi_c, phi_l]))
out = instantiate(t, model, al)
print("  solution  :", to_text(out), "LTP:", bool(check_ltp(out)))

# the whole search
res = repair(r, ExampleSet(tuple(POS), tuple(NEG)))
print("\nsearch:", res.status, to_text(res.output), "cost", res.cost)
print("stats:", res.stats.to_json())

# what changed for a hostile input
w = "=" * 2000
print("\nnodes on", len(w), "'=':", time(r, w[:200]), "(200 chars) ->", time(r, w), "(2000 chars)")
print("repaired :", time(res.output, w[:200]), "->", time(res.output, w))
