"""Repair the bundled corpus and print one row per entry."""

import sys

from redos_repair.cli import bundled_corpus, corpus_entries
from redos_repair.parser import parse
from redos_repair.printer import to_text
from redos_repair.repair import RepairConfig, repair, verify
from redos_repair.sampling import sample_examples

timeout = float(sys.argv[1]) if len(sys.argv) > 1 else 30.0

for line in corpus_entries(bundled_corpus()):
    r = parse(line)
    ex = sample_examples(r, 10, 0)
    res = repair(r, ex, RepairConfig(timeout=timeout))
    out = to_text(res.output) if res.output is not None else "-"
    ok = res.output is not None and verify(res.output, ex.positives, ex.negatives)
    print(f"{res.status:<10} {res.stats.elapsed:6.2f}s  cost {str(res.cost):>3}  ok={ok!s:<5}  {line}")
    print(f"{'':<10} -> {out}")
