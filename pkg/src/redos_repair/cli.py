"""Command-line front end.

Exit codes: 0 success (repaired, already LTP, property holds), 1 usage,
parse or IO error, 2 repair timeout, 3 repair infeasible, 4 ``check``
found a violation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from importlib import resources
from typing import Sequence

from . import __version__
from .ltp import check_ltp
from .matcher import BudgetExhausted, Matcher, capture_dict
from .matcher import time as derivation_size
from .parser import RegexSyntaxError, parse
from .printer import to_text
from .repair import ALREADY_LTP, INFEASIBLE, REPAIRED, TIMEOUT, RepairConfig, localize, repair, verify
from .sampling import EmptyPositives, ExampleSet, sample_examples, similarity

EXIT_OK, EXIT_USAGE, EXIT_TIMEOUT, EXIT_INFEASIBLE, EXIT_VIOLATION = 0, 1, 2, 3, 4
STATUS_EXIT = {REPAIRED: EXIT_OK, ALREADY_LTP: EXIT_OK, TIMEOUT: EXIT_TIMEOUT, INFEASIBLE: EXIT_INFEASIBLE}


class UsageError(Exception):
    pass


def read_example_file(path: str) -> tuple[list[str], list[str]]:
    """One example per line.  ``#positive`` and ``#negative`` header lines
    switch sections; lines before any header count as positive."""
    with open(path, encoding="utf-8") as f:
        text = f.read()
    if text.endswith("\n"):
        text = text[:-1]
    sections: dict[str, list[str]] = {"positive": [], "negative": []}
    cur = "positive"
    for line in text.split("\n") if text else []:
        if line.strip() in ("#positive", "#negative"):
            cur = line.strip()[1:]
            continue
        sections[cur].append(line)
    return sections["positive"], sections["negative"]


def bundled_corpus() -> str:
    return resources.files("redos_repair").joinpath("data/corpus.txt").read_text(encoding="utf-8")


def corpus_entries(text: str) -> list[str]:
    return [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def _parse(text: str):
    try:
        return parse(text)
    except RegexSyntaxError as e:
        raise UsageError(f"parse error: {e}") from e


def _examples_for(r, args) -> ExampleSet:
    if args.gen or (args.pos is None and args.neg is None and args.examples is None):
        return sample_examples(r, args.count, args.seed)
    pos: list[str] = []
    neg: list[str] = []
    if args.examples:
        pos, neg = read_example_file(args.examples)
    if args.pos:
        p, n = read_example_file(args.pos)
        pos += p + n
    if args.neg:
        p, n = read_example_file(args.neg)
        neg += p + n
    return ExampleSet(tuple(dict.fromkeys(pos)), tuple(dict.fromkeys(neg)))


def _config(args) -> RepairConfig:
    return RepairConfig(timeout=args.timeout, max_nodes=args.max_nodes, example_count=args.count,
                        widen=args.widen, localize=args.localize, rng_seed=args.seed)


def _repair_payload(r, ex: ExampleSet, cfg: RepairConfig) -> dict:
    res = repair(r, ex, cfg)
    return {
        "status": res.status,
        "output": to_text(res.output) if res.output is not None else None,
        "cost": res.cost,
        "examples": {"positive": list(ex.positives), "negative": list(ex.negatives)},
        "stats": res.stats.to_json(),
    }


# -- commands ----------------------------------------------------------------

def cmd_repair(args) -> tuple[int, dict]:
    r = _parse(args.regex)
    try:
        ex = _examples_for(r, args)
    except (EmptyPositives, ValueError, OSError) as e:
        raise UsageError(str(e)) from e
    payload = _repair_payload(r, ex, _config(args))
    return STATUS_EXIT[payload["status"]], payload


def cmd_check(args) -> tuple[int, dict]:
    v = check_ltp(_parse(args.regex))
    payload = {"ltp": v.satisfies, "witness": v.witness.to_json() if v.witness else None}
    return (EXIT_OK if v.satisfies else EXIT_VIOLATION), payload


def cmd_match(args) -> tuple[int, dict]:
    r = _parse(args.regex)
    w = args.string
    res = Matcher(r, memo=True).run(w)
    accepting = [capture_dict(g) for p, g in res.states if p == len(w)]
    size = derivation_size(r, w)
    return EXIT_OK, {
        "accepted": bool(accepting),
        "positions": sorted(res.positions),
        "captures": [{str(k): v for k, v in c.items()} for c in accepting],
        "derivationSize": int(size),
        "exhausted": type(size).__name__ == "Exhausted",
    }


def cmd_gen(args) -> tuple[int, dict]:
    r = _parse(args.regex)
    try:
        ex = sample_examples(r, args.count, args.seed)
    except EmptyPositives as e:
        raise UsageError(str(e)) from e
    return EXIT_OK, {"positive": list(ex.positives), "negative": list(ex.negatives)}


def cmd_similarity(args) -> tuple[int, dict]:
    rep = similarity(_parse(args.regex), _parse(args.other), args.samples, args.seed)
    return EXIT_OK, rep.to_json()


def cmd_localize(args) -> tuple[int, dict]:
    found = localize(_parse(args.regex))
    return EXIT_OK, {"parts": [{"span": list(s) if s else None, "regex": to_text(n)} for s, n in found]}


def _histogram(values, edges) -> dict:
    out = Counter()
    for v in values:
        for e in edges:
            if v <= e:
                out[f"<={e}"] += 1
                break
        else:
            out[f">{edges[-1]}"] += 1
    return dict(sorted(out.items(), key=lambda kv: kv[0]))


def cmd_corpus(args, out=None) -> tuple[int, dict]:
    try:
        text = bundled_corpus() if args.file is None else open(args.file, encoding="utf-8").read()
    except OSError as e:
        raise UsageError(str(e)) from e
    out = out or sys.stdout
    cfg = _config(args)
    records = []
    for i, line in enumerate(corpus_entries(text)):
        rec: dict = {"index": i, "input": line}
        t0 = time.monotonic()
        try:
            r = parse(line)
            ex = sample_examples(r, args.count, args.seed)
            rec.update(_repair_payload(r, ex, cfg))
            ok = rec["output"] is not None and _reverify(rec, ex)
            rec["verified"] = ok
        except (RegexSyntaxError, EmptyPositives, BudgetExhausted, ValueError) as e:
            rec.update({"status": "Error", "error": str(e)})
        rec["elapsed"] = round(time.monotonic() - t0, 6)
        records.append(rec)
        print(json.dumps(rec, ensure_ascii=False), file=out, flush=True)
    statuses = Counter(r["status"] for r in records)
    summary = {
        "entries": len(records),
        "repaired": statuses.get(REPAIRED, 0),
        "alreadyLtp": statuses.get(ALREADY_LTP, 0),
        "timeout": statuses.get(TIMEOUT, 0),
        "infeasible": statuses.get(INFEASIBLE, 0),
        "errors": statuses.get("Error", 0),
        "verified": sum(1 for r in records if r.get("verified")),
        "costHistogram": _histogram([r["cost"] for r in records if r.get("cost") is not None], [0, 2, 4, 8, 16]),
        "timeHistogram": _histogram([r["elapsed"] for r in records], [0.1, 1, 5, 10, 30]),
    }
    return EXIT_OK, summary


def _reverify(rec: dict, ex: ExampleSet) -> bool:
    return verify(parse(rec["output"]), ex.positives, ex.negatives)


# -- plumbing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="redos-repair", description="Repair regexes vulnerable to ReDoS.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True):
        sp.add_argument("--json", action="store_true", help="print the full JSON report")
        if seed:
            sp.add_argument("--seed", type=int, default=0)

    def search(sp):
        sp.add_argument("--timeout", type=float, default=30.0)
        sp.add_argument("--max-nodes", type=int, default=50)
        sp.add_argument("--widen", action="store_true")
        sp.add_argument("--localize", action="store_true")
        sp.add_argument("--count", type=int, default=10, help="examples per polarity when generating")

    sp = sub.add_parser("repair", help="repair a regex")
    sp.add_argument("regex")
    sp.add_argument("--pos", metavar="FILE")
    sp.add_argument("--neg", metavar="FILE")
    sp.add_argument("--examples", metavar="FILE", help="one file with #positive and #negative sections")
    sp.add_argument("--gen", action="store_true", help="generate examples from the regex")
    search(sp)
    common(sp)
    sp.set_defaults(fn=cmd_repair)

    sp = sub.add_parser("check", help="decide the linear-time property")
    sp.add_argument("regex")
    common(sp)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("match", help="run the backtracking matcher")
    sp.add_argument("regex")
    sp.add_argument("string")
    common(sp)
    sp.set_defaults(fn=cmd_match)

    sp = sub.add_parser("gen", help="generate positive and negative examples")
    sp.add_argument("regex")
    sp.add_argument("--count", type=int, default=10)
    common(sp)
    sp.set_defaults(fn=cmd_gen)

    sp = sub.add_parser("similarity", help="precision, recall and F1 between two regexes")
    sp.add_argument("regex")
    sp.add_argument("other")
    sp.add_argument("--samples", type=int, default=100)
    common(sp)
    sp.set_defaults(fn=cmd_similarity)

    sp = sub.add_parser("localize", help="list minimal LTP-violating parts")
    sp.add_argument("regex")
    common(sp)
    sp.set_defaults(fn=cmd_localize)

    sp = sub.add_parser("corpus", help="repair every line of a corpus file")
    sp.add_argument("file", nargs="?", help="defaults to the bundled corpus")
    search(sp)
    common(sp)
    sp.set_defaults(fn=cmd_corpus)
    return p


def _human(command: str, payload: dict) -> str:
    if command == "repair":
        line = payload["status"]
        if payload["output"] is not None:
            line += f"  {payload['output']}  (cost {payload['cost']})"
        return line
    if command == "check":
        if payload["ltp"]:
            return "LTP holds"
        w = payload["witness"]
        if w["reason"] != "ambiguous":
            return f"LTP violated: {w['reason']}"
        fam = " (infinite family)" if w["cycle"] else ""
        return f"LTP violated at bracket [{w['bracket']} on {w['symbol']!r}: {' | '.join(w['paths'])}{fam}"
    if command == "localize":
        return "\n".join(f"{p['span']}  {p['regex']}" for p in payload["parts"]) or "nothing to repair"
    return json.dumps(payload, ensure_ascii=False)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    t0 = time.monotonic()
    try:
        if args.command == "repair" and args.gen and (args.pos or args.neg or args.examples):
            raise UsageError("--gen cannot be combined with example files")
        code, payload = args.fn(args)
    except UsageError as e:
        print(json.dumps({"command": args.command, "error": str(e)}) if args.json else f"error: {e}",
              file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    report = {
        "command": args.command,
        "input": getattr(args, "regex", getattr(args, "file", None)),
        "result": payload,
        "version": __version__,
        "rngSeed": args.seed,
        "timings": {"elapsed": round(time.monotonic() - t0, 6)},
    }
    if args.json or args.command == "corpus":
        print(json.dumps(report, ensure_ascii=False))
    else:
        print(_human(args.command, payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
