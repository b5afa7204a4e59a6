"""Acceptance criteria, one test each.

Every check records a PASS/FAIL line; the lines are printed in the pytest
terminal summary, and ``python tests/test_acceptance.py`` prints them too.
"""

from __future__ import annotations

import functools
import itertools
import os
import random
import sys
import time as clock

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from helpers import (  # noqa: E402
    EQ_NEG,
    EQ_POS,
    all_trees,
    brute_distance,
    fillings,
    random_formula,
    random_regex,
    random_template,
    strings,
    truth_table,
)
from redos_repair import ast as A  # noqa: E402
from redos_repair.alphabet import relevant_alphabet  # noqa: E402
from redos_repair.cli import bundled_corpus, corpus_entries  # noqa: E402
from redos_repair.constraints import (  # noqa: E402
    consistency_constraint,
    encode,
    instantiate,
    ltp_constraint,
)
from redos_repair.formula import conj, disj, evaluate, neg, var, variables  # noqa: E402
from redos_repair.ltp import check_ltp  # noqa: E402
from redos_repair.matcher import Matcher, step, time  # noqa: E402
from redos_repair.parser import parse, parse_template  # noqa: E402
from redos_repair.printer import to_text  # noqa: E402
from redos_repair.repair import REPAIRED, RepairConfig, repair, verify  # noqa: E402
from redos_repair.sampling import ExampleSet, sample_examples  # noqa: E402
from redos_repair.sat import solve  # noqa: E402
from redos_repair.template import approximate, distance  # noqa: E402

RESULTS: dict[int, str] = {}


def record(n: int, ok: bool, seconds: float, limit: float, detail: str) -> bool:
    ok = ok and seconds <= limit
    RESULTS[n] = f"criterion {n:2d} {'PASS' if ok else 'FAIL'} ({seconds:.2f} s, limit {limit:g} s): {detail}"
    print(RESULTS[n])
    return ok


def timed(fn):
    t0 = clock.perf_counter()
    out = fn()
    return out, clock.perf_counter() - t0


# -- 1 ---------------------------------------------------------------------------

def criterion_1() -> bool:
    def run():
        a = step(parse("(?:a*)*"), "ab")
        b = step(parse("(?:(?=a)*)*"), "ab")
        m = Matcher(parse(r"(a*)\1"))
        c = [dict(enumerate(g)) for p, g in m.run("aa").states if p == 2]
        return (a.positions == {0, 1} and b.positions == {0}
                and any(g.get(1) == "a" for g in c)), (a.positions, b.positions, len(c))

    (ok, info), s = timed(run)
    return record(1, ok, s, 1, f"result positions {info[0]} and {info[1]}, {info[2]} accepting run(s) for (a*)\\1")


# -- 2 ---------------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def corpus_runs():
    """Repair every bundled corpus entry once; shared by criteria 2 and 10."""
    start = clock.perf_counter()
    out = []
    for line in corpus_entries(bundled_corpus()):
        r = parse(line)
        ex = sample_examples(r, 10, 0)
        t0 = clock.perf_counter()
        res = repair(r, ex, RepairConfig(timeout=30))
        out.append((line, r, ex, res, clock.perf_counter() - t0))
    return tuple(out), clock.perf_counter() - start


def _families(r):
    """Long strings built from one representative per alphabet class."""
    al = relevant_alphabet(r, [])
    reps = [al.members(s).sample_printable(random.Random(0)) for s in al.symbols]
    for c in reps:
        yield lambda n, c=c: c * n
        for d in reps:
            yield lambda n, c=c, d=d: c * n + d


def _linear_ratio(r) -> float:
    worst = 0.0
    for fam in _families(r):
        w1, w2 = fam(128), fam(1024)
        worst = max(worst, (time(r, w2) / len(w2)) / (time(r, w1) / len(w1)))
    return worst


def criterion_2() -> bool:
    runs, _ = corpus_runs()

    def measure():
        growth = {}
        for text in ["(?:a*)*", r"(a*)\1"]:
            r = parse(text)
            growth[text] = time(r, "a" * 16 + "b") / time(r, "a" * 8 + "b")
        ltp = [parse("[^=]*=.*")] + [res.output for *_, res, _ in runs if res.output is not None]
        ratios = [_linear_ratio(r) for r in ltp]
        return growth, ratios, len(ltp)

    (growth, ratios, count), s = timed(measure)
    ok = all(g >= 3 for g in growth.values()) and all(x <= 2 for x in ratios)
    detail = (f"growth 8->16: {', '.join(f'{k} x{v:.2f}' for k, v in growth.items())}; "
              f"per-char ratio 1024/128 over {count} LTP expressions max {max(ratios):.3f}")
    return record(2, ok, s, 30, detail)


# -- 3 ---------------------------------------------------------------------------

VERDICTS = {
    "(?:a*)*": False,
    r"(a*)\1": False,
    "a|aa": False,
    "(?:(?=a)*)*": True,
    "(a*)(b*)": True,
    ".*.*=.*": False,
    "(?:(?=.*).)*": False,
}


def criterion_3() -> bool:
    got, s = timed(lambda: {t: check_ltp(parse(t)).satisfies for t in VERDICTS})
    wrong = [t for t in VERDICTS if got[t] != VERDICTS[t]]
    reason = check_ltp(parse("(?:(?=.*).)*")).witness.reason
    ok = not wrong and reason == "repetition-in-lookaround"
    return record(3, ok, s, 1, f"{len(VERDICTS) - len(wrong)}/{len(VERDICTS)} verdicts, lookaround case reports {reason}")


# -- 4 ---------------------------------------------------------------------------

def criterion_4() -> bool:
    def run():
        r = parse(".*.*=.*")
        res = repair(r, ExampleSet(tuple(EQ_POS), tuple(EQ_NEG)))
        out = res.output
        classified = out is not None and verify(out, EQ_POS, EQ_NEG)
        t = parse_template("□0*□1*=.*")
        al = relevant_alphabet(r, EQ_POS + EQ_NEG)
        phi = conj([consistency_constraint(t, EQ_POS, EQ_NEG, al), ltp_constraint(t, al)])
        x = {(0, a): False for a in al.symbols} | {(1, a): a != "=" for a in al.symbols}
        known = evaluate(phi, x) and instantiate(t, x, al) == parse_template("[]*[^=]*=.*")
        return res, classified, known

    (res, classified, known), s = timed(run)
    ok = res.status == REPAIRED and classified and known
    out = to_text(res.output) if res.output is not None else None
    return record(4, ok, s, 60, f"{res.status} -> {out}; five examples classified: {classified}; "
                               f"assignment for [^=]*=.* satisfies the constraint: {known}")


# -- 5 ---------------------------------------------------------------------------

def _equivalent(f, g, keys):
    for bits in itertools.product([False, True], repeat=len(keys)):
        x = dict(zip(keys, bits))
        if evaluate(f, x) != evaluate(g, x):
            return False
    return True


def criterion_5() -> bool:
    def run():
        t = parse_template("(?!□0)□1bc")
        al = relevant_alphabet(t, ["abc"])
        f = encode(t, "abc", al)
        keys = [(0, "a"), (1, "a"), (0, "b"), (1, "b")]
        g = conj([neg(var((0, "a"))), var((1, "a"))])
        first = _equivalent(f, g, keys)

        t = parse_template(r"(□1|□2|a)b\1(?!a)")
        al = relevant_alphabet(t, ["ab"])
        phi = ltp_constraint(t, al)
        goals = [conj([neg(var((1, "a"))), neg(var((2, "a")))])]
        goals += [disj([neg(var((1, c))), neg(var((2, c)))]) for c in al.symbols]
        second = all(solve(conj([phi, neg(goal)])) is None for goal in goals)
        return first, second, len(goals)

    (first, second, n), s = timed(run)
    return record(5, first and second, s, 5,
                  f"encode equivalence over 4 variables: {first}; {n} entailments of the LTP constraint: {second}")


# -- 6 and 7 -----------------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def template_suite(count: int = 1000):
    out = []
    seed = 0
    while len(out) < count:
        t = random_template(seed, max_nodes=8, max_holes=3)
        seed += 1
        if A.hole_indexes(t):
            out.append(t)
    return tuple(out)


def criterion_6() -> bool:
    ws = strings(max_len=4)

    def run():
        bad = checked = 0
        for t in template_suite():
            pair = approximate(t)
            over, under = Matcher(pair.over, memo=True), Matcher(pair.under, memo=True)
            lo = {w for w in ws if under.accepts(w)}
            hi = {w for w in ws if over.accepts(w)}
            for _, r in fillings(t):
                m = Matcher(r, memo=True)
                lang = {w for w in ws if m.accepts(w)}
                checked += 1
                if not lo <= lang <= hi:
                    bad += 1
        return bad, checked

    (bad, checked), s = timed(run)
    return record(6, bad == 0, s, 300, f"{bad} violations over {checked} fillings of 1000 templates, {len(ws)} strings each")


def criterion_7() -> bool:
    ws = strings(max_len=4)

    def run():
        bad = models = most = 0
        for t in template_suite():
            al = relevant_alphabet(t, ["ab"])
            forms = {w: encode(t, w, al) for w in ws}
            keys = sorted(set().union(*(variables(f) for f in forms.values())), key=repr)
            most = max(most, 2 ** len(keys))
            for bits in itertools.product([False, True], repeat=len(keys)):
                x = dict(zip(keys, bits))
                m = Matcher(instantiate(t, x, al), memo=True)
                for w, f in forms.items():
                    sat = evaluate(f, x)
                    models += sat
                    if sat != m.accepts(w):
                        bad += 1
        rng = random.Random(7)
        disagreements = 0
        for _ in range(1000):
            n = rng.randint(1, 20)
            f = random_formula(rng, n, depth=rng.randint(2, 6))
            x = solve(f)
            if (x is not None) != bool(truth_table(f, n).any()) or (x is not None and not evaluate(f, x)):
                disagreements += 1
        return bad, models, most, disagreements

    (bad, models, most, dis), s = timed(run)
    ok = bad == 0 and dis == 0 and most <= 2 ** 8
    return record(7, ok, s, 300, f"{bad} encode mismatches ({models} satisfying pairs, at most {most} assignments "
                                 f"per template); {dis} solver disagreements on 1000 formulas")


# -- 8 ---------------------------------------------------------------------------

def criterion_8() -> bool:
    def run():
        rng = random.Random(8)
        differ = 0
        seed = 0
        regexes = []
        while len(regexes) < 50:
            r = random_regex(seed, max_nodes=8, stars=False)
            seed += 1
            regexes.append(r)
        for r in regexes:
            # strings in one family share their first ten characters
            prefix = "".join(rng.choice("ab") for _ in range(10))
            times = set()
            for n in (10, 100, 1000):
                w = prefix + "".join(rng.choice("ab") for _ in range(n - 10))
                times.add(time(r, w))
            differ += len(times) != 1
        return differ, len(regexes)

    (differ, n), s = timed(run)
    return record(8, differ == 0, s, 10, f"{n - differ}/{n} repetition-free expressions take identical time "
                                         f"at lengths 10, 100 and 1000")


# -- 9 ---------------------------------------------------------------------------

def criterion_9() -> bool:
    def run():
        golden = distance(parse("a|b|c"), parse("d|c")) == 4 and distance(parse(".*=.*"), parse(".*=.*")) == 0
        trees = all_trees(4)
        bad = sum(1 for x, y in itertools.product(trees, repeat=2) if distance(x, y) != brute_distance(x, y))
        return golden, bad, len(trees) ** 2

    (golden, bad, pairs), s = timed(run)
    return record(9, golden and bad == 0, s, 30, f"golden values hold: {golden}; {bad} mismatches over {pairs} tree pairs")


# -- 10 --------------------------------------------------------------------------

def criterion_10() -> bool:
    # the runs are shared with criterion 2, so report their original duration
    runs, s = corpus_runs()
    total = len(runs)
    repaired = [(r, ex, res) for _, r, ex, res, secs in runs if res.status == REPAIRED and secs <= 30 + 5]
    sound = [res for r, ex, res in repaired if verify(res.output, ex.positives, ex.negatives)]
    ok = total == 20 and len(repaired) >= 0.6 * total and len(sound) == len(repaired)
    return record(10, ok, s, 900, f"{len(repaired)}/{total} repaired, {len(sound)} re-verified")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("n", range(1, 11))
def test_criterion(n):
    assert CRITERIA[n - 1](), RESULTS[n]


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
