import pytest
from hypothesis import given, settings, strategies as st

from redos_repair import ast as A
from redos_repair.ltp import bpaths, bracket, check_ltp, enfa_translate, first, star_in_lookaround
from redos_repair.matcher import Matcher, time
from redos_repair.parser import parse, parse_template

from helpers import random_regex, strings

VERDICTS = {
    "(?:a*)*": False,
    r"(a*)\1": False,
    "a|aa": False,
    "(?:(?=a)*)*": True,
    "(a*)(b*)": True,
    ".*.*=.*": False,
    "(?:(?=.*).)*": False,
    "[^=]*=.*": True,
    "(a*)*c(b*)": False,
    "abc": True,
    "a|b": True,
    "(?:ab|ac)": False,
    "(a|b)*c": True,
}


@pytest.mark.parametrize("text,expected", sorted(VERDICTS.items()))
def test_verdicts(text, expected):
    v = check_ltp(parse(text))
    assert v.satisfies is expected
    assert (v.witness is None) == expected


def test_rmla():
    assert A.rmla(parse("(?:(?=a)*)*")) == A.Star(A.Star(A.Epsilon()))
    assert A.rmla(parse("abc")) == parse("abc")
    assert A.rmla(parse(r"(?!x)(a)\1")) == A.Concat(A.Concat(A.Epsilon(), A.Capture(1, parse("a"))), A.Backref(1))


def test_bracketing():
    assert bracket(parse("a")).text() == "[1a]1"
    assert bracket(parse(r"(a*)\1")).text() == "[1[2([3([4a]4)*]3)_1]2[5\\1]5]1"
    r = parse("(?:(?:a)*)*b")
    assert bracket(r).text() == "[1[2([3([4a]4)*]3)*]2[5b]5]1"


@settings(max_examples=200)
@given(st.integers(0, 10**9))
def test_bracket_round_trip_and_capture_origins(seed):
    r = random_regex(seed, max_nodes=10)
    b = bracket(r)
    assert b.unwrap() == r
    assert sorted(x.index for x in b.walk()) == list(range(1, A.size(r) + 1))
    nfa = enfa_translate(bracket(A.rmla(r)))
    assert set(nfa.capture_origin) == set(A.capture_indexes(A.rmla(r)))


def test_witness_paths_for_backref():
    v = check_ltp(parse(r"(a*)\1"))
    paths = {"".join(p) for p in v.witness.paths}
    assert paths == {"[1[2[3]3]2[5", "[1[2[3[4"}


def test_infinite_family():
    v = check_ltp(parse("(?:a*)*"))
    assert v.witness.cycle and v.witness.symbol == "a" and v.witness.bracket == 1
    nfa = enfa_translate(bracket(parse("(?:a*)*")))
    assert bpaths(nfa, 1, "a") is None


def test_first_sets():
    nfa = enfa_translate(bracket(parse("a")))
    items = first(nfa, nfa.initial)
    assert len(items) == 1 and items[0].path == ("[1",) and "a" in items[0].symbol.cs
    nfa = enfa_translate(bracket(parse_template("(□1|□2|a)")))
    got = {("".join(i.path), tuple(sorted(i.symbol.holes)), "a" in i.symbol.cs) for i in first(nfa, nfa.initial)}
    assert got == {("[1[2[3[4", (1,), False), ("[1[2[3[5", (2,), False), ("[1[2[6", (), True)}


def test_lookaround_repetition():
    assert star_in_lookaround(parse("(?=a*)b")) is not None
    assert check_ltp(parse("(?=a*)b")).witness.reason == "repetition-in-lookaround"
    assert star_in_lookaround(parse("(?=a)*")) is None


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_ltp_expressions_run_in_linear_time(seed):
    r = random_regex(seed, max_nodes=10)
    if not check_ltp(r):
        return
    k = A.size(r)
    for c in "ab":
        for n in (8, 64):
            w = c * n
            assert time(r, w) <= 4 * k * (n + 1)
    for w in strings(max_len=5):
        assert time(r, w) <= 4 * k * (len(w) + 1)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_ltp_expressions_have_one_accepting_state(seed):
    r = random_regex(seed, max_nodes=10, lookarounds=False)
    if not check_ltp(r):
        return
    m = Matcher(r)
    for w in strings(max_len=4):
        # an empty capture and an unset one read the same characters
        ends = {tuple(x or None for x in g) for p, g in m.run(w).states if p == len(w)}
        assert len(ends) <= 1
