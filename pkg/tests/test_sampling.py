from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from redos_repair import ast as A
from redos_repair.ltp import check_ltp
from redos_repair.matcher import Matcher, accepts
from redos_repair.parser import parse
from redos_repair.printer import to_text
from redos_repair.sampling import (
    EmptyPositives,
    ExampleSet,
    build_seed_strings,
    min_accept_length,
    sample_examples,
    similarity,
    widen_char_sets,
)

from helpers import EQ_NEG, EQ_POS, random_regex, strings


# -- seeds ---------------------------------------------------------------------

def test_literal_runs_are_single_seeds():
    seeds = build_seed_strings(parse("Content-Security-Policy|[z]"), 3)
    assert seeds[:2] == ["Content-Security-Policy", "z"]
    assert len(seeds) == 3 and seeds[2] not in "Content-Security-Policyz"


def test_single_literal():
    seeds = build_seed_strings(parse("a"), 0)
    assert seeds[0] == "a" and len(seeds) == 2 and seeds[1] != "a"


def test_one_seed_per_class():
    seeds = build_seed_strings(parse("[0-9][A-Z]"), 5)
    assert len(seeds) == 3
    assert seeds[0].isdigit() and seeds[1].isupper()
    assert seeds[2] not in seeds[:2]
    assert build_seed_strings(parse("[0-9][A-Z]"), 5) == seeds


# -- minimum length ------------------------------------------------------------

def test_min_accept_length_examples():
    assert min_accept_length(parse("")) == 0
    assert min_accept_length(parse(r"(a*)\1"), ["a"]) == 0
    assert min_accept_length(parse(".*.*=.*")) == 1
    assert min_accept_length(parse("[]")) is None
    assert min_accept_length(parse("abc"), ["a", "b", "c"], cap=2) is None


# -- example sets ----------------------------------------------------------------

def test_example_set_rejects_overlap():
    with pytest.raises(ValueError):
        ExampleSet(("a",), ("a",))
    ex = ExampleSet(("a",), ("b",))
    ex.validate(parse("a"))
    with pytest.raises(ValueError):
        ex.validate(parse("b"))


def test_sample_examples_for_the_equals_regex():
    r = parse(".*.*=.*")
    ex = sample_examples(r, rng_seed=4)
    assert "=" in ex.positives
    assert all("=" in w for w in ex.positives)
    assert not any("=" in w for w in ex.negatives)
    ex.validate(r)


def test_small_candidate_sets_are_returned_whole():
    ex = sample_examples(parse("a|b"), k=10)
    assert set(ex.positives) == {"a", "b"}
    assert len(ex.positives) < 10


def test_empty_language_is_reported():
    with pytest.raises(EmptyPositives):
        sample_examples(parse("[]"))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 1000))
def test_sampling_is_valid_and_deterministic(seed, rng_seed):
    r = random_regex(seed, max_nodes=8)
    try:
        ex = sample_examples(r, k=5, rng_seed=rng_seed)
    except EmptyPositives:
        assert not any(accepts(r, w) for w in strings(max_len=2))
        return
    ex.validate(r)
    assert len(ex.positives) <= 5 and len(ex.negatives) <= 5
    assert sample_examples(r, k=5, rng_seed=rng_seed) == ex


# -- similarity ------------------------------------------------------------------

def test_similarity_of_identical_expressions():
    for text in ["a|b", ".*.*=.*", "(a*)\\1", "[0-9]+"]:
        rep = similarity(parse(text), parse(text))
        assert rep.precision == rep.recall == rep.f1 == 1


def test_similarity_of_tiny_languages():
    rep = similarity(parse("a|b"), parse("a"))
    assert rep.precision == 1 and rep.recall == Fraction(1, 2)
    assert rep.f1 == Fraction(2, 3)


def test_equivalent_expressions_score_one():
    r1, r2 = parse(".*.*=.*"), parse("[^=]*=.*")
    alphabet = "a=b"
    assert all(accepts(r1, w) == accepts(r2, w) for w in strings(alphabet, 4))
    rep = similarity(r1, r2)
    assert rep.f1 == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9), st.integers(0, 10**9))
def test_f1_bounds(s1, s2):
    rep = similarity(random_regex(s1, max_nodes=6), random_regex(s2, max_nodes=6), sample_count=20)
    assert 0 <= rep.f1 <= min(1, 2 * min(rep.precision, rep.recall))
    if rep.precision + rep.recall:
        assert rep.f1 == 2 * rep.precision * rep.recall / (rep.precision + rep.recall)


def test_similarity_is_deterministic():
    a = similarity(parse("[a-z]+@[a-z]+"), parse("[a-c]+@.*"), rng_seed=9)
    b = similarity(parse("[a-z]+@[a-z]+"), parse("[a-c]+@.*"), rng_seed=9)
    assert a == b


# -- widening ----------------------------------------------------------------------

def _sets(r):
    return [n.cs for n in A.walk(r) if isinstance(n, A.Chars)]


def test_widening_example():
    # widening needs an input that already fits the examples
    r = parse("[a]*=.*")
    P, N = ["=", "a=", "aa=b"], EQ_NEG
    out = widen_char_sets(r, P, N)
    assert "=" not in _sets(out)[0]
    assert to_text(out) == "[^=]*=.*"
    assert widen_char_sets(out, P, N) == out
    assert widen_char_sets(r, EQ_POS, EQ_NEG) == r


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_widening_is_monotone_sound_and_idempotent(seed):
    r = random_regex(seed, max_nodes=7)
    if not check_ltp(r):
        return
    m = Matcher(r, memo=True)
    ws = strings(max_len=3)
    P = [w for w in ws if m.accepts(w)][:4]
    N = [w for w in ws if not m.accepts(w)][:4]
    out = widen_char_sets(r, P, N)
    assert all(x.issubset(y) for x, y in zip(_sets(r), _sets(out)))
    assert check_ltp(out)
    assert all(accepts(out, w) for w in P) and not any(accepts(out, w) for w in N)
    assert widen_char_sets(out, P, N) == out
