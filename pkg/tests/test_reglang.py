import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import all_words, brute_subsequence
from mpj.algebra import check_variety, syntactic_monoid
from mpj.config import CapExceeded
from mpj.reglang import (Complement, Concat, CostaForm, CostaFormError, Factor, Intersection, LBlock, Letters,
                         ParseError, Prefix, ShuffleIdeal, SingleWord, Star, Suffix, ThresholdBlock, Union,
                         alpha_decomposition, block, compile_expr, costa_K, costa_lang, dfa_equal, from_json,
                         is_k_pt, parse_regex, pretty, sigma_star, threshold_normal_form, to_json)
from mpj.reglang.dfa import Dfa, minimize
from mpj.words import Alphabet

ABC = Alphabet.of("abc")
AB = Alphabet.of("ab")
IDENTITY = "~<c,a>_2 & ~<c,b>_2 & <ac>_2"


def agree_to(e, n_max):
    d = compile_expr(e)
    for n in range(n_max + 1):
        for w in all_words(list(e.alphabet), n):
            assert e.member(w) == d.accepts(w), (pretty(e), w)


# block membership straight from the definition: split w into k consecutive
# pieces, piece i containing u_i as a factor or u_i^l as a subword
def brute_block(us, l, w):
    k = len(us)

    def ok(u, piece):
        return (any(piece[i:i + len(u)] == tuple(u) for i in range(len(piece) - len(u) + 1))
                or brute_subsequence(tuple(u) * l, piece))

    for cuts in itertools.combinations_with_replacement(range(len(w) + 1), k - 1):
        bounds = (0,) + cuts + (len(w),)
        if all(ok(tuple(u), w[bounds[i]:bounds[i + 1]]) for i, u in enumerate(us)):
            return True
    return False


def test_member_examples():
    b = ThresholdBlock(("ab", "c"), 3, ABC)
    assert b.member("abc")
    assert not b.member("bac")
    e = parse_regex(IDENTITY, "abc")
    assert e.member("abac")
    assert not e.member("acba")


def test_compile_examples():
    assert compile_expr(ShuffleIdeal("a", AB)).n_states == 2
    agree_to(block(["ac"], 2, ABC), 7)
    d = compile_expr(Complement(sigma_star(AB)))
    assert d.n_states == 1 and not d.accepting


def test_dfa_equal_examples():
    d = compile_expr(parse_regex("(a+b)*ac+", "abc"))
    assert dfa_equal(d, d) == (True, None)
    A = Alphabet.of("a")
    assert dfa_equal(compile_expr(Prefix("a", A)), compile_expr(Suffix("a", A)))[0]
    ok, w = dfa_equal(compile_expr(Prefix("a", AB)), compile_expr(Suffix("a", AB)))
    assert not ok and "".join(w) in ("ab", "ba")


def test_compile_reports_cap_with_subexpression():
    with pytest.raises(CapExceeded) as info:
        compile_expr(ShuffleIdeal("abababab", AB), cap=3)
    assert "shuffle" in str(info.value)


def test_costa_lang_examples():
    f0 = CostaForm(0, ("a",), (), AB)
    assert dfa_equal(compile_expr(costa_lang(f0)), compile_expr(SingleWord("a", AB)))[0]
    f1 = CostaForm(1, ("a", "a"), ({"b"},), AB)
    aba = parse_regex("ab*a", "ab")
    assert dfa_equal(compile_expr(costa_lang(f1)), compile_expr(aba))[0]
    f2 = CostaForm(1, ("", "", ""), ({"a", "c"}, {"b", "c"}), ABC)
    L = costa_lang(f2)
    assert L.member("acb") and L.member("caccbcb") and not L.member("ab")


def test_costa_form_validation():
    with pytest.raises(CostaFormError):
        CostaForm(0, ("a", "b"), ({"a"}, {"b"}), AB)   # wrong count
    with pytest.raises(CostaFormError):
        CostaForm(0, ("", "a", ""), ({"a"}, {"b"}), AB)  # a inside A_1
    with pytest.raises(CostaFormError):
        CostaForm(0, ("", "", ""), ({"a"}, {"a", "b"}), AB)  # comparable sets around an empty word


def test_costa_K_examples():
    f0 = CostaForm(0, ("a",), (), AB)
    shown = Intersection((Prefix("a", AB), Complement(block(["a", "a"], 2, AB)),
                          Complement(block(["a", "b"], 2, AB))), AB)
    assert dfa_equal(compile_expr(costa_K(f0)), compile_expr(shown))[0]
    f1 = CostaForm(1, ("a", "a"), ({"b"},), AB)
    overlapping = Intersection((Prefix("a", AB), Suffix("a", AB), Complement(block(["a", "a", "a"], 2, AB))), AB)
    assert dfa_equal(compile_expr(costa_K(f1, allow_overlap=True)), compile_expr(overlapping))[0]
    # without the disjointness conjunct u0 and u1 overlap; "a" separates it from a b* a
    ok, w = dfa_equal(compile_expr(costa_K(f1, allow_overlap=True)), compile_expr(costa_lang(f1)))
    assert not ok and w == ("a",)
    assert dfa_equal(compile_expr(costa_K(f1)), compile_expr(costa_lang(f1)))[0]


def test_is_k_pt_examples():
    for k in range(4):
        assert is_k_pt(compile_expr(sigma_star(AB)), k)
    assert is_k_pt(compile_expr(ShuffleIdeal("ab", AB)), 2)
    assert not is_k_pt(compile_expr(ShuffleIdeal("ab", AB)), 1)
    ab_star = compile_expr(parse_regex("(ab)*", "ab"))
    assert not any(is_k_pt(ab_star, k) for k in range(5))


def brute_is_k_pt(d, k, max_len):
    """Two words of length <= max_len with equal k-subword sets but different
    membership refute k-PT; a sound one-sided oracle."""
    from mpj.words import subword_set
    classes = {}
    for n in range(max_len + 1):
        for w in all_words(list(d.alphabet), n):
            s = subword_set(w, k)
            if classes.setdefault(s, d.accepts(w)) != d.accepts(w):
                return False
    return True


@given(st.integers(0, 100_000), st.integers(0, 3))
def test_is_k_pt_against_word_classes(seed, k):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    d = minimize(Dfa(AB, n, 0, [[rng.randrange(n) for _ in AB] for _ in range(n)],
                     frozenset(q for q in range(n) if rng.random() < 0.5)))
    # a split among short words is a proof that the language is not k-PT
    if not brute_is_k_pt(d, k, 7):
        assert not is_k_pt(d, k)


@pytest.mark.parametrize("text,A,k,expected", [("<ab>_2", "ab", 2, True), ("<ab>_2", "abc", 3, False),
                                               (":shuffle(aba)", "ab", 2, False), (":shuffle(aba)", "ab", 3, True),
                                               ("a(a+b)*", "ab", 3, False), ("(a+b)*ac+", "abc", 3, False),
                                               ("<ab,c>_2", "abc", 3, False)])
def test_is_k_pt_frozen(text, A, k, expected):
    assert is_k_pt(compile_expr(parse_regex(text, A)), k) == expected


def test_is_k_pt_on_Z1():
    from mpj.programs import zk_language
    d = compile_expr(zk_language(1))
    assert is_k_pt(d, 3)
    assert not is_k_pt(d, 2)


@pytest.mark.parametrize("text,A", [(IDENTITY, "abc"), ("<ab>_2", "abc"), ("<ab,c>_3", "abc"),
                                    ("<ac>_2", "abc"), ("(a+b)*ac+", "abc"), ("<aba,b>_2", "ab")])
def test_member_agrees_with_dfa(text, A):
    agree_to(parse_regex(text, A), 7)


@given(st.lists(st.sampled_from(["a", "b", "ab", "ba", "c", "ca", "aa"]), min_size=1, max_size=2),
       st.integers(1, 3), st.lists(st.sampled_from("abc"), max_size=7).map(tuple))
def test_block_member_matches_definition(us, l, w):
    assert ThresholdBlock(tuple(us), l, ABC).member(w) == brute_block(us, l, w)


@pytest.mark.parametrize("us,l", [(["ab"], 2), (["ab", "c"], 3), (["a", "ba"], 2), (["aa"], 2), (["aba", "b"], 2)])
def test_normal_form_identity(us, l):
    A = ABC if any("c" in u for u in us) else AB
    assert dfa_equal(compile_expr(ThresholdBlock(us, l, A)), compile_expr(threshold_normal_form(us, l, A)))[0]


@pytest.mark.parametrize("A,us", [("ab", ["ab"]), ("abc", ["ab"]), ("abc", ["ab", "c"]), ("ab", ["ba", "a"]),
                                  ("abc", ["ba", "a"]), ("ab", ["b", "ab"])])
@pytest.mark.parametrize("l", [2, 3])
def test_tddo_equality(A, l, us):
    lhs = compile_expr(threshold_normal_form(us, l, A))
    assert dfa_equal(lhs, compile_expr(alpha_decomposition(us, l, A)))[0]


@pytest.mark.parametrize("us", [["ab"], ["ab", "c"], ["a", "b", "ca"]])
def test_threshold_one_is_a_shuffle_ideal(us):
    assert dfa_equal(compile_expr(ThresholdBlock(us, 1, ABC)),
                     compile_expr(ShuffleIdeal("".join(us), ABC)))[0]


@pytest.mark.parametrize("us,l", [(["ab", "c"], 3), (["ac"], 2), (["a", "b"], 2), (["ab"], 3), (["aa", "b"], 2)])
def test_threshold_blocks_are_in_DA(us, l):
    mon = syntactic_monoid(compile_expr(ThresholdBlock(us, l, ABC)))[0]
    assert check_variety(mon, "DA")


@st.composite
def costa_forms(draw):
    A = draw(st.sampled_from(["ab", "abc"]))
    n = draw(st.integers(0, 2))
    letters = list(A)
    sets = [frozenset(draw(st.sets(st.sampled_from(letters), min_size=1))) for _ in range(n)]
    us = [draw(st.text(alphabet=A, max_size=2)) for _ in range(n + 1)]
    r = draw(st.integers(0, 2))
    try:
        return CostaForm(r, tuple(us), tuple(sets), A)
    except CostaFormError:
        return None


@given(costa_forms())
def test_costa_K_equals_language(f):
    if f is None:
        return
    L = compile_expr(costa_lang(f))
    assert dfa_equal(L, compile_expr(costa_K(f)))[0], f.describe()
    assert check_variety(syntactic_monoid(L)[0], "DA")


def test_parser():
    e = parse_regex("(a+b)*ac+", "abc")
    assert e.member("abac") and not e.member("aca")
    assert parse_regex("ab-shuffle").member("xayb".replace("x", "b").replace("y", "a"))
    assert parse_regex(":all", "ab").member("")
    assert not parse_regex(":none", "ab").member("a")
    assert parse_regex("[ab]c", "abc").member("bc")
    with pytest.raises(ParseError):
        parse_regex("(ab", "ab")
    with pytest.raises(ParseError):
        parse_regex("<ab>_0", "ab")


def test_pretty_round_trips_through_parser():
    for text in [IDENTITY, "<ab,c>_3", ":shuffle(ab) | ~:prefix(b)", "(a+b)*ac+"]:
        e = parse_regex(text, "abc")
        again = parse_regex(pretty(e), "abc")
        assert dfa_equal(compile_expr(e), compile_expr(again))[0]


def test_expression_and_dfa_json_round_trip():
    exprs = [parse_regex(IDENTITY, "abc"), LBlock("ab", 3, 2, ABC), Concat((Factor("a", ABC), Star(Letters(
        frozenset("bc"), ABC))), ABC), Union((SingleWord("ab", ABC), Suffix("c", ABC)), ABC),
        costa_lang(CostaForm(1, ("a", "", "b"), ({"a"}, {"b"}), ABC)), alpha_decomposition(["ab", "c"], 2, ABC)]
    for e in exprs:
        obj = to_json(e)
        assert from_json(obj) == e
        d = compile_expr(e)
        assert Dfa.from_json(d.to_json()) == d
    assert to_json(ThresholdBlock(("ab", "c"), 3, ABC))["op"] == "thresholdBlock"
