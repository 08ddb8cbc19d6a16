import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import all_words, brute_subsequence, brute_subwords
from mpj.algebra import check_variety, syntactic_monoid, u1
from mpj.programs import (CombinedProgram, DecoratedSweepPlan, GammaProgram, Instruction, Program, ProgramError,
                          SelectorFn, boolean_combine, compile_tddo, compose_reduction, compress_equivalent,
                          compress_subword_indices, decorated_sweep, dfa_program, equivalent_length_bound,
                          feedback_sweep, modular_decoration, morphism_program, prefix_program, program_from_json,
                          random_program, selector_length_bound, selector_member, selector_program, subword_index_bound,
                          suffix_program, summed_length_bound, sweep_length, sweep_source_language,
                          sweep_target_language, zk_language)
from mpj.reglang import ShuffleIdeal, compile_expr, parse_regex
from mpj.words import Alphabet

ABC = Alphabet.of("abc")
AB = Alphabet.of("ab")
XY = Alphabet.of("xy")
# U1 = {1, 0}; index 0 is the identity, index 1 the absorbing zero
ONE, ZERO = 0, 1


def u1_program():
    return Program(XY, 2, u1(), [Instruction(1, (ONE, ZERO)), Instruction(2, (ONE, ZERO))], {ZERO})


def ab_shuffle_monoid():
    return syntactic_monoid(compile_expr(ShuffleIdeal("ab", AB)))[0]


def test_eval_examples():
    p = Program(AB, 3, u1(), [], {ONE})
    assert p.eval("aba") == ONE and p.eval_trace("aba") == ()
    assert p.recognizes("bbb")
    q = u1_program()
    assert q.eval("xy") == ZERO and q.eval_trace("xy") == (ONE, ZERO)
    assert q.recognizes("xy")
    assert not q.recognizes("xx")
    with pytest.raises(ProgramError):
        q.eval("xyx")


def test_instruction_validation():
    with pytest.raises(ProgramError):
        Program(XY, 2, u1(), [Instruction(3, (ONE, ZERO))], set())
    with pytest.raises(ProgramError):
        Program(XY, 2, u1(), [Instruction(1, (ONE,))], set())
    with pytest.raises(ProgramError):
        Program(XY, 2, u1(), [Instruction(1, (ONE, 5))], set())


def test_gamma_eval_examples():
    assert GammaProgram(ABC, 3, ABC, []).gamma_eval("abc") == ()
    g = feedback_sweep(4)
    assert g.positions == [2, 1, 3, 2, 4, 3]
    assert "".join(g.gamma_eval("abac")) == "baabca"
    assert "".join(g.gamma_eval("acba")) == "cabcab"


def test_sweep_trace_through_a_program():
    q = dfa_program(compile_expr(sweep_target_language()), 6)
    p = compose_reduction(feedback_sweep(4), q)
    mon = q.monoid
    letter = {a: q.instructions[0].out[ABC.index(a)] for a in "abc"}
    assert p.eval_trace("abac") == tuple(letter[a] for a in "baabca")
    assert p.eval("abac") == mon.product(letter[a] for a in "baabca")


def test_feedback_sweep_shapes():
    assert len(feedback_sweep(0)) == 0 and len(feedback_sweep(1)) == 0
    for n in range(2, 9):
        assert len(feedback_sweep(n)) == 2 * n - 2


def test_sweep_target_examples():
    K = sweep_target_language()
    assert K.member("baabca")
    assert not K.member("cabcab")
    assert not K.member("")


@pytest.mark.parametrize("n", range(0, 9))
def test_sweep_reduction(n):
    L, K = sweep_source_language(), sweep_target_language()
    g = feedback_sweep(n)
    for w in all_words("abc", n):
        assert L.member(w) == K.member(g.gamma_eval(w)), w


def test_compose_reduction_identity_reading():
    q = dfa_program(compile_expr(ShuffleIdeal("ab", AB)), 4)
    ident = GammaProgram(AB, 4, AB, [Instruction(i, tuple(AB)) for i in range(1, 5)])
    p = compose_reduction(ident, q)
    assert len(p) == len(ident)
    for w in all_words("ab", 4):
        assert p.recognizes(w) == q.recognizes(w)


@pytest.mark.parametrize("n", range(0, 8))
def test_compose_reduction_sweep_language(n):
    g = feedback_sweep(n)
    q = dfa_program(compile_expr(sweep_target_language()), len(g))
    p = compose_reduction(g, q)
    assert len(p) == len(g)
    assert check_variety(p.monoid, "J")
    L = sweep_source_language()
    for w in all_words("abc", n):
        assert p.recognizes(w) == L.member(w)


def test_compose_reduction_shape_mismatch():
    with pytest.raises(ProgramError):
        compose_reduction(feedback_sweep(3), dfa_program(compile_expr(sweep_target_language()), 5))


def small_random(rng, n):
    return random_program(rng, AB, n, ab_shuffle_monoid(), max_len=8, mean_len=4)


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("op", ["and", "or", "andnot"])
def test_boolean_combine_truth_table(seed, op):
    rng = random.Random(seed)
    for n in range(0, 6):
        p1, p2 = small_random(rng, n), small_random(rng, n)
        c = boolean_combine(p1, p2, op)
        assert len(c) == len(p1) + len(p2)
        for w in all_words("ab", n):
            x, y = p1.recognizes(w), p2.recognizes(w)
            want = {"and": x and y, "or": x or y, "andnot": x and not y}[op]
            assert c.recognizes(w) == want


def test_boolean_combine_with_accept_all():
    rng = random.Random(3)
    p = small_random(rng, 4)
    everything = Program(AB, 4, u1(), [], {ONE})
    c = boolean_combine(p, everything, "and")
    assert all(c.recognizes(w) == p.recognizes(w) for w in all_words("ab", 4))
    assert all(p.complement().recognizes(w) != p.recognizes(w) for w in all_words("ab", 4))


def test_morphism_program():
    d = compile_expr(ShuffleIdeal("ab", AB))
    _, phi, acc = syntactic_monoid(d)
    assert len(morphism_program(phi, acc, 0)) == 0
    p = morphism_program(phi, acc, 4)
    assert len(p) == 4
    assert all(p.recognizes(w) == d.accepts(w) for w in all_words("ab", 4))


@pytest.mark.parametrize("n", range(0, 7))
def test_prefix_and_suffix_programs(n):
    s = suffix_program("c", n, ABC)
    p = prefix_program("ab", n, ABC)
    assert len(s) == (1 if n >= 1 else 0)
    assert len(p) == (2 if n >= 2 else 0)
    for w in all_words("abc", n):
        assert s.recognizes(w) == (w[-1:] == ("c",))
        assert p.recognizes(w) == (w[:2] == ("a", "b"))


def test_decorated_sweep_example():
    plan = DecoratedSweepPlan("ab", "", "", 1, AB)
    g, K = decorated_sweep(plan, 2)
    assert g.gamma_eval("ab") == (("a", 0), ("b", 0), ("a", 1), ("b", 2))
    assert K.member(g.gamma_eval("ab"))
    assert not K.member(g.gamma_eval("ba"))
    g0, _ = decorated_sweep(plan, 1)
    assert len(g0) == 0
    assert not any(plan.source_language().member(w) for w in all_words("ab", 1))


PLANS = [("ab", "", "", 1, "ab"), ("ab", "", "", 2, "ab"), ("ab", "a", "b", 1, "ab"), ("ba", "b", "", 1, "ab"),
         ("abc", "", "", 1, "abc"), ("ac", "b", "c", 1, "abc"), ("ca", "", "ab", 2, "abc")]


@pytest.mark.parametrize("u,x1,x2,alpha,A", PLANS)
def test_decorated_sweep_reduction(u, x1, x2, alpha, A):
    plan = DecoratedSweepPlan(u, x1, x2, alpha, A)
    L = plan.source_language()
    for n in range(0, 8 if len(A) == 2 else 6):
        g, K = decorated_sweep(plan, n)
        assert len(g) == sweep_length(len(u), n) <= (2 * len(u) - 1) * n
        for w in all_words(A, n):
            assert L.member(w) == K.member(g.gamma_eval(w)), (n, w)


def test_decorated_sweep_rejects_repeated_letters():
    with pytest.raises(ProgramError):
        DecoratedSweepPlan("aba", "", "", 1, AB)


def test_selector_examples():
    sigma = SelectorFn(0, 2, {(): {2}})
    g = selector_program(0, sigma, 2)
    Z0 = zk_language(0)
    assert g.gamma_eval("01") == ("e", "#") and Z0.member(g.gamma_eval("01"))
    assert g.gamma_eval("10") == ("e", "e") and not Z0.member(g.gamma_eval("10"))
    assert selector_member(0, sigma, "01")
    assert not selector_member(0, sigma, "00")
    s1 = SelectorFn(1, 2, {(1,): {1, 2}, (2,): {1}})
    assert not selector_member(1, s1, "1111")   # first block has two 1s


def brute_selector(k, sigma, w):
    n = sigma.n
    blocks = [w[b * n:(b + 1) * n] for b in range(k + 1)]
    rho = []
    for blk in blocks[:k]:
        if blk.count("1") != 1:
            return False
        rho.append(blk.index("1") + 1)
    return any(blocks[k][j - 1] == "1" for j in sigma(tuple(rho)))


@pytest.mark.parametrize("k,n", [(0, 1), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2)])
@pytest.mark.parametrize("seed", range(4))
def test_selector_reduction(k, n, seed):
    sigma = SelectorFn.random(k, n, random.Random(seed))
    g = selector_program(k, sigma, n)
    assert len(g) <= selector_length_bound(k, n)
    Z = zk_language(k)
    for w in all_words("01", (k + 1) * n):
        want = brute_selector(k, sigma, w)
        assert selector_member(k, sigma, w) == want
        assert Z.member(g.gamma_eval(w)) == want, w


def test_selector_n_zero():
    sigma = SelectorFn(1, 0, {})
    g = selector_program(1, sigma, 0)
    assert len(g) == 0
    assert not zk_language(1).member(g.gamma_eval(""))


def test_modular_decoration():
    g = modular_decoration(2, 3, AB)
    assert g.gamma_eval("aba") == (("a", 0), ("b", 1), ("a", 0))
    assert all(t == 0 for _, t in modular_decoration(1, 4, AB).gamma_eval("abba"))
    assert len(modular_decoration(3, 5, AB)) == 5


IDENTITY = "~<c,a>_2 & ~<c,b>_2 & <ac>_2"


@pytest.mark.parametrize("text,A", [(IDENTITY, "abc"), ("<ab>_2", "ab"), ("<ab,c>_2", "abc"), ("~:prefix(b) | <ba>_2", "ab")])
def test_compile_tddo_agrees_with_member(text, A):
    e = parse_regex(text, A)
    for n in range(0, 8 if len(A) == 2 else 7):
        p = compile_tddo(e, n)
        assert all(check_variety(m, "J") for m in p.components)
        for w in all_words(A, n):
            assert p.recognizes(w) == e.member(w), (n, w)


def test_compile_tddo_suffix_is_constant_length():
    e = parse_regex(":suffix(c)", "abc")
    lengths = {len(compile_tddo(e, n)) for n in range(1, 8)}
    assert lengths == {1}
    p = compile_tddo(e, 5)
    assert all(p.recognizes(w) == (w[-1] == "c") for w in all_words("abc", 5))


def test_compile_tddo_rejects_concatenation():
    with pytest.raises(ValueError):
        compile_tddo(parse_regex("(a+b)*ac+", "abc"), 3)


def test_compression_constants():
    assert subword_index_bound(1, 2, 5) == 10
    assert subword_index_bound(3, 2, 5) == 6 * 4 * 25
    assert summed_length_bound(2, 3, 2, 4) <= equivalent_length_bound(2, 3, 2, 4)


def test_compress_empty_word_and_k_zero():
    p = small_random(random.Random(1), 4)
    assert compress_subword_indices(p, ()) == set()
    q, keep = compress_equivalent(p, 0)
    assert len(q) == 0 and keep == set()


def test_compress_single_letter_first_occurrence():
    p = Program(XY, 2, u1(), [Instruction(1, (ONE, ZERO))] * 3 + [Instruction(2, (ZERO, ONE))] * 3, set())
    assert compress_subword_indices(p, (ZERO,)) == {0, 3}


@pytest.mark.parametrize("n", range(1, 6))
def test_compress_repeated_u1_instructions(n):
    p = Program(XY, n, u1(), [Instruction(i, (ONE, ZERO)) for i in range(1, n + 1)] * n, {ZERO})
    q, _ = compress_equivalent(p, 1)
    assert len(q) <= 2 * n
    for w in all_words("xy", n):
        assert brute_subwords(p.eval_trace(w), 1) == brute_subwords(q.eval_trace(w), 1)


@pytest.mark.parametrize("seed", range(12))
def test_compress_guarantee(seed):
    rng = random.Random(seed)
    mon = ab_shuffle_monoid()
    n = rng.randint(1, 4)
    p = random_program(rng, AB, n, mon, max_len=30, mean_len=15)
    words = list(all_words("ab", n))
    traces = [p.eval_trace(w) for w in words]
    for k in range(1, 4):
        for t in itertools.product(range(mon.size), repeat=k):
            idx = compress_subword_indices(p, t)
            assert len(idx) <= subword_index_bound(k, 2, n)
            extra = {i for i in range(len(p)) if rng.random() < 0.3}
            sub = p.subprogram(idx | extra)
            for w, tr in zip(words, traces):
                assert brute_subsequence(t, tr) == brute_subsequence(t, sub.eval_trace(w)), (t, w)
        q, _ = compress_equivalent(p, k)
        assert len(q) <= min(equivalent_length_bound(k, mon.size, 2, n), summed_length_bound(k, mon.size, 2, n))
        for w, tr in zip(words, traces):
            assert brute_subwords(tr, k) == brute_subwords(q.eval_trace(w), k)


@given(st.integers(0, 10_000), st.integers(0, 5))
def test_eval_is_multiplicative(seed, n):
    rng = random.Random(seed)
    p1, p2 = small_random(rng, n), small_random(rng, n)
    for w in all_words("ab", n):
        assert (p1 + p2).eval(w) == p1.monoid.mul(p1.eval(w), p2.eval(w))


@given(st.integers(0, 10_000), st.integers(1, 4))
def test_subprogram_trace_is_subword(seed, n):
    rng = random.Random(seed)
    p = small_random(rng, n)
    keep = {i for i in range(len(p)) if rng.random() < 0.5}
    sub = p.subprogram(keep)
    for w in all_words("ab", n):
        assert brute_subsequence(sub.eval_trace(w), p.eval_trace(w))


def test_program_json_round_trip():
    rng = random.Random(7)
    p = small_random(rng, 4)
    assert program_from_json(p.to_json()).to_json() == p.to_json()
    g = decorated_sweep(DecoratedSweepPlan("ab", "a", "", 1, AB), 4)[0]
    assert program_from_json(g.to_json()) == g
    assert program_from_json(feedback_sweep(5).to_json()) == feedback_sweep(5)
    c = compile_tddo(parse_regex(IDENTITY, "abc"), 4)
    c2 = program_from_json(c.to_json())
    assert isinstance(c2, CombinedProgram)
    assert all(c.recognizes(w) == c2.recognizes(w) for w in all_words("abc", 4))


def test_combined_flatten():
    c = compile_tddo(parse_regex(":shuffle(ab) & ~:prefix(b)", "ab"), 4)
    flat = c.flatten()
    assert len(flat) == len(c)
    assert all(flat.recognizes(w) == c.recognizes(w) for w in all_words("ab", 4))
