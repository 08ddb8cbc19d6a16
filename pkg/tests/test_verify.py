import json

import pytest

from mpj import verify
from mpj.algebra import syntactic_monoid
from mpj.programs import GammaProgram, Instruction, feedback_sweep, sweep_source_language, sweep_target_language
from mpj.reglang import CostaForm, ShuffleIdeal, compile_expr
from mpj.verify import CheckSpec, SuiteError, VerificationReport
from mpj.words import Alphabet

ABC = Alphabet.of("abc")


def in_order(n):
    """A broken sweep that reads positions 1, 2, ..., n once each."""
    return GammaProgram(ABC, n, ABC, [Instruction(i, tuple(ABC)) for i in range(1, n + 1)])


@pytest.fixture(scope="module")
def default_reports():
    return verify.run_suite(verify.default_suite())


def test_empty_suite():
    reports = verify.run_suite([])
    assert reports == []
    assert verify.suite_passed(reports)
    assert json.loads(verify.render_json(reports)) == []


def test_default_suite_passes(default_reports):
    bad = [r.line() for r in default_reports if not r.passed]
    assert not bad, "\n".join(bad)
    ids = {r.check_id for r in default_reports}
    assert ids == {"sweep", "tddo-identity", "tddo-equality", "building-block", "compression", "selector",
                   "variety-claims", "costa", "compile-tddo"}


def test_each_mutation_fails_alone():
    normal = {s.check_id: s for s in verify.default_suite() if s.check_id in ("sweep", "building-block", "selector")}
    for spec in verify.mutation_suite():
        suite = [normal[i] for i in normal if i != spec.check_id] + [spec]
        reports = verify.run_suite(suite)
        failed = [r for r in reports if r.verdict == "fail"]
        assert [r.check_id for r in failed] == [spec.check_id]
        assert failed[0].counterexample is not None
        assert verify.replay(failed[0])


def test_mutation_counterexamples():
    reports = {r.check_id: r for r in verify.run_suite(verify.mutation_suite())}
    assert reports["sweep"].counterexample["word"] == "ac"
    assert reports["building-block"].counterexample["word"] == "ab"
    assert reports["selector"].counterexample["word"] == "01"


def test_replay_survives_json():
    r = verify.run_suite([CheckSpec("sweep", {"mutant": "swap"})])[0]
    again = VerificationReport.from_json(json.loads(json.dumps(r.to_json())))
    assert verify.replay(again)
    assert not verify.replay(verify.run_suite([CheckSpec("sweep", {"n_max": 4})])[0])


def test_corrupted_sweep_gives_shortest_counterexample():
    r = verify.check_reduction(in_order, sweep_source_language(), sweep_target_language(), 6)
    assert r.verdict == "fail"
    # words are enumerated length-lex, so the first mismatch is a shortest one
    assert len(r.counterexample["word"]) == 2


def test_check_reduction_n_max_zero():
    r = verify.check_reduction(feedback_sweep, sweep_source_language(), sweep_target_language(), 0)
    assert r.passed and r.instances_checked == 1


def test_check_reduction_length_bound():
    r = verify.check_reduction(feedback_sweep, sweep_source_language(), sweep_target_language(), 5,
                               length_bound=lambda n: n)
    assert r.verdict == "fail" and r.counterexample["length"] > r.counterexample["bound"]


def test_tddo_equality_examples():
    assert verify.check_tddo_equality("abc", 2, ["ab", "c"]).passed
    assert verify.check_tddo_equality("ab", 1, ["ab"]).passed
    assert verify.check_tddo_equality("ab", 2, ["aba"]).verdict == "skipped"


def test_tddo_equality_grid_size():
    assert len(verify.tddo_equality_grid()) >= 12


def test_costa_examples():
    assert verify.check_costa(CostaForm(1, ("a", "a"), ({"b"},), "ab")).passed
    assert verify.check_costa(CostaForm(0, ("a",), (), "ab")).passed
    assert verify.check_costa(CostaForm(1, ("", "", ""), ({"a", "c"}, {"b", "c"}), "abc")).passed


def test_costa_overlapping_variant_fails_with_replayable_word():
    f = CostaForm(1, ("a", "a"), ({"b"},), "ab")
    r = verify.check_costa(f, allow_overlap=True)
    assert r.verdict == "fail" and r.counterexample["word"] == "a"


def test_costa_falls_back_to_bounded_enumeration():
    r = verify.check_costa(CostaForm(1, ("ab", "b"), ({"a"},), "ab"), bound=6, cap=2)
    assert r.passed and r.evidence == "bounded"
    assert r.instances_checked == 2 ** 7 - 1


def test_compression_examples():
    mon = syntactic_monoid(compile_expr(ShuffleIdeal("ab", "ab")))[0]
    assert verify.check_compression(0, mon, "ab", 10, 4, 3).passed
    assert verify.check_compression(0, mon, "ab", 0, 4, 3).passed


def test_variety_claims():
    r = verify.check_variety_claims()
    assert r.passed, r.counterexample


def test_unknown_check_and_bad_spec():
    with pytest.raises(SuiteError):
        CheckSpec("no-such-check")
    with pytest.raises(SuiteError):
        CheckSpec("sweep", bound=0)
    with pytest.raises(SuiteError):
        CheckSpec("sweep", mode="guess")
    with pytest.raises(SuiteError):
        verify.load_suite("no-such-suite")


def test_load_suite_from_file(tmp_path):
    path = tmp_path / "suite.json"
    path.write_text(json.dumps([CheckSpec("tddo-identity").to_json()]))
    specs = verify.load_suite(str(path))
    assert [s.check_id for s in specs] == ["tddo-identity"]
    path.write_text("{")
    with pytest.raises(SuiteError):
        verify.load_suite(str(path))


def test_parallel_and_serial_reports_match():
    specs = verify.tddo_equality_grid()[:6] + [CheckSpec("tddo-identity"), CheckSpec("sweep", {"mutant": "swap"})]
    serial = verify.render_json(verify.run_suite(specs), timing=False)
    parallel = verify.render_json(verify.run_suite(specs, parallelism=3), timing=False)
    assert serial == parallel
    assert serial == verify.render_json(verify.run_suite(specs), timing=False)


def test_fail_reports_always_carry_counterexamples(default_reports):
    for r in verify.run_suite(verify.mutation_suite()) + default_reports:
        assert (r.verdict == "fail") <= (r.counterexample is not None)
