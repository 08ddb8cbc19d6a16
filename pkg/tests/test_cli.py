import json

import pytest

from mpj import cli
from mpj.algebra import u1
from mpj.programs import Program, program_from_json
from mpj.reglang import CostaForm


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv, "--format", "json")
    assert code == cli.EXIT_OK, out
    return json.loads(out)


def test_classify_sweep_language(capsys):
    rec = run_json(capsys, "classify", "(a+b)*ac+")
    assert rec["DA"] and not rec["J"] and not rec["quasi_J"]
    assert rec["monoid_size"] == 6


def test_classify_shuffle_ideal(capsys):
    rec = run_json(capsys, "classify", "ab-shuffle")
    assert rec["J"] and rec["locally_J"]


def test_classify_sigma_star(capsys):
    rec = run_json(capsys, "classify", ":all", "--alphabet", "ab")
    assert rec["monoid_size"] == 1 and rec["J"]


def test_classify_k_pt(capsys):
    rec = run_json(capsys, "classify", ":shuffle(aba)", "--alphabet", "ab", "--k", "2", "3")
    assert rec["k_pt"] == {"2": False, "3": True}


def test_classify_from_dfa_file(capsys, tmp_path):
    path = tmp_path / "d.json"
    assert cli.main(["lang", "compile", "ab-shuffle", "--out", str(path)]) == cli.EXIT_OK
    capsys.readouterr()
    rec = run_json(capsys, "classify", "--dfa", str(path))
    assert rec["J"] and rec["dfa_states"] == 3


def test_program_sweep_positions(capsys):
    rec = run_json(capsys, "program", "sweep", "--n", "4")
    assert rec["positions"] == [2, 1, 3, 2, 4, 3]


def test_check_flag_does_not_change_output(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main(["program", "sweep", "--n", "5", "--out", str(a)]) == 0
    assert cli.main(["program", "sweep", "--n", "5", "--out", str(b), "--check"]) == 0
    assert a.read_text() == b.read_text()
    out = capsys.readouterr().out
    assert "check: pass" in out


def test_compress_random_program(capsys, tmp_path):
    path = tmp_path / "r.json"
    assert cli.main(["program", "random", "--n", "3", "--seed", "4", "--out", str(path)]) == 0
    capsys.readouterr()
    original = program_from_json(json.loads(path.read_text()))
    rec = run_json(capsys, "program", "compress", str(path), "--k", "2", "--check")
    assert rec["compressed_length"] < len(original)
    assert rec["compressed_length"] <= rec["bound"]
    assert rec["check"] == "pass"


def test_eval_empty_program_is_identity(capsys, tmp_path):
    path = tmp_path / "e.json"
    path.write_text(json.dumps(Program("ab", 2, u1(), [], {0}).to_json()))
    rec = run_json(capsys, "program", "eval", str(path), "ab")
    assert rec["ab"] == {"accepted": True, "element": 0, "identity": True}


def test_program_json_round_trips_through_files(capsys, tmp_path):
    path = tmp_path / "p.json"
    assert cli.main(["program", "compile-tddo", "<ab>_2", "--n", "4", "--alphabet", "ab", "--out", str(path)]) == 0
    obj = json.loads(path.read_text())
    assert program_from_json(obj).to_json() == obj
    sel = tmp_path / "s.json"
    assert cli.main(["program", "selector", "--k", "1", "--n", "2", "--out", str(sel), "--check"]) == 0
    obj = json.loads(sel.read_text())
    assert program_from_json(obj).to_json() == obj


def test_lang_commands(capsys, tmp_path):
    code, out = run(capsys, "lang", "member", "<ab,c>_3", "--word", "abc", "--word", "bac")
    assert code == 0 and "abc: True" in out and "bac: False" in out
    code, out = run(capsys, "lang", "equal", ":prefix(a)", ":suffix(a)", "--alphabet", "ab")
    assert code == cli.EXIT_FAIL and "differ" in out
    code, _ = run(capsys, "lang", "equal", ":prefix(a)", ":suffix(a)", "--alphabet", "a")
    assert code == cli.EXIT_OK
    form = tmp_path / "f.json"
    form.write_text(json.dumps(CostaForm(1, ("a", "a"), ({"b"},), "ab").to_json()))
    code, out = run(capsys, "lang", "costa", str(form), "--alphabet", "ab", "--check")
    assert code == 0 and "pass" in out


def test_monoid_commands(capsys, tmp_path):
    path = tmp_path / "m.json"
    assert cli.main(["monoid", "quotient", "--alphabet", "ab", "--k", "2", "--out", str(path)]) == 0
    capsys.readouterr()
    rec = run_json(capsys, "monoid", "check", str(path))
    assert rec["J"]


def test_verify_exit_codes(capsys, tmp_path):
    assert run(capsys, "verify", "--suite", "default")[0] == cli.EXIT_OK
    assert run(capsys, "verify", "--suite", "mutation")[0] == cli.EXIT_FAIL
    assert run(capsys, "verify", "--suite", "nonsense")[0] == cli.EXIT_CONFIG
    empty = tmp_path / "empty.json"
    empty.write_text("[]")
    assert run(capsys, "verify", "--suite", str(empty))[0] == cli.EXIT_OK


def test_verify_json_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    cli.main(["verify", "--suite", "mutation", "--json", str(a), "--no-timing"])
    cli.main(["verify", "--suite", "mutation", "--json", str(b), "--no-timing", "--parallel", "2"])
    assert a.read_bytes() == b.read_bytes()
    assert all(r["verdict"] == "fail" for r in json.loads(a.read_text()))


@pytest.mark.parametrize("argv", [["classify", "(ab"], ["program", "eval", "/no/such/file"],
                                  ["program", "sweep", "--n", "-1"], ["classify", "ab", "--state-cap", "0"],
                                  ["program", "sweep"]])
def test_configuration_errors_exit_2(capsys, argv):
    assert cli.main(argv) == cli.EXIT_CONFIG


def test_state_cap_env_is_restored(capsys, monkeypatch):
    monkeypatch.delenv("MPJ_STATE_CAP", raising=False)
    cli.main(["classify", "ab-shuffle", "--state-cap", "50"])
    import os
    assert "MPJ_STATE_CAP" not in os.environ


def test_costa_form_without_alphabet(capsys, tmp_path):
    form = tmp_path / "f.json"
    form.write_text(json.dumps(CostaForm(0, ("a",), (), "ab").to_json()))
    assert cli.main(["lang", "costa", str(form)]) == cli.EXIT_CONFIG
