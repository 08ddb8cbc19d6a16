"""Command line front end: ``mpj classify|lang|program|verify|monoid``.

Exit codes: 0 on success (and all checks passing), 1 when a check or
``--check`` cross-verification fails, 2 on usage, parse or configuration errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import random
import sys
from dataclasses import dataclass

from . import algebra
from . import verify as V
from .config import DEFAULT_ENUMERATION_BOUND, DEFAULT_MONOID_CAP, CapExceeded, state_cap
from .programs import (CombinedProgram, GammaProgram, Program, ProgramError, SelectorFn, all_words_array,
                       compile_tddo, compress_equivalent, equivalent_length_bound, feedback_sweep,
                       program_from_json, random_program, selector_length_bound, selector_member,
                       selector_program, sweep_source_language, sweep_target_language, zk_language)
from .reglang import (CostaForm, ExprError, ParseError, compile_expr, costa_K, costa_lang, dfa_equal, is_k_pt,
                      parse_regex, pretty)
from .reglang import to_json as expr_to_json
from .reglang.dfa import Dfa
from .words import AlphabetError, format_word, parse_word

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    state_cap: int
    quotient_cap: int = DEFAULT_MONOID_CAP
    enumeration_bound: int = DEFAULT_ENUMERATION_BOUND
    seed: int = 0
    output_format: str = "text"
    parallelism: int = 1

    def __post_init__(self):
        for name in ("state_cap", "quotient_cap", "enumeration_bound"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name.replace('_', '-')} must be positive")
        if self.parallelism < 1:
            raise UsageError("parallelism must be >= 1")
        if self.output_format not in ("json", "text"):
            raise UsageError("format must be json or text")


def _emit(cfg: CliConfig, record, text=None, out=None):
    """Print ``record`` as JSON or as text; optionally also write JSON to ``out``."""
    if out:
        with open(out, "w") as fh:
            json.dump(record, fh, indent=2, sort_keys=True)
            fh.write("\n")
    if cfg.output_format == "json":
        print(json.dumps(record, indent=2, sort_keys=True))
    elif text is not None:
        print(text)
    else:
        for k, v in record.items():
            print(f"{k}: {v if not isinstance(v, (dict, list)) else json.dumps(v, sort_keys=True)}")


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _language(args, cfg):
    """(expression or None, minimal DFA) from a regex-lite argument or --dfa file."""
    if getattr(args, "dfa", None):
        return None, Dfa.from_json(_load_json(args.dfa))
    if not args.expr:
        raise UsageError("give a regex-lite expression or --dfa FILE")
    e = parse_regex(args.expr, args.alphabet)
    return e, compile_expr(e, cfg.state_cap)


def _word(text):
    return parse_word(text) if text not in ("", "ε", "-") else ()


# classify ---------------------------------------------------------------------------------

def classify(d: Dfa, ks=(), quotient_cap=None) -> dict:
    """Syntactic monoid, variety verdicts, stable structure and k-PT verdicts."""
    mon, phi, _ = algebra.syntactic_monoid(d)
    sg = algebra.image_semigroup(phi)[0]
    st = algebra.stable_pair(phi)
    rec = {
        "alphabet": [str(a) for a in d.alphabet],
        "dfa_states": d.n_states,
        "monoid_size": mon.size,
        "omega": mon.omega,
        "A": algebra.check_variety(mon, "A"),
        "DA": algebra.check_variety(mon, "DA"),
        "J": algebra.check_variety(mon, "J"),
        "semigroup_size": sg.size,
        "locally_J": algebra.is_locally_J(sg),
        "stable_k": st.k,
        "stable_monoid_size": st.stable_monoid.size,
        "quasi_A": algebra.check_variety(st.stable_monoid, "A"),
        "quasi_DA": algebra.check_variety(st.stable_monoid, "DA"),
        "quasi_J": algebra.check_variety(st.stable_monoid, "J"),
    }
    if ks:
        rec["k_pt"] = {str(k): is_k_pt(d, k, quotient_cap) for k in ks}
    return rec


def cmd_classify(args, cfg):
    _, d = _language(args, cfg)
    _emit(cfg, classify(d, args.k, cfg.quotient_cap), out=args.json)
    return EXIT_OK


# lang ---------------------------------------------------------------------------------------

def cmd_lang(args, cfg):
    if args.lang_cmd == "compile":
        e, d = _language(args, cfg)
        rec = d.to_json()
        _emit(cfg, rec, f"{d.n_states} states" + (f" for {pretty(e)}" if e is not None else ""), args.out)
        return EXIT_OK
    if args.lang_cmd == "member":
        e, d = _language(args, cfg)
        results = {format_word(_word(w)) or "ε": d.accepts(_word(w)) for w in args.words}
        _emit(cfg, results)
        return EXIT_OK
    if args.lang_cmd == "equal":
        d1 = compile_expr(parse_regex(args.left, args.alphabet), cfg.state_cap)
        d2 = compile_expr(parse_regex(args.right, args.alphabet), cfg.state_cap)
        if d1.alphabet != d2.alphabet:
            raise UsageError("the two expressions use different alphabets; pass --alphabet")
        ok, w = dfa_equal(d1, d2)
        rec = {"equal": ok, "counterexample": None if ok else format_word(w)}
        _emit(cfg, rec, "equal" if ok else f"differ on {format_word(w) or 'ε'}")
        return EXIT_OK if ok else EXIT_FAIL
    if args.lang_cmd == "costa":
        obj = _load_json(args.form)
        alphabet = obj.get("alphabet") or args.alphabet
        if not alphabet:
            raise UsageError("the form file has no alphabet; pass --alphabet")
        form = CostaForm.from_json(obj, alphabet)
        k = costa_K(form)
        rec = {"form": form.describe(), "K": pretty(k), "K_json": expr_to_json(k)}
        if args.check:
            ok, w = dfa_equal(compile_expr(costa_lang(form), cfg.state_cap), compile_expr(k, cfg.state_cap))
            rec["check"] = "pass" if ok else f"fail on {format_word(w) or 'ε'}"
            _emit(cfg, rec, f"{rec['form']}\nK = {rec['K']}\ncheck: {rec['check']}")
            return EXIT_OK if ok else EXIT_FAIL
        _emit(cfg, rec, f"{rec['form']}\nK = {rec['K']}")
        return EXIT_OK
    raise UsageError("unknown lang command")


# program -------------------------------------------------------------------------------------

def _check_words(alphabet, n, bound):
    if n > bound:
        return None
    return all_words_array(alphabet, n)


def _program_summary(p) -> dict:
    if isinstance(p, CombinedProgram):
        return {"kind": "combined", "n": p.n, "length": len(p), "parts": len(p.parts)}
    if isinstance(p, GammaProgram):
        return {"kind": "gamma", "n": p.n, "length": len(p)}
    return {"kind": "monoid", "n": p.n, "length": len(p), "monoid_size": p.monoid.size}


def cmd_program(args, cfg):
    cmd = args.program_cmd
    if cmd == "eval":
        p = program_from_json(_load_json(args.file))
        rec = {}
        for text in args.words:
            w = _word(text)
            key = format_word(w) or "ε"
            if isinstance(p, GammaProgram):
                rec[key] = format_word(p.gamma_eval(w))
            elif isinstance(p, CombinedProgram):
                rec[key] = {"accepted": p.recognizes(w)}
            else:
                x = p.eval(w)
                rec[key] = {"element": x, "identity": x == p.monoid.identity, "accepted": x in p.accept}
        _emit(cfg, rec)
        return EXIT_OK

    if cmd == "sweep":
        g = feedback_sweep(args.n)
        rec = {"n": args.n, "positions": [i.pos for i in g.instructions], "length": len(g)}
        status = EXIT_OK
        if args.check:
            r = _single_length_reduction(g, sweep_source_language(), sweep_target_language(), cfg)
            rec["check"] = r
            status = EXIT_OK if r in ("pass", "skipped") else EXIT_FAIL
        _emit(cfg, rec)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(g.to_json(), fh, indent=2)
        return status

    if cmd == "selector":
        if args.sigma:
            sigma = SelectorFn.from_json(_load_json(args.sigma))
            if (sigma.k, sigma.n) != (args.k, args.n):
                raise UsageError("selector file does not match --k/--n")
        else:
            sigma = SelectorFn.random(args.k, args.n, random.Random(cfg.seed))
        g = selector_program(args.k, sigma, args.n)
        rec = {"k": args.k, "n": args.n, "length": len(g), "bound": selector_length_bound(args.k, args.n),
               "sigma": sigma.to_json()}
        status = EXIT_OK
        if args.check:
            W = _check_words(g.alphabet, g.n, cfg.enumeration_bound)
            if W is None:
                rec["check"] = "skipped"
            else:
                Z = compile_expr(zk_language(args.k), cfg.state_cap)
                right = Z.accepts_batch(g.eval_batch(W))
                words = [tuple(g.alphabet.symbols[i] for i in row) for row in W]
                ok = all(selector_member(args.k, sigma, w) == bool(r) for w, r in zip(words, right))
                rec["check"] = "pass" if ok else "fail"
                status = EXIT_OK if ok else EXIT_FAIL
        _emit(cfg, rec)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(g.to_json(), fh, indent=2)
        return status

    if cmd == "compile-tddo":
        e = parse_regex(args.expr, args.alphabet)
        p = compile_tddo(e, args.n)
        rec = dict(_program_summary(p), expression=pretty(e),
                   components_in_J=all(algebra.check_variety(m, "J") for m in p.components))
        status = EXIT_OK
        if args.check:
            W = _check_words(p.alphabet, p.n, cfg.enumeration_bound)
            if W is None:
                rec["check"] = "skipped"
            else:
                ok = bool((p.recognizes_batch(W) == compile_expr(e, cfg.state_cap).accepts_batch(W)).all())
                rec["check"] = "pass" if ok else "fail"
                status = EXIT_OK if ok else EXIT_FAIL
        _emit(cfg, rec)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(p.to_json(), fh)
        return status

    if cmd == "compress":
        p = program_from_json(_load_json(args.file))
        if not isinstance(p, Program):
            raise UsageError("compress needs a program over a monoid")
        q, keep = compress_equivalent(p, args.k)
        bound = equivalent_length_bound(args.k, p.monoid.size, len(p.alphabet), p.n)
        rec = {"k": args.k, "original_length": len(p), "compressed_length": len(q), "bound": bound,
               "within_bound": len(q) <= bound, "kept": sorted(keep)}
        status = EXIT_OK
        if args.check:
            W = _check_words(p.alphabet, p.n, cfg.enumeration_bound)
            if W is None:
                rec["check"] = "skipped"
            else:
                T = V.trace_matrix(p, W)
                ok = all(V._first_difference(T, keep, t) is None
                         for j in range(1, args.k + 1)
                         for t in itertools.product(range(p.monoid.size), repeat=j))
                rec["check"] = "pass" if ok else "fail"
                status = EXIT_OK if ok else EXIT_FAIL
        _emit(cfg, rec)
        if args.out:
            with open(args.out, "w") as fh:
                json.dump(q.to_json(), fh, indent=2)
        return status

    if cmd == "random":
        e = parse_regex(args.language, args.alphabet)
        mon, _, _ = algebra.syntactic_monoid(compile_expr(e, cfg.state_cap))
        p = random_program(random.Random(cfg.seed), e.alphabet, args.n, mon, max_len=args.max_len)
        text = json.dumps(p.to_json(), indent=2)
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text + "\n")
            _emit(cfg, _program_summary(p))
        else:
            print(text)
        return EXIT_OK
    raise UsageError("unknown program command")


def _single_length_reduction(g, source, target, cfg) -> str:
    W = _check_words(g.alphabet, g.n, cfg.enumeration_bound)
    if W is None:
        return "skipped"
    src, tgt = compile_expr(source, cfg.state_cap), compile_expr(target, cfg.state_cap)
    return "pass" if bool((src.accepts_batch(W) == tgt.accepts_batch(g.eval_batch(W))).all()) else "fail"


# verify / monoid ---------------------------------------------------------------------------

def cmd_verify(args, cfg):
    try:
        specs = V.load_suite(args.suite)
    except V.SuiteError as exc:
        raise UsageError(str(exc)) from None
    reports = V.run_suite(specs, cfg.parallelism)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(V.render_json(reports, timing=not args.no_timing) + "\n")
    if cfg.output_format == "json":
        print(V.render_json(reports, timing=not args.no_timing))
    else:
        print(V.render_text(reports))
    return EXIT_OK if V.suite_passed(reports) else EXIT_FAIL


def cmd_monoid(args, cfg):
    if args.monoid_cmd == "show":
        _, d = _language(args, cfg)
        mon, phi, acc = algebra.syntactic_monoid(d)
        rec = {"monoid": mon.to_json(), "accept": sorted(acc), "morphism": phi.to_json()}
        _emit(cfg, rec, f"syntactic monoid with {mon.size} elements", args.out)
        return EXIT_OK
    if args.monoid_cmd == "check":
        obj = _load_json(args.file)
        m = algebra.from_json(obj.get("monoid", obj), cfg.quotient_cap)
        rec = {"size": m.size, "omega": m.omega, "monoid": m.is_monoid,
               **{v: algebra.check_variety(m, v) for v in ("A", "DA", "J")},
               "locally_J": algebra.is_locally_J(m)}
        _emit(cfg, rec)
        return EXIT_OK
    if args.monoid_cmd == "quotient":
        mon, _ = algebra.quotient_by_sim_k(args.alphabet, args.k, cfg.quotient_cap)
        rec = {"size": mon.size, "J": algebra.check_variety(mon, "J"), "monoid": mon.to_json()}
        _emit(cfg, rec, f"size: {rec['size']}\nJ: {rec['J']}", args.out)
        return EXIT_OK
    raise UsageError("unknown monoid command")


# argument parsing ---------------------------------------------------------------------------

def _lang_source(p):
    p.add_argument("expr", nargs="?", help="regex-lite expression")
    p.add_argument("--dfa", help="DFA JSON file instead of an expression")
    p.add_argument("--alphabet", help="alphabet letters, e.g. abc (default: letters of the expression)")


def _global_options(p, suppress):
    """Options accepted both before and after the subcommand."""
    def d(value):
        return argparse.SUPPRESS if suppress else value
    p.add_argument("--state-cap", type=int, default=d(None), help="DFA state cap (env MPJ_STATE_CAP)")
    p.add_argument("--quotient-cap", type=int, default=d(DEFAULT_MONOID_CAP))
    p.add_argument("--enumeration-bound", type=int, default=d(DEFAULT_ENUMERATION_BOUND))
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--format", choices=("text", "json"), default=d("text"))
    p.add_argument("--parallel", type=int, default=d(1), help="worker processes for verify")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="mpj", description="Programs over monoids in J: classification, "
                                 "program constructions and verification.")
    _global_options(ap, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_options(common, suppress=True)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="syntactic monoid and variety verdicts")
    _lang_source(p)
    p.add_argument("--k", type=int, nargs="*", default=[], help="also test k-piecewise testability")
    p.add_argument("--json", help="write the record to this file")

    p = sub.add_parser("lang", parents=[common], help="compile, compare and query languages")
    lsub = p.add_subparsers(dest="lang_cmd", required=True)
    q = lsub.add_parser("compile", parents=[common])
    _lang_source(q)
    q.add_argument("--out")
    q = lsub.add_parser("member", parents=[common])
    _lang_source(q)
    q.add_argument("--word", dest="words", action="append", default=[], help="word to test (repeatable)")
    q = lsub.add_parser("equal", parents=[common])
    q.add_argument("left")
    q.add_argument("right")
    q.add_argument("--alphabet")
    q = lsub.add_parser("costa", parents=[common], help="Boolean combination of blocks for a Costa form file")
    q.add_argument("form")
    q.add_argument("--alphabet")
    q.add_argument("--check", action="store_true")

    p = sub.add_parser("program", parents=[common], help="program constructions")
    psub = p.add_subparsers(dest="program_cmd", required=True)
    q = psub.add_parser("eval", parents=[common])
    q.add_argument("file")
    q.add_argument("words", nargs="*", default=[""])
    q = psub.add_parser("sweep", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--check", action="store_true")
    q.add_argument("--out")
    q = psub.add_parser("selector", parents=[common])
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--sigma", help="selector JSON file (default: random from --seed)")
    q.add_argument("--check", action="store_true")
    q.add_argument("--out")
    q = psub.add_parser("compile-tddo", parents=[common])
    q.add_argument("expr")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--alphabet")
    q.add_argument("--check", action="store_true")
    q.add_argument("--out")
    q = psub.add_parser("compress", parents=[common])
    q.add_argument("file")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--check", action="store_true")
    q.add_argument("--out")
    q = psub.add_parser("random", parents=[common], help="random program over a syntactic monoid")
    q.add_argument("--language", default=":shuffle(ab)")
    q.add_argument("--alphabet", default="ab")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--max-len", type=int, default=40)
    q.add_argument("--out")

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", default="default", help="default, mutation, or a JSON file of check specs")
    p.add_argument("--json", help="write reports to this file")
    p.add_argument("--no-timing", action="store_true", help="omit elapsed times (byte-stable output)")

    p = sub.add_parser("monoid", parents=[common], help="monoid tables")
    msub = p.add_subparsers(dest="monoid_cmd", required=True)
    q = msub.add_parser("show", parents=[common])
    _lang_source(q)
    q.add_argument("--out")
    q = msub.add_parser("check", parents=[common])
    q.add_argument("file")
    q = msub.add_parser("quotient", parents=[common])
    q.add_argument("--alphabet", required=True)
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--out")
    return ap


COMMANDS = {"classify": cmd_classify, "lang": cmd_lang, "program": cmd_program, "verify": cmd_verify,
            "monoid": cmd_monoid}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    saved = os.environ.get("MPJ_STATE_CAP")
    try:
        cfg = CliConfig(args.state_cap if args.state_cap is not None else state_cap(), args.quotient_cap,
                        args.enumeration_bound, args.seed, args.format, args.parallel)
        # library defaults (and verify workers) read the cap from the environment
        os.environ["MPJ_STATE_CAP"] = str(cfg.state_cap)
        return COMMANDS[args.command](args, cfg)
    except (UsageError, ParseError, ExprError, AlphabetError, ProgramError, algebra.AlgebraError, CapExceeded,
            ValueError, KeyError) as exc:
        print(f"mpj: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    finally:
        if saved is None:
            os.environ.pop("MPJ_STATE_CAP", None)
        else:
            os.environ["MPJ_STATE_CAP"] = saved


if __name__ == "__main__":
    sys.exit(main())
