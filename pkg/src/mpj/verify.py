"""Desk-scale verification harness.

Every check takes JSON-friendly parameters, runs an exact DFA comparison or an
exhaustive enumeration, and returns a :class:`VerificationReport`.  A failing
report carries a counterexample that :func:`replay` can re-check on its own.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import algebra
from .config import DEFAULT_ENUMERATION_BOUND, CapExceeded
from .programs import (DecoratedSweepPlan, GammaProgram, Instruction, Program, SelectorFn, all_words_array,
                       compile_tddo, compress_equivalent, compress_subword_indices, decorated_sweep,
                       equivalent_length_bound, feedback_sweep, random_program, selector_length_bound,
                       selector_member, selector_program, subword_index_bound, summed_length_bound,
                       sweep_source_language, sweep_target_language, zk_language)
from .programs.selector import MARK
from .reglang import (CostaForm, ShuffleIdeal, ThresholdBlock, alpha_decomposition, compile_expr, costa_K,
                      costa_lang, dfa_equal, is_k_pt, parse_regex, pretty)
from .reglang.dfa import Dfa
from .words import Alphabet, as_word, enumerate_words, format_word, has_distinct_letters, parse_word

EXACT = "exact-DFA"
ENUMERATION = "exhaustive-enumeration"
MODES = (EXACT, ENUMERATION)


class SuiteError(ValueError):
    """Unknown check, unknown suite or malformed suite file."""


@dataclass
class CheckSpec:
    check_id: str
    parameters: dict = field(default_factory=dict)
    bound: int | None = None
    mode: str | None = None

    def __post_init__(self):
        if self.check_id not in CHECKS:
            raise SuiteError(f"unknown check {self.check_id!r}; known: {', '.join(sorted(CHECKS))}")
        entry = CHECKS[self.check_id]
        if self.bound is None:
            self.bound = entry.bound
        if self.mode is None:
            self.mode = entry.mode
        if not isinstance(self.bound, int) or self.bound < 1:
            raise SuiteError(f"bound must be a positive integer, got {self.bound!r}")
        if self.mode not in MODES:
            raise SuiteError(f"mode must be one of {MODES}")
        self.parameters = dict(self.parameters)

    def to_json(self) -> dict:
        return {"check_id": self.check_id, "parameters": self.parameters, "bound": self.bound, "mode": self.mode}

    @classmethod
    def from_json(cls, obj) -> "CheckSpec":
        if not isinstance(obj, dict) or "check_id" not in obj:
            raise SuiteError("each suite entry must be an object with a check_id")
        return cls(obj["check_id"], obj.get("parameters", {}), obj.get("bound"), obj.get("mode"))


@dataclass
class VerificationReport:
    check_id: str
    parameters: dict
    verdict: str  # pass | fail | skipped
    counterexample: dict | None = None
    instances_checked: int = 0
    elapsed: float = 0.0
    evidence: str = "exact"  # exact | exhaustive | bounded
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self, timing: bool = True) -> dict:
        obj = {"check_id": self.check_id, "parameters": self.parameters, "verdict": self.verdict,
               "counterexample": self.counterexample, "instances_checked": self.instances_checked,
               "evidence": self.evidence, "note": self.note}
        if timing:
            obj["elapsed"] = round(self.elapsed, 4)
        return obj

    @classmethod
    def from_json(cls, obj) -> "VerificationReport":
        return cls(obj["check_id"], obj["parameters"], obj["verdict"], obj.get("counterexample"),
                   obj.get("instances_checked", 0), obj.get("elapsed", 0.0), obj.get("evidence", "exact"),
                   obj.get("note", ""))

    def line(self) -> str:
        head = f"{self.verdict.upper():7} {self.check_id} {json.dumps(self.parameters, sort_keys=True)}"
        tail = f" ({self.instances_checked} instances, {self.evidence}"
        tail += f", {self.elapsed:.2f}s)" if self.elapsed else ")"
        out = head + tail
        if self.note:
            out += f"\n        note: {self.note}"
        if self.counterexample is not None:
            out += f"\n        counterexample: {json.dumps(self.counterexample, sort_keys=True)}"
        return out


@dataclass(frozen=True)
class _Entry:
    run: object
    replay: object
    mode: str
    bound: int


CHECKS: dict[str, _Entry] = {}


def _register(check_id, mode, bound, replay=None):
    def deco(fn):
        CHECKS[check_id] = _Entry(fn, replay, mode, bound)
        return fn
    return deco


# generic reduction check -------------------------------------------------------------------

def _as_dfa(x):
    return x if isinstance(x, Dfa) else compile_expr(x)


def _reduction_mismatch(g: GammaProgram, src: Dfa, tgt: Dfa):
    """First word (length-lex) where source membership and target membership of
    the image disagree, or None.  Also returns the number of words tried."""
    if tgt.alphabet != g.out_alphabet:
        raise SuiteError("target language alphabet differs from the reduction's output alphabet")
    W = all_words_array(g.alphabet, g.n)
    left = src.accepts_batch(W)
    right = tgt.accepts_batch(g.eval_batch(W))
    bad = np.flatnonzero(left != right)
    if bad.size == 0:
        return None, W.shape[0]
    w = tuple(g.alphabet.symbols[i] for i in W[bad[0]])
    return w, W.shape[0]


def _reduction_cex(g, src, tgt, w):
    image = g.gamma_eval(w)
    return {"n": g.n, "word": format_word(w), "image": format_word(image), "in_source": bool(src.accepts(w)),
            "in_target": bool(tgt.accepts(image))}


def check_reduction(family, source, target, n_max: int, check_id: str = "reduction", parameters=None,
                    length_bound=None) -> VerificationReport:
    """Exhaustively test ``w in source <=> family(n)(w) in target`` for n <= n_max.

    ``length_bound``, when given, maps n to the largest allowed program length.
    """
    t0 = time.perf_counter()
    src, tgt = _as_dfa(source), _as_dfa(target)
    count = 0
    for n in range(n_max + 1):
        g = family(n)
        if length_bound is not None and len(g) > length_bound(n):
            return VerificationReport(check_id, parameters or {}, "fail",
                                      {"n": n, "length": len(g), "bound": length_bound(n)}, count,
                                      time.perf_counter() - t0, "exhaustive", "program longer than its bound")
        w, tried = _reduction_mismatch(g, src, tgt)
        count += tried
        if w is not None:
            return VerificationReport(check_id, parameters or {}, "fail", _reduction_cex(g, src, tgt, w), count,
                                      time.perf_counter() - t0, "exhaustive")
    return VerificationReport(check_id, parameters or {}, "pass", None, count, time.perf_counter() - t0,
                              "exhaustive")


def _replay_reduction(g: GammaProgram, source, target, cex) -> bool:
    w = parse_word(cex["word"]) if cex["word"] else ()
    return _as_dfa(source).accepts(w) != _as_dfa(target).accepts(g.gamma_eval(w))


# feedback sweep -------------------------------------------------------------------------------

def swapped_sweep(n: int) -> GammaProgram:
    """Mutant: the feedback sweep with its first two instructions exchanged."""
    g = feedback_sweep(n)
    ins = list(g.instructions)
    if len(ins) >= 2:
        ins[0], ins[1] = ins[1], ins[0]
    return g.with_instructions(ins)


def _sweep_family(params):
    return swapped_sweep if params.get("mutant") == "swap" else feedback_sweep


def _run_sweep(params, bound):
    return check_reduction(_sweep_family(params), sweep_source_language(), sweep_target_language(), bound,
                           "sweep", params, length_bound=lambda n: max(0, 2 * (n - 1)))


def _replay_sweep(params, cex):
    if "word" not in cex:
        return len(_sweep_family(params)(cex["n"])) > cex["bound"]
    g = _sweep_family(params)(cex["n"])
    return _replay_reduction(g, sweep_source_language(), sweep_target_language(), cex)


_register("sweep", ENUMERATION, 10, _replay_sweep)(_run_sweep)


# decorated sweep / building block -------------------------------------------------------------

def drop_level(g: GammaProgram, level: int) -> GammaProgram:
    """Mutant: remove every instruction emitting letters decorated with ``level``."""
    return g.with_instructions([i for i in g.instructions if i.out[0][1] != level])


def _building_family(plan, mutant):
    def family(n):
        g, _ = decorated_sweep(plan, n)
        return drop_level(g, 1) if mutant == "drop-level" else g
    return family


def _plans(params):
    A = params.get("alphabet", "abc")
    for u in params.get("us", ["ab", "abc"]):
        for alpha in params.get("alphas", [1, 2]):
            for x1 in params.get("contexts", ["", "a", "ba"]):
                for x2 in params.get("contexts", ["", "a", "ba"]):
                    yield DecoratedSweepPlan(u, x1, x2, alpha, A)


def _run_building_block(params, bound):
    t0 = time.perf_counter()
    count = 0
    mutant = params.get("mutant")
    for plan in _plans(params):
        m = len(plan.u)
        inst = {"u": format_word(plan.u), "alpha": plan.alpha, "x1": format_word(plan.x1),
                "x2": format_word(plan.x2)}
        r = check_reduction(_building_family(plan, mutant), plan.source_language(), plan.target_language(),
                            bound, "building-block", params, length_bound=lambda n, m=m: (2 * m - 1) * n)
        count += r.instances_checked
        if not r.passed:
            r.counterexample = dict(r.counterexample, instance=inst)
            r.instances_checked = count
            r.elapsed = time.perf_counter() - t0
            return r
    return VerificationReport("building-block", params, "pass", None, count, time.perf_counter() - t0,
                              "exhaustive")


def _replay_building_block(params, cex):
    inst = cex["instance"]
    plan = DecoratedSweepPlan(inst["u"], inst["x1"], inst["x2"], inst["alpha"], params.get("alphabet", "abc"))
    g = _building_family(plan, params.get("mutant"))(cex["n"])
    if "word" not in cex:
        return len(g) > cex["bound"]
    return _replay_reduction(g, plan.source_language(), plan.target_language(), cex)


_register("building-block", ENUMERATION, 8, _replay_building_block)(_run_building_block)


# selector ------------------------------------------------------------------------------------

def shifted_selector(k: int, sigma: SelectorFn, n: int) -> GammaProgram:
    """Mutant: the innermost block reads position j + 1 (cyclically) instead of j."""
    g = selector_program(k, sigma, n)
    base = k * n
    ins = []
    for i in g.instructions:
        if MARK in i.out:
            i = Instruction(base + (i.pos - base) % n + 1, i.out)
        ins.append(i)
    return g.with_instructions(ins)


def _selector_builder(params):
    return shifted_selector if params.get("mutant") == "off-by-one" else selector_program


def _selector_mismatch(build, k, sigma, n, Z):
    g = build(k, sigma, n)
    if len(g) > selector_length_bound(k, n):
        return {"length": len(g), "bound": selector_length_bound(k, n)}, 0
    W = all_words_array(g.alphabet, g.n)
    right = Z.accepts_batch(g.eval_batch(W))
    words = [tuple(g.alphabet.symbols[i] for i in row) for row in W]
    left = np.array([selector_member(k, sigma, w) for w in words], dtype=bool)
    bad = np.flatnonzero(left != right)
    if bad.size == 0:
        return None, len(words)
    w = words[bad[0]]
    return {"word": format_word(w), "image": format_word(g.gamma_eval(w)), "in_source": bool(left[bad[0]]),
            "in_target": bool(right[bad[0]])}, len(words)


def _run_selector(params, bound):
    t0 = time.perf_counter()
    rng = random.Random(params.get("seed", 0))
    build = _selector_builder(params)
    count = 0
    for k in params.get("ks", [0, 1, 2]):
        Z = compile_expr(zk_language(k))
        for n in range(1, bound + 1):
            for _ in range(params.get("sigmas", 20)):
                sigma = SelectorFn.random(k, n, rng)
                cex, tried = _selector_mismatch(build, k, sigma, n, Z)
                count += tried
                if cex is not None:
                    cex.update(k=k, n=n, sigma=sigma.to_json())
                    return VerificationReport("selector", params, "fail", cex, count, time.perf_counter() - t0,
                                              "exhaustive")
    return VerificationReport("selector", params, "pass", None, count, time.perf_counter() - t0, "exhaustive")


def _replay_selector(params, cex):
    k, n = cex["k"], cex["n"]
    sigma = SelectorFn.from_json(cex["sigma"])
    g = _selector_builder(params)(k, sigma, n)
    if "word" not in cex:
        return len(g) > selector_length_bound(k, n)
    w = parse_word(cex["word"])
    return selector_member(k, sigma, w) != compile_expr(zk_language(k)).accepts(g.gamma_eval(w))


_register("selector", ENUMERATION, 4, _replay_selector)(_run_selector)


# exact language identities ---------------------------------------------------------------------

def _exact_report(check_id, params, left, right, names, t0, instances=1):
    ok, w = dfa_equal(compile_expr(left), compile_expr(right))
    if ok:
        return VerificationReport(check_id, params, "pass", None, instances, time.perf_counter() - t0, "exact")
    cex = {"word": format_word(w), names[0]: left.member(w), names[1]: right.member(w)}
    return VerificationReport(check_id, params, "fail", cex, instances, time.perf_counter() - t0, "exact")


IDENTITY_EXPRESSION = "~<c,a>_2 & ~<c,b>_2 & <ac>_2"
IDENTITY_REGEX = "(a+b)*ac+"


def _run_identity(params, bound):
    t0 = time.perf_counter()
    left = parse_regex(params.get("expression", IDENTITY_EXPRESSION), "abc")
    right = parse_regex(params.get("regex", IDENTITY_REGEX), "abc")
    return _exact_report("tddo-identity", params, left, right, ("in_expression", "in_regex"), t0)


def _replay_identity(params, cex):
    w = parse_word(cex["word"]) if cex["word"] else ()
    left = parse_regex(params.get("expression", IDENTITY_EXPRESSION), "abc")
    right = parse_regex(params.get("regex", IDENTITY_REGEX), "abc")
    return left.member(w) != right.member(w)


_register("tddo-identity", EXACT, DEFAULT_ENUMERATION_BOUND, _replay_identity)(_run_identity)


def check_tddo_equality(alphabet, l: int, us, parameters=None) -> VerificationReport:
    """The block <us>_l against its union over alpha of R ∩ S."""
    t0 = time.perf_counter()
    params = parameters if parameters is not None else {"alphabet": "".join(alphabet), "l": l, "us": list(us)}
    us = [as_word(u) for u in us]
    if not all(has_distinct_letters(u) for u in us):
        return VerificationReport("tddo-equality", params, "skipped", None, 0, time.perf_counter() - t0, "exact",
                                  "a factor repeats a letter; the decomposition needs distinct letters")
    return _exact_report("tddo-equality", params, ThresholdBlock(us, l, alphabet),
                         alpha_decomposition(us, l, alphabet), ("in_block", "in_union"), t0)


def _run_tddo_equality(params, bound):
    return check_tddo_equality(params["alphabet"], params["l"], params["us"], params)


def _replay_tddo_equality(params, cex):
    w = parse_word(cex["word"]) if cex["word"] else ()
    A = params["alphabet"]
    us = [as_word(u) for u in params["us"]]
    return ThresholdBlock(us, params["l"], A).member(w) != alpha_decomposition(us, params["l"], A).member(w)


_register("tddo-equality", EXACT, DEFAULT_ENUMERATION_BOUND, _replay_tddo_equality)(_run_tddo_equality)


# Costa forms ---------------------------------------------------------------------------------

def _costa_form(params) -> CostaForm:
    return CostaForm.from_json(params["form"], params["alphabet"])


def check_costa(form: CostaForm, bound: int = DEFAULT_ENUMERATION_BOUND, cap=None, allow_overlap=False,
                parameters=None) -> VerificationReport:
    """costa_lang(form) = costa_K(form), plus DA and locally-J for the language."""
    t0 = time.perf_counter()
    params = parameters if parameters is not None else {"form": form.to_json(),
                                                        "alphabet": [a for a in form.alphabet]}
    left, right = costa_lang(form), costa_K(form, allow_overlap)
    try:
        dl, dr = compile_expr(left, cap), compile_expr(right, cap)
    except CapExceeded as exc:
        count = 0
        for w in enumerate_words(form.alphabet, 0, bound):
            count += 1
            if left.member(w) != right.member(w):
                cex = {"word": format_word(w), "in_form": left.member(w), "in_K": right.member(w)}
                return VerificationReport("costa", params, "fail", cex, count, time.perf_counter() - t0, "bounded",
                                          f"{exc}; compared words up to length {bound}")
        return VerificationReport("costa", params, "pass", None, count, time.perf_counter() - t0, "bounded",
                                  f"{exc}; compared words up to length {bound} only")
    ok, w = dfa_equal(dl, dr)
    if not ok:
        cex = {"word": format_word(w), "in_form": left.member(w), "in_K": right.member(w)}
        return VerificationReport("costa", params, "fail", cex, 1, time.perf_counter() - t0, "exact")
    mon, _, _ = algebra.syntactic_monoid(dl)
    if not algebra.check_variety(mon, "DA"):
        return VerificationReport("costa", params, "fail", {"claim": "syntactic monoid in DA"}, 1,
                                  time.perf_counter() - t0, "exact")
    sg, _ = algebra.syntactic_semigroup(dl)
    if not algebra.is_locally_J(sg):
        return VerificationReport("costa", params, "fail", {"claim": "syntactic semigroup locally J"}, 1,
                                  time.perf_counter() - t0, "exact")
    return VerificationReport("costa", params, "pass", None, 1, time.perf_counter() - t0, "exact")


def _run_costa(params, bound):
    return check_costa(_costa_form(params), bound, params.get("state_cap"), params.get("allow_overlap", False),
                       params)


def _replay_costa(params, cex):
    form = _costa_form(params)
    if "word" in cex:
        w = parse_word(cex["word"]) if cex["word"] else ()
        return costa_lang(form).member(w) != costa_K(form, params.get("allow_overlap", False)).member(w)
    d = compile_expr(costa_lang(form))
    if cex["claim"] == "syntactic monoid in DA":
        return not algebra.check_variety(algebra.syntactic_monoid(d)[0], "DA")
    return not algebra.is_locally_J(algebra.syntactic_semigroup(d)[0])


_register("costa", EXACT, DEFAULT_ENUMERATION_BOUND, _replay_costa)(_run_costa)


# compression -----------------------------------------------------------------------------------

def has_subword(T, t):
    """Row-wise: is ``t`` a subword of each row of the trace matrix ``T``?"""
    T = np.asarray(T)
    target = np.asarray(list(t) + [-1], dtype=np.int64)
    state = np.zeros(T.shape[0], dtype=np.int64)
    for j in range(T.shape[1]):
        state += T[:, j] == target[state]
    return state >= len(t)


def trace_matrix(p: Program, W):
    """Monoid elements emitted by each instruction (columns) on each word (rows)."""
    W = np.asarray(W, dtype=np.int64)
    if not p.instructions:
        return np.zeros((W.shape[0], 0), dtype=np.int64)
    return np.stack([np.asarray(i.out, dtype=np.int64)[W[:, i.pos - 1]] for i in p.instructions], axis=1)


def _first_difference(T, keep, t):
    sub = T[:, sorted(keep)] if keep else T[:, :0]
    bad = np.flatnonzero(has_subword(T, t) != has_subword(sub, t))
    return None if bad.size == 0 else int(bad[0])


def check_compression(seed: int, monoid, alphabet, trials: int, n_max: int, k_max: int,
                      parameters=None) -> VerificationReport:
    """Random programs: per-t superset guarantee, ~k equivalence of the
    compressed program, and both length bounds."""
    t0 = time.perf_counter()
    params = parameters if parameters is not None else {"seed": seed, "trials": trials, "k_max": k_max}
    A = Alphabet.of(alphabet)
    rng = random.Random(seed)
    count = 0

    def fail(cex):
        return VerificationReport("compression", params, "fail", cex, count, time.perf_counter() - t0, "exhaustive")

    for trial in range(trials):
        n = rng.randint(1, n_max)
        p = random_program(rng, A, n, monoid, max_len=40, mean_len=20)
        W = all_words_array(A, n)
        T = trace_matrix(p, W)
        ctx = {"trial": trial, "program": p.to_json()}
        for k in range(1, k_max + 1):
            for t in itertools.product(range(monoid.size), repeat=k):
                idx = compress_subword_indices(p, t)
                if len(idx) > subword_index_bound(k, len(A), n):
                    return fail(dict(ctx, t=list(t), kept=sorted(idx), bound=subword_index_bound(k, len(A), n)))
                superset = idx | {j for j in range(len(p)) if rng.random() < 0.3}
                bad = _first_difference(T, superset, t)
                count += W.shape[0]
                if bad is not None:
                    word = tuple(A.symbols[i] for i in W[bad])
                    return fail(dict(ctx, t=list(t), kept=sorted(superset), word=format_word(word)))
            _, keep = compress_equivalent(p, k)
            limit = min(equivalent_length_bound(k, monoid.size, len(A), n),
                        summed_length_bound(k, monoid.size, len(A), n))
            if len(keep) > limit:
                return fail(dict(ctx, k=k, kept=sorted(keep), bound=limit))
            for j in range(1, k + 1):
                for t in itertools.product(range(monoid.size), repeat=j):
                    bad = _first_difference(T, keep, t)
                    if bad is not None:
                        word = tuple(A.symbols[i] for i in W[bad])
                        return fail(dict(ctx, k=k, t=list(t), kept=sorted(keep), word=format_word(word)))
    return VerificationReport("compression", params, "pass", None, count, time.perf_counter() - t0, "exhaustive")


def _compression_monoid(params):
    e = parse_regex(params.get("language", ":shuffle(ab)"), params.get("alphabet", "ab"))
    mon, _, _ = algebra.syntactic_monoid(compile_expr(e))
    return mon, e.alphabet


def _run_compression(params, bound):
    mon, A = _compression_monoid(params)
    return check_compression(params.get("seed", 0), mon, A, params.get("trials", 100), bound,
                             params.get("k_max", 3), params)


def _replay_compression(params, cex):
    p = Program.from_json(cex["program"])
    kept = cex["kept"]
    if "word" not in cex:
        return len(kept) > cex["bound"]
    W = np.asarray([[p.alphabet.index(c) for c in parse_word(cex["word"])]], dtype=np.int64)
    return _first_difference(trace_matrix(p, W), set(kept), tuple(cex["t"])) is not None


_register("compression", ENUMERATION, 5, _replay_compression)(_run_compression)


# variety claims -----------------------------------------------------------------------------

def _syn(text, alphabet):
    return algebra.syntactic_monoid(compile_expr(parse_regex(text, alphabet)))[0]


def _claims():
    """Named boolean claims, each evaluated lazily."""
    def pt_samples():
        exprs = [":shuffle(ab)", "~:shuffle(ba) & :shuffle(a)", ":shuffle(abc) | ~:shuffle(cc)"]
        return all(algebra.check_variety(_syn(e, "abc"), "J") for e in exprs)

    def sweep_source():
        d = compile_expr(parse_regex(IDENTITY_REGEX, "abc"))
        mon, phi, _ = algebra.syntactic_monoid(d)
        stable = algebra.stable_pair(phi).stable_monoid
        return (algebra.check_variety(mon, "DA") and not algebra.check_variety(mon, "J")
                and not algebra.check_variety(stable, "J"))

    def blocks_da():
        exprs = ["<ab,c>_3", "<ac>_2", "<a,b>_2", "<ab>_3"]
        return all(algebra.check_variety(_syn(e, "abc"), "DA") for e in exprs)

    def quotients_j():
        for A in ("a", "ab"):
            for k in range(4):
                mon, _ = algebra.quotient_by_sim_k(A, k)
                if not algebra.check_variety(mon, "J"):
                    return False
        return True

    return {
        "PT samples have syntactic monoid in J": pt_samples,
        "(a+b)*ac+ is DA, not J, stable monoid not J": sweep_source,
        "threshold blocks have syntactic monoid in DA": blocks_da,
        "Z_1 is 3-piecewise testable": lambda: is_k_pt(compile_expr(zk_language(1)), 3),
        "(ab)* is not k-piecewise testable for k <= 4":
            lambda: not any(is_k_pt(compile_expr(parse_regex("(ab)*", "ab")), k) for k in range(5)),
        "~k quotients are in J for |Σ| <= 2, k <= 3": quotients_j,
    }


def check_variety_claims(parameters=None) -> VerificationReport:
    t0 = time.perf_counter()
    claims = _claims()
    for name, claim in claims.items():
        if not claim():
            return VerificationReport("variety-claims", parameters or {}, "fail", {"claim": name}, len(claims),
                                      time.perf_counter() - t0, "exact")
    return VerificationReport("variety-claims", parameters or {}, "pass", None, len(claims),
                              time.perf_counter() - t0, "exact")


_register("variety-claims", EXACT, DEFAULT_ENUMERATION_BOUND,
          lambda params, cex: not _claims()[cex["claim"]]())(lambda params, bound: check_variety_claims(params))


# compile_tddo end to end -----------------------------------------------------------------------

def _run_compile_tddo(params, bound):
    t0 = time.perf_counter()
    e = parse_regex(params["expression"], params.get("alphabet", "abc"))
    A = Alphabet.of(e.alphabet)
    direct = compile_expr(e)
    count = 0
    for n in range(bound + 1):
        prog = compile_tddo(e, n)
        for i, m in enumerate(prog.components):
            if not algebra.check_variety(m, "J"):
                return VerificationReport("compile-tddo", params, "fail", {"n": n, "component": i}, count,
                                          time.perf_counter() - t0, "exhaustive", "component monoid not in J")
        W = all_words_array(A, n)
        bad = np.flatnonzero(prog.recognizes_batch(W) != direct.accepts_batch(W))
        count += W.shape[0]
        if bad.size:
            w = tuple(A.symbols[i] for i in W[bad[0]])
            cex = {"n": n, "word": format_word(w), "compiled": prog.recognizes(w), "direct": e.member(w)}
            return VerificationReport("compile-tddo", params, "fail", cex, count, time.perf_counter() - t0,
                                      "exhaustive")
    return VerificationReport("compile-tddo", params, "pass", None, count, time.perf_counter() - t0,
                              "exhaustive", f"expression {pretty(e)}")


def _replay_compile_tddo(params, cex):
    e = parse_regex(params["expression"], params.get("alphabet", "abc"))
    prog = compile_tddo(e, cex["n"])
    if "word" not in cex:
        return not algebra.check_variety(prog.components[cex["component"]], "J")
    w = parse_word(cex["word"]) if cex["word"] else ()
    return prog.recognizes(w) != e.member(w)


_register("compile-tddo", ENUMERATION, 7, _replay_compile_tddo)(_run_compile_tddo)


# running -----------------------------------------------------------------------------------

def run_check(spec: CheckSpec) -> VerificationReport:
    entry = CHECKS[spec.check_id]
    t0 = time.perf_counter()
    report = entry.run(spec.parameters, spec.bound)
    report.elapsed = time.perf_counter() - t0
    return report


def _run_json(obj):
    return run_check(CheckSpec.from_json(obj)).to_json()


def run_suite(specs, parallelism: int = 1) -> list[VerificationReport]:
    """Run every spec; reports come back sorted by check_id (stable otherwise)."""
    specs = [s if isinstance(s, CheckSpec) else CheckSpec.from_json(s) for s in specs]
    if parallelism > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as ex:
            reports = [VerificationReport.from_json(r) for r in ex.map(_run_json, [s.to_json() for s in specs])]
    else:
        reports = [run_check(s) for s in specs]
    order = sorted(range(len(reports)), key=lambda i: reports[i].check_id)
    return [reports[i] for i in order]


def replay(report: VerificationReport) -> bool:
    """True iff the report's counterexample still fails when checked alone."""
    if report.counterexample is None:
        return False
    return bool(CHECKS[report.check_id].replay(report.parameters, report.counterexample))


def suite_passed(reports) -> bool:
    return all(r.verdict in ("pass", "skipped") for r in reports)


def render_json(reports, timing: bool = True) -> str:
    return json.dumps([r.to_json(timing) for r in reports], indent=2, sort_keys=True)


def render_text(reports) -> str:
    lines = [r.line() for r in reports]
    failed = sum(r.verdict == "fail" for r in reports)
    lines.append(f"{len(reports)} checks, {failed} failed")
    return "\n".join(lines)


# suites ------------------------------------------------------------------------------------

def tddo_equality_grid():
    """Alphabets {a,b} and {a,b,c}, l in {2,3}, up to two distinct-letter factors of length <= 2."""
    specs = []
    for A in ("ab", "abc"):
        factors = [w for w in ("".join(p) for j in (1, 2) for p in itertools.permutations(A, j))]
        lists = [[f] for f in factors] + [[f, g] for f in factors for g in factors]
        picked = [us for us in lists if len(us) == 1 or us[0] <= us[1]]
        if A == "abc":
            picked = [us for us in picked if len(us) == 1 or len(us[0]) + len(us[1]) <= 3][:10]
        for l in (2, 3):
            for us in picked:
                specs.append(CheckSpec("tddo-equality", {"alphabet": A, "l": l, "us": us}))
    return specs


COSTA_SAMPLES = [
    ("ab", {"r": 0, "u_words": ["ab"], "a_sets": []}),
    ("ab", {"r": 1, "u_words": ["a", "a"], "a_sets": [["b"]]}),
    ("ab", {"r": 2, "u_words": ["ab", "b"], "a_sets": [["a"]]}),
    ("abc", {"r": 1, "u_words": ["a", "", "b"], "a_sets": [["a"], ["b"]]}),
    ("abc", {"r": 2, "u_words": ["", "c", ""], "a_sets": [["a", "b"], ["a"]]}),
    ("abc", {"r": 0, "u_words": ["b", "a", "b"], "a_sets": [["b"], ["c"]]}),
]


def default_suite() -> list[CheckSpec]:
    specs = [CheckSpec("sweep"), CheckSpec("tddo-identity")]
    specs += tddo_equality_grid()
    specs.append(CheckSpec("building-block"))
    specs.append(CheckSpec("compression", {"seed": 0, "trials": 100, "k_max": 3,
                                           "language": ":shuffle(ab)", "alphabet": "ab"}))
    specs.append(CheckSpec("selector", {"ks": [0, 1, 2], "sigmas": 20, "seed": 0}))
    specs.append(CheckSpec("variety-claims"))
    specs += [CheckSpec("costa", {"alphabet": A, "form": f}) for A, f in COSTA_SAMPLES]
    specs.append(CheckSpec("compile-tddo", {"expression": "<ab>_2", "alphabet": "abc"}))
    specs.append(CheckSpec("compile-tddo", {"expression": IDENTITY_EXPRESSION, "alphabet": "abc"}))
    return specs


def mutation_suite() -> list[CheckSpec]:
    """Deliberately broken constructions; every one of these must fail."""
    return [
        CheckSpec("sweep", {"mutant": "swap"}),
        CheckSpec("building-block", {"mutant": "drop-level"}),
        CheckSpec("selector", {"ks": [0, 1, 2], "sigmas": 20, "seed": 0, "mutant": "off-by-one"}),
    ]


SUITES = {"default": default_suite, "mutation": mutation_suite}


def load_suite(name_or_path: str) -> list[CheckSpec]:
    """A named suite, or a JSON file holding a list of CheckSpec objects."""
    if name_or_path in SUITES:
        return SUITES[name_or_path]()
    try:
        with open(name_or_path) as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise SuiteError(f"unknown suite {name_or_path!r}; known: {', '.join(SUITES)} or a JSON file") from None
    except json.JSONDecodeError as exc:
        raise SuiteError(f"suite file is not valid JSON: {exc}") from None
    if not isinstance(data, list):
        raise SuiteError("suite file must hold a JSON list")
    return [CheckSpec.from_json(x) for x in data]
