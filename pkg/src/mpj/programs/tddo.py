"""Compiling threshold dot-depth one expressions into programs over J monoids.

Pipeline for a block ``<u1, ..., uk>_l`` on inputs of length n:

* all factors single letters: the block is the shuffle ideal of ``u1...uk``;
* factors with pairwise distinct letters: the block is the union over
  ``alpha in [l]^k`` of ``(u1^a1...uk^ak)⧢Σ*`` intersected with one
  building-block language per ``ai < l``; each building block is realized by a
  decorated sweep composed with programs for the shuffle ideals making up its
  piecewise testable target;
* otherwise every letter is tagged with its position modulo
  ``d = max |ui|`` and the block becomes a union of distinct-letter blocks over
  the tagged alphabet.

The result is a :class:`CombinedProgram` whose components are morphism
programs over syntactic monoids of piecewise testable languages.
"""

from __future__ import annotations

import itertools

from ..reglang.expr import (Complement, ExprError, Intersection, LangExpr, Prefix, ShuffleIdeal, Suffix,
                            ThresholdBlock, Union)
from ..config import DEFAULT_MONOID_CAP
from ..reglang.dfa import shuffle_ideal_dfa
from ..words import Alphabet, concat, has_distinct_letters, power
from .core import CombinedProgram, compose_reduction, dfa_program, prefix_program, suffix_program
from .sweep import DecoratedSweepPlan, decorate_word, decorated_sweep, modular_decoration, plain


class _Builder:
    def __init__(self, alphabet, n, cap):
        self.alphabet = alphabet
        self.n = n
        self.cap = cap
        self.parts = []
        self.keys = {}
        self._decorations = {}

    def var(self, key, make):
        i = self.keys.get(key)
        if i is None:
            i = self.keys[key] = len(self.parts)
            self.parts.append(make())
        return ("var", i)

    def decoration(self, d):
        g = self._decorations.get(d)
        if g is None:
            g = self._decorations[d] = modular_decoration(d, self.n, self.alphabet)
        return g


def _lift(b: _Builder, pre_d, prog):
    """Precompose a program over the tagged alphabet with the modular decoration."""
    if pre_d is None:
        return prog
    return compose_reduction(b.decoration(pre_d), prog)


def _shuffle_var(b, word, A, pre_d):
    def make():
        return _lift(b, pre_d, dfa_program(shuffle_ideal_dfa(word, A), b.n, b.cap))
    return b.var(("shuffle", A, word, pre_d), make)


def _swept_shuffle_var(b, plan, word, pre_d):
    """Component reading the decorated sweep of ``plan`` and testing for ``word``
    as a subword of its output."""
    def make():
        g, _ = decorated_sweep(plan, b.n)
        q = dfa_program(shuffle_ideal_dfa(word, plan.decorated_alphabet), len(g), b.cap)
        return _lift(b, pre_d, compose_reduction(g, q))
    return b.var(("swept", plan, word, pre_d), make)


def _building_block(b, plan, pre_d):
    """Formula for the building-block language of ``plan``.

    Its piecewise testable target is kept as a Boolean combination of shuffle
    ideals, one component each, so that no large syntactic monoid is built.
    """
    zetas = [_swept_shuffle_var(b, plan, plan.zeta(beta), pre_d) for beta in range(1, plan.alpha + 1)]
    forbidden = _swept_shuffle_var(b, plan, plain(plan.forbidden), pre_d)
    return ("and", [("or", zetas), ("not", forbidden)])


def _distinct_block(b, us, l, A, pre_d):
    """Formula for <us>_l over alphabet A, every factor having distinct letters."""
    if all(len(u) == 1 for u in us):
        return _shuffle_var(b, concat(*us), A, pre_d)
    terms = []
    for alphas in itertools.product(range(1, l + 1), repeat=len(us)):
        conj = [_shuffle_var(b, concat(*(power(u, a) for u, a in zip(us, alphas))), A, pre_d)]
        for i, a in enumerate(alphas):
            if a < l:
                x1 = concat(*(power(u, e) for u, e in zip(us[:i], alphas[:i])))
                x2 = concat(*(power(u, e) for u, e in zip(us[i + 1:], alphas[i + 1:])))
                plan = DecoratedSweepPlan(us[i], x1, x2, a, A)
                conj.append(_building_block(b, plan, pre_d))
        terms.append(("and", conj))
    return ("or", terms)


def _mu(u, q, l):
    if q == 1:
        return [u]
    return [(c,) for c in power(u, l)]


def _block(b, e: ThresholdBlock):
    us, l, A = e.us, e.l, e.alphabet
    d = max(len(u) for u in us)
    if d == 1 or all(has_distinct_letters(u) for u in us):
        return _distinct_block(b, us, l, A, None)
    tagged = A.decorate(d)
    terms = []
    for q in itertools.product(sorted({1, l}), repeat=len(us)):
        factors = [v for u, qi in zip(us, q) for v in _mu(u, qi, l)]
        for tags in itertools.product(range(d), repeat=len(factors)):
            vs = tuple(decorate_word(v, d, i) for v, i in zip(factors, tags))
            terms.append(_distinct_block(b, vs, l, tagged, d))
    return ("or", terms)


def _formula(b, e):
    A = b.alphabet
    if isinstance(e, Intersection):
        return ("and", [_formula(b, p) for p in e.parts]) if e.parts else ("const", True)
    if isinstance(e, Union):
        return ("or", [_formula(b, p) for p in e.parts]) if e.parts else ("const", False)
    if isinstance(e, Complement):
        return ("not", _formula(b, e.inner))
    if isinstance(e, Prefix):
        return b.var(("prefix", e.u), lambda: prefix_program(e.u, b.n, A))
    if isinstance(e, Suffix):
        return b.var(("suffix", e.u), lambda: suffix_program(e.u, b.n, A))
    if isinstance(e, ShuffleIdeal):
        return _shuffle_var(b, e.u, A, None)
    if isinstance(e, ThresholdBlock):
        return _block(b, e)
    raise ExprError(f"compile_tddo does not support {type(e).__name__} nodes "
                    "(allowed: prefix, suffix, shuffle ideal, threshold block, union, intersection, complement)")


def compile_tddo(e: LangExpr, n: int, monoid_cap=DEFAULT_MONOID_CAP) -> CombinedProgram:
    """Program over J monoids recognizing the length-n words of ``e``.

    Blocks whose factors repeat letters go through the tagged alphabet and can
    need shuffle ideals of long words; their syntactic monoids are bounded by
    ``monoid_cap`` and :class:`CapExceeded` is raised past it.
    """
    if n < 0:
        raise ExprError("n must be >= 0")
    b = _Builder(Alphabet.of(e.alphabet), n, monoid_cap)
    f = _formula(b, e)
    return CombinedProgram(b.alphabet, n, b.parts, f)
