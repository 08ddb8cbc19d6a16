"""Costa normal forms ``u0 A1* X1 A2* ... X(n-1) An* un`` and their rewriting
as Boolean combinations of threshold blocks with threshold 2."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..words import Alphabet, as_word, format_symbol, format_word, parse_symbol, parse_word, sym_key
from .expr import (Complement, Concat, CostaLang, ExprError, Intersection, LangExpr, Letters, Prefix,
                   SingleWord, Star, Suffix, Union, block, sigma_star)


class CostaFormError(ExprError):
    pass


def _letters(w):
    return frozenset(w)


@dataclass(frozen=True)
class CostaForm:
    r: int
    u_words: tuple
    a_sets: tuple
    alphabet: Alphabet

    def __post_init__(self):
        A = Alphabet.of(self.alphabet)
        object.__setattr__(self, "alphabet", A)
        us = tuple(as_word(u) for u in self.u_words)
        sets = tuple(frozenset(s) for s in self.a_sets)
        object.__setattr__(self, "u_words", us)
        object.__setattr__(self, "a_sets", sets)
        if self.r < 0:
            raise CostaFormError("r must be >= 0")
        if len(us) != len(sets) + 1:
            raise CostaFormError("need exactly one more word than letter sets")
        for u in us:
            A.check(u)
        for s in sets:
            if not s:
                raise CostaFormError("letter sets must be nonempty")
            for c in s:
                A.check((c,))
        for i in range(1, self.n):
            ui, ai, aj = us[i], sets[i - 1], sets[i]
            if ui:
                if _letters(ui) <= ai or _letters(ui) <= aj:
                    raise CostaFormError(
                        f"alphabet of u_{i} = {format_word(ui)} must not be inside A_{i} or A_{i + 1}")
            elif ai <= aj or aj <= ai:
                raise CostaFormError(f"A_{i} and A_{i + 1} must be incomparable when u_{i} is empty")

    @property
    def n(self) -> int:
        return len(self.a_sets)

    def A(self, i):
        """The letter set A_i, 1-based."""
        return self.a_sets[i - 1]

    def bridge(self, i) -> LangExpr:
        """X_i for 1 <= i <= n-1."""
        S = self.alphabet
        u = self.u_words[i]
        if u:
            return SingleWord(u, S)
        ai, aj = self.A(i), self.A(i + 1)
        common = ai & aj
        parts = [Letters(ai - aj, S)]
        parts += [Letters(common, S)] * self.r
        parts += [Star(Letters(common, S)), Letters(aj - ai, S)]
        return Concat(tuple(parts), S)

    def expression(self) -> LangExpr:
        S = self.alphabet
        parts = [SingleWord(self.u_words[0], S)]
        for i in range(1, self.n + 1):
            parts.append(Star(Letters(self.A(i), S)))
            if i < self.n:
                parts.append(self.bridge(i))
        if self.n:
            parts.append(SingleWord(self.u_words[-1], S))
        return Concat(tuple(parts), S)

    def describe(self) -> str:
        out = [format_word(self.u_words[0])]
        for i in range(1, self.n + 1):
            out.append("{" + "".join(format_symbol(c) for c in sorted(self.A(i), key=sym_key)) + "}*")
            if i < self.n:
                out.append(format_word(self.u_words[i]) if self.u_words[i] else f"X{i}")
        if self.n:
            out.append(format_word(self.u_words[-1]))
        return " ".join(x for x in out if x) + f"; r={self.r}"

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "u_words": [format_word(u) for u in self.u_words],
            "a_sets": [[format_symbol(c) for c in sorted(s, key=sym_key)] for s in self.a_sets],
        }

    @classmethod
    def from_json(cls, obj, alphabet) -> "CostaForm":
        return cls(obj["r"], tuple(parse_word(u) for u in obj["u_words"]),
                   tuple(frozenset(parse_symbol(c) for c in s) for s in obj["a_sets"]), alphabet)


def costa_lang(f: CostaForm) -> LangExpr:
    return CostaLang(f)


def _split(u):
    """The factor list obtained by cutting ``u`` into single letters."""
    return [(c,) for c in u]


def costa_K(f: CostaForm, allow_overlap: bool = False) -> LangExpr:
    """Boolean combination of threshold-2 blocks equal to the form's language.

    With ``allow_overlap=True`` the one-gap case (n = 1) omits the conjunct
    forcing ``u0`` and ``un`` to occupy disjoint parts of the word; that version
    wrongly accepts overlapping words such as ``a`` for ``a b* a``.
    """
    S = f.alphabet
    n = f.n
    u = f.u_words
    u0, un = u[0], u[-1]

    def blk(factors):
        return block(factors, 2, S)

    def notblk(factors):
        return Complement(blk(factors))

    if n == 0:
        parts = [Prefix(u0, S)] + [notblk([u0, (c,)]) for c in S]
        return Intersection(tuple(parts), S)

    parts = [Prefix(u0, S), Suffix(un, S)]
    if n == 1:
        if not allow_overlap:
            parts.append(blk([u0, un]))
        parts += [notblk([u0, (c,), un]) for c in S if c not in f.A(1)]
        return Intersection(tuple(parts), S)

    # Y_i choices for i in 1..n-1
    Y = []
    for i in range(1, n):
        if u[i]:
            Y.append([u[i]])
        else:
            ai, aj = f.A(i), f.A(i + 1)
            Y.append([(b1, b2) for b1 in sorted(ai - aj, key=sym_key) for b2 in sorted(aj - ai, key=sym_key)])

    def tilde(i, v):
        return [v] if u[i] else _split(v)

    positive = []
    for vs in itertools.product(*Y):
        factors = [u0]
        for i, v in enumerate(vs, start=1):
            factors += tilde(i, v)
        factors.append(un)
        positive.append(blk(factors))
    parts.append(Union(tuple(positive), S))

    for vs in itertools.product(*Y):
        bars = [_split(v) for v in vs]          # bars[i-1] is the split of v_i
        for i in range(1, n + 1):
            for c in S:
                if c in f.A(i):
                    continue
                factors = [u0] + sum(bars[:i - 1], []) + [(c,)] + sum(bars[i - 1:], []) + [un]
                parts.append(notblk(factors))

    for i in range(1, n):
        if u[i]:
            continue
        ai, aj = f.A(i), f.A(i + 1)
        common = sorted(ai & aj, key=sym_key)
        others = Y[:i - 1] + Y[i:]
        for b1 in sorted(ai - aj, key=sym_key):
            for b2 in sorted(aj - ai, key=sym_key):
                for vs in itertools.product(*others):
                    left = sum((_split(v) for v in vs[:i - 1]), [])
                    right = sum((_split(v) for v in vs[i - 1:]), [])
                    for c in S:
                        if c in ai or c in aj:
                            continue
                        parts.append(notblk([u0] + left + [(b1,), (c,), (b2,)] + right + [un]))
                    for ln in range(f.r):
                        for mid in itertools.product(common, repeat=ln):
                            parts.append(notblk([u0] + left + [(b1,) + mid + (b2,)] + right + [un]))
    return Intersection(tuple(parts), S)
