"""Language expressions: the atoms used throughout the package plus Boolean
operations, concatenation and star.

Every node carries its alphabet.  ``member`` evaluates an expression by direct
scanning of the word; ``compile_expr`` builds a minimal DFA.  The two routes are
independent on purpose and the tests cross-check them.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass

from ..config import CapExceeded, state_cap
from ..words import (Alphabet, AlphabetError, as_word, concat, format_symbol, format_word, is_factor,
                     is_subword, parse_symbol, parse_word, power, sym_key)
from . import dfa as D


class ExprError(ValueError):
    pass


class LangExpr:
    alphabet: Alphabet

    def member(self, w) -> bool:
        w = self.alphabet.check(w)
        return self._mem(w)

    def _mem(self, w) -> bool:
        return self.expand()._mem(w)

    def expand(self) -> "LangExpr":
        """An equivalent expression built only from the basic nodes."""
        raise NotImplementedError

    def __and__(self, other):
        return Intersection((self, other))

    def __or__(self, other):
        return Union((self, other))

    def __invert__(self):
        return Complement(self)

    def __str__(self):
        return pretty(self)


def _alpha(a):
    return Alphabet.of(a)


def _word_field(obj, name, alphabet):
    w = as_word(getattr(obj, name))
    alphabet.check(w)
    object.__setattr__(obj, name, w)


# atoms ---------------------------------------------------------------------

@dataclass(frozen=True)
class ShuffleIdeal(LangExpr):
    """Words having ``u`` as a scattered subword."""
    u: tuple
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alpha(self.alphabet))
        _word_field(self, "u", self.alphabet)

    def _mem(self, w):
        return is_subword(self.u, w)


@dataclass(frozen=True)
class Factor(LangExpr):
    """Words containing ``u`` contiguously."""
    u: tuple
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alpha(self.alphabet))
        _word_field(self, "u", self.alphabet)

    def _mem(self, w):
        return is_factor(self.u, w)


@dataclass(frozen=True)
class Prefix(LangExpr):
    u: tuple
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alpha(self.alphabet))
        _word_field(self, "u", self.alphabet)

    def _mem(self, w):
        return w[:len(self.u)] == self.u


@dataclass(frozen=True)
class Suffix(LangExpr):
    u: tuple
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alpha(self.alphabet))
        _word_field(self, "u", self.alphabet)

    def _mem(self, w):
        return len(w) >= len(self.u) and w[len(w) - len(self.u):] == self.u


@dataclass(frozen=True)
class SingleWord(LangExpr):
    u: tuple
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alpha(self.alphabet))
        _word_field(self, "u", self.alphabet)

    def _mem(self, w):
        return w == self.u


@dataclass(frozen=True)
class Letters(LangExpr):
    """The one-letter words over a subset of the alphabet."""
    letters: frozenset
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alpha(self.alphabet))
        object.__setattr__(self, "letters", frozenset(self.letters))
        for c in self.letters:
            self.alphabet.check((c,))

    def _mem(self, w):
        return len(w) == 1 and w[0] in self.letters


def _in_block(u, l, v) -> bool:
    return is_factor(u, v) or is_subword(power(u, l), v)


@dataclass(frozen=True)
class ThresholdBlock(LangExpr):
    """Concatenation of the blocks ``Σ*uΣ* ∪ (u^l ⧢ Σ*)`` for each listed factor ``u``."""
    us: tuple
    l: int
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alpha(self.alphabet))
        us = tuple(as_word(u) for u in self.us)
        for u in us:
            if not u:
                raise ExprError("threshold block factors must be nonempty")
            self.alphabet.check(u)
        object.__setattr__(self, "us", us)
        if self.l < 1:
            raise ExprError("threshold l must be >= 1")

    def _mem(self, w):
        # reach = set of prefix lengths already covered by the first i blocks
        reach = {0}
        for u in self.us:
            nxt = set()
            for i in sorted(reach):
                for j in range(i, len(w) + 1):
                    if j not in nxt and _in_block(u, self.l, w[i:j]):
                        nxt.add(j)
            if not nxt:
                return False
            # covering more of the word never hurts: blocks are upward closed
            reach = {min(nxt)}
        return True

    def expand(self):
        parts = tuple(Union((Factor(u, self.alphabet), ShuffleIdeal(power(u, self.l), self.alphabet)))
                      for u in self.us)
        return Concat(parts, self.alphabet)


@dataclass(frozen=True)
class LBlock(LangExpr):
    """The factor language of ``u`` when ``alpha < l``, else ``u^l ⧢ Σ*``."""
    u: tuple
    l: int
    alpha: int
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alpha(self.alphabet))
        _word_field(self, "u", self.alphabet)
        if not self.u:
            raise ExprError("LBlock needs a nonempty word")
        if not 1 <= self.alpha <= self.l:
            raise ExprError(f"alpha must lie in [1, {self.l}]")

    def expand(self):
        if self.alpha < self.l:
            return Factor(self.u, self.alphabet)
        return ShuffleIdeal(power(self.u, self.l), self.alphabet)


def _alpha_vec(obj):
    alphas = tuple(int(a) for a in obj.alphas)
    object.__setattr__(obj, "alphas", alphas)
    us = tuple(as_word(u) for u in obj.us)
    object.__setattr__(obj, "us", us)
    if len(alphas) != len(us):
        raise ExprError("alpha vector and factor list differ in length")
    for a in alphas:
        if not 1 <= a <= obj.l:
            raise ExprError(f"alpha components must lie in [1, {obj.l}]")
    for u in us:
        if not u:
            raise ExprError("factors must be nonempty")
        obj.alphabet.check(u)


def _powers_word(us, alphas, bump=None):
    return concat(*(power(u, a + (1 if i == bump else 0)) for i, (u, a) in enumerate(zip(us, alphas))))


@dataclass(frozen=True)
class RLang(LangExpr):
    """Words containing ``u1^a1 ... uk^ak`` as a subword but, for each ``ai < l``,
    not the word obtained by raising ``ai`` by one."""
    alphas: tuple
    us: tuple
    l: int
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alpha(self.alphabet))
        _alpha_vec(self)

    def positive(self):
        return _powers_word(self.us, self.alphas)

    def forbidden(self):
        return [_powers_word(self.us, self.alphas, i) for i, a in enumerate(self.alphas) if a < self.l]

    def _mem(self, w):
        return is_subword(self.positive(), w) and not any(is_subword(v, w) for v in self.forbidden())

    def expand(self):
        parts = [ShuffleIdeal(self.positive(), self.alphabet)]
        parts += [Complement(ShuffleIdeal(v, self.alphabet)) for v in self.forbidden()]
        return Intersection(tuple(parts), self.alphabet)


@dataclass(frozen=True)
class SLang(LangExpr):
    """For each ``ai < l``: some occurrence of the factor ``ui`` is preceded by the
    subword ``u1^a1...u(i-1)^a(i-1)`` and followed by ``u(i+1)^a(i+1)...uk^ak``."""
    alphas: tuple
    us: tuple
    l: int
    alphabet: Alphabet

    def __post_init__(self):
        object.__setattr__(self, "alphabet", _alpha(self.alphabet))
        _alpha_vec(self)

    def contexts(self):
        out = []
        for i, a in enumerate(self.alphas):
            if a < self.l:
                left = _powers_word(self.us[:i], self.alphas[:i])
                right = _powers_word(self.us[i + 1:], self.alphas[i + 1:])
                out.append((left, self.us[i], right))
        return out

    def _mem(self, w):
        return all(_factor_in_context(left, u, right, w) for left, u, right in self.contexts())

    def expand(self):
        parts = tuple(Concat((ShuffleIdeal(left, self.alphabet), SingleWord(u, self.alphabet),
                              ShuffleIdeal(right, self.alphabet)), self.alphabet)
                      for left, u, right in self.contexts())
        return Intersection(parts, self.alphabet)


def _factor_in_context(left, u, right, w) -> bool:
    m = len(u)
    for p in range(len(w) - m + 1):
        if w[p:p + m] == u and is_subword(left, w[:p]) and is_subword(right, w[p + m:]):
            return True
    return False


@dataclass(frozen=True)
class CostaLang(LangExpr):
    form: object  # a CostaForm

    @property
    def alphabet(self):
        return self.form.alphabet

    def expand(self):
        return self.form.expression()


# combinators ---------------------------------------------------------------

def _parts_alphabet(obj):
    parts = tuple(obj.parts)
    object.__setattr__(obj, "parts", parts)
    alpha = obj.alphabet
    if alpha is None:
        if not parts:
            raise ExprError(f"empty {type(obj).__name__} needs an explicit alphabet")
        alpha = parts[0].alphabet
    alpha = _alpha(alpha)
    for p in parts:
        if not isinstance(p, LangExpr):
            raise ExprError(f"not an expression: {p!r}")
        if p.alphabet != alpha:
            raise AlphabetError("all subexpressions must share one alphabet")
    object.__setattr__(obj, "alphabet", alpha)


@dataclass(frozen=True)
class Union(LangExpr):
    parts: tuple
    alphabet: Alphabet = None

    def __post_init__(self):
        _parts_alphabet(self)

    def _mem(self, w):
        return any(p._mem(w) for p in self.parts)


@dataclass(frozen=True)
class Intersection(LangExpr):
    parts: tuple
    alphabet: Alphabet = None

    def __post_init__(self):
        _parts_alphabet(self)

    def _mem(self, w):
        return all(p._mem(w) for p in self.parts)


@dataclass(frozen=True)
class Complement(LangExpr):
    inner: LangExpr

    @property
    def alphabet(self):
        return self.inner.alphabet

    def _mem(self, w):
        return not self.inner._mem(w)


@dataclass(frozen=True)
class Concat(LangExpr):
    parts: tuple
    alphabet: Alphabet = None

    def __post_init__(self):
        _parts_alphabet(self)

    def _mem(self, w):
        reach = {0}
        n = len(w)
        for p in self.parts:
            nxt = set()
            for i in reach:
                for j in range(i, n + 1):
                    if j not in nxt and p._mem(w[i:j]):
                        nxt.add(j)
            if not nxt:
                return False
            reach = nxt
        return n in reach


@dataclass(frozen=True)
class Star(LangExpr):
    inner: LangExpr

    @property
    def alphabet(self):
        return self.inner.alphabet

    def _mem(self, w):
        n = len(w)
        ok = [False] * (n + 1)
        ok[0] = True
        for j in range(1, n + 1):
            ok[j] = any(ok[i] and self.inner._mem(w[i:j]) for i in range(j))
        return ok[n]


# convenience constructors ----------------------------------------------------

def sigma_star(alphabet) -> LangExpr:
    return Intersection((), _alpha(alphabet))


def empty_language(alphabet) -> LangExpr:
    return Union((), _alpha(alphabet))


def letters_star(letters, alphabet) -> LangExpr:
    return Star(Letters(frozenset(letters), _alpha(alphabet)))


def block(us, l, alphabet) -> LangExpr:
    """``⟨u1, ..., uk⟩_l`` with empty factors dropped (an empty factor is Σ*)."""
    us = tuple(as_word(u) for u in us if len(as_word(u)) > 0)
    if not us:
        return sigma_star(alphabet)
    return ThresholdBlock(us, l, _alpha(alphabet))


def threshold_normal_form(us, l, alphabet) -> LangExpr:
    """Union over q in {1, l}^k of the concatenations of LBlock(u_i, l, q_i)."""
    alphabet = _alpha(alphabet)
    us = tuple(as_word(u) for u in us)
    choices = sorted({1, l})
    terms = []
    for q in itertools.product(choices, repeat=len(us)):
        terms.append(Concat(tuple(LBlock(u, l, a, alphabet) for u, a in zip(us, q)), alphabet))
    return Union(tuple(terms), alphabet)


def alpha_decomposition(us, l, alphabet) -> LangExpr:
    """Union over alpha in [l]^k of RLang ∩ SLang."""
    alphabet = _alpha(alphabet)
    us = tuple(as_word(u) for u in us)
    terms = []
    for alphas in itertools.product(range(1, l + 1), repeat=len(us)):
        terms.append(Intersection((RLang(alphas, us, l, alphabet), SLang(alphas, us, l, alphabet)),
                                  alphabet))
    return Union(tuple(terms), alphabet)


def subexpressions(e: LangExpr):
    yield e
    for child in children(e):
        yield from subexpressions(child)


def children(e):
    if isinstance(e, (Union, Intersection, Concat)):
        return e.parts
    if isinstance(e, (Complement, Star)):
        return (e.inner,)
    return ()


# compilation -----------------------------------------------------------------

def compile_expr(e: LangExpr, cap=None) -> D.Dfa:
    """Minimal complete DFA of the expression."""
    cap = state_cap() if cap is None else cap
    return _compile(e, cap)


@functools.lru_cache(maxsize=4096)
def _compile(e, cap):
    try:
        d = _compile_node(e, cap)
    except CapExceeded as exc:
        if exc.detail.startswith("in "):
            raise
        raise CapExceeded(exc.what, exc.cap, f"in {pretty(e)}") from None
    if d.n_states > cap:
        raise CapExceeded("DFA states", cap, f"in {pretty(e)}")
    return D.minimize(d)


def _compile_node(e, cap):
    A = e.alphabet
    if isinstance(e, ShuffleIdeal):
        return D.shuffle_ideal_dfa(e.u, A)
    if isinstance(e, Factor):
        return D.factor_dfa(e.u, A)
    if isinstance(e, Prefix):
        return D.prefix_dfa(e.u, A)
    if isinstance(e, Suffix):
        return D.suffix_dfa(e.u, A)
    if isinstance(e, SingleWord):
        return D.word_dfa(e.u, A)
    if isinstance(e, Letters):
        return D.letter_set_dfa(e.letters, A)
    if isinstance(e, Complement):
        return D.complement(_compile(e.inner, cap))
    if isinstance(e, Star):
        if isinstance(e.inner, Letters):
            return D.letters_star_dfa(e.inner.letters, A)
        return D.star(_compile(e.inner, cap), cap)
    if isinstance(e, (Union, Intersection)):
        op = "or" if isinstance(e, Union) else "and"
        if not e.parts:
            return D.empty(A) if op == "or" else D.universal(A)
        # smallest operands first keeps intermediate products small
        ds = sorted((_compile(p, cap) for p in e.parts), key=lambda d: d.n_states)
        acc = ds[0]
        for d in ds[1:]:
            acc = D.minimize(D.product(acc, d, op, cap))
        return acc
    if isinstance(e, Concat):
        if not e.parts:
            return D.word_dfa((), A)
        acc = _compile(e.parts[-1], cap)
        for p in reversed(e.parts[:-1]):
            acc = D.minimize(D.concat(_compile(p, cap), acc, cap))
        return acc
    return _compile(e.expand(), cap)


# pretty printing ---------------------------------------------------------------

def _w(u):
    return format_word(u)


def pretty(e: LangExpr, unicode=False) -> str:
    if isinstance(e, ShuffleIdeal):
        return f":shuffle({_w(e.u)})"
    if isinstance(e, Factor):
        return f":factor({_w(e.u)})"
    if isinstance(e, Prefix):
        return f":prefix({_w(e.u)})"
    if isinstance(e, Suffix):
        return f":suffix({_w(e.u)})"
    if isinstance(e, SingleWord):
        return f":word({_w(e.u)})"
    if isinstance(e, Letters):
        return "[" + " ".join(format_symbol(c) for c in sorted(e.letters, key=sym_key)) + "]"
    if isinstance(e, ThresholdBlock):
        inner = ",".join(_w(u) for u in e.us)
        if unicode:
            return f"⟨{inner}⟩{str(e.l).translate(_SUBSCRIPT)}"
        return f"<{inner}>_{e.l}"
    if isinstance(e, LBlock):
        return f":lblock({_w(e.u)};{e.l};{e.alpha})"
    if isinstance(e, (RLang, SLang)):
        name = "R" if isinstance(e, RLang) else "S"
        al = ",".join(map(str, e.alphas))
        return f":{name}[{al}]({','.join(_w(u) for u in e.us)})_{e.l}"
    if isinstance(e, CostaLang):
        return f":costa({e.form.describe()})"
    if isinstance(e, Complement):
        return "~" + pretty(e.inner, unicode)
    if isinstance(e, Star):
        return "(" + pretty(e.inner, unicode) + ")*"
    if isinstance(e, Union):
        if not e.parts:
            return ":none"
        return "(" + " | ".join(pretty(p, unicode) for p in e.parts) + ")"
    if isinstance(e, Intersection):
        if not e.parts:
            return ":all"
        return "(" + " & ".join(pretty(p, unicode) for p in e.parts) + ")"
    if isinstance(e, Concat):
        if not e.parts:
            return ":word()"
        return "(" + " ".join(pretty(p, unicode) for p in e.parts) + ")"
    raise ExprError(f"cannot print {e!r}")


_SUBSCRIPT = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


# JSON ----------------------------------------------------------------------------

_WORD_NODES = {"shuffleIdeal": ShuffleIdeal, "factor": Factor, "prefix": Prefix,
               "suffix": Suffix, "word": SingleWord}
_WORD_NAMES = {v: k for k, v in _WORD_NODES.items()}


def to_json(e: LangExpr, root=True) -> dict:
    obj = _to_json(e)
    if root:
        obj["alphabet"] = [format_symbol(a) for a in e.alphabet]
    return obj


def _to_json(e):
    if type(e) in _WORD_NAMES:
        return {"op": _WORD_NAMES[type(e)], "u": _w(e.u)}
    if isinstance(e, Letters):
        return {"op": "letters", "letters": [format_symbol(c) for c in sorted(e.letters, key=sym_key)]}
    if isinstance(e, ThresholdBlock):
        return {"op": "thresholdBlock", "us": [_w(u) for u in e.us], "l": e.l}
    if isinstance(e, LBlock):
        return {"op": "lBlock", "u": _w(e.u), "l": e.l, "alpha": e.alpha}
    if isinstance(e, (RLang, SLang)):
        return {"op": "rLang" if isinstance(e, RLang) else "sLang", "alphas": list(e.alphas),
                "us": [_w(u) for u in e.us], "l": e.l}
    if isinstance(e, CostaLang):
        return {"op": "costa", "form": e.form.to_json()}
    if isinstance(e, (Complement, Star)):
        return {"op": "complement" if isinstance(e, Complement) else "star", "arg": _to_json(e.inner)}
    if isinstance(e, (Union, Intersection, Concat)):
        name = {Union: "union", Intersection: "intersection", Concat: "concat"}[type(e)]
        return {"op": name, "args": [_to_json(p) for p in e.parts]}
    raise ExprError(f"cannot serialise {e!r}")


def from_json(obj, alphabet=None) -> LangExpr:
    if alphabet is None:
        if "alphabet" not in obj:
            raise ExprError("expression JSON needs an alphabet")
        alphabet = Alphabet(tuple(parse_symbol(a) for a in obj["alphabet"]))
    alphabet = _alpha(alphabet)
    return _from_json(obj, alphabet)


def _from_json(obj, A):
    op = obj.get("op")
    if op in _WORD_NODES:
        return _WORD_NODES[op](parse_word(obj["u"]), A)
    if op == "letters":
        return Letters(frozenset(parse_symbol(c) for c in obj["letters"]), A)
    if op == "thresholdBlock":
        return ThresholdBlock(tuple(parse_word(u) for u in obj["us"]), obj["l"], A)
    if op == "lBlock":
        return LBlock(parse_word(obj["u"]), obj["l"], obj["alpha"], A)
    if op in ("rLang", "sLang"):
        cls = RLang if op == "rLang" else SLang
        return cls(tuple(obj["alphas"]), tuple(parse_word(u) for u in obj["us"]), obj["l"], A)
    if op == "costa":
        from .costa import CostaForm
        return CostaLang(CostaForm.from_json(obj["form"], A))
    if op == "complement":
        return Complement(_from_json(obj["arg"], A))
    if op == "star":
        return Star(_from_json(obj["arg"], A))
    if op in ("union", "intersection", "concat"):
        cls = {"union": Union, "intersection": Intersection, "concat": Concat}[op]
        return cls(tuple(_from_json(a, A) for a in obj["args"]), A)
    raise ExprError(f"unknown expression op {op!r}")
