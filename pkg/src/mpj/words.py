"""Alphabets, words and subword combinatorics.

A symbol is either a plain string (a base character) or a pair
``(base, tag)`` where ``tag`` is a non-negative integer.  Tags may nest,
so ``(("a", 1), 3)`` is a legal symbol; that is how letters of an already
decorated alphabet get decorated a second time.

Words are tuples of symbols.  Every function here also accepts plain
Python strings for untagged words, so ``is_subword("ca", "baabca")`` works.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Hashable, Iterable, Iterator, Sequence

Symbol = Hashable
Word = tuple


class AlphabetError(ValueError):
    pass


def tagged(base, tag: int):
    return (base, tag)


def base_of(sym):
    return sym[0] if isinstance(sym, tuple) else sym


def tag_of(sym):
    return sym[1] if isinstance(sym, tuple) else None


def sym_key(sym):
    """Total order on symbols: plain strings first, then tagged ones."""
    if isinstance(sym, tuple):
        return (1, sym_key(sym[0]), sym[1])
    if isinstance(sym, str):
        return (0, sym)
    return (2, repr(type(sym)), sym)


def as_word(w) -> Word:
    return w if isinstance(w, tuple) else tuple(w)


def word_key(w):
    return (len(w), tuple(sym_key(s) for s in w))


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        syms = tuple(self.symbols)
        object.__setattr__(self, "symbols", syms)
        if not syms:
            raise AlphabetError("alphabet must be nonempty")
        if len(set(syms)) != len(syms):
            raise AlphabetError(f"duplicate symbols in {syms!r}")
        tags: dict = {}
        for s in syms:
            if isinstance(s, tuple):
                if len(s) != 2 or not isinstance(s[1], int) or s[1] < 0:
                    raise AlphabetError(f"malformed tagged symbol {s!r}")
                tags.setdefault(s[0], set()).add(s[1])
        for base, ts in tags.items():
            if ts != set(range(len(ts))):
                raise AlphabetError(f"tags of {base!r} are not contiguous from 0: {sorted(ts)}")

    @classmethod
    def of(cls, letters) -> "Alphabet":
        if isinstance(letters, Alphabet):
            return letters
        return cls(tuple(letters))

    def __iter__(self):
        return iter(self.symbols)

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, sym):
        return sym in self._index

    @property
    def _index(self):
        idx = self.__dict__.get("_idx")
        if idx is None:
            idx = {s: i for i, s in enumerate(self.symbols)}
            object.__setattr__(self, "_idx", idx)
        return idx

    def index(self, sym) -> int:
        try:
            return self._index[sym]
        except KeyError:
            raise AlphabetError(f"symbol {sym!r} not in alphabet") from None

    def check(self, word) -> Word:
        w = as_word(word)
        for s in w:
            if s not in self._index:
                raise AlphabetError(f"symbol {s!r} of {format_word(w)!r} not in alphabet")
        return w

    def decorate(self, ntags: int) -> "Alphabet":
        """Alphabet of ``(a, i)`` for every letter ``a`` and ``i`` in ``0..ntags-1``."""
        return Alphabet(tuple((a, i) for a in self.symbols for i in range(ntags)))

    @property
    def is_plain(self) -> bool:
        return all(isinstance(s, str) and len(s) == 1 for s in self.symbols)


def _checked(u, w, alphabet):
    u, w = as_word(u), as_word(w)
    if alphabet is not None:
        alphabet = Alphabet.of(alphabet)
        alphabet.check(u)
        alphabet.check(w)
    return u, w


def is_subword(u, w, alphabet=None) -> bool:
    """True iff ``u`` is a scattered subsequence of ``w``."""
    u, w = _checked(u, w, alphabet)
    it = iter(w)
    return all(c in it for c in u)


def is_factor(u, w, alphabet=None) -> bool:
    u, w = _checked(u, w, alphabet)
    m = len(u)
    if m == 0:
        return True
    return any(w[i:i + m] == u for i in range(len(w) - m + 1))


def factor_positions(u, w) -> list[int]:
    """Start indices (0-based) of every occurrence of ``u`` as a factor of ``w``."""
    u, w = as_word(u), as_word(w)
    m = len(u)
    return [i for i in range(len(w) - m + 1) if w[i:i + m] == u]


@dataclass(frozen=True)
class SubwordSet:
    k: int
    members: tuple

    def __contains__(self, x):
        return as_word(x) in self._set

    @property
    def _set(self):
        s = self.__dict__.get("_s")
        if s is None:
            s = frozenset(self.members)
            object.__setattr__(self, "_s", s)
        return s

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @classmethod
    def from_set(cls, k: int, members) -> "SubwordSet":
        return cls(k, tuple(sorted(members, key=word_key)))


def _subwords(w: Word, k: int) -> set:
    subs = {()}
    for c in w:
        subs |= {x + (c,) for x in subs if len(x) < k}
    return subs


def subword_set(w, k: int) -> SubwordSet:
    if k < 0:
        raise ValueError("k must be >= 0")
    return SubwordSet.from_set(k, _subwords(as_word(w), k))


def concat_subwords(a: SubwordSet, b: SubwordSet) -> SubwordSet:
    """Subword set of ``uv`` from those of ``u`` and ``v`` (split rule)."""
    if a.k != b.k:
        raise ValueError("subword sets of different k")
    k = a.k
    out = {x + y for x in a.members for y in b.members if len(x) + len(y) <= k}
    return SubwordSet.from_set(k, out)


def sim_k(u, v, k: int, alphabet=None) -> bool:
    u, v = _checked(u, v, alphabet)
    if k < 0:
        raise ValueError("k must be >= 0")
    return _subwords(u, k) == _subwords(v, k)


def enumerate_words(alphabet, min_len: int, max_len: int) -> Iterator[Word]:
    """Every word with length in ``[min_len, max_len]``, length-then-lex order."""
    if not 0 <= min_len <= max_len:
        raise ValueError("need 0 <= min_len <= max_len")
    syms = tuple(Alphabet.of(alphabet))
    for n in range(min_len, max_len + 1):
        yield from itertools.product(syms, repeat=n)


# serialisation -------------------------------------------------------------

def format_symbol(sym) -> str:
    if isinstance(sym, tuple):
        return f"{format_symbol(sym[0])}:{sym[1]}"
    return str(sym)


def parse_symbol(tok: str):
    parts = tok.split(":")
    sym = parts[0]
    for t in parts[1:]:
        sym = (sym, int(t))
    return sym


def format_word(w) -> str:
    w = as_word(w)
    if all(isinstance(s, str) and len(s) == 1 and s not in ",:" for s in w):
        return "".join(w)
    return ",".join(format_symbol(s) for s in w)


def parse_word(text: str) -> Word:
    if "," in text or ":" in text:
        return tuple(parse_symbol(t) for t in text.split(",") if t != "")
    return tuple(text)


def letters(w) -> frozenset:
    return frozenset(as_word(w))


def power(u, e: int) -> Word:
    return as_word(u) * e


def concat(*ws: Iterable) -> Word:
    out: list = []
    for w in ws:
        out.extend(as_word(w))
    return tuple(out)


def has_distinct_letters(u: Sequence) -> bool:
    return len(set(u)) == len(u)
