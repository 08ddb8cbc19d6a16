"""Complete deterministic automata and the classical operations on them."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ..config import CapExceeded, state_cap
from ..words import Alphabet, AlphabetError, as_word, format_symbol, format_word, parse_symbol


@dataclass(frozen=True, eq=False)
class Dfa:
    alphabet: Alphabet
    n_states: int
    start: int
    delta: tuple  # delta[q][letter_index] -> state
    accepting: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", Alphabet.of(self.alphabet))
        object.__setattr__(self, "delta", tuple(tuple(int(x) for x in row) for row in self.delta))
        object.__setattr__(self, "accepting", frozenset(int(q) for q in self.accepting))
        n, s = self.n_states, len(self.alphabet)
        if n < 1:
            raise ValueError("a DFA needs at least one state")
        if not 0 <= self.start < n:
            raise ValueError(f"start state {self.start} out of range")
        if len(self.delta) != n or any(len(row) != s for row in self.delta):
            raise ValueError("transition table is not total")
        for row in self.delta:
            for t in row:
                if not 0 <= t < n:
                    raise ValueError(f"transition target {t} out of range")
        for q in self.accepting:
            if not 0 <= q < n:
                raise ValueError(f"accepting state {q} out of range")

    def step(self, q: int, sym) -> int:
        return self.delta[q][self.alphabet.index(sym)]

    def run(self, word, q=None) -> int:
        idx = self.alphabet._index
        d = self.delta
        q = self.start if q is None else q
        try:
            for c in as_word(word):
                q = d[q][idx[c]]
        except KeyError as exc:
            raise AlphabetError(f"symbol {exc.args[0]!r} not in alphabet") from None
        return q

    def accepts(self, word) -> bool:
        return self.run(word) in self.accepting

    __contains__ = accepts

    def accepts_batch(self, W):
        """Acceptance for many equal-length words given as a letter-index array."""
        W = np.asarray(W, dtype=np.int64)
        delta = np.asarray(self.delta, dtype=np.int64)
        q = np.full(W.shape[0], self.start, dtype=np.int64)
        for j in range(W.shape[1]):
            q = delta[q, W[:, j]]
        acc = np.zeros(self.n_states, dtype=bool)
        acc[list(self.accepting)] = True
        return acc[q]

    def to_json(self) -> dict:
        return {
            "alphabet": [format_symbol(a) for a in self.alphabet],
            "states": self.n_states,
            "start": self.start,
            "transitions": [list(row) for row in self.delta],
            "accepting": sorted(self.accepting),
        }

    @classmethod
    def from_json(cls, obj) -> "Dfa":
        alpha = Alphabet(tuple(parse_symbol(a) for a in obj["alphabet"]))
        return cls(alpha, obj["states"], obj["start"], obj["transitions"], frozenset(obj["accepting"]))

    def __eq__(self, other):
        return (isinstance(other, Dfa) and self.alphabet == other.alphabet
                and self.n_states == other.n_states and self.start == other.start
                and self.delta == other.delta and self.accepting == other.accepting)

    def __hash__(self):
        return hash((self.n_states, self.start, self.delta, self.accepting))


def _cap(cap):
    return state_cap() if cap is None else cap


def reachable(d: Dfa) -> list[int]:
    """States reachable from the start, in BFS order with letters in alphabet order."""
    seen = {d.start}
    order = [d.start]
    i = 0
    while i < len(order):
        for t in d.delta[order[i]]:
            if t not in seen:
                seen.add(t)
                order.append(t)
        i += 1
    return order


def renumber(d: Dfa, order: list[int]) -> Dfa:
    pos = {q: i for i, q in enumerate(order)}
    delta = [[pos[t] for t in d.delta[q]] for q in order]
    acc = {pos[q] for q in order if q in d.accepting}
    return Dfa(d.alphabet, len(order), 0, delta, frozenset(acc))


def minimize(d: Dfa) -> Dfa:
    """Minimal complete DFA, states numbered in BFS order from the start."""
    d = renumber(d, reachable(d))
    n = d.n_states
    delta = np.asarray(d.delta, dtype=np.int64).reshape(n, len(d.alphabet))
    cls = np.zeros(n, dtype=np.int64)
    cls[list(d.accepting)] = 1
    _, cls = np.unique(cls, return_inverse=True)
    count = cls.max() + 1
    while True:
        sig = np.concatenate([cls[:, None], cls[delta]], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = new.reshape(-1)
        new_count = new.max() + 1
        cls = new
        if new_count == count:
            break
        count = new_count
    # one representative per class, then canonical renumbering
    rep = {}
    for q in range(n):
        rep.setdefault(int(cls[q]), q)
    qd = [[int(cls[t]) for t in d.delta[rep[c]]] for c in range(count)]
    acc = {int(cls[q]) for q in d.accepting}
    quotient = Dfa(d.alphabet, int(count), int(cls[d.start]), qd, frozenset(acc))
    return renumber(quotient, reachable(quotient))


def complement(d: Dfa) -> Dfa:
    return Dfa(d.alphabet, d.n_states, d.start, d.delta,
               frozenset(set(range(d.n_states)) - d.accepting))


_OPS = {
    "and": lambda x, y: x and y,
    "or": lambda x, y: x or y,
    "andnot": lambda x, y: x and not y,
    "xor": lambda x, y: x != y,
}


def product(d1: Dfa, d2: Dfa, op: str = "and", cap=None) -> Dfa:
    if d1.alphabet != d2.alphabet:
        raise AlphabetError("product of DFAs over different alphabets")
    cap = _cap(cap)
    fn = _OPS[op]
    s = len(d1.alphabet)
    start = (d1.start, d2.start)
    ids = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        p, q = order[i]
        row = []
        r1, r2 = d1.delta[p], d2.delta[q]
        for a in range(s):
            nxt = (r1[a], r2[a])
            j = ids.get(nxt)
            if j is None:
                j = len(order)
                if j >= cap:
                    raise CapExceeded("DFA states", cap, f"product ({op})")
                ids[nxt] = j
                order.append(nxt)
            row.append(j)
        delta.append(row)
        i += 1
    acc = {i for i, (p, q) in enumerate(order) if fn(p in d1.accepting, q in d2.accepting)}
    return Dfa(d1.alphabet, len(order), 0, delta, frozenset(acc))


def _subset_build(alphabet, start, step, is_acc, cap, what):
    s = len(alphabet)
    ids = {start: 0}
    order = [start]
    delta = []
    i = 0
    while i < len(order):
        row = []
        for a in range(s):
            nxt = step(order[i], a)
            j = ids.get(nxt)
            if j is None:
                j = len(order)
                if j >= cap:
                    raise CapExceeded("DFA states", cap, what)
                ids[nxt] = j
                order.append(nxt)
            row.append(j)
        delta.append(row)
        i += 1
    acc = {i for i, st in enumerate(order) if is_acc(st)}
    return Dfa(alphabet, len(order), 0, delta, frozenset(acc))


def concat(d1: Dfa, d2: Dfa, cap=None) -> Dfa:
    """DFA of L(d1) L(d2) by subset construction on the second factor."""
    if d1.alphabet != d2.alphabet:
        raise AlphabetError("concatenation of DFAs over different alphabets")

    def close(q1, qs):
        if q1 in d1.accepting:
            qs = qs | {d2.start}
        return (q1, frozenset(qs))

    def step(st, a):
        q1, qs = st
        return close(d1.delta[q1][a], {d2.delta[q][a] for q in qs})

    start = close(d1.start, frozenset())
    return _subset_build(d1.alphabet, start, step,
                         lambda st: bool(st[1] & d2.accepting), _cap(cap), "concatenation")


def star(d: Dfa, cap=None) -> Dfa:
    """DFA of L(d)*."""

    def close(qs):
        if qs & d.accepting:
            qs = qs | {d.start}
        return frozenset(qs)

    def step(st, a):
        qs, _ = st
        return (close({d.delta[q][a] for q in qs}), False)

    start = (frozenset({d.start}), True)
    return _subset_build(d.alphabet, start, step,
                         lambda st: st[1] or bool(st[0] & d.accepting), _cap(cap), "star")


def dfa_equal(d1: Dfa, d2: Dfa):
    """``(True, None)`` if the languages agree, else ``(False, w)`` with ``w`` a shortest
    (and among those length-lex least) word in the symmetric difference."""
    if d1.alphabet != d2.alphabet:
        raise AlphabetError("cannot compare DFAs over different alphabets")
    syms = d1.alphabet.symbols
    start = (d1.start, d2.start)
    parent = {start: None}
    queue = deque([start])
    while queue:
        st = queue.popleft()
        p, q = st
        if (p in d1.accepting) != (q in d2.accepting):
            out = []
            while parent[st] is not None:
                st, a = parent[st]
                out.append(syms[a])
            return False, tuple(reversed(out))
        for a in range(len(syms)):
            nxt = (d1.delta[p][a], d2.delta[q][a])
            if nxt not in parent:
                parent[nxt] = (st, a)
                queue.append(nxt)
    return True, None


def is_empty(d: Dfa) -> bool:
    return not any(q in d.accepting for q in reachable(d))


def shortest_accepted(d: Dfa):
    """Length-lex least accepted word, or None."""
    syms = d.alphabet.symbols
    parent = {d.start: None}
    queue = deque([d.start])
    while queue:
        q = queue.popleft()
        if q in d.accepting:
            out = []
            while parent[q] is not None:
                q, a = parent[q]
                out.append(syms[a])
            return tuple(reversed(out))
        for a, t in enumerate(d.delta[q]):
            if t not in parent:
                parent[t] = (q, a)
                queue.append(t)
    return None


# atom automata -------------------------------------------------------------

def universal(alphabet) -> Dfa:
    alphabet = Alphabet.of(alphabet)
    return Dfa(alphabet, 1, 0, [[0] * len(alphabet)], frozenset({0}))


def empty(alphabet) -> Dfa:
    alphabet = Alphabet.of(alphabet)
    return Dfa(alphabet, 1, 0, [[0] * len(alphabet)], frozenset())


def shuffle_ideal_dfa(u, alphabet) -> Dfa:
    alphabet = Alphabet.of(alphabet)
    u = alphabet.check(u)
    m = len(u)
    delta = []
    for i in range(m + 1):
        delta.append([i + 1 if i < m and a == u[i] else i for a in alphabet])
    return Dfa(alphabet, m + 1, 0, delta, frozenset({m}))


def _kmp_delta(u, alphabet):
    """Delta of the string-matching automaton: state = longest suffix that is a prefix of u."""
    m = len(u)
    fail = [0] * (m + 1)
    k = 0
    for i in range(1, m):
        while k and u[i] != u[k]:
            k = fail[k]
        if u[i] == u[k]:
            k += 1
        fail[i + 1] = k
    delta = []
    for i in range(m + 1):
        row = []
        for a in alphabet:
            j = i
            if j == m:
                j = fail[m]
            while j and u[j] != a:
                j = fail[j]
            row.append(j + 1 if (j < m and u[j] == a) else 0)
        delta.append(row)
    return delta


def factor_dfa(u, alphabet) -> Dfa:
    alphabet = Alphabet.of(alphabet)
    u = alphabet.check(u)
    m = len(u)
    delta = _kmp_delta(u, alphabet)
    delta[m] = [m] * len(alphabet)
    return Dfa(alphabet, m + 1, 0, delta, frozenset({m}))


def suffix_dfa(u, alphabet) -> Dfa:
    alphabet = Alphabet.of(alphabet)
    u = alphabet.check(u)
    return Dfa(alphabet, len(u) + 1, 0, _kmp_delta(u, alphabet), frozenset({len(u)}))


def _chain(u, alphabet, final_loops: bool) -> Dfa:
    alphabet = Alphabet.of(alphabet)
    u = alphabet.check(u)
    m = len(u)
    sink = m + 1
    delta = []
    for i in range(m + 1):
        if i == m:
            delta.append([m if final_loops else sink] * len(alphabet))
        else:
            delta.append([i + 1 if a == u[i] else sink for a in alphabet])
    delta.append([sink] * len(alphabet))
    return Dfa(alphabet, m + 2, 0, delta, frozenset({m}))


def prefix_dfa(u, alphabet) -> Dfa:
    return _chain(u, alphabet, True)


def word_dfa(u, alphabet) -> Dfa:
    return _chain(u, alphabet, False)


def letters_star_dfa(letters, alphabet) -> Dfa:
    """DFA of B* for a subset B of the alphabet."""
    alphabet = Alphabet.of(alphabet)
    letters = set(letters)
    for c in letters:
        alphabet.check((c,))
    return Dfa(alphabet, 2, 0, [[0 if a in letters else 1 for a in alphabet], [1] * len(alphabet)],
               frozenset({0}))


def letter_set_dfa(letters, alphabet) -> Dfa:
    """DFA of the one-letter words over a subset of the alphabet."""
    alphabet = Alphabet.of(alphabet)
    letters = set(letters)
    return Dfa(alphabet, 3, 0,
               [[1 if a in letters else 2 for a in alphabet], [2] * len(alphabet), [2] * len(alphabet)],
               frozenset({1}))


def describe_counterexample(w) -> str:
    return format_word(w) if w else "ε"
