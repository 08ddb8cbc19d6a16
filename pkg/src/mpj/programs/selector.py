"""Selector languages and the nested-block Γ-programs that reduce them to the
piecewise testable languages Z_k."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..reglang.expr import Concat, Letters, SingleWord, Star
from ..words import Alphabet, as_word
from .core import GammaProgram, Instruction, ProgramError

BINARY = Alphabet(("0", "1"))
MARK = "#"
BLANK = "e"


def top(l: int) -> str:
    return f"T{l}"


def bottom(l: int) -> str:
    return f"B{l}"


def selector_alphabet(k: int) -> Alphabet:
    """{e, #} plus an opening and closing bracket T_l, B_l for each l in 1..k."""
    syms = [BLANK, MARK]
    for l in range(1, k + 1):
        syms += [top(l), bottom(l)]
    return Alphabet(tuple(syms))


@dataclass(frozen=True)
class SelectorFn:
    """A map from [n]^k to subsets of [n] (all 1-based)."""
    k: int
    n: int
    table: tuple  # sorted tuple of (rho, frozenset) pairs

    def __post_init__(self):
        items = dict(self.table) if not isinstance(self.table, dict) else self.table
        items = {tuple(r): frozenset(s) for r, s in items.items()}
        keys = set(itertools.product(range(1, self.n + 1), repeat=self.k))
        if set(items) != keys:
            raise ProgramError("selector table must be total on [n]^k")
        for s in items.values():
            if not s <= set(range(1, self.n + 1)):
                raise ProgramError("selector values must be subsets of [n]")
        object.__setattr__(self, "table", tuple(sorted(items.items(), key=lambda kv: kv[0])))
        object.__setattr__(self, "_lookup", items)

    def __call__(self, rho) -> frozenset:
        return self._lookup[tuple(rho)]

    def restrict(self, j: int) -> "SelectorFn":
        """The (k-1)-selector rho' -> sigma((j, rho'))."""
        if self.k == 0:
            raise ProgramError("cannot restrict a 0-selector")
        return SelectorFn(self.k - 1, self.n, {r[1:]: s for r, s in self.table if r[0] == j})

    @classmethod
    def random(cls, k: int, n: int, rng) -> "SelectorFn":
        table = {}
        for rho in itertools.product(range(1, n + 1), repeat=k):
            table[rho] = frozenset(j for j in range(1, n + 1) if rng.random() < 0.5)
        return cls(k, n, table)

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n,
                "table": [[list(r), sorted(s)] for r, s in self.table]}

    @classmethod
    def from_json(cls, obj) -> "SelectorFn":
        return cls(obj["k"], obj["n"], {tuple(r): frozenset(s) for r, s in obj["table"]})


def zk_language(k: int):
    """Z_0 = Y0* # Y0*, Z_k = Y(k-1)* T_k Z(k-1) B_k Y(k-1)*, all over Y_k."""
    if k < 0:
        raise ProgramError("k must be >= 0")
    Y = selector_alphabet(k)

    def inner(j):
        below = selector_alphabet(max(j - 1, 0))
        star = Star(Letters(frozenset(below), Y))
        if j == 0:
            return Concat((star, SingleWord((MARK,), Y), star), Y)
        return Concat((star, SingleWord((top(j),), Y), inner(j - 1), SingleWord((bottom(j),), Y), star), Y)

    return inner(k)


def selector_program(k: int, sigma: SelectorFn, n: int) -> GammaProgram:
    """P_k(0, sigma) on inputs of length (k + 1) n, outputting words over Y_k."""
    if sigma.k != k or sigma.n != n:
        raise ProgramError("selector shape does not match (k, n)")
    Y = selector_alphabet(k)
    total = (k + 1) * n

    def build(level, d, sig):
        if level == 0:
            chosen = sig(())
            return [Instruction(d * n + j, (BLANK, MARK if j in chosen else BLANK)) for j in range(1, n + 1)]
        ins = []
        for j in range(1, n + 1):
            ins.append(Instruction(d * n + j, (BLANK, top(level))))
            ins += build(level - 1, d + 1, sig.restrict(j))
            ins.append(Instruction(d * n + j, (BLANK, bottom(level))))
        return ins

    ins = build(k, 0, sigma) if n > 0 else []
    return GammaProgram(BINARY, total, Y, ins)


def selector_length_bound(k: int, n: int) -> int:
    return 2 * (k + 1) * n ** (k + 1)


def selector_member(k: int, sigma: SelectorFn, w) -> bool:
    """Membership in K_{n, sigma}: k blocks with exactly one 1 each pick rho,
    and the last block must have a 1 at some position of sigma(rho)."""
    w = BINARY.check(as_word(w))
    n = sigma.n
    if len(w) != (k + 1) * n:
        raise ProgramError(f"input must have length {(k + 1) * n}")
    if n == 0:
        return False
    rho = []
    for b in range(k):
        blk = w[b * n:(b + 1) * n]
        ones = [i + 1 for i, c in enumerate(blk) if c == "1"]
        if len(ones) != 1:
            return False
        rho.append(ones[0])
    last = w[k * n:]
    return any(last[j - 1] == "1" for j in sigma(tuple(rho)))
