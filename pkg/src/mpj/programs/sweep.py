"""Feedback-sweeping reductions: reading positions in the order 2,1,3,2,...
so that a program over a J monoid can see adjacent letters together."""

from __future__ import annotations

from dataclasses import dataclass

from ..reglang.expr import Complement, Concat, Intersection, ShuffleIdeal, SingleWord, Union
from ..words import Alphabet, as_word, concat, has_distinct_letters, power
from .core import GammaProgram, Instruction, ProgramError

SWEEP_ALPHABET = Alphabet(("a", "b", "c"))


def _identity_out(alphabet):
    return tuple(alphabet)


def feedback_sweep(n: int, alphabet=SWEEP_ALPHABET) -> GammaProgram:
    """Positions 2,1,3,2,...,n,n-1 with identity outputs (empty for n <= 1)."""
    alphabet = Alphabet.of(alphabet)
    if n < 0:
        raise ProgramError("n must be >= 0")
    out = _identity_out(alphabet)
    ins = []
    if n >= 2:
        for i in range(2, n + 1):
            ins.append(Instruction(i, out))
            ins.append(Instruction(i - 1, out))
    return GammaProgram(alphabet, n, alphabet, ins)


def sweep_source_language(alphabet=SWEEP_ALPHABET):
    """(a+b)* a c+ over {a, b, c}."""
    from ..reglang.expr import Letters, Star
    A = Alphabet.of(alphabet)
    ab = Star(Letters(frozenset("ab"), A))
    c = Letters(frozenset("c"), A)
    return Concat((ab, SingleWord("a", A), c, Star(c)), A)


def sweep_target_language(alphabet=SWEEP_ALPHABET):
    """Words with subword ca but none of the subwords cca, caa, cb."""
    A = Alphabet.of(alphabet)
    return Intersection((ShuffleIdeal("ca", A), Complement(ShuffleIdeal("cca", A)),
                         Complement(ShuffleIdeal("caa", A)), Complement(ShuffleIdeal("cb", A))), A)


# decorated sweep ---------------------------------------------------------------------

def dec(a, level: int):
    """Letter ``a`` decorated with ``level`` (level 0 stands for the plain letter)."""
    return (a, level)


def plain(word):
    return tuple(dec(a, 0) for a in word)


@dataclass(frozen=True)
class DecoratedSweepPlan:
    u: tuple
    x1: tuple
    x2: tuple
    alpha: int
    alphabet: Alphabet

    def __post_init__(self):
        A = Alphabet.of(self.alphabet)
        object.__setattr__(self, "alphabet", A)
        for name in ("u", "x1", "x2"):
            object.__setattr__(self, name, A.check(as_word(getattr(self, name))))
        if not self.u:
            raise ProgramError("the swept factor must be nonempty")
        if not has_distinct_letters(self.u):
            raise ProgramError("decorated sweeps need a factor with pairwise distinct letters")
        if self.alpha < 1:
            raise ProgramError("alpha must be >= 1")

    @property
    def levels(self) -> int:
        return 2 * len(self.u) - 1

    @property
    def decorated_alphabet(self) -> Alphabet:
        return self.alphabet.decorate(self.levels)

    def zeta(self, beta: int) -> tuple:
        """Target subword witnessing the factor at the beta-th copy of u."""
        u = self.u
        m = len(u)
        probe = [dec(u[m - j - 1], j) for j in range(1, m)]
        probe += [dec(u[j - 1], m + j - 2) for j in range(2, m + 1)]
        return concat(plain(self.x1), plain(power(u, beta)), probe,
                      plain(power(u, self.alpha - beta)), plain(self.x2))

    @property
    def forbidden(self) -> tuple:
        return concat(self.x1, power(self.u, self.alpha + 1), self.x2)

    def target_language(self):
        """K over the decorated alphabet."""
        A = self.decorated_alphabet
        zetas = tuple(ShuffleIdeal(self.zeta(b), A) for b in range(1, self.alpha + 1))
        return Intersection((Union(zetas, A), Complement(ShuffleIdeal(plain(self.forbidden), A))), A)

    def source_language(self):
        """(x1 u^a x2)⧢Σ* ∩ not (x1 u^(a+1) x2)⧢Σ* ∩ (x1⧢Σ*) u (x2⧢Σ*)."""
        A = self.alphabet
        return Intersection((
            ShuffleIdeal(concat(self.x1, power(self.u, self.alpha), self.x2), A),
            Complement(ShuffleIdeal(self.forbidden, A)),
            Concat((ShuffleIdeal(self.x1, A), SingleWord(self.u, A), ShuffleIdeal(self.x2, A)), A),
        ), A)


def sweep_length(m: int, n: int) -> int:
    return 0 if n < m else m - 1 + (n - m + 1) * (2 * m - 1)


def decorated_sweep(plan: DecoratedSweepPlan, n: int):
    """Returns ``(Γ-program over the decorated alphabet, target expression K)``."""
    A = plan.alphabet
    u = plan.u
    m = len(u)
    out_alpha = plan.decorated_alphabet

    def f(level):
        return tuple(dec(a, level) for a in A)

    ins = []
    if n >= m:
        ins += [Instruction(i, f(0)) for i in range(1, m)]
        for i in range(m, n + 1):
            ins.append(Instruction(i, f(0)))
            ins += [Instruction(i - j, f(j)) for j in range(1, m)]
            ins += [Instruction(i - m + j, f(m + j - 2)) for j in range(2, m + 1)]
    return GammaProgram(A, n, out_alpha, ins), plan.target_language()


# modular decoration --------------------------------------------------------------------

def modular_decoration(d: int, n: int, alphabet) -> GammaProgram:
    """Instruction j outputs the letter read, tagged with (j - 1) mod d."""
    if d < 1:
        raise ProgramError("d must be >= 1")
    A = Alphabet.of(alphabet)
    out_alpha = A.decorate(d)
    ins = [Instruction(j, tuple((a, (j - 1) % d) for a in A)) for j in range(1, n + 1)]
    return GammaProgram(A, n, out_alpha, ins)


def decorate_word(w, d: int, start: int = 0) -> tuple:
    """Letter j (1-based) of ``w`` tagged with ``(j + start - 1) mod d``."""
    return tuple((a, (j + start) % d) for j, a in enumerate(as_word(w)))
