"""Programs over finite monoids and Γ-programs (programs that output letters).

An instruction ``(p, f)`` reads the letter at 1-based input position ``p`` and
outputs ``f`` of it.  ``f`` is stored as a tuple aligned with the input
alphabet: ``out[i]`` is the output for ``alphabet.symbols[i]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .. import algebra
from ..config import DEFAULT_MONOID_CAP
from ..algebra import FiniteMonoid, GeneratedMorphism, direct_product, syntactic_monoid
from ..words import Alphabet, AlphabetError, as_word, format_symbol, parse_symbol


class ProgramError(ValueError):
    pass


@dataclass(frozen=True)
class Instruction:
    pos: int
    out: tuple

    def apply(self, alphabet, word):
        return self.out[alphabet.index(word[self.pos - 1])]


def _check_word(alphabet, n, w):
    w = as_word(w)
    if len(w) != n:
        raise ProgramError(f"input has length {len(w)}, program expects {n}")
    return alphabet.check(w)


def encode_words(alphabet, words):
    """Integer array of letter indices, one row per word (all of one length)."""
    idx = alphabet._index
    words = list(words)
    if not words:
        return np.zeros((0, 0), dtype=np.int64)
    return np.array([[idx[c] for c in w] for w in words], dtype=np.int64).reshape(len(words), -1)


def all_words_array(alphabet, n):
    """Every word of length ``n`` as a letter-index array in length-lex order."""
    s = len(alphabet)
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.indices((s,) * n).reshape(n, -1).T
    return grid.astype(np.int64)


class _Base:
    def _validate(self):
        self.alphabet = Alphabet.of(self.alphabet)
        if self.n < 0:
            raise ProgramError("input length must be >= 0")
        ins = []
        for ins_ in self.instructions:
            if not isinstance(ins_, Instruction):
                pos, out = ins_
                ins_ = Instruction(int(pos), tuple(out))
            if not 1 <= ins_.pos <= self.n:
                raise ProgramError(f"instruction position {ins_.pos} outside [1, {self.n}]")
            if len(ins_.out) != len(self.alphabet):
                raise ProgramError("instruction map is not total on the input alphabet")
            ins.append(ins_)
        self.instructions = tuple(ins)

    def __len__(self):
        return len(self.instructions)

    @property
    def positions(self):
        return [i.pos for i in self.instructions]


class Program(_Base):
    """A program over a finite monoid with an accepting subset."""

    def __init__(self, alphabet, n, monoid: FiniteMonoid, instructions, accept):
        self.alphabet = alphabet
        self.n = n
        self.monoid = monoid
        self.instructions = instructions
        self.accept = frozenset(int(x) for x in accept)
        self._validate()
        if monoid.identity is None:
            raise ProgramError("programs need a monoid target")
        for ins in self.instructions:
            for x in ins.out:
                if not 0 <= x < monoid.size:
                    raise ProgramError(f"instruction output {x} is not a monoid element")

    def eval_trace(self, w) -> tuple:
        w = _check_word(self.alphabet, self.n, w)
        idx = self.alphabet._index
        return tuple(ins.out[idx[w[ins.pos - 1]]] for ins in self.instructions)

    def eval(self, w) -> int:
        return self.monoid.product(self.eval_trace(w))

    def recognizes(self, w) -> bool:
        return self.eval(w) in self.accept

    def eval_batch(self, W):
        """Outputs for many words at once; ``W`` is a letter-index array."""
        W = np.asarray(W, dtype=np.int64)
        t = self.monoid.table
        acc = np.full(W.shape[0], self.monoid.identity, dtype=np.int64)
        for ins in self.instructions:
            out = np.asarray(ins.out, dtype=np.int64)[W[:, ins.pos - 1]]
            acc = t[acc, out]
        return acc

    def recognizes_batch(self, W):
        acc = np.zeros(self.monoid.size, dtype=bool)
        acc[list(self.accept)] = True
        return acc[self.eval_batch(W)]

    def subprogram(self, indices) -> "Program":
        """Instructions at the given 0-based indices, kept in program order."""
        keep = sorted(set(indices))
        return Program(self.alphabet, self.n, self.monoid, [self.instructions[i] for i in keep], self.accept)

    def __add__(self, other: "Program") -> "Program":
        if (self.alphabet, self.n) != (other.alphabet, other.n) or self.monoid != other.monoid:
            raise ProgramError("can only concatenate programs with equal shape and monoid")
        return Program(self.alphabet, self.n, self.monoid, self.instructions + other.instructions,
                       self.accept)

    def complement(self) -> "Program":
        return Program(self.alphabet, self.n, self.monoid, self.instructions,
                       set(range(self.monoid.size)) - self.accept)

    @property
    def components(self):
        return [self.monoid]

    def to_json(self) -> dict:
        syms = [format_symbol(a) for a in self.alphabet]
        return {
            "n": self.n,
            "alphabet": syms,
            "monoid": self.monoid.to_json(),
            "instructions": [{"pos": i.pos, "map": dict(zip(syms, i.out))} for i in self.instructions],
            "accept": sorted(self.accept),
        }

    @classmethod
    def from_json(cls, obj) -> "Program":
        alpha = Alphabet(tuple(parse_symbol(a) for a in obj["alphabet"]))
        mon = algebra.from_json(obj["monoid"])
        if mon.identity is None:
            raise ProgramError("program monoid must have an identity")
        ins = [Instruction(d["pos"], tuple(int(d["map"][format_symbol(a)]) for a in alpha))
               for d in obj["instructions"]]
        return cls(alpha, obj["n"], mon, ins, obj["accept"])

    def __eq__(self, other):
        return (isinstance(other, Program) and self.alphabet == other.alphabet and self.n == other.n
                and self.monoid == other.monoid and self.instructions == other.instructions
                and self.accept == other.accept)

    def __repr__(self):
        return f"Program(n={self.n}, length={len(self)}, monoid size={self.monoid.size})"


class GammaProgram(_Base):
    """A program whose instructions output letters of ``out_alphabet``."""

    def __init__(self, alphabet, n, out_alphabet, instructions):
        self.alphabet = alphabet
        self.n = n
        self.out_alphabet = Alphabet.of(out_alphabet)
        self.instructions = instructions
        self._validate()
        for ins in self.instructions:
            for x in ins.out:
                if x not in self.out_alphabet:
                    raise ProgramError(f"output {x!r} is not in the output alphabet")

    def gamma_eval(self, w) -> tuple:
        w = _check_word(self.alphabet, self.n, w)
        idx = self.alphabet._index
        return tuple(ins.out[idx[w[ins.pos - 1]]] for ins in self.instructions)

    __call__ = gamma_eval

    def eval_batch(self, W):
        """Output letter indices (into ``out_alphabet``) for many words at once."""
        W = np.asarray(W, dtype=np.int64)
        oidx = self.out_alphabet._index
        cols = []
        for ins in self.instructions:
            table = np.array([oidx[x] for x in ins.out], dtype=np.int64)
            cols.append(table[W[:, ins.pos - 1]])
        if not cols:
            return np.zeros((W.shape[0], 0), dtype=np.int64)
        return np.stack(cols, axis=1)

    def subprogram(self, indices) -> "GammaProgram":
        keep = sorted(set(indices))
        return GammaProgram(self.alphabet, self.n, self.out_alphabet, [self.instructions[i] for i in keep])

    def with_instructions(self, instructions) -> "GammaProgram":
        return GammaProgram(self.alphabet, self.n, self.out_alphabet, instructions)

    def to_json(self) -> dict:
        syms = [format_symbol(a) for a in self.alphabet]
        ins = []
        for i in self.instructions:
            if tuple(i.out) == tuple(self.alphabet):
                ins.append({"pos": i.pos, "map": "id"})
            else:
                ins.append({"pos": i.pos, "map": {s: format_symbol(x) for s, x in zip(syms, i.out)}})
        return {
            "n": self.n,
            "alphabet": syms,
            "out_alphabet": [format_symbol(a) for a in self.out_alphabet],
            "instructions": ins,
        }

    @classmethod
    def from_json(cls, obj) -> "GammaProgram":
        alpha = Alphabet(tuple(parse_symbol(a) for a in obj["alphabet"]))
        out_alpha = Alphabet(tuple(parse_symbol(a) for a in obj["out_alphabet"]))
        ins = []
        for d in obj["instructions"]:
            if d["map"] == "id":
                ins.append(Instruction(d["pos"], tuple(alpha)))
            else:
                ins.append(Instruction(d["pos"], tuple(parse_symbol(d["map"][format_symbol(a)]) for a in alpha)))
        return cls(alpha, obj["n"], out_alpha, ins)

    def __eq__(self, other):
        return (isinstance(other, GammaProgram) and self.alphabet == other.alphabet
                and self.n == other.n and self.out_alphabet == other.out_alphabet
                and self.instructions == other.instructions)

    def __repr__(self):
        return f"GammaProgram(n={self.n}, length={len(self)})"


def eval_program(p: Program, w):
    return p.eval(w)


def eval_trace(p: Program, w):
    return p.eval_trace(w)


def recognizes(p, w) -> bool:
    return p.recognizes(w)


def gamma_eval(g: GammaProgram, w):
    return g.gamma_eval(w)


def empty_program(alphabet, n, monoid, accept) -> Program:
    return Program(alphabet, n, monoid, [], accept)


# constructions -----------------------------------------------------------------

def compose_reduction(g: GammaProgram, q: Program) -> Program:
    """Program on g's inputs recognizing ``{w : g(w) is recognized by q}``.

    Each instruction ``(p, f)`` of ``q`` reads the ``p``-th output of ``g``; the
    composite instead reads the input position that output came from and maps
    letters through g's output map followed by ``f``.  When ``q`` reads its
    input positions in order (as morphism programs do) the composite has
    exactly ``len(g)`` instructions.
    """
    if q.n != len(g):
        raise ProgramError(f"outer program expects length {q.n}, reduction outputs {len(g)} letters")
    if q.alphabet != g.out_alphabet:
        raise AlphabetError("outer program alphabet differs from the reduction's output alphabet")
    gidx = q.alphabet._index
    ins = []
    for qi in q.instructions:
        gi = g.instructions[qi.pos - 1]
        ins.append(Instruction(gi.pos, tuple(qi.out[gidx[x]] for x in gi.out)))
    return Program(g.alphabet, g.n, q.monoid, ins, q.accept)


def compose_gamma(g1: GammaProgram, g2: GammaProgram) -> GammaProgram:
    """The Γ-program computing ``g2(g1(w))``."""
    if g2.n != len(g1) or g2.alphabet != g1.out_alphabet:
        raise ProgramError("reductions do not compose")
    idx = g2.alphabet._index
    ins = []
    for i2 in g2.instructions:
        i1 = g1.instructions[i2.pos - 1]
        ins.append(Instruction(i1.pos, tuple(i2.out[idx[x]] for x in i1.out)))
    return GammaProgram(g1.alphabet, g1.n, g2.out_alphabet, ins)


def _pair_accept(m1, m2, a1, a2, op):
    b = m2.size
    acc = set()
    for x in range(m1.size):
        for y in range(b):
            p, q = x in a1, y in a2
            if (op == "and" and p and q) or (op == "or" and (p or q)) or (op == "andnot" and p and not q):
                acc.add(x * b + y)
    return acc


def boolean_combine(p1: Program, p2: Program, op: str) -> Program:
    """Flat program over the direct product recognizing ``L1 op L2``."""
    if op not in ("and", "or", "andnot"):
        raise ProgramError(f"unknown Boolean operation {op!r}")
    if p1.alphabet != p2.alphabet or p1.n != p2.n:
        raise ProgramError("programs must share input alphabet and length")
    m1, m2 = p1.monoid, p2.monoid
    prod = direct_product(m1, m2)
    b = m2.size
    ins = [Instruction(i.pos, tuple(x * b + m2.identity for x in i.out)) for i in p1.instructions]
    ins += [Instruction(i.pos, tuple(m1.identity * b + y for y in i.out)) for i in p2.instructions]
    return Program(p1.alphabet, p1.n, prod, ins, _pair_accept(m1, m2, p1.accept, p2.accept, op))


def morphism_program(phi: GeneratedMorphism, accept, n: int) -> Program:
    """Read positions 1..n in order through the letter images of ``phi``."""
    out = tuple(phi.letter_image[a] for a in phi.alphabet)
    return Program(phi.alphabet, n, phi.target, [Instruction(i, out) for i in range(1, n + 1)], accept)


def dfa_program(d, n: int, cap=DEFAULT_MONOID_CAP) -> Program:
    """Morphism program over the syntactic monoid of ``d``'s language."""
    mon, phi, acc = syntactic_monoid(d, cap)
    return morphism_program(phi, acc, n)


def _edge_program(u, n, alphabet, from_end: bool) -> Program:
    from ..reglang.dfa import shuffle_ideal_dfa

    alphabet = Alphabet.of(alphabet)
    u = alphabet.check(u)
    mon, phi, acc = syntactic_monoid(shuffle_ideal_dfa(u, alphabet))
    if n < len(u):
        return Program(alphabet, n, mon, [], [])
    out = tuple(phi.letter_image[a] for a in alphabet)
    start = n - len(u) + 1 if from_end else 1
    return Program(alphabet, n, mon, [Instruction(start + j, out) for j in range(len(u))], acc)


def prefix_program(u, n: int, alphabet) -> Program:
    """Recognizes the length-n words starting with ``u``.

    Reads the first ``|u|`` letters through the syntactic morphism of the
    shuffle ideal of ``u``: a word of length ``|u|`` has ``u`` as a subword
    exactly when it equals ``u``.
    """
    return _edge_program(u, n, alphabet, False)


def suffix_program(u, n: int, alphabet) -> Program:
    return _edge_program(u, n, alphabet, True)


# programs with several monoid components ---------------------------------------

def _eval_formula(f, bits):
    kind = f[0]
    if kind == "var":
        return bits[f[1]]
    if kind == "not":
        return not _eval_formula(f[1], bits)
    if kind == "and":
        return all(_eval_formula(g, bits) for g in f[1])
    if kind == "or":
        return any(_eval_formula(g, bits) for g in f[1])
    if kind == "const":
        return f[1]
    raise ProgramError(f"bad formula node {kind!r}")


def _eval_formula_batch(f, bits):
    kind = f[0]
    if kind == "var":
        return bits[f[1]]
    if kind == "not":
        return ~_eval_formula_batch(f[1], bits)
    if kind in ("and", "or"):
        parts = [_eval_formula_batch(g, bits) for g in f[1]]
        n = bits[0].shape[0] if bits else 0
        acc = np.full(n, kind == "and", dtype=bool)
        for p in parts:
            acc = (acc & p) if kind == "and" else (acc | p)
        return acc
    if kind == "const":
        n = bits[0].shape[0] if bits else 0
        return np.full(n, f[1], dtype=bool)
    raise ProgramError(f"bad formula node {kind!r}")


class CombinedProgram:
    """Programs over several monoids run side by side, i.e. one program over
    their direct product, kept unflattened.  Acceptance is a Boolean formula
    over the components' own acceptance: ``("var", i)``, ``("not", f)``,
    ``("and", [fs])``, ``("or", [fs])`` or ``("const", bool)``.
    """

    def __init__(self, alphabet, n, parts, formula):
        self.alphabet = Alphabet.of(alphabet)
        self.n = n
        self.parts = list(parts)
        self.formula = formula
        for p in self.parts:
            if p.alphabet != self.alphabet or p.n != n:
                raise ProgramError("all components must share input alphabet and length")

    def __len__(self):
        return sum(len(p) for p in self.parts)

    @property
    def components(self):
        return [p.monoid for p in self.parts]

    def eval(self, w):
        return tuple(p.eval(w) for p in self.parts)

    def recognizes(self, w) -> bool:
        return _eval_formula(self.formula, [p.recognizes(w) for p in self.parts])

    def recognizes_batch(self, W):
        bits = [p.recognizes_batch(W) for p in self.parts]
        if not bits:
            return _eval_formula_batch(self.formula, [np.zeros(np.asarray(W).shape[0], dtype=bool)])
        return _eval_formula_batch(self.formula, bits)

    def flatten(self, cap=algebra.DEFAULT_MONOID_CAP) -> Program:
        """One program over the explicit direct product of the components."""
        if not self.parts:
            mon = algebra.trivial_monoid()
            acc = [0] if _eval_formula(self.formula, []) else []
            return Program(self.alphabet, self.n, mon, [], acc)
        size = 1
        for p in self.parts:
            size *= p.monoid.size
        if size > cap:
            from ..config import CapExceeded
            raise CapExceeded("monoid elements", cap, "flattening a combined program")
        mon = self.parts[0].monoid
        for p in self.parts[1:]:
            mon = direct_product(mon, p.monoid)
        sizes = [p.monoid.size for p in self.parts]
        strides = [int(np.prod(sizes[i + 1:])) for i in range(len(sizes))]
        idents = [p.monoid.identity for p in self.parts]
        base = sum(e * s for e, s in zip(idents, strides))
        ins = []
        for k, p in enumerate(self.parts):
            for i in p.instructions:
                ins.append(Instruction(i.pos, tuple(base + (x - idents[k]) * strides[k] for x in i.out)))
        acc = []
        for combo in itertools.product(*(range(s) for s in sizes)):
            bits = [c in p.accept for c, p in zip(combo, self.parts)]
            if _eval_formula(self.formula, bits):
                acc.append(sum(c * s for c, s in zip(combo, strides)))
        return Program(self.alphabet, self.n, mon, ins, acc)

    def to_json(self) -> dict:
        return {"n": self.n, "alphabet": [format_symbol(a) for a in self.alphabet],
                "parts": [p.to_json() for p in self.parts], "formula": _formula_json(self.formula)}

    @classmethod
    def from_json(cls, obj) -> "CombinedProgram":
        alpha = Alphabet(tuple(parse_symbol(a) for a in obj["alphabet"]))
        return cls(alpha, obj["n"], [Program.from_json(p) for p in obj["parts"]],
                   _formula_from_json(obj["formula"]))

    def __repr__(self):
        return f"CombinedProgram(n={self.n}, parts={len(self.parts)}, length={len(self)})"


def _formula_json(f):
    kind = f[0]
    if kind in ("var", "const"):
        return [kind, f[1]]
    if kind == "not":
        return ["not", _formula_json(f[1])]
    return [kind, [_formula_json(g) for g in f[1]]]


def _formula_from_json(f):
    kind = f[0]
    if kind in ("var", "const"):
        return (kind, f[1])
    if kind == "not":
        return ("not", _formula_from_json(f[1]))
    return (kind, [_formula_from_json(g) for g in f[1]])


def program_from_json(obj):
    if "parts" in obj:
        return CombinedProgram.from_json(obj)
    if "out_alphabet" in obj:
        return GammaProgram.from_json(obj)
    return Program.from_json(obj)
