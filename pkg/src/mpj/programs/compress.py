"""Subprogram compression: keep a polynomial number of instructions while
preserving which short words over the monoid occur as subwords of the trace."""

from __future__ import annotations

import itertools
import math

from .core import Program


def compression_constant(k: int, alphabet_size: int) -> int:
    """k! * |Σ|^ceil(k/2)."""
    return math.factorial(k) * alphabet_size ** math.ceil(k / 2)


def subword_index_bound(k: int, alphabet_size: int, n: int) -> int:
    return compression_constant(k, alphabet_size) * n ** math.ceil(k / 2)


def equivalent_length_bound(k: int, monoid_size: int, alphabet_size: int, n: int) -> int:
    """(m^0 + ... + m^k) * c_k * n^ceil(k/2)."""
    words = sum(monoid_size ** j for j in range(k + 1))
    return words * subword_index_bound(k, alphabet_size, n)


def summed_length_bound(k: int, monoid_size: int, alphabet_size: int, n: int) -> int:
    """Sum of the per-t bounds over all nonempty t of length <= k; never larger
    than :func:`equivalent_length_bound`."""
    return sum(monoid_size ** j * subword_index_bound(j, alphabet_size, n) for j in range(1, k + 1))


def _firsts_lasts(p: Program, window, first_elem, last_elem):
    """Indices (within ``window``) of the first instruction per (position, letter)
    outputting ``first_elem`` and the last one outputting ``last_elem``."""
    firsts, lasts = {}, {}
    ins = p.instructions
    nsym = len(p.alphabet)
    for idx in window:
        i = ins[idx]
        for a in range(nsym):
            x = i.out[a]
            key = (i.pos, a)
            if first_elem is not None and x == first_elem and key not in firsts:
                firsts[key] = idx
            if last_elem is not None and x == last_elem:
                lasts[key] = idx
    return set(firsts.values()) | set(lasts.values())


def _indices(p: Program, t, lo: int, hi: int) -> set:
    """Index set for ``t`` within the instruction window ``[lo, hi)`` (0-based)."""
    k = len(t)
    if k == 0 or lo >= hi:
        return set()
    window = range(lo, hi)
    if k == 1:
        return _firsts_lasts(p, window, t[0], None)
    if k == 2:
        return _firsts_lasts(p, window, t[0], t[1])
    ends = sorted(_firsts_lasts(p, window, t[0], t[-1]))
    out = set(ends)
    for j in range(len(ends) - 1):
        a, b = ends[j] + 1, ends[j + 1]
        if a >= b:
            continue
        for alpha in range(1, k - 1):
            for beta in range(alpha, k - 1):
                out |= _indices(p, t[alpha:beta + 1], a, b)
    return out


def compress_subword_indices(p: Program, t) -> set:
    """0-based instruction indices I such that, for every I' containing I and
    every input w, t is a subword of the trace of p on w iff it is a subword of
    the trace of p restricted to I'."""
    return _indices(p, tuple(t), 0, len(p))


def compress_equivalent(p: Program, k: int):
    """Subprogram whose trace has the same subwords of length <= k as p's on
    every input.  Returns ``(subprogram, kept indices)``."""
    keep = set()
    elems = range(p.monoid.size)
    for j in range(1, k + 1):
        for t in itertools.product(elems, repeat=j):
            keep |= compress_subword_indices(p, t)
    return p.subprogram(keep), keep


def random_program(rng, alphabet, n: int, monoid, max_len: int = 40, mean_len: float = 20.0, accept=None):
    """Uniform positions and letter maps; geometric length with the given mean,
    truncated at ``max_len``."""
    from .core import Instruction

    if n == 0:
        length = 0
    else:
        q = 1.0 / (mean_len + 1.0)
        length = 0
        while rng.random() > q and length < max_len:
            length += 1
    ins = []
    for _ in range(length):
        pos = rng.randint(1, n)
        ins.append(Instruction(pos, tuple(rng.randrange(monoid.size) for _ in alphabet)))
    if accept is None:
        accept = [x for x in range(monoid.size) if rng.random() < 0.5]
    return Program(alphabet, n, monoid, ins, accept)
