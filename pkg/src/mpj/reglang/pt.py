"""Deciding whether a regular language is a union of ~k classes."""

from __future__ import annotations

from ..config import CapExceeded, state_cap


def _dead_states(d) -> set:
    """States from which no accepting state is reachable."""
    back = [set() for _ in range(d.n_states)]
    for q, row in enumerate(d.delta):
        for r in row:
            back[r].add(q)
    alive = set(d.accepting)
    stack = list(alive)
    while stack:
        r = stack.pop()
        for q in back[r]:
            if q not in alive:
                alive.add(q)
                stack.append(q)
    return set(range(d.n_states)) - alive


def _grow(subs, a, k):
    return frozenset(subs | {x + (a,) for x in subs if len(x) < k})


def _reaches_any(starts, targets, letters, k) -> bool:
    """Can appending letters to a word whose subword set is one of ``starts``
    give a set in ``targets``?  Sets outside every target's subsets are pruned,
    since subword sets only grow."""
    targets = set(targets)

    def inside(s):
        return any(s <= t for t in targets)

    stack = [s for s in starts if inside(s)]
    seen = set(stack)
    while stack:
        s = stack.pop()
        if s in targets:
            return True
        for a in letters:
            t = _grow(s, a, k)
            if t not in seen and inside(t):
                seen.add(t)
                stack.append(t)
    return False


def is_k_pt(d, k: int, quotient_cap=None) -> bool:
    """True iff L(d) is a union of ~k classes.

    Explores the reachable pairs (subwords of length <= k of the word read so
    far, DFA state); the language splits a class exactly when one subword set
    is reached together with an accepting and a rejecting state.  Only the
    right action of letters is needed, so the ~k quotient table is never built.

    Pairs whose state is dead (no accepting state reachable) are not expanded:
    everything below them is rejected, so the only possible clash is that an
    accepting subword set is reachable from one of them, which is searched for
    inside the subsets of that accepting set.  The complement is used when that
    leaves more to explore.  ``quotient_cap`` bounds the number of pairs.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    cap = state_cap() if quotient_cap is None else quotient_cap
    accepting = set(d.accepting)
    dead = _dead_states(d)
    full = _dead_states(type(d)(d.alphabet, d.n_states, d.start, d.delta,
                                frozenset(range(d.n_states)) - accepting))
    if len(full) > len(dead):
        accepting = set(range(d.n_states)) - accepting
        dead = full
    letters = list(d.alphabet)
    start = (frozenset([()]), d.start)
    seen = {start}
    stack = [start] if d.start not in dead else []
    entries = {start[0]} if d.start in dead else set()
    verdict = {}
    while stack:
        subs, q = stack.pop()
        acc = q in accepting
        if verdict.setdefault(subs, acc) != acc:
            return False
        row = d.delta[q]
        for g, a in enumerate(letters):
            nxt = (_grow(subs, a, k), row[g])
            if nxt in seen:
                continue
            seen.add(nxt)
            if len(seen) > cap:
                raise CapExceeded("k-PT search pairs", cap)
            if nxt[1] in dead:
                entries.add(nxt[0])
            else:
                stack.append(nxt)
    targets = [s for s, acc in verdict.items() if acc]
    return not _reaches_any(entries, targets, letters, k)
