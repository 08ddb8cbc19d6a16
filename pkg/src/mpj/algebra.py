"""Finite semigroups and monoids given by multiplication tables.

Elements are the integers ``0..size-1``.  Tables are numpy arrays so that the
variety equations can be checked over all element pairs at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_MONOID_CAP, CapExceeded
from .words import Alphabet, SubwordSet, as_word, concat_subwords, format_symbol, parse_symbol, subword_set

VARIETIES = ("A", "DA", "J")
_ROW_CHUNK = 512


class AlgebraError(ValueError):
    pass


class FiniteSemigroup:
    def __init__(self, table, identity=None, gen_labels=None, _trusted=False):
        t = np.array(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise AlgebraError("table must be a nonempty square array")
        m = t.shape[0]
        if not _trusted:
            if t.min() < 0 or t.max() >= m:
                raise AlgebraError("table entry out of range")
            if identity is not None:
                e = int(identity)
                if not (0 <= e < m) or not (np.array_equal(t[e], np.arange(m))
                                            and np.array_equal(t[:, e], np.arange(m))):
                    raise AlgebraError(f"element {identity} is not an identity")
            bad = _associativity_violation(t)
            if bad is not None:
                raise AlgebraError("table is not associative at (%d, %d, %d)" % bad)
        t.setflags(write=False)
        self.table = t
        self.size = m
        self.identity = None if identity is None else int(identity)
        self.gen_labels = dict(gen_labels or {})
        self._omega = None

    # basic arithmetic -----------------------------------------------------

    def mul(self, x, y) -> int:
        return int(self.table[x, y])

    def product(self, elems, start=None):
        """Ordered product; the empty product is the identity (or ``start``)."""
        acc = self.identity if start is None else start
        t = self.table
        for x in elems:
            acc = x if acc is None else int(t[acc, x])
        if acc is None:
            raise AlgebraError("empty product in a semigroup without identity")
        return acc

    def power(self, x, e: int) -> int:
        if e < 1:
            if self.identity is None:
                raise AlgebraError("x^0 needs an identity")
            return self.identity
        return int(self.power_vec(np.array([x]), e)[0])

    def power_vec(self, xs, e: int):
        """Elementwise ``x^e`` (``e >= 1``) for an integer array of elements."""
        t = self.table
        result = None
        base = np.asarray(xs, dtype=np.int64)
        while e:
            if e & 1:
                result = base if result is None else t[result, base]
            e >>= 1
            if e:
                base = t[base, base]
        return result

    @property
    def omega(self) -> int:
        if self._omega is None:
            self._omega = idempotent_power(self)
        return self._omega

    def idempotents(self) -> list[int]:
        d = np.diagonal(self.table)
        return [int(x) for x in np.nonzero(d == np.arange(self.size))[0]]

    @property
    def is_monoid(self) -> bool:
        return self.identity is not None

    def find_identity(self):
        r = np.arange(self.size)
        for e in range(self.size):
            if np.array_equal(self.table[e], r) and np.array_equal(self.table[:, e], r):
                return e
        return None

    def subsemigroup(self, elements, identity=None):
        """Restriction of the table to a multiplicatively closed subset.

        Returns the new structure and the list mapping new indices to old ones.
        """
        elements = list(elements)
        pos = {x: i for i, x in enumerate(elements)}
        sub = self.table[np.ix_(elements, elements)]
        try:
            new = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub)
        except KeyError:
            raise AlgebraError("subset is not closed under multiplication") from None
        ident = None if identity is None else pos[identity]
        cls = FiniteMonoid if ident is not None else FiniteSemigroup
        return cls(new, ident, _trusted=True), elements

    # serialisation ---------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "identity": self.identity,
            "table": self.table.tolist(),
            "gen_labels": {k: v for k, v in self.gen_labels.items()},
        }

    def __eq__(self, other):
        return (isinstance(other, FiniteSemigroup) and self.size == other.size
                and self.identity == other.identity
                and np.array_equal(self.table, other.table)
                and self.gen_labels == other.gen_labels)

    def __hash__(self):
        return hash((self.size, self.identity, self.table.tobytes()))

    def __repr__(self):
        kind = type(self).__name__
        return f"{kind}(size={self.size}, identity={self.identity})"


class FiniteMonoid(FiniteSemigroup):
    def __init__(self, table, identity=0, gen_labels=None, _trusted=False):
        if identity is None:
            raise AlgebraError("a monoid needs an identity")
        super().__init__(table, identity, gen_labels, _trusted)


def _associativity_violation(t):
    m = t.shape[0]
    rows = max(1, 4_000_000 // (m * m))
    for lo in range(0, m, rows):
        xs = np.arange(lo, min(m, lo + rows))
        # (x y) z versus x (y z) for x in the chunk and all y, z
        left = t[t[xs]]            # [x, y, z] = (xy)z
        right = t[xs][:, t]        # [x, y, z] = x(yz)
        diff = left != right
        if diff.any():
            x, y, z = np.argwhere(diff)[0]
            return int(xs[x]), int(y), int(z)
    return None


def validate_and_build(table, identity=None, gen_labels=None, cap=DEFAULT_MONOID_CAP):
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise AlgebraError("table must be square")
    if t.shape[0] > cap:
        raise CapExceeded("monoid elements", cap)
    if identity is None:
        return FiniteSemigroup(t, None, gen_labels)
    s = FiniteMonoid(t, identity, gen_labels)
    _ = s.omega
    return s


def from_json(obj, cap=DEFAULT_MONOID_CAP):
    return validate_and_build(obj["table"], obj.get("identity"), obj.get("gen_labels"), cap)


# idempotent power and equations --------------------------------------------

def index_period(s: FiniteSemigroup, x: int):
    """Smallest ``i`` and ``p`` with ``x^i = x^(i+p)``."""
    seen = {}
    y, e = x, 1
    t = s.table
    while y not in seen:
        seen[y] = e
        y = int(t[y, x])
        e += 1
    i = seen[y]
    return i, e - i


def idempotent_power(s: FiniteSemigroup) -> int:
    """Least ``w >= 1`` with ``x^w = x^(2w)`` for every element."""
    lcm, max_index = 1, 1
    for x in range(s.size):
        i, p = index_period(s, x)
        lcm = lcm * p // math.gcd(lcm, p)
        max_index = max(max_index, i)
    return lcm * (-(-max_index // lcm))


def check_variety(m: FiniteSemigroup, variety: str, omega=None) -> bool:
    """Whether the defining equation of A, DA or J holds for all elements."""
    variety = variety.upper()
    if variety not in VARIETIES:
        raise ValueError(f"unknown variety {variety!r}; expected one of {VARIETIES}")
    t = m.table
    n = m.size
    w = m.omega if omega is None else omega
    xs_all = np.arange(n)
    if variety == "A":
        xw = m.power_vec(xs_all, w)
        return bool(np.array_equal(t[xw, xs_all], xw))
    for lo in range(0, n, _ROW_CHUNK):
        xs = xs_all[lo:lo + _ROW_CHUNK]
        xy = t[xs]                                   # [x, y]
        e = m.power_vec(xy, w)                       # (xy)^w
        ex = t[e, xs[:, None]]                       # (xy)^w x
        if variety == "J":
            if not np.array_equal(ex, e):
                return False
            if not np.array_equal(t[xs_all[None, :], e], e):   # y (xy)^w
                return False
        else:
            if not np.array_equal(t[ex, e], e):
                return False
    return True


def local_monoid(s: FiniteSemigroup, e: int) -> FiniteMonoid:
    """The monoid eSe with identity e."""
    t = s.table
    elems = sorted(set(int(v) for v in t[t[e], e]))
    elems.remove(e)
    elems.insert(0, e)
    sub, _ = s.subsemigroup(elems, identity=e)
    return sub


def is_locally_J(s: FiniteSemigroup) -> bool:
    return all(check_variety(local_monoid(s, e), "J") for e in s.idempotents())


def direct_product(m1: FiniteSemigroup, m2: FiniteSemigroup) -> FiniteSemigroup:
    """Componentwise product; the pair (i, j) has index ``i * m2.size + j``."""
    a, b = m1.size, m2.size
    t = (m1.table[:, None, :, None] * b + m2.table[None, :, None, :]).reshape(a * b, a * b)
    if m1.identity is not None and m2.identity is not None:
        return FiniteMonoid(t, m1.identity * b + m2.identity, _trusted=True)
    return FiniteSemigroup(t, None, _trusted=True)


def trivial_monoid() -> FiniteMonoid:
    return FiniteMonoid([[0]], 0, _trusted=True)


def cyclic_group(n: int) -> FiniteMonoid:
    r = np.arange(n)
    return FiniteMonoid((r[:, None] + r[None, :]) % n, 0, _trusted=True)


def u1() -> FiniteMonoid:
    """The two-element monoid {1, 0}: element 0 is the identity, 1 is absorbing."""
    return FiniteMonoid([[0, 1], [1, 1]], 0, _trusted=True)


# morphisms -------------------------------------------------------------------

class GeneratedMorphism:
    """A morphism from the free monoid (or semigroup) over ``alphabet`` into ``target``."""

    def __init__(self, alphabet, target: FiniteSemigroup, letter_image):
        self.alphabet = Alphabet.of(alphabet)
        self.target = target
        self.letter_image = {a: int(letter_image[a]) for a in self.alphabet}
        for a, x in self.letter_image.items():
            if not 0 <= x < target.size:
                raise AlgebraError(f"image of {a!r} out of range")
        self.surjective = len(self.generated()) == target.size

    def generated(self) -> set:
        """Elements that are images of words (nonempty words if the target lacks identity)."""
        gens = sorted(set(self.letter_image.values()))
        t = self.target.table
        seen = set(gens)
        if self.target.identity is not None:
            seen.add(self.target.identity)
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(t[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    def image(self, word) -> int:
        li = self.letter_image
        return self.target.product([li[c] for c in as_word(word)])

    __call__ = image

    def to_json(self) -> dict:
        return {
            "alphabet": [format_symbol(a) for a in self.alphabet],
            "letter_image": {format_symbol(a): x for a, x in self.letter_image.items()},
        }

    @classmethod
    def from_json(cls, obj, target) -> "GeneratedMorphism":
        alpha = Alphabet(tuple(parse_symbol(a) for a in obj["alphabet"]))
        li = {parse_symbol(k): v for k, v in obj["letter_image"].items()}
        return cls(alpha, target, li)


def _monoid_from_right_action(identity_obj, letters, act, cap, what):
    """BFS closure of ``identity_obj`` under right multiplication by letters.

    ``act(obj, letter_index)`` returns the object for ``obj * letter``; objects
    must be hashable.  Returns ``(objects, table, letter_elems)`` where the table
    is filled column by column: if ``j = p * g`` then ``i * j = (i * p) * g``.
    """
    objs = [identity_obj]
    ids = {identity_obj: 0}
    right = []          # right[i][g]
    parent = [None]
    i = 0
    while i < len(objs):
        row = []
        for g in range(len(letters)):
            o = act(objs[i], g)
            j = ids.get(o)
            if j is None:
                j = len(objs)
                if j >= cap:
                    raise CapExceeded(what, cap)
                ids[o] = j
                objs.append(o)
                parent.append((i, g))
            row.append(j)
        right.append(row)
        i += 1
    m = len(objs)
    R = np.asarray(right, dtype=np.int64).reshape(m, len(letters))
    table = np.empty((m, m), dtype=np.int64)
    table[:, 0] = np.arange(m)
    for j in range(1, m):
        p, g = parent[j]
        table[:, j] = R[table[:, p], g]
    letter_elems = [int(R[0, g]) for g in range(len(letters))]
    return objs, table, letter_elems


def transition_monoid(dfa, cap=DEFAULT_MONOID_CAP):
    """Monoid of state transformations; words act left to right."""
    letters = dfa.alphabet.symbols
    cols = [tuple(dfa.delta[q][g] for q in range(dfa.n_states)) for g in range(len(letters))]

    def act(f, g):
        c = cols[g]
        return tuple(c[x] for x in f)

    ident = tuple(range(dfa.n_states))
    objs, table, letter_elems = _monoid_from_right_action(ident, letters, act, cap, "monoid elements")
    labels = {format_symbol(a): x for a, x in zip(letters, letter_elems)}
    mon = FiniteMonoid(table, 0, labels, _trusted=True)
    mon.transformations = objs
    phi = GeneratedMorphism(dfa.alphabet, mon, dict(zip(letters, letter_elems)))
    return mon, phi


def syntactic_monoid(dfa, cap=DEFAULT_MONOID_CAP):
    """Returns ``(monoid, morphism, accept_set)`` for the language of ``dfa``."""
    from .reglang.dfa import minimize

    d = minimize(dfa)
    mon, phi = transition_monoid(d, cap)
    acc = frozenset(i for i, f in enumerate(mon.transformations) if f[d.start] in d.accepting)
    return mon, phi, acc


def syntactic_semigroup(dfa, cap=DEFAULT_MONOID_CAP):
    """Image of the nonempty words under the syntactic morphism, with the
    morphism onto it."""
    mon, phi, _ = syntactic_monoid(dfa, cap)
    return image_semigroup(phi)


def image_semigroup(phi: GeneratedMorphism):
    """Subsemigroup generated by the letter images, elements in BFS order.

    Returns ``(semigroup, morphism onto it)``."""
    t = phi.target.table
    gens = [phi.letter_image[a] for a in phi.alphabet]
    order = []
    seen = set()
    for g in gens:
        if g not in seen:
            seen.add(g)
            order.append(g)
    i = 0
    while i < len(order):
        for g in gens:
            y = int(t[order[i], g])
            if y not in seen:
                seen.add(y)
                order.append(y)
        i += 1
    pos = {x: k for k, x in enumerate(order)}
    sub, _ = phi.target.subsemigroup(order)
    ident = sub.find_identity()
    if ident is not None:
        sub = FiniteMonoid(sub.table, ident, _trusted=True)
    sub.gen_labels = {format_symbol(a): pos[phi.letter_image[a]] for a in phi.alphabet}
    sub.elements = order
    psi = GeneratedMorphism(phi.alphabet, sub, {a: pos[phi.letter_image[a]] for a in phi.alphabet})
    return sub, psi


@dataclass
class StableStructure:
    k: int
    stable_set: frozenset          # elements of the target forming the stable semigroup
    stable_semigroup: FiniteSemigroup
    stable_monoid: FiniteMonoid
    adjoined_identity: bool


def length_images(phi: GeneratedMorphism, j: int):
    """The set of images of words of length exactly ``j``."""
    t = phi.target.table
    gens = np.array(sorted(set(phi.letter_image.values())), dtype=np.int64)
    cur = np.array([phi.target.identity], dtype=np.int64) if j == 0 else gens
    for _ in range(max(0, j - 1)):
        cur = np.unique(t[np.ix_(cur, gens)])
    return frozenset(int(x) for x in cur)


def stable_pair(phi: GeneratedMorphism) -> StableStructure:
    target = phi.target
    m = target.size
    t = target.table
    gens = np.array(sorted(set(phi.letter_image.values())), dtype=np.int64)
    sets = [None, gens]
    cap = 2 * m * m
    k = 1
    while True:
        while len(sets) <= 2 * k:
            if len(sets) > cap + 1:
                raise RuntimeError("stable semigroup search exceeded 2m^2 iterations; corrupt table?")
            sets.append(np.unique(t[np.ix_(sets[-1], gens)]))
        if np.array_equal(sets[k], sets[2 * k]):
            break
        k += 1
    stable = [int(x) for x in sets[k]]
    sub, _ = target.subsemigroup(stable)
    ident = sub.find_identity()
    if ident is not None:
        elems = [stable[ident]] + [x for x in stable if x != stable[ident]]
        mono, _ = target.subsemigroup(elems, identity=stable[ident])
        adjoined = False
        semi, _ = target.subsemigroup(elems)
    else:
        semi = sub
        mono = adjoin_identity(sub)
        adjoined = True
    return StableStructure(k, frozenset(stable), semi, mono, adjoined)


def adjoin_identity(s: FiniteSemigroup) -> FiniteMonoid:
    """S with a new identity element placed at index 0."""
    m = s.size
    t = np.empty((m + 1, m + 1), dtype=np.int64)
    t[0, :] = np.arange(m + 1)
    t[:, 0] = np.arange(m + 1)
    t[1:, 1:] = s.table + 1
    return FiniteMonoid(t, 0, _trusted=True)


def monoid_closure(s: FiniteSemigroup) -> FiniteMonoid:
    """S itself if it has an identity, otherwise S with one adjoined."""
    e = s.find_identity()
    if e is not None:
        return FiniteMonoid(s.table, e, s.gen_labels, _trusted=True)
    return adjoin_identity(s)


def quotient_by_sim_k(alphabet, k: int, cap=DEFAULT_MONOID_CAP):
    """The monoid of words modulo equality of subword sets up to length ``k``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    alphabet = Alphabet.of(alphabet)
    letter_sets = [subword_set((a,), k) for a in alphabet]
    memo = {}

    def act(s: SubwordSet, g):
        key = (s, g)
        r = memo.get(key)
        if r is None:
            r = memo[key] = concat_subwords(s, letter_sets[g])
        return r

    objs, table, letter_elems = _monoid_from_right_action(
        subword_set((), k), alphabet.symbols, act, cap, "quotient elements")
    labels = {format_symbol(a): x for a, x in zip(alphabet, letter_elems)}
    mon = FiniteMonoid(table, 0, labels, _trusted=True)
    mon.subword_sets = objs
    phi = GeneratedMorphism(alphabet, mon, dict(zip(alphabet.symbols, letter_elems)))
    return mon, phi
