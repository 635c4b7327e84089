"""Finitely generated groups with an exact word problem.

Supported families: free groups, integer lattices Z^d, finite groups given
by a multiplication table, and direct products of these.  Every element has
a unique normal form, so equality, inversion and multiplication are exact.

The fixed enumeration convention used everywhere downstream: breadth-first
by word length over the symmetric generator list (each generator followed
by its inverse, in declaration order), which yields elements sorted by word
length with ties broken by the lexicographically least shortest word.  The
identity always comes first.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Sequence


class GroupError(ValueError):
    """Raised for malformed words, mismatched owners, or bad group data."""


class GroupElement:
    """Immutable element of a :class:`Group`, stored in normal form."""

    __slots__ = ("group", "key", "_hash")

    def __init__(self, group: "Group", key):
        self.group = group
        self.key = key
        self._hash = hash((group._hash, key))

    def __eq__(self, other):
        return (
            isinstance(other, GroupElement)
            and self.group == other.group
            and self.key == other.key
        )

    def __hash__(self):
        return self._hash

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.group != other.group:
            raise GroupError("cannot multiply elements of different groups")
        return GroupElement(self.group, self.group._mul_keys(self.key, other.key))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.group._inv_key(self.key))

    def __pow__(self, n: int) -> "GroupElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.group.identity()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return self.key == self.group._identity_key()

    def word_length(self) -> int:
        return self.group._word_length(self.key)

    def letters(self) -> tuple[int, ...]:
        """Canonical signed-letter decomposition of the normal form.

        Letters are 1-based generator indices, negated for inverses.
        """
        return self.group._letters(self.key)

    def sort_key(self):
        return (self.word_length(), self.key)

    def __repr__(self):
        return self.group._format(self.key)


class Group:
    """Base class; subclasses fix the element representation."""

    generator_names: tuple[str, ...]

    def descriptor(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other):
        return isinstance(other, Group) and self.descriptor() == other.descriptor()

    def __hash__(self):
        return self._hash

    def _finish_init(self):
        self._hash = hash(self.descriptor())

    # -- element representation hooks -------------------------------------
    def _identity_key(self):
        raise NotImplementedError

    def _mul_keys(self, a, b):
        raise NotImplementedError

    def _inv_key(self, a):
        raise NotImplementedError

    def _letter_key(self, letter: int):
        """Key of a single signed generator letter."""
        raise NotImplementedError

    def _word_length(self, key) -> int:
        raise NotImplementedError

    def _letters(self, key) -> tuple[int, ...]:
        raise NotImplementedError

    def _format(self, key) -> str:
        raise NotImplementedError

    def is_finite(self) -> bool:
        return False

    # -- public API --------------------------------------------------------
    @property
    def num_generators(self) -> int:
        return len(self.generator_names)

    def identity(self) -> GroupElement:
        return GroupElement(self, self._identity_key())

    def generator(self, i: int) -> GroupElement:
        """The i-th positive generator, 1-based."""
        if not 1 <= i <= self.num_generators:
            raise GroupError(f"unknown generator index {i}")
        return GroupElement(self, self._letter_key(i))

    def letter(self, letter: int) -> GroupElement:
        """Element of a signed letter: +i is generator i, -i its inverse."""
        if letter == 0 or abs(letter) > self.num_generators:
            raise GroupError(f"unknown generator symbol {letter}")
        return GroupElement(self, self._letter_key(letter))

    def symmetric_generators(self) -> list[GroupElement]:
        """Generators and inverses, deduplicated, in enumeration order."""
        out: list[GroupElement] = []
        seen = set()
        for i in range(1, self.num_generators + 1):
            for g in (self.letter(i), self.letter(-i)):
                if g.key not in seen and not g.is_identity():
                    seen.add(g.key)
                    out.append(g)
        return out

    def normal_form(self, word: Iterable[int]) -> GroupElement:
        """Fold a raw signed-letter word into its canonical element."""
        g = self.identity()
        for letter in word:
            g = g * self.letter(letter)
        return g

    def enumerate_elements(self) -> Iterator[GroupElement]:
        """Deterministic BFS enumeration starting at the identity.

        Stable across runs: frontier elements are expanded in discovery
        order and generators in index order, so the stream is sorted by
        word length with lexicographic tie-breaking on shortest words.
        """
        e = self.identity()
        seen = {e.key}
        yield e
        frontier = [e]
        gens = self.symmetric_generators()
        while frontier:
            level: list[GroupElement] = []
            for g in frontier:
                for s in gens:
                    h = g * s
                    if h.key not in seen:
                        seen.add(h.key)
                        level.append(h)
                        yield h
            frontier = level

    def enumeration_prefix(self, n: int) -> list[GroupElement]:
        return list(itertools.islice(self.enumerate_elements(), n))

    def ball(self, r: int) -> "FiniteWindow":
        """All elements of word length at most r, in enumeration order."""
        if r < 0:
            raise GroupError("ball radius must be nonnegative")
        out = []
        for g in self.enumerate_elements():
            if g.word_length() > r:
                break
            out.append(g)
        return FiniteWindow(self, out)


class FreeGroup(Group):
    """Free group of rank k; elements are reduced words of signed letters."""

    def __init__(self, rank: int):
        if rank < 1:
            raise GroupError("free group rank must be >= 1")
        self.rank = rank
        if rank <= 26:
            self.generator_names = tuple(chr(ord("a") + i) for i in range(rank))
        else:
            self.generator_names = tuple(f"g{i+1}" for i in range(rank))
        self._finish_init()

    def descriptor(self):
        return ("free", self.rank)

    def _identity_key(self):
        return ()

    def _mul_keys(self, a, b):
        out = list(a)
        for letter in b:
            if out and out[-1] == -letter:
                out.pop()
            else:
                out.append(letter)
        return tuple(out)

    def _inv_key(self, a):
        return tuple(-letter for letter in reversed(a))

    def _letter_key(self, letter):
        return (letter,)

    def _word_length(self, key):
        return len(key)

    def _letters(self, key):
        return key

    def _format(self, key):
        if not key:
            return "e"
        parts = []
        for letter, run in itertools.groupby(key):
            power = len(list(run)) * (1 if letter > 0 else -1)
            name = self.generator_names[abs(letter) - 1]
            parts.append(name if power == 1 else f"{name}^{power}")
        return "".join(parts)


class Lattice(Group):
    """Z^d with coordinate vectors as normal forms."""

    def __init__(self, dim: int):
        if dim < 1:
            raise GroupError("lattice dimension must be >= 1")
        self.dim = dim
        if dim <= 3:
            self.generator_names = tuple("xyz"[:dim])
        else:
            self.generator_names = tuple(f"x{i+1}" for i in range(dim))
        self._finish_init()

    def descriptor(self):
        return ("lattice", self.dim)

    def _identity_key(self):
        return (0,) * self.dim

    def _mul_keys(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def _inv_key(self, a):
        return tuple(-x for x in a)

    def _letter_key(self, letter):
        v = [0] * self.dim
        v[abs(letter) - 1] = 1 if letter > 0 else -1
        return tuple(v)

    def _word_length(self, key):
        return sum(abs(x) for x in key)

    def _letters(self, key):
        out = []
        for i, c in enumerate(key, start=1):
            out.extend([i if c > 0 else -i] * abs(c))
        return tuple(out)

    def _format(self, key):
        if self.dim == 1:
            return str(key[0])
        return "(" + ", ".join(str(x) for x in key) + ")"

    def vector(self, *coords: int) -> GroupElement:
        if len(coords) == 1 and isinstance(coords[0], (tuple, list)):
            coords = tuple(coords[0])
        if len(coords) != self.dim:
            raise GroupError(f"expected {self.dim} coordinates")
        return GroupElement(self, tuple(int(c) for c in coords))


class FiniteGroupTable(Group):
    """Finite group given by a multiplication table over indices 0..n-1.

    ``generators`` lists the positive generator element indices; they must
    generate the whole group (validated at construction).
    """

    def __init__(self, table: Sequence[Sequence[int]], generators: Sequence[int],
                 names: Sequence[str] | None = None):
        n = len(table)
        self.table = tuple(tuple(int(x) for x in row) for row in table)
        if any(len(row) != n for row in self.table):
            raise GroupError("multiplication table must be square")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise GroupError("table entries out of range")
        identity = None
        for i in range(n):
            if all(self.table[i][j] == j and self.table[j][i] == j for j in range(n)):
                identity = i
                break
        if identity is None:
            raise GroupError("table has no identity element")
        self._e = identity
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if self.table[self.table[a][b]][c] != self.table[a][self.table[b][c]]:
                        raise GroupError("table is not associative")
        inv = [None] * n
        for a in range(n):
            for b in range(n):
                if self.table[a][b] == identity and self.table[b][a] == identity:
                    inv[a] = b
        if any(v is None for v in inv):
            raise GroupError("table has a non-invertible element")
        self._inv = tuple(inv)
        self.gen_indices = tuple(int(g) for g in generators)
        if any(not 0 <= g < n for g in self.gen_indices) or identity in self.gen_indices:
            raise GroupError("generators must be non-identity element indices")
        if names is not None and len(names) != len(self.gen_indices):
            raise GroupError("one name per generator expected")
        self.generator_names = tuple(names) if names else tuple(
            f"g{i}" for i in self.gen_indices)
        self._finish_init()
        self._precompute_words()

    def descriptor(self):
        return ("finite", self.table, self.gen_indices)

    def _precompute_words(self):
        """BFS shortest signed-letter word for every element."""
        n = len(self.table)
        letters_in_order = []
        for i, g in enumerate(self.gen_indices, start=1):
            letters_in_order.append((i, g))
            ginv = self._inv[g]
            if ginv != g:
                letters_in_order.append((-i, ginv))
        words: dict[int, tuple[int, ...]] = {self._e: ()}
        frontier = [self._e]
        while frontier:
            level = []
            for a in frontier:
                for letter, gidx in letters_in_order:
                    b = self.table[a][gidx]
                    if b not in words:
                        words[b] = words[a] + (letter,)
                        level.append(b)
            frontier = level
        if len(words) != n:
            raise GroupError("generators do not generate the whole group")
        self._words = words

    def is_finite(self):
        return True

    @property
    def order(self) -> int:
        return len(self.table)

    def _identity_key(self):
        return self._e

    def _mul_keys(self, a, b):
        return self.table[a][b]

    def _inv_key(self, a):
        return self._inv[a]

    def _letter_key(self, letter):
        g = self.gen_indices[abs(letter) - 1]
        return g if letter > 0 else self._inv[g]

    def _word_length(self, key):
        return len(self._words[key])

    def _letters(self, key):
        return self._words[key]

    def _format(self, key):
        if key == self._e:
            return "e"
        return f"[{key}]"

    def element_by_index(self, i: int) -> GroupElement:
        if not 0 <= i < len(self.table):
            raise GroupError("element index out of range")
        return GroupElement(self, i)


class DirectProduct(Group):
    """Direct product; generator list is the concatenation of the factors'."""

    def __init__(self, factors: Sequence[Group]):
        if not factors:
            raise GroupError("direct product needs at least one factor")
        self.factors = tuple(factors)
        self.generator_names = tuple(
            f"{name}.{j}" for j, f in enumerate(self.factors, start=1)
            for name in f.generator_names)
        self._offsets = []
        off = 0
        for f in self.factors:
            self._offsets.append(off)
            off += f.num_generators
        self._finish_init()

    def descriptor(self):
        return ("product", tuple(f.descriptor() for f in self.factors))

    def is_finite(self):
        return all(f.is_finite() for f in self.factors)

    def _identity_key(self):
        return tuple(f._identity_key() for f in self.factors)

    def _mul_keys(self, a, b):
        return tuple(f._mul_keys(x, y) for f, x, y in zip(self.factors, a, b))

    def _inv_key(self, a):
        return tuple(f._inv_key(x) for f, x in zip(self.factors, a))

    def _letter_key(self, letter):
        i = abs(letter) - 1
        key = list(self._identity_key())
        for j, f in enumerate(self.factors):
            if i < self._offsets[j] + f.num_generators:
                local = i - self._offsets[j] + 1
                key[j] = f._letter_key(local if letter > 0 else -local)
                return tuple(key)
        raise GroupError(f"unknown generator symbol {letter}")

    def _word_length(self, key):
        return sum(f._word_length(x) for f, x in zip(self.factors, key))

    def _letters(self, key):
        out = []
        for j, (f, x) in enumerate(zip(self.factors, key)):
            off = self._offsets[j]
            out.extend(l + off if l > 0 else l - off for l in f._letters(x))
        return tuple(out)

    def _format(self, key):
        return "(" + ", ".join(f._format(x) for f, x in zip(self.factors, key)) + ")"

    def pair(self, *components: GroupElement) -> GroupElement:
        if len(components) != len(self.factors):
            raise GroupError("wrong number of components")
        for c, f in zip(components, self.factors):
            if c.group != f:
                raise GroupError("component belongs to the wrong factor")
        return GroupElement(self, tuple(c.key for c in components))


def cyclic_group(n: int) -> FiniteGroupTable:
    """Z/n with the single generator 1."""
    if n < 2:
        raise GroupError("cyclic group order must be >= 2")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return FiniteGroupTable(table, [1], names=["g"])


class FiniteWindow:
    """Nonempty ordered duplicate-free finite subset of a group."""

    __slots__ = ("group", "elements", "_index", "_hash")

    def __init__(self, group: Group, elements: Iterable[GroupElement]):
        seen = set()
        out = []
        for g in elements:
            if g.group != group:
                raise GroupError("window element from a different group")
            if g.key not in seen:
                seen.add(g.key)
                out.append(g)
        if not out:
            raise GroupError("window must be nonempty")
        self.group = group
        self.elements = tuple(out)
        self._index = {g.key: i for i, g in enumerate(out)}
        self._hash = hash((group._hash, tuple(g.key for g in out)))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g: GroupElement):
        return g.group == self.group and g.key in self._index

    def __eq__(self, other):
        return (
            isinstance(other, FiniteWindow)
            and self.group == other.group
            and self.elements == other.elements
        )

    def __hash__(self):
        return self._hash

    def inverse(self) -> "FiniteWindow":
        return FiniteWindow(self.group, (g.inverse() for g in self.elements))

    def union(self, other: "FiniteWindow") -> "FiniteWindow":
        if self.group != other.group:
            raise GroupError("windows belong to different groups")
        return FiniteWindow(self.group, self.elements + other.elements)

    def as_set(self) -> frozenset:
        return frozenset(self.elements)

    def __repr__(self):
        inner = ", ".join(repr(g) for g in self.elements[:8])
        if len(self.elements) > 8:
            inner += f", ... ({len(self.elements)} elements)"
        return "{" + inner + "}"


def product_window(K: FiniteWindow, F: FiniteWindow) -> FiniteWindow:
    """The window KF = {k f}, duplicate-free, in deterministic order."""
    if K.group != F.group:
        raise GroupError("windows belong to different groups")
    return FiniteWindow(K.group, (k * f for k in K for f in F))


def folner_defect(K: FiniteWindow, F: FiniteWindow) -> Fraction:
    """|KF \\ F| / |F| as an exact rational."""
    KF = product_window(K, F)
    outside = sum(1 for g in KF if g not in F)
    return Fraction(outside, len(F))


def box_window(group: Lattice, n: int) -> FiniteWindow:
    """The box [0, n)^d in a lattice, in row-major order."""
    if not isinstance(group, Lattice):
        raise GroupError("box windows are only defined for lattices")
    if n < 1:
        raise GroupError("box side must be >= 1")
    coords = itertools.product(range(n), repeat=group.dim)
    return FiniteWindow(group, (GroupElement(group, c) for c in coords))


def group_from_config(cfg: dict) -> Group:
    """Build a group from its serialized form, e.g. {"kind": "free", "rank": 2}."""
    kind = cfg.get("kind")
    if kind == "free":
        return FreeGroup(int(cfg["rank"]))
    if kind == "lattice":
        return Lattice(int(cfg["dim"]))
    if kind == "cyclic":
        return cyclic_group(int(cfg["order"]))
    if kind == "finite":
        return FiniteGroupTable(cfg["table"], cfg["generators"], cfg.get("names"))
    if kind == "product":
        return DirectProduct([group_from_config(sub) for sub in cfg["factors"]])
    raise GroupError(f"unknown group kind: {kind!r}")
