"""Shift spaces over finite alphabets or symbolic cubes, and their metrics.

Points of a shift space are represented exactly: a finite support window, a
letter per support element, and a declared constant tail letter.  The left
shift acts by (s x)_t = x_{s^-1 t}.  Metric evaluations return certified
rational enclosures; the induced metric sums coordinate distances along the
group enumeration with weights 1/2^n, truncated at a declared depth with
the omitted tail bounded by diam * 2^-depth.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .groups import FiniteWindow, Group, GroupElement, GroupError


class SpaceError(ValueError):
    pass


# -- certified rational enclosures ------------------------------------------

@dataclass(frozen=True)
class Enclosure:
    """A value known to lie in [lo, hi], both exact rationals."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise SpaceError("enclosure bounds out of order")

    @staticmethod
    def exact(value) -> "Enclosure":
        v = Fraction(value)
        return Enclosure(v, v)

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def le(self, threshold) -> bool | None:
        """Certified comparison self <= threshold; None when undecided."""
        t = Fraction(threshold)
        if self.hi <= t:
            return True
        if self.lo > t:
            return False
        return None

    def ge(self, threshold) -> bool | None:
        t = Fraction(threshold)
        if self.lo >= t:
            return True
        if self.hi < t:
            return False
        return None

    def __add__(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(self.lo + other.lo, self.hi + other.hi)

    def scale(self, c) -> "Enclosure":
        c = Fraction(c)
        if c < 0:
            raise SpaceError("negative scaling not supported")
        return Enclosure(self.lo * c, self.hi * c)

    def join_max(self, other: "Enclosure") -> "Enclosure":
        return Enclosure(max(self.lo, other.lo), max(self.hi, other.hi))

    def as_dict(self) -> dict:
        return {"lo": str(self.lo), "hi": str(self.hi)}


def sqrt_enclosure(x: Fraction, precision: int = 10**12) -> Enclosure:
    """Certified rational enclosure of sqrt(x) for x >= 0."""
    x = Fraction(x)
    if x < 0:
        raise SpaceError("sqrt of a negative value")
    num, den = x.numerator, x.denominator
    lo = Fraction(math.isqrt(num * precision * precision // den), precision)
    ceil_scaled = -((-num * precision * precision) // den)
    root = math.isqrt(ceil_scaled)
    if root * root < ceil_scaled:
        root += 1
    hi = Fraction(root, precision)
    return Enclosure(lo, hi)


# -- alphabets ---------------------------------------------------------------

class AlphabetSpace:
    """Finite point set with an exact rational metric, checked at load."""

    def __init__(self, labels: Sequence[str], metric: Sequence[Sequence]):
        self.labels = tuple(str(l) for l in labels)
        n = len(self.labels)
        if n < 1:
            raise SpaceError("alphabet must be nonempty")
        self.metric = tuple(tuple(Fraction(x) for x in row) for row in metric)
        if len(self.metric) != n or any(len(row) != n for row in self.metric):
            raise SpaceError("metric matrix has the wrong shape")
        for i in range(n):
            if self.metric[i][i] != 0:
                raise SpaceError("metric diagonal must be zero")
            for j in range(n):
                if self.metric[i][j] != self.metric[j][i]:
                    raise SpaceError("metric must be symmetric")
                if i != j and self.metric[i][j] <= 0:
                    raise SpaceError("distinct points must have positive distance")
                for k in range(n):
                    if self.metric[i][j] > self.metric[i][k] + self.metric[k][j]:
                        raise SpaceError("triangle inequality fails")

    @classmethod
    def uniform(cls, size: int | Sequence[str]) -> "AlphabetSpace":
        labels = ([str(i) for i in range(size)] if isinstance(size, int)
                  else list(size))
        n = len(labels)
        metric = [[Fraction(0 if i == j else 1) for j in range(n)]
                  for i in range(n)]
        return cls(labels, metric)

    def __len__(self):
        return len(self.labels)

    def distance(self, a: int, b: int) -> Fraction:
        return self.metric[a][b]

    @property
    def diameter(self) -> Fraction:
        return max(max(row) for row in self.metric)

    @property
    def min_gap(self) -> Fraction:
        n = len(self.labels)
        if n < 2:
            return Fraction(0)
        return min(self.metric[i][j] for i in range(n) for j in range(n) if i != j)

    def is_finite(self) -> bool:
        return True

    def __eq__(self, other):
        return (isinstance(other, AlphabetSpace)
                and self.labels == other.labels and self.metric == other.metric)

    def __hash__(self):
        return hash((self.labels, self.metric))


class CubeSpace:
    """The cube [0,1]^m with the sup metric, handled symbolically.

    Points, when evaluated at all, are tuples of rationals; the space is
    never discretized because a finite sample has covering dimension zero
    and would silently destroy every dimension computation downstream.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise SpaceError("cube dimension must be >= 1")
        self.dim = dim

    @property
    def diameter(self) -> Fraction:
        return Fraction(1)

    def distance(self, p: Sequence, q: Sequence) -> Fraction:
        if len(p) != self.dim or len(q) != self.dim:
            raise SpaceError("point has the wrong dimension")
        return max(abs(Fraction(a) - Fraction(b)) for a, b in zip(p, q))

    def is_finite(self) -> bool:
        return False

    def __eq__(self, other):
        return isinstance(other, CubeSpace) and self.dim == other.dim

    def __hash__(self):
        return hash(("cube", self.dim))


# -- shift systems ------------------------------------------------------------

@dataclass(frozen=True)
class ForbiddenPattern:
    window: FiniteWindow
    letters: tuple[int, ...]

    def __post_init__(self):
        if len(self.letters) != len(self.window):
            raise SpaceError("one letter per window element expected")


class ShiftSystem:
    """Full shift or subshift carrying the left action (s x)_t = x_{s^-1 t}."""

    def __init__(self, group: Group, alphabet, forbidden: Sequence[ForbiddenPattern] = ()):
        self.group = group
        self.alphabet = alphabet
        self.forbidden = tuple(forbidden)
        if self.forbidden and not alphabet.is_finite():
            raise SpaceError("subshift constraints require a finite alphabet")
        for pat in self.forbidden:
            if pat.window.group != group:
                raise SpaceError("forbidden pattern window from a different group")
            if any(not 0 <= l < len(alphabet) for l in pat.letters):
                raise SpaceError("forbidden pattern letter out of range")

    @property
    def is_full(self) -> bool:
        return not self.forbidden

    def __eq__(self, other):
        return (isinstance(other, ShiftSystem) and self.group == other.group
                and self.alphabet == other.alphabet
                and self.forbidden == other.forbidden)

    def __hash__(self):
        return hash((self.group, self.alphabet, self.forbidden))

    def config(self, support: FiniteWindow | None, letters, tail: int,
               validate: bool = True) -> "Configuration":
        cfg = Configuration(self, support, letters, tail)
        if validate and not self.is_locally_admissible(cfg):
            raise SpaceError("configuration violates a forbidden pattern")
        return cfg

    def constant_config(self, letter: int) -> "Configuration":
        return self.config(None, {}, letter)

    def is_locally_admissible(self, cfg: "Configuration") -> bool:
        """No forbidden pattern matches at any translate meeting the support,
        nor at the pure-tail placement."""
        for pat in self.forbidden:
            if all(l == cfg.tail for l in pat.letters):
                return False
            if cfg.support is None:
                continue
            candidates = {g * s.inverse() for g in cfg.support for s in pat.window}
            for t in candidates:
                if all(cfg.coordinate(t * s) == letter
                       for s, letter in zip(pat.window, pat.letters)):
                    return False
        return True


def full_shift(group: Group, alphabet) -> ShiftSystem:
    return ShiftSystem(group, alphabet)


def golden_mean_shift(group: Group) -> ShiftSystem:
    """Binary subshift forbidding two adjacent 1s along the first generator."""
    alphabet = AlphabetSpace.uniform(2)
    window = FiniteWindow(group, [group.identity(), group.generator(1)])
    return ShiftSystem(group, alphabet, [ForbiddenPattern(window, (1, 1))])


class Configuration:
    """Finitely supported point with a constant tail letter."""

    __slots__ = ("system", "support", "letters", "tail")

    def __init__(self, system: ShiftSystem, support: FiniteWindow | None,
                 letters, tail: int):
        self.system = system
        self.tail = tail
        if support is None:
            self.support = None
            self.letters = {}
            return
        if support.group != system.group:
            raise SpaceError("support from a different group")
        if isinstance(letters, Mapping):
            table = {g: letters[g] for g in support}
        else:
            letters = list(letters)
            if len(letters) != len(support):
                raise SpaceError("one letter per support element expected")
            table = dict(zip(support.elements, letters))
        self.support = support
        self.letters = table

    def coordinate(self, t: GroupElement):
        return self.letters.get(t, self.tail)

    def key(self):
        if self.support is None:
            return (self.tail,)
        items = tuple(sorted(((g.key, l) for g, l in self.letters.items())))
        return (self.tail, items)

    def __eq__(self, other):
        return (isinstance(other, Configuration) and self.system == other.system
                and self.tail == other.tail
                and dict(self.letters) == dict(other.letters))

    def __hash__(self):
        return hash(self.key())


def act(s: GroupElement, x: Configuration) -> Configuration:
    """Left shift: the result reads (s x)_t = x_{s^-1 t}."""
    if s.group != x.system.group:
        raise GroupError("element and configuration from different groups")
    if x.support is None:
        return x
    new_support = FiniteWindow(s.group, (s * t for t in x.support))
    new_letters = {s * t: l for t, l in x.letters.items()}
    return Configuration(x.system, new_support, new_letters, x.tail)


# -- pseudometrics ------------------------------------------------------------

class PseudometricSpec:
    """Base pseudometric plus an optional window refinement.

    base "disc" compares the identity coordinate only; base "induced" sums
    weighted coordinate distances 1/2^n along the group enumeration up to
    the truncation depth, with a certified tail bound.  When a window F is
    set, evaluation takes the max over s in F of the base value on (sx, sy).
    """

    def __init__(self, base: str = "disc", depth: int = 12,
                 window: FiniteWindow | None = None):
        if base not in ("disc", "induced"):
            raise SpaceError(f"unknown base pseudometric {base!r}")
        if base == "induced" and depth < 1:
            raise SpaceError("truncation depth must be >= 1")
        self.base = base
        self.depth = depth
        self.window = window

    def with_window(self, window: FiniteWindow | None) -> "PseudometricSpec":
        return PseudometricSpec(self.base, self.depth, window)

    def tail_bound(self, system: ShiftSystem) -> Fraction:
        if self.base == "disc":
            return Fraction(0)
        return system.alphabet.diameter * Fraction(1, 2 ** self.depth)

    def _base_eval(self, x: Configuration, y: Configuration) -> Enclosure:
        alphabet = x.system.alphabet
        if self.base == "disc":
            e = x.system.group.identity()
            return Enclosure.exact(alphabet.distance(x.coordinate(e), y.coordinate(e)))
        prefix = x.system.group.enumeration_prefix(self.depth)
        total = Fraction(0)
        for n, s_n in enumerate(prefix, start=1):
            total += Fraction(1, 2 ** n) * alphabet.distance(
                x.coordinate(s_n), y.coordinate(s_n))
        # every term beyond the prefix reads tail against tail, so the
        # truncated sum is already exact when the tails agree and both
        # supports are inside the prefix
        if x.tail == y.tail:
            seen = set(prefix)
            supports = list(x.letters) + list(y.letters)
            if all(t in seen for t in supports):
                return Enclosure(total, total)
        return Enclosure(total, total + self.tail_bound(x.system))

    def evaluate(self, x: Configuration, y: Configuration) -> Enclosure:
        if x.system != y.system:
            raise SpaceError("configurations from different systems")
        if self.window is None:
            return self._base_eval(x, y)
        best: Enclosure | None = None
        for s in self.window:
            val = self._base_eval(act(s, x), act(s, y))
            best = val if best is None else best.join_max(val)
        return best


def eval_metric(spec: PseudometricSpec, x: Configuration, y: Configuration) -> Enclosure:
    return spec.evaluate(x, y)


def microstate_metrics(rho: PseudometricSpec, phi: Sequence[Configuration],
                       psi: Sequence[Configuration]) -> tuple[Enclosure, Enclosure]:
    """(quadratic-mean, sup) distances between two [d] -> X assignments."""
    if len(phi) != len(psi) or not phi:
        raise SpaceError("assignments must share a positive dimension")
    d = len(phi)
    sq_lo = Fraction(0)
    sq_hi = Fraction(0)
    sup = Enclosure.exact(0)
    for a, b in zip(phi, psi):
        enc = rho.evaluate(a, b)
        sq_lo += enc.lo * enc.lo
        sq_hi += enc.hi * enc.hi
        sup = sup.join_max(enc)
    mean_sq = Enclosure(sq_lo / d, sq_hi / d)
    lo = sqrt_enclosure(mean_sq.lo).lo
    hi = sqrt_enclosure(mean_sq.hi).hi
    return Enclosure(lo, hi), sup


def rho2_squared(rho: PseudometricSpec, phi: Sequence[Configuration],
                 psi: Sequence[Configuration]) -> Enclosure:
    """Enclosure of the squared quadratic-mean distance; exact comparisons
    against a squared threshold avoid any square root."""
    if len(phi) != len(psi) or not phi:
        raise SpaceError("assignments must share a positive dimension")
    d = len(phi)
    sq_lo = Fraction(0)
    sq_hi = Fraction(0)
    for a, b in zip(phi, psi):
        enc = rho.evaluate(a, b)
        sq_lo += enc.lo * enc.lo
        sq_hi += enc.hi * enc.hi
    return Enclosure(sq_lo / d, sq_hi / d)


# -- pattern combinatorics -----------------------------------------------------

def _compiled_placements(system: ShiftSystem, W: FiniteWindow):
    """All (cell indices, letters) pairs where a forbidden pattern translate
    fits entirely inside W."""
    placements = []
    seen = set()
    for pat in system.forbidden:
        for w in W:
            for s in pat.window:
                g = w * s.inverse()
                cells = []
                ok = True
                for t, letter in zip(pat.window, pat.letters):
                    gt = g * t
                    if gt not in W:
                        ok = False
                        break
                    cells.append((W._index[gt.key], letter))
                if ok:
                    key = tuple(sorted(cells))
                    if key not in seen:
                        seen.add(key)
                        placements.append(tuple(cells))
    return placements


def enumerate_patterns(system: ShiftSystem, W: FiniteWindow) -> list[tuple[int, ...]]:
    """Locally admissible letter assignments on W, ordered lexicographically.

    Local admissibility: no forbidden pattern matches at a translate lying
    entirely inside W.  For one-dimensional nearest-neighbour constraints on
    interval windows this coincides with global admissibility.
    """
    if not system.alphabet.is_finite():
        raise SpaceError("pattern enumeration requires a finite alphabet")
    if W.group != system.group:
        raise SpaceError("window from a different group")
    n = len(W)
    k = len(system.alphabet)
    placements = _compiled_placements(system, W)
    by_last_cell: list[list] = [[] for _ in range(n)]
    for cells in placements:
        last = max(c for c, _ in cells)
        by_last_cell[last].append(cells)
    out = []
    assignment = [0] * n

    def admissible_at(pos: int) -> bool:
        for cells in by_last_cell[pos]:
            if all(assignment[c] == letter for c, letter in cells):
                return False
        return True

    def rec(pos: int):
        if pos == n:
            out.append(tuple(assignment))
            return
        for letter in range(k):
            assignment[pos] = letter
            if admissible_at(pos):
                rec(pos + 1)

    rec(0)
    return out


def count_patterns(system: ShiftSystem, W: FiniteWindow) -> int:
    """Number of locally admissible patterns on W, without materializing
    them when the system is a full shift."""
    if not system.alphabet.is_finite():
        raise SpaceError("pattern counting requires a finite alphabet")
    if system.is_full:
        return len(system.alphabet) ** len(W)
    n = len(W)
    k = len(system.alphabet)
    placements = _compiled_placements(system, W)
    by_last_cell: list[list] = [[] for _ in range(n)]
    for cells in placements:
        last = max(c for c, _ in cells)
        by_last_cell[last].append(cells)
    assignment = [0] * n
    total = 0

    def admissible_at(pos: int) -> bool:
        for cells in by_last_cell[pos]:
            if all(assignment[c] == letter for c, letter in cells):
                return False
        return True

    def rec(pos: int):
        nonlocal total
        if pos == n:
            total += 1
            return
        for letter in range(k):
            assignment[pos] = letter
            if admissible_at(pos):
                rec(pos + 1)

    rec(0)
    return total


def nearest_neighbour_matrix(system: ShiftSystem) -> list[list[int]]:
    """0/1 transition matrix for a one-dimensional nearest-neighbour
    subshift: entry (a, b) is 1 when the word a b is allowed."""
    from .groups import Lattice

    if not (isinstance(system.group, Lattice) and system.group.dim == 1):
        raise SpaceError("transition matrices require the group Z")
    k = len(system.alphabet)
    allowed = [[1] * k for _ in range(k)]
    step = system.group.generator(1)
    identity = system.group.identity()
    for pat in system.forbidden:
        cells = {g.key: l for g, l in zip(pat.window, pat.letters)}
        if set(cells) == {identity.key} :
            for b in range(k):
                allowed[cells[identity.key]][b] = 0
                allowed[b][cells[identity.key]] = 0
        elif set(cells) == {identity.key, step.key}:
            allowed[cells[identity.key]][cells[step.key]] = 0
        else:
            raise SpaceError("constraint is not nearest-neighbour")
    return allowed


def essential_letters(matrix: Sequence[Sequence[int]]) -> set[int]:
    """Letters lying on a bi-infinite path of the transition graph."""
    k = len(matrix)
    fwd = {a for a in range(k)}
    changed = True
    while changed:
        changed = False
        for a in list(fwd):
            if not any(matrix[a][b] and b in fwd for b in range(k)):
                fwd.discard(a)
                changed = True
    bwd = {a for a in range(k)}
    changed = True
    while changed:
        changed = False
        for a in list(bwd):
            if not any(matrix[b][a] and b in bwd for b in range(k)):
                bwd.discard(a)
                changed = True
    return fwd & bwd


def globally_admissible_patterns(system: ShiftSystem, W: FiniteWindow) -> list[tuple[int, ...]]:
    """Patterns on an interval window extendable to full bi-infinite points,
    via transition-graph reachability; only for 1-D nearest-neighbour
    systems with interval windows."""
    matrix = nearest_neighbour_matrix(system)
    keys = sorted(g.key[0] for g in W)
    if keys != list(range(keys[0], keys[0] + len(keys))):
        raise SpaceError("global admissibility requires an interval window")
    order = sorted(range(len(W)), key=lambda i: W.elements[i].key[0])
    essential = essential_letters(matrix)
    out = []
    for pattern in enumerate_patterns(system, W):
        chain = [pattern[i] for i in order]
        if all(l in essential for l in chain) and all(
                matrix[a][b] for a, b in zip(chain, chain[1:])):
            out.append(pattern)
    return out
