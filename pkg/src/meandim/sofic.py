"""Maps from a group into Sym(d) with goodness audits.

A :class:`SoficMap` assigns one permutation of [d] (0-based) to each positive
generator and extends to arbitrary elements by composing along the canonical
letter decomposition of the normal form.  The identity always maps to the
identity permutation, and a single generator's inverse always maps to the
inverse permutation.  For homomorphic constructions (cyclic shifts on Z,
generator images on a free group, regular representations of finite groups)
the extension is an exact homomorphism; for random assignments on groups
with relations it is not, and :func:`goodness` measures the defects.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .groups import FiniteWindow, FreeGroup, Group, GroupElement, GroupError, Lattice


class SoficError(ValueError):
    pass


def _random_permutation(d: int, rng: random.Random) -> np.ndarray:
    """Fisher-Yates shuffle driven by the given generator."""
    perm = list(range(d))
    for i in range(d - 1, 0, -1):
        j = rng.randrange(i + 1)
        perm[i], perm[j] = perm[j], perm[i]
    return np.array(perm, dtype=np.int64)


def _involution_counts(d: int) -> list[int]:
    counts = [1, 1]
    for k in range(2, d + 1):
        counts.append(counts[k - 1] + (k - 1) * counts[k - 2])
    return counts


def _random_involution(d: int, rng: random.Random) -> np.ndarray:
    """Uniformly random involution, sampled by exact telescoping counts."""
    counts = _involution_counts(d)
    perm = list(range(d))
    unmatched = list(range(d))
    while unmatched:
        m = len(unmatched)
        v = unmatched[0]
        r = rng.randrange(counts[m])
        if m == 1 or r < counts[m - 1]:
            unmatched.pop(0)
        else:
            j = (r - counts[m - 1]) // counts[m - 2]
            w = unmatched[1 + j]
            perm[v], perm[w] = w, v
            unmatched.pop(1 + j)
            unmatched.pop(0)
    return np.array(perm, dtype=np.int64)


def _inverse_perm(perm: np.ndarray) -> np.ndarray:
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm), dtype=perm.dtype)
    return inv


class SoficMap:
    """Generator-to-permutation assignment extended along normal forms."""

    def __init__(self, group: Group, d: int, gen_perms: dict[int, np.ndarray],
                 meta: dict | None = None):
        if d < 1:
            raise SoficError("d must be >= 1")
        self.group = group
        self.d = d
        self.gen_perms = {}
        for i in range(1, group.num_generators + 1):
            perm = np.asarray(gen_perms[i], dtype=np.int64)
            if perm.shape != (d,) or sorted(perm.tolist()) != list(range(d)):
                raise SoficError(f"image of generator {i} is not a permutation of [{d}]")
            self.gen_perms[i] = perm
        for i in range(1, group.num_generators + 1):
            g = group.generator(i)
            if g.inverse() == g and not np.array_equal(
                    self.gen_perms[i][self.gen_perms[i]], np.arange(d)):
                raise SoficError(
                    f"generator {i} is self-inverse; its image must be an involution")
        self.meta = dict(meta or {})
        self._letter_cache: dict[int, np.ndarray] = {}
        self._perm_cache: dict = {}

    def letter_perm(self, letter: int) -> np.ndarray:
        if letter in self._letter_cache:
            return self._letter_cache[letter]
        if letter > 0:
            perm = self.gen_perms[letter]
        else:
            perm = _inverse_perm(self.gen_perms[-letter])
        self._letter_cache[letter] = perm
        return perm

    def perm(self, g: GroupElement) -> np.ndarray:
        """Permutation of g: composition of letter images along the normal form."""
        if g.group != self.group:
            raise SoficError("element belongs to a different group")
        cached = self._perm_cache.get(g.key)
        if cached is not None:
            return cached
        acc = np.arange(self.d, dtype=np.int64)
        for letter in g.letters():
            acc = acc[self.letter_perm(letter)]
        self._perm_cache[g.key] = acc
        return acc

    def apply(self, g: GroupElement, v: int) -> int:
        return int(self.perm(g)[v])

    def images_as_lists(self) -> dict[str, list[int]]:
        return {name: self.gen_perms[i].tolist()
                for i, name in enumerate(self.group.generator_names, start=1)}


def from_cyclic(group: Group, d: int) -> SoficMap:
    """Z -> Sym(d) sending the generator to v -> v+1 mod d; exact homomorphism."""
    if not (isinstance(group, Lattice) and group.dim == 1):
        raise SoficError("cyclic construction requires the group Z")
    shift = np.roll(np.arange(d, dtype=np.int64), -1)
    return SoficMap(group, d, {1: shift}, meta={"kind": "cyclic", "d": d})


def from_homomorphism(group: Group, images: Sequence[Sequence[int]]) -> SoficMap:
    """Free group homomorphism determined by one permutation per generator."""
    if not isinstance(group, FreeGroup):
        raise SoficError("homomorphism construction requires a free group")
    if len(images) != group.num_generators:
        raise SoficError("one image permutation per generator expected")
    ds = {len(img) for img in images}
    if len(ds) != 1:
        raise SoficError("image permutations have mismatched dimensions")
    d = ds.pop()
    gen_perms = {i + 1: np.asarray(img, dtype=np.int64) for i, img in enumerate(images)}
    return SoficMap(group, d, gen_perms, meta={"kind": "homomorphism", "d": d})


def from_random(group: Group, d: int, seed: int) -> SoficMap:
    """Seeded uniformly random permutation per generator (involutions where
    a generator is its own inverse, so the extension stays well defined)."""
    rng = random.Random(seed)
    gen_perms = {}
    for i in range(1, group.num_generators + 1):
        g = group.generator(i)
        if g.inverse() == g:
            gen_perms[i] = _random_involution(d, rng)
        else:
            gen_perms[i] = _random_permutation(d, rng)
    return SoficMap(group, d, gen_perms, meta={"kind": "random", "d": d, "seed": seed})


# -- regular representations of finite groups ------------------------------
#
# Left-regular actions of 2-generated finite groups give exact homomorphisms
# F_2 -> Sym(|G|) that act freely: a nonidentity element has no fixed point.
# Rejection sampling on the generator pair enforces that no short reduced
# word collapses to the identity, which makes the goodness conditions hold
# on every point of [d] for windows up to the requested radius.

def _mat_mul(a, b, p):
    return ((a[0] * b[0] + a[1] * b[2]) % p, (a[0] * b[1] + a[1] * b[3]) % p,
            (a[2] * b[0] + a[3] * b[2]) % p, (a[2] * b[1] + a[3] * b[3]) % p)


def _mat_inv_sl2(a, p):
    return (a[3] % p, (-a[1]) % p, (-a[2]) % p, a[0] % p)


def _canon_psl(a, p):
    neg = tuple((-x) % p for x in a)
    return min(a, neg)


def _canon_pgl(a, p):
    lead = next(x for x in a if x % p != 0)
    s = pow(lead, p - 2, p)
    return tuple((x * s) % p for x in a)


def _sample_sl2(p, rng):
    while True:
        a, b, c, d = (rng.randrange(p) for _ in range(4))
        if (a * d - b * c) % p == 1:
            return (a, b, c, d)


def _sample_gl2(p, rng):
    while True:
        a, b, c, d = (rng.randrange(p) for _ in range(4))
        if (a * d - b * c) % p != 0:
            return (a, b, c, d)


def _compose_perm_tuple(a, b):
    return tuple(a[b[i]] for i in range(len(a)))


def _invert_perm_tuple(a):
    inv = [0] * len(a)
    for i, x in enumerate(a):
        inv[x] = i
    return tuple(inv)


REGULAR_MODELS = {
    "psl2_11": 660,
    "s6": 720,
    "psl2_13": 1092,
    "pgl2_11": 1320,
}


def _sample_model_pair(model: str, rng: random.Random):
    """Returns (identity, g1, g2, mul, inv) for the chosen finite group."""
    if model in ("psl2_11", "psl2_13"):
        p = 11 if model == "psl2_11" else 13
        mul = lambda a, b: _canon_psl(_mat_mul(a, b, p), p)
        inv = lambda a: _canon_psl(_mat_inv_sl2(a, p), p)
        identity = _canon_psl((1, 0, 0, 1), p)
        g1 = _canon_psl(_sample_sl2(p, rng), p)
        g2 = _canon_psl(_sample_sl2(p, rng), p)
        return identity, g1, g2, mul, inv
    if model == "pgl2_11":
        p = 11
        mul = lambda a, b: _canon_pgl(_mat_mul(a, b, p), p)

        def inv(a):
            det = (a[0] * a[3] - a[1] * a[2]) % p
            adj = (a[3] % p, (-a[1]) % p, (-a[2]) % p, a[0] % p)
            return _canon_pgl(adj, p)

        identity = _canon_pgl((1, 0, 0, 1), p)
        g1 = _canon_pgl(_sample_gl2(p, rng), p)
        g2 = _canon_pgl(_sample_gl2(p, rng), p)
        return identity, g1, g2, mul, inv
    if model == "s6":
        identity = tuple(range(6))
        g1 = tuple(_random_permutation(6, rng).tolist())
        g2 = tuple(_random_permutation(6, rng).tolist())
        return identity, g1, g2, _compose_perm_tuple, _invert_perm_tuple
    raise SoficError(f"unknown regular model {model!r}")


def _closure(identity, gens, mul):
    elems = [identity]
    index = {identity: 0}
    frontier = [identity]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mul(a, g)
                if b not in index:
                    index[b] = len(elems)
                    elems.append(b)
                    nxt.append(b)
        frontier = nxt
    return elems, index


def _reduced_words(max_len: int):
    stack = [()]
    letters = (1, -1, 2, -2)
    while stack:
        word = stack.pop()
        if word:
            yield word
        if len(word) < max_len:
            for l in letters:
                if not word or word[-1] != -l:
                    stack.append(word + (l,))


def from_regular(group: Group, seed: int, model: str | None = None,
                 girth_radius: int = 4, max_attempts: int = 500) -> SoficMap:
    """Exact F_2 -> Sym(d) via the left-regular action of a sampled
    2-generated finite group, rejecting until it is the full model group and
    no reduced word of length <= girth_radius maps to the identity.

    The resulting action is free on nonidentity elements, so the separation
    and inverse conditions hold at every point of [d] for windows whose
    pairwise quotients stay within the girth radius.
    """
    if not (isinstance(group, FreeGroup) and group.rank == 2):
        raise SoficError("regular construction requires the free group of rank 2")
    rng = random.Random(seed)
    if model is None:
        model = sorted(REGULAR_MODELS)[rng.randrange(len(REGULAR_MODELS))]
    if model not in REGULAR_MODELS:
        raise SoficError(f"unknown regular model {model!r}")
    expected = REGULAR_MODELS[model]
    for _ in range(max_attempts):
        identity, g1, g2, mul, inv = _sample_model_pair(model, rng)
        letter_map = {1: g1, -1: inv(g1), 2: g2, -2: inv(g2)}
        ok = True
        for word in _reduced_words(girth_radius):
            acc = identity
            for l in word:
                acc = mul(acc, letter_map[l])
            if acc == identity:
                ok = False
                break
        if not ok:
            continue
        elems, index = _closure(identity, list(letter_map.values()), mul)
        if len(elems) != expected:
            continue
        perms = {}
        for i, g in ((1, g1), (2, g2)):
            perms[i] = np.array([index[mul(g, x)] for x in elems], dtype=np.int64)
        return SoficMap(group, expected, perms,
                        meta={"kind": "regular", "model": model, "d": expected,
                              "seed": seed, "girth_radius": girth_radius})
    raise SoficError(f"could not sample a girth-{girth_radius} pair for {model}")


# -- goodness audit ---------------------------------------------------------

@dataclass(frozen=True)
class GoodnessReport:
    window: FiniteWindow
    d: int
    tau: Fraction
    multiplicativity: Fraction
    separation: Fraction
    good_set: tuple[int, ...]
    meets_lemma_threshold: bool

    @property
    def good_fraction(self) -> Fraction:
        return Fraction(len(self.good_set), self.d)

    def summary(self) -> dict:
        return {
            "d": self.d,
            "window_size": len(self.window),
            "tau": str(self.tau),
            "multiplicativity": str(self.multiplicativity),
            "separation": str(self.separation),
            "good_set_size": len(self.good_set),
            "meets_lemma_threshold": self.meets_lemma_threshold,
        }


def good_set_mask(sigma: SoficMap, F: FiniteWindow) -> np.ndarray:
    """Boolean mask of points where all pairs of F u F^-1 separate and every
    inverse acts as the inverse permutation."""
    symmetric = F.union(F.inverse())
    d = sigma.d
    mask = np.ones(d, dtype=bool)
    perms = {g.key: sigma.perm(g) for g in symmetric}
    elems = list(symmetric)
    for i, s in enumerate(elems):
        ps = perms[s.key]
        for t in elems[i + 1:]:
            mask &= ps != perms[t.key]
        mask &= perms[s.inverse().key] == _inverse_perm(ps)
    return mask


def goodness(sigma: SoficMap, F: FiniteWindow, tau) -> GoodnessReport:
    """Exact multiplicativity/separation ratios on the window plus the good
    set required by the tiling argument, with its cardinality threshold
    |B| >= (1 - tau/(2(|F|+1))) d flagged."""
    tau = Fraction(tau)
    if not 0 < tau < 1:
        raise SoficError("tau must lie in (0, 1)")
    if F.group != sigma.group:
        raise SoficError("window belongs to a different group")
    d = sigma.d
    mult_min = Fraction(1)
    sep_min = Fraction(1)
    perms = {g.key: sigma.perm(g) for g in F}
    for s in F:
        ps = perms[s.key]
        for t in F:
            pt = perms[t.key]
            pst = sigma.perm(s * t)
            agree = int(np.count_nonzero(ps[pt] == pst))
            mult_min = min(mult_min, Fraction(agree, d))
            if s != t:
                differ = int(np.count_nonzero(ps != pt))
                sep_min = min(sep_min, Fraction(differ, d))
    mask = good_set_mask(sigma, F)
    good = tuple(int(v) for v in np.flatnonzero(mask))
    threshold_ok = Fraction(len(good)) >= (1 - tau / (2 * (len(F) + 1))) * d
    return GoodnessReport(window=F, d=d, tau=tau, multiplicativity=mult_min,
                          separation=sep_min, good_set=good,
                          meets_lemma_threshold=threshold_ok)
