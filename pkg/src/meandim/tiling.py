"""Greedy disjoint translate packing of [d] with machine-checkable guarantees.

Given a map sigma on a group, a window F and quality parameters tau, eta,
:func:`tile` produces shapes F_1..F_l inside F and centers c_1..c_l so that
the translate sets sigma(F_k)c_k are pairwise disjoint, every shape keeps at
least tau|F|/2 of the window, and the union covers at least (1-tau-eta)d
points.  The candidate centers must come from a good set where the window
separates and inverses act correctly; the cardinality preconditions on the
good set and on the admissible-center set are exactly what the counting
argument behind the coverage bound consumes, so by default violating inputs
are rejected.  :func:`verify_tiling` rechecks every guarantee from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .groups import FiniteWindow, GroupError
from .sofic import SoficMap, good_set_mask


class TilingPreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class Tiling:
    d: int
    window: FiniteWindow
    tau: Fraction
    eta: Fraction
    shapes: tuple[FiniteWindow, ...]
    centers: tuple[int, ...]
    preconditions_ok: bool

    @property
    def num_tiles(self) -> int:
        return len(self.shapes)

    def tiles(self, sigma: SoficMap) -> list[set[int]]:
        return [{int(sigma.perm(s)[c]) for s in shape}
                for shape, c in zip(self.shapes, self.centers)]

    def covered(self, sigma: SoficMap) -> set[int]:
        out: set[int] = set()
        for t in self.tiles(sigma):
            out |= t
        return out

    def coverage(self, sigma: SoficMap) -> Fraction:
        return Fraction(len(self.covered(sigma)), self.d)

    def summary(self, sigma: SoficMap) -> dict:
        return {
            "d": self.d,
            "num_tiles": self.num_tiles,
            "tau": str(self.tau),
            "eta": str(self.eta),
            "coverage": str(self.coverage(sigma)),
            "preconditions_ok": self.preconditions_ok,
            "tiles": [
                {"center": c, "shape": [repr(s) for s in shape]}
                for shape, c in zip(self.shapes, self.centers)
            ],
        }


@dataclass
class TilingVerdict:
    ok: bool
    failures: list[dict] = field(default_factory=list)
    coverage: Fraction | None = None


def _validate_params(tau: Fraction, eta: Fraction):
    if not 0 < tau < 1:
        raise TilingPreconditionError("tau must lie in (0, 1)")
    if not 0 <= eta < 1:
        raise TilingPreconditionError("eta must lie in [0, 1)")


def tile(sigma: SoficMap, F: FiniteWindow, tau, eta,
         good_set: Iterable[int], candidates: Iterable[int],
         permissive: bool = False) -> Tiling:
    """Deterministic greedy packing.

    Candidate centers from good_set & candidates are scanned in ascending
    order; a center is accepted with shape F' = {s in F : sigma_s(c) still
    uncovered} whenever |F'| >= tau|F|/2 (exact rational comparison), and
    scanning repeats until a full pass accepts nothing, which realizes a
    maximal collection.  Preconditions on |good_set| and |candidates| are
    enforced unless ``permissive`` is set, in which case the tiling is built
    anyway and flagged so reports never assert the coverage guarantee.
    """
    tau = Fraction(tau)
    eta = Fraction(eta)
    _validate_params(tau, eta)
    if F.group != sigma.group:
        raise GroupError("window belongs to a different group")
    d = sigma.d
    good = np.zeros(d, dtype=bool)
    good[np.fromiter((int(v) for v in good_set), dtype=np.int64, count=-1)] = True
    cand = np.zeros(d, dtype=bool)
    cand[np.fromiter((int(v) for v in candidates), dtype=np.int64, count=-1)] = True

    pre_ok = True
    problems = []
    if Fraction(int(good.sum())) < (1 - tau / (2 * (len(F) + 1))) * d:
        pre_ok = False
        problems.append("good set below the lemma cardinality threshold")
    mask = good_set_mask(sigma, F)
    if np.any(good & ~mask):
        pre_ok = False
        problems.append("good set fails the separation or inverse conditions")
    if Fraction(int(cand.sum())) < (1 - eta / (len(F) + 1)) * d:
        pre_ok = False
        problems.append("candidate set below the cardinality threshold")
    pool = np.flatnonzero(good & cand)
    if pool.size == 0:
        raise TilingPreconditionError("no candidate centers available")
    if not pre_ok and not permissive:
        raise TilingPreconditionError("; ".join(problems))

    perms = [sigma.perm(s) for s in F]
    min_shape = tau * len(F) / 2
    covered = np.zeros(d, dtype=bool)
    shapes: list[FiniteWindow] = []
    centers: list[int] = []
    accepted_any = True
    while accepted_any:
        accepted_any = False
        for c in pool.tolist():
            shape_elems = [s for s, p in zip(F, perms) if not covered[p[c]]]
            if not shape_elems or Fraction(len(shape_elems)) < min_shape:
                continue
            for s in shape_elems:
                covered[sigma.perm(s)[c]] = True
            shapes.append(FiniteWindow(F.group, shape_elems))
            centers.append(int(c))
            accepted_any = True
    return Tiling(d=d, window=F, tau=tau, eta=eta, shapes=tuple(shapes),
                  centers=tuple(centers), preconditions_ok=pre_ok)


def verify_tiling(tiling: Tiling, sigma: SoficMap, F: FiniteWindow, tau, eta,
                  candidates: Iterable[int] | None = None) -> TilingVerdict:
    """Independent recheck of every guarantee, recomputing tiles from scratch.

    Checks shape sizes against tau|F|/2, the subset relations F_k <= F,
    center admissibility when a candidate set is supplied, pairwise
    disjointness of the translate sets, and the coverage bound
    |union| >= (1 - tau - eta) d.  Failures carry witnesses.
    """
    tau = Fraction(tau)
    eta = Fraction(eta)
    failures: list[dict] = []
    min_shape = tau * len(F) / 2
    for k, shape in enumerate(tiling.shapes):
        if Fraction(len(shape)) < min_shape:
            failures.append({"kind": "shape_too_small", "tile": k, "size": len(shape)})
        if not all(s in F for s in shape):
            failures.append({"kind": "shape_not_subset", "tile": k})
    if candidates is not None:
        cand = {int(v) for v in candidates}
        for k, c in enumerate(tiling.centers):
            if c not in cand:
                failures.append({"kind": "center_not_admissible", "tile": k, "center": c})
    tiles = tiling.tiles(sigma)
    for k in range(len(tiles)):
        for k2 in range(k + 1, len(tiles)):
            overlap = tiles[k] & tiles[k2]
            if overlap:
                failures.append({"kind": "overlap", "tiles": (k, k2),
                                 "point": min(overlap)})
    union: set[int] = set()
    for t in tiles:
        union |= t
    coverage = Fraction(len(union), tiling.d)
    if Fraction(len(union)) < (1 - tau - eta) * tiling.d:
        failures.append({"kind": "coverage", "covered": len(union),
                         "required": str((1 - tau - eta) * tiling.d)})
    return TilingVerdict(ok=not failures, failures=failures, coverage=coverage)


def maximality_certificate(tiling: Tiling, sigma: SoficMap, F: FiniteWindow,
                           tau, good_set: Iterable[int],
                           candidates: Iterable[int]) -> tuple[bool, int | None]:
    """Exhaustive check that every admissible center sees strictly more than
    (1 - tau/2)|F| of its window translate already covered, the inequality a
    maximal collection must satisfy.  Returns (ok, first violating center)."""
    tau = Fraction(tau)
    covered = tiling.covered(sigma)
    pool = sorted(set(int(v) for v in good_set) & set(int(v) for v in candidates))
    perms = [sigma.perm(s) for s in F]
    bound = (1 - tau / 2) * len(F)
    for c in pool:
        hit = sum(1 for p in perms if int(p[c]) in covered)
        if not Fraction(hit) > bound:
            return False, c
    return True, None
