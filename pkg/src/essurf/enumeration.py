"""Admissible extremal rays of normal surface solution cones.

The cone is ``{x >= 0 : A x = 0}``.  Rays are found by the double
description method, inserting one hyperplane at a time starting from the
nonnegative orthant.  Only pairs whose combined support is admissible are
ever combined; rays with inadmissible support are dropped as soon as they
appear.  This is safe because every admissible extremal ray of the final
cone lies on a face of each intermediate cone spanned by admissible rays.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

from .qtheory import ConstraintSystem


@dataclass(frozen=True)
class Ray:
    vector: tuple
    admissible: bool = True

    def __iter__(self):
        return iter(self.vector)

    def __len__(self):
        return len(self.vector)


@dataclass(frozen=True)
class RaySet:
    rays: tuple
    system: ConstraintSystem

    def __len__(self):
        return len(self.rays)

    def __iter__(self):
        return iter(self.rays)

    def __getitem__(self, i):
        return self.rays[i]

    def vectors(self):
        return [r.vector for r in self.rays]


def _primitive(v):
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                break
    if g > 1:
        return tuple(x // g for x in v)
    return tuple(v)


def _forbidden_masks(ncols, blocks):
    """For each coordinate, the mask of coordinates it may not coexist with."""
    forb = [0] * ncols
    for blk in blocks:
        bm = 0
        for i in blk:
            bm |= 1 << i
        for i in blk:
            forb[i] |= bm & ~(1 << i)
    return forb


class _RankTracker:
    """Incremental rank of the inserted equations over the rationals."""

    def __init__(self):
        self.basis = []  # list of (pivot, row as list of Fractions)

    def add(self, row):
        r = [Fraction(x) for x in row]
        for piv, b in self.basis:
            if r[piv]:
                c = r[piv] / b[piv]
                r = [x - c * y for x, y in zip(r, b)]
        for i, x in enumerate(r):
            if x:
                self.basis.append((i, r))
                return True
        return False

    @property
    def rank(self):
        return len(self.basis)


_WORD = (1 << 64) - 1


def _words(mask, nwords):
    return [(mask >> (64 * k)) & _WORD for k in range(nwords)]


class EnumerationTimeout(TimeoutError):
    pass


def _row_order(rows):
    return sorted(rows, key=lambda r: (sum(1 for x in r if x), r))


def _adjacent_pairs(supports, forbs, pos, neg, limit, nwords, deadline=None, chunk=1 << 22):
    """Pairs (i, j) from ``pos`` x ``neg`` that are compatible and adjacent.

    Adjacency is combinatorial: no third ray has support inside the union
    of the two supports, which must have at most ``limit`` elements.
    """
    S = np.array([_words(m, nwords) for m in supports], dtype=np.uint64)
    F = np.array([_words(m, nwords) for m in forbs], dtype=np.uint64)
    pc = np.bitwise_count(S).sum(axis=1)
    neg = np.array(neg, dtype=np.intp)
    Sn, Fn = S[neg], F[neg]
    small = np.flatnonzero(pc <= limit)
    for i in pos:
        if deadline is not None and time.monotonic() > deadline:
            raise EnumerationTimeout("ray enumeration ran past its deadline")
        si, fi = S[i], F[i]
        ok = ~np.any(Sn & fi, axis=1) & ~np.any(Fn & si, axis=1)
        U = Sn[ok] | si
        fits = np.bitwise_count(U).sum(axis=1) <= limit
        J = neg[ok][fits]
        if not len(J):
            continue
        # rays that could sit inside some union: what they add to i must fit
        inside = small[np.bitwise_count(S[small] | si).sum(axis=1) <= limit]
        rem = S[inside] & ~si
        notj = ~S[J]
        step = max(1, chunk // max(1, len(inside) * nwords))
        for a in range(0, len(J), step):
            if deadline is not None and time.monotonic() > deadline:
                raise EnumerationTimeout("ray enumeration ran past its deadline")
            block = notj[a:a + step]
            hit = ~np.any(rem[:, None, :] & block[None, :, :], axis=2)
            counts = hit.sum(axis=0)
            for j in J[a:a + step][counts == 2]:
                yield i, int(j)


def enumerate_admissible_rays(system, progress=None, deadline=None):
    """Return the admissible extremal rays of the system's cone, sorted.

    ``deadline`` is a ``time.monotonic()`` value; past it the enumeration
    raises :class:`EnumerationTimeout`.
    """
    n = system.ncols
    blocks = system.blocks
    forb_coord = _forbidden_masks(n, blocks)

    def forbidden(mask):
        f = 0
        i = 0
        while mask:
            if mask & 1:
                f |= forb_coord[i]
            mask >>= 1
            i += 1
        return f

    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    supports = [1 << i for i in range(n)]
    forbs = [forb_coord[i] for i in range(n)]

    rows = _row_order([tuple(r) for r in system.equations if any(r)])
    tracker = _RankTracker()
    nwords = max(1, (n + 63) // 64)
    for step, row in enumerate(rows):
        if deadline is not None and time.monotonic() > deadline:
            raise EnumerationTimeout("ray enumeration ran past its deadline")
        if not tracker.add(row):
            continue
        k = tracker.rank
        nz = [(i, a) for i, a in enumerate(row) if a]
        dots = [sum(a * v[i] for i, a in nz) for v in rays]
        pos = [i for i, d in enumerate(dots) if d > 0]
        neg = [i for i, d in enumerate(dots) if d < 0]
        keep = [i for i, d in enumerate(dots) if d == 0]
        new_rays = [rays[i] for i in keep]
        new_supp = [supports[i] for i in keep]
        new_forb = [forbs[i] for i in keep]
        if pos and neg:
            for i, j in _adjacent_pairs(supports, forbs, pos, neg, k + 1, nwords, deadline):
                di, dj = dots[i], -dots[j]
                vi, vj = rays[i], rays[j]
                new_rays.append(_primitive(tuple(dj * a + di * b for a, b in zip(vi, vj))))
                new_supp.append(supports[i] | supports[j])
                new_forb.append(forbs[i] | forbs[j])
        rays, supports, forbs = new_rays, new_supp, new_forb
        if progress is not None:
            progress(step, len(rows), len(rays))
    out = sorted(set(rays))
    return RaySet(tuple(Ray(v, True) for v in out), system)
