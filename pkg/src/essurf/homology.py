"""Exact integer homology of triangulations.

First homology is read off the dual handle structure: tetrahedra are
0-cells, interior faces 1-cells and interior edges 2-cells.  This works
unchanged for ideal triangulations, where every edge is interior and the
truncated compact manifold has the same handles.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import gcd

from . import perm as P
from .triangulation import VertexKind


class IntegerMatrix:
    """Sparse integer matrix stored as a list of ``{column: value}`` rows."""

    def __init__(self, rows, cols, entries=None):
        self.rows = rows
        self.cols = cols
        self.data = [dict() for _ in range(rows)]
        if entries:
            for (i, j), v in entries.items():
                self.add(i, j, v)

    @classmethod
    def from_dense(cls, dense):
        dense = [list(r) for r in dense]
        m = cls(len(dense), len(dense[0]) if dense else 0)
        for i, row in enumerate(dense):
            for j, v in enumerate(row):
                if v:
                    m.data[i][j] = int(v)
        return m

    def add(self, i, j, v):
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        w = self.data[i].get(j, 0) + v
        if w:
            self.data[i][j] = w
        else:
            self.data[i].pop(j, None)

    def to_dense(self):
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, row in enumerate(self.data):
            for j, v in row.items():
                out[i][j] = v
        return out

    def copy(self):
        m = IntegerMatrix(self.rows, self.cols)
        m.data = [dict(r) for r in self.data]
        return m


def _as_matrix(A):
    if isinstance(A, IntegerMatrix):
        return A.copy()
    return IntegerMatrix.from_dense(A)


def _eliminate_units(data, cols):
    """Remove unit pivots from a sparse matrix; returns (unit count, rest)."""
    colmap = {}
    for i, row in enumerate(data):
        for j in row:
            colmap.setdefault(j, set()).add(i)
    alive = set(i for i, row in enumerate(data) if row)
    units = 0
    changed = True
    while changed:
        changed = False
        # Prefer pivots in short rows to limit fill-in.
        for i in sorted(alive, key=lambda r: len(data[r])):
            if i not in alive:
                continue
            row = data[i]
            piv = None
            for j, v in row.items():
                if v in (1, -1) and (piv is None or len(colmap[j]) < len(colmap[piv])):
                    piv = j
            if piv is None:
                continue
            units += 1
            pv = row[piv]
            for k in list(colmap[piv]):
                if k == i:
                    continue
                other = data[k]
                factor = other[piv] * pv  # pv is +-1 so this is exact
                for j, v in row.items():
                    w = other.get(j, 0) - factor * v
                    if w:
                        if j not in other:
                            colmap[j].add(k)
                        other[j] = w
                    else:
                        if j in other:
                            del other[j]
                            colmap[j].discard(k)
                if not other:
                    alive.discard(k)
            for j in row:
                colmap[j].discard(i)
            data[i] = {}
            alive.discard(i)
            changed = True
    rest = [data[i] for i in sorted(alive)]
    return units, rest


def _dense_snf(rows):
    """Invariant factors of a small dense matrix given as sparse rows."""
    cols = sorted({j for r in rows for j in r})
    index = {j: k for k, j in enumerate(cols)}
    A = [[0] * len(cols) for _ in rows]
    for i, r in enumerate(rows):
        for j, v in r.items():
            A[i][index[j]] = v
    diag = []
    m, n = len(A), len(cols)
    t = 0
    while t < min(m, n):
        # smallest nonzero magnitude pivot in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = A[i][j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
        if best is None:
            break
        _, pi, pj = best
        A[t], A[pi] = A[pi], A[t]
        for row in A:
            row[t], row[pj] = row[pj], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    Ai, At = A[i], A[t]
                    for j in range(t, n):
                        Ai[j] -= q * At[j]
                    if Ai[t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for i in range(t, m):
                        A[i][j] -= q * A[i][t]
                    if A[t][j]:
                        dirty = True
            if not dirty:
                # pivot must divide the whole trailing block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                for j in range(t, n):
                    A[t][j] += A[bad][j]
                continue
            # move the smallest entry of row/column t into the pivot
            best = (abs(p), t, t)
            for i in range(t + 1, m):
                if A[i][t] and abs(A[i][t]) < best[0]:
                    best = (abs(A[i][t]), i, t)
            for j in range(t + 1, n):
                if A[t][j] and abs(A[t][j]) < best[0]:
                    best = (abs(A[t][j]), t, j)
            _, bi, bj = best
            if bi != t:
                A[t], A[bi] = A[bi], A[t]
            if bj != t:
                for row in A:
                    row[t], row[bj] = row[bj], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    return diag


def smith_normal_form(A):
    """Invariant factors ``d1 | d2 | ...`` and rank of an integer matrix."""
    M = _as_matrix(A)
    units, rest = _eliminate_units(M.data, M.cols)
    diag = [1] * units + _dense_snf(rest)
    # Normalise to a divisibility chain.
    diag = _divisibility_chain(diag)
    return tuple(diag), len(diag)


def _divisibility_chain(diag):
    diag = [d for d in diag if d]
    # Repeatedly replace (a, b) by (gcd, lcm) until sorted chain.
    changed = True
    diag.sort()
    while changed:
        changed = False
        for i in range(len(diag)):
            for j in range(i + 1, len(diag)):
                a, b = diag[i], diag[j]
                if b % a:
                    g = gcd(a, b)
                    diag[i], diag[j] = g, a * b // g
                    changed = True
        diag.sort()
    return diag


class Certificate(Enum):
    CLOSED_POSITIVE_B1 = "ClosedPositiveB1"
    HALF_LIVES_HALF_DIES = "HalfLivesHalfDies"
    NONE = "None"


@dataclass(frozen=True)
class HomologyProfile:
    b1_manifold: int
    b1_boundary: int
    torsion: tuple

    def to_dict(self):
        return {"b1": self.b1_manifold, "b1_boundary": self.b1_boundary, "torsion": list(self.torsion)}


def boundary_matrices(tri):
    """Return ``(d1, d2)`` of the dual complex as :class:`IntegerMatrix`."""
    gl = tri.gluings
    sk = tri.skeleton
    faces = []
    face_index = {}
    for t in range(tri.size):
        for f in range(4):
            g = gl[t][f]
            if g is None or (t, f) in face_index:
                continue
            other = (g[0], P.apply(g[1], f))
            face_index[(t, f)] = (len(faces), 1)
            face_index[other] = (len(faces), -1)
            faces.append(((t, f), other))
    d1 = IntegerMatrix(tri.size, len(faces))
    for k, ((t, f), (u, g)) in enumerate(faces):
        d1.add(u, k, 1)
        d1.add(t, k, -1)
    interior = [e for e in sk.edges if not e.boundary]
    d2 = IntegerMatrix(len(faces), len(interior))
    for c, edge in enumerate(interior):
        for t, p in edge.embeddings:
            k, s = face_index[(t, P.S4[p][3])]
            d2.add(k, c, s)
    return d1, d2


def first_homology(tri):
    """``(b1, torsion)`` of the compact manifold underlying ``tri``."""
    d1, d2 = boundary_matrices(tri)
    _, r1 = smith_normal_form(d1)
    f2, r2 = smith_normal_form(d2)
    b1 = d1.cols - r1 - r2
    return b1, tuple(d for d in f2 if d > 1)


def _surface_b1(euler, orientable):
    return 2 - euler if orientable else 1 - euler


def boundary_b1(tri):
    """b1 of the boundary of the compact model: real boundary plus cusp links."""
    total = 0
    for comp in tri.boundary_components:
        total += _surface_b1(comp.euler, comp.orientable)
    for v, kind in enumerate(tri.skeleton.vertex_kinds):
        if kind is VertexKind.IDEAL:
            link = tri.vertex_link(v)
            total += _surface_b1(link.euler, link.orientable)
    return total


def homology_profile(tri):
    b1, torsion = first_homology(tri)
    return HomologyProfile(b1, boundary_b1(tri), torsion)


def homology_certificate(tri, profile=None):
    profile = profile or homology_profile(tri)
    if tri.is_closed:
        if profile.b1_manifold > 0:
            return Certificate.CLOSED_POSITIVE_B1
        return Certificate.NONE
    if 2 * profile.b1_manifold > profile.b1_boundary:
        return Certificate.HALF_LIVES_HALF_DIES
    return Certificate.NONE
