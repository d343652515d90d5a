"""Normal surfaces: reconstruction from quad vectors and derived properties.

A surface is stored by its disc counts: ``triangles[4 * t + v]`` triangles
around corner ``v`` of tetrahedron ``t`` and ``quads[3 * t + q]`` quads of
type ``q``.  Within a tetrahedron, triangles at a corner are numbered from
the vertex outward and quads of type ``ab|cd`` are numbered from the side
holding ``a`` and ``b`` (``a`` is the smaller label).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from . import perm as P
from ._unionfind import UnionFind, ParityUnionFind
from .triangulation import EDGE_VERTS, QUAD_OF, QUAD_PAIRS, face_vertices


class SurfaceError(ValueError):
    pass


class NotClosed(SurfaceError):
    """The quad vector does not describe a surface with finitely many discs."""


class Inconsistent(SurfaceError):
    pass


class IncompatibleSurfaces(SurfaceError):
    pass


def _quad_side(q, v):
    """0 if vertex ``v`` lies on the numbering-origin side of quad type ``q``."""
    a, b, _, _ = QUAD_PAIRS[q]
    return 0 if v in (a, b) else 1


@dataclass(frozen=True, eq=False)
class NormalSurface:
    tri: object
    triangles: tuple
    quads: tuple

    def __eq__(self, other):
        return (
            isinstance(other, NormalSurface)
            and self.tri is other.tri
            and self.triangles == other.triangles
            and self.quads == other.quads
        )

    def __hash__(self):
        return hash((id(self.tri), self.triangles, self.quads))

    # -- coordinates ------------------------------------------------------

    def quad_type(self, t):
        """The quad type present in tetrahedron ``t`` and its count, or (None, 0)."""
        for q in range(3):
            if self.quads[3 * t + q]:
                return q, self.quads[3 * t + q]
        return None, 0

    def standard_vector(self):
        out = []
        for t in range(self.tri.size):
            out.extend(self.triangles[4 * t:4 * t + 4])
            out.extend(self.quads[3 * t:3 * t + 3])
        return tuple(out)

    @property
    def is_empty(self):
        return not any(self.triangles) and not any(self.quads)

    @property
    def disc_count(self):
        return sum(self.triangles) + sum(self.quads)

    def scaled(self, k):
        return NormalSurface(self.tri, tuple(k * x for x in self.triangles), tuple(k * x for x in self.quads))

    # -- arcs and edge points --------------------------------------------

    def arcs_at(self, t, v, f):
        """Number of normal arcs cutting corner ``v`` in face ``f`` of ``t``."""
        return self.triangles[4 * t + v] + self.quads[3 * t + QUAD_OF[v][f]]

    def edge_weight(self, t, a, b):
        """Intersection points on edge ``ab`` of tetrahedron ``t``."""
        c, d = (x for x in range(4) if x not in (a, b))
        q = self.quads
        return (
            self.triangles[4 * t + a]
            + self.triangles[4 * t + b]
            + q[3 * t + QUAD_OF[a][c]]
            + q[3 * t + QUAD_OF[a][d]]
        )

    def arc_disc(self, t, v, f, k):
        """The disc owning the ``k``-th arc from corner ``v`` in face ``f``."""
        tv = self.triangles[4 * t + v]
        if k < tv:
            return (t, v, k)
        q = QUAD_OF[v][f]
        j = k - tv
        n = self.quads[3 * t + q]
        if _quad_side(q, v) == 1:
            j = n - 1 - j
        return (t, 4 + q, j)

    def discs(self):
        for t in range(self.tri.size):
            for v in range(4):
                for k in range(self.triangles[4 * t + v]):
                    yield (t, v, k)
            for q in range(3):
                for k in range(self.quads[3 * t + q]):
                    yield (t, 4 + q, k)

    def _glued_arc_pairs(self):
        """Yield ``(disc, side, disc', side')`` for arcs matched across faces.

        ``side`` is the side of the disc facing the corner the arc cuts off.
        """
        gl = self.tri.gluings
        for t in range(self.tri.size):
            for f in range(4):
                g = gl[t][f]
                if g is None:
                    continue
                u, p = g
                uf = P.apply(p, f)
                if (u, uf) < (t, f):
                    continue
                for v in face_vertices(f):
                    uv = P.apply(p, v)
                    n = self.arcs_at(t, v, f)
                    if n != self.arcs_at(u, uv, uf):
                        raise Inconsistent(f"arc counts disagree across face {t} {f}")
                    for k in range(n):
                        d1 = self.arc_disc(t, v, f, k)
                        d2 = self.arc_disc(u, uv, uf, k)
                        yield d1, _toward(d1, v), d2, _toward(d2, uv)

    # -- properties -------------------------------------------------------

    @cached_property
    def euler(self):
        return euler_characteristic(self)

    @cached_property
    def weight(self):
        return sum(
            self.edge_weight(*_first_embedding_edge(e)) for e in self.tri.skeleton.edges
        )

    @property
    def is_vertex_linking(self):
        return not any(self.quads) and any(self.triangles)

    @cached_property
    def _disc_components(self):
        uf = UnionFind(self.discs())
        for d1, _, d2, _ in self._glued_arc_pairs():
            uf.union(d1, d2)
        return uf.groups()

    def components(self):
        return components(self)

    @property
    def is_connected(self):
        return len(self._disc_components) == 1

    @cached_property
    def two_sided(self):
        return sidedness(self)[1]

    @cached_property
    def orientable(self):
        return sidedness(self)[0]

    @property
    def genus(self):
        if self.orientable:
            return (2 - self.euler) // 2
        return 2 - self.euler

    def has_boundary(self):
        gl = self.tri.gluings
        for t in range(self.tri.size):
            for f in range(4):
                if gl[t][f] is None and any(self.arcs_at(t, v, f) for v in face_vertices(f)):
                    return True
        return False

    def __repr__(self):
        return f"<NormalSurface chi={self.euler} discs={self.disc_count}>"


def _toward(disc, v):
    t, kind, _ = disc
    if kind < 4:
        return 0
    return _quad_side(kind - 4, v)


def _first_embedding_edge(edge):
    t, p = edge.embeddings[0]
    img = P.S4[p]
    return t, img[0], img[1]


# ---------------------------------------------------------------------------
# reconstruction


def reconstruct(tri, x):
    """Rebuild the closed normal surface with quad vector ``x``.

    Triangle counts are the minimal nonnegative completion around each vertex
    class.  Raises :class:`NotClosed` if the counts cannot close up (a spun
    solution) and :class:`Inconsistent` for malformed input.
    """
    n = tri.size
    x = tuple(int(v) for v in x)
    if len(x) != 3 * n:
        raise Inconsistent(f"quad vector has length {len(x)}, expected {3 * n}")
    if any(v < 0 for v in x):
        raise Inconsistent("negative quad coordinate")
    gl = tri.gluings
    tri_counts = [0] * (4 * n)
    for members in tri.skeleton.vertices:
        val = {members[0]: 0}
        queue = deque([members[0]])
        while queue:
            t, v = queue.popleft()
            for f in range(4):
                if f == v or gl[t][f] is None:
                    continue
                u, p = gl[t][f]
                uv, uf = P.apply(p, v), P.apply(p, f)
                want = val[(t, v)] + x[3 * t + QUAD_OF[v][f]] - x[3 * u + QUAD_OF[uv][uf]]
                if (u, uv) in val:
                    if val[(u, uv)] != want:
                        raise NotClosed("triangle counts cannot be completed around a vertex")
                else:
                    val[(u, uv)] = want
                    queue.append((u, uv))
        low = min(val.values())
        for (t, v), c in val.items():
            tri_counts[4 * t + v] = c - low
    return NormalSurface(tri, tuple(tri_counts), x)


def from_standard(tri, vec):
    """Surface from a standard (7 per tetrahedron) coordinate vector."""
    n = tri.size
    if len(vec) != 7 * n:
        raise Inconsistent(f"standard vector has length {len(vec)}, expected {7 * n}")
    triangles = []
    quads = []
    for t in range(n):
        triangles.extend(int(v) for v in vec[7 * t:7 * t + 4])
        quads.extend(int(v) for v in vec[7 * t + 4:7 * t + 7])
    return NormalSurface(tri, tuple(triangles), tuple(quads))


def vertex_link_surface(tri, v):
    """The normal surface made of all triangles around vertex class ``v``."""
    triangles = [0] * (4 * tri.size)
    for t, c in tri.skeleton.vertices[v]:
        triangles[4 * t + c] = 1
    return NormalSurface(tri, tuple(triangles), (0,) * (3 * tri.size))


# ---------------------------------------------------------------------------
# properties


def euler_characteristic(S):
    """V - E + F counted on edge classes, face classes and discs."""
    tri = S.tri
    gl = tri.gluings
    V = S.weight
    E = 0
    for t in range(tri.size):
        for f in range(4):
            g = gl[t][f]
            if g is not None and (g[0], P.apply(g[1], f)) < (t, f):
                continue
            E += sum(S.arcs_at(t, v, f) for v in face_vertices(f))
    F = S.disc_count
    return V - E + F


def explicit_euler(S):
    """Euler characteristic of the explicitly glued cell complex.

    Independent of :func:`euler_characteristic`: every edge point, arc and
    disc is materialised and identified through the face gluings.
    """
    tri = S.tri
    gl = tri.gluings
    points = UnionFind()
    arcs = UnionFind()
    for t in range(tri.size):
        for a, b in EDGE_VERTS:
            for k in range(S.edge_weight(t, a, b)):
                points.add((t, a, b, k))
        for f in range(4):
            for v in face_vertices(f):
                for k in range(S.arcs_at(t, v, f)):
                    arcs.add((t, f, v, k))
    for t in range(tri.size):
        for f in range(4):
            g = gl[t][f]
            if g is None:
                continue
            u, p = g
            img = P.S4[p]
            for v in face_vertices(f):
                for k in range(S.arcs_at(t, v, f)):
                    arcs.union((t, f, v, k), (u, img[f], img[v], k))
            for a, b in combinations(face_vertices(f), 2):
                for k in range(S.edge_weight(t, a, b)):
                    points.union((t, a, b, k), (u, img[a], img[b], k) if img[a] < img[b] else (u, img[b], img[a], S.edge_weight(t, a, b) - 1 - k))
    V = len({points.find(x) for x in points})
    E = len({arcs.find(x) for x in arcs})
    return V - E + S.disc_count


def components(S):
    """Connected components, each as its own :class:`NormalSurface`."""
    n = S.tri.size
    out = []
    for group in sorted(S._disc_components, key=lambda g: min(g)):
        triangles = [0] * (4 * n)
        quads = [0] * (3 * n)
        for t, kind, _ in group:
            if kind < 4:
                triangles[4 * t + kind] += 1
            else:
                quads[3 * t + kind - 4] += 1
        out.append(NormalSurface(S.tri, tuple(triangles), tuple(quads)))
    return out


def sidedness(S):
    """``(orientable, two_sided)`` for a surface in an orientable manifold.

    A transverse orientation is propagated across arcs; it exists iff the
    surface is two-sided, which in an orientable ambient manifold is the
    same as orientability.
    """
    puf = ParityUnionFind(S.discs())
    for d1, s1, d2, s2 in S._glued_arc_pairs():
        if not puf.union(d1, d2, s1 ^ s2):
            return False, False
    return True, True


# ---------------------------------------------------------------------------
# complement regions


def _region_graph(S):
    """Union-find over the complementary regions of ``S``.

    Regions in a tetrahedron are corner layers ``(t, 'c', v, k)`` between
    consecutive triangles at ``v`` and central slabs ``(t, 'z', j)`` between
    consecutive quads.
    """
    tri = S.tri
    gl = tri.gluings
    uf = UnionFind()
    for t in range(tri.size):
        for v in range(4):
            for k in range(S.triangles[4 * t + v]):
                uf.add((t, "c", v, k))
        _, Q = S.quad_type(t)
        for j in range(Q + 1):
            uf.add((t, "z", j))

    def face_region(t, f, v, k):
        """Region of face ``f`` lying in layer ``k`` at corner ``v`` (None = centre)."""
        tv = S.triangles[4 * t + v]
        if k is not None and k < tv:
            return (t, "c", v, k)
        q, Q = S.quad_type(t)
        if k is not None:
            j = k - tv
            return (t, "z", j if _quad_side(q, v) == 0 else Q - j)
        if Q == 0:
            return (t, "z", 0)
        # the centre of the face is beyond every quad arc from the cut corner
        a, b, c, d = QUAD_PAIRS[q]
        partner = {a: b, b: a, c: d, d: c}[f]
        return (t, "z", Q if _quad_side(q, partner) == 0 else 0)

    for t in range(tri.size):
        for f in range(4):
            g = gl[t][f]
            if g is None:
                continue
            u, p = g
            uf_ = P.apply(p, f)
            if (u, uf_) < (t, f):
                continue
            for v in face_vertices(f):
                uv = P.apply(p, v)
                for k in range(S.arcs_at(t, v, f)):
                    uf.union(face_region(t, f, v, k), face_region(u, uf_, uv, k))
            uf.union(face_region(t, f, face_vertices(f)[0], None), face_region(u, uf_, P.apply(p, face_vertices(f)[0]), None))
    return uf


def complement_component_count(S):
    uf = _region_graph(S)
    return len({uf.find(r) for r in uf})


def is_separating(S):
    """True iff cutting along the (connected) surface disconnects the manifold."""
    if S.is_empty:
        raise SurfaceError("separation is undefined for the empty surface")
    return complement_component_count(S) > len(S.tri.components())


# ---------------------------------------------------------------------------
# sums


@dataclass(frozen=True)
class HakenSum:
    surface: NormalSurface  # geometric sum, all discs kept
    reduced: NormalSurface  # with vertex-linking copies removed
    sigma: tuple  # copies of each vertex link removed

    @property
    def sigma_count(self):
        return sum(self.sigma)


def compatible(S1, S2):
    for t in range(S1.tri.size):
        q1, _ = S1.quad_type(t)
        q2, _ = S2.quad_type(t)
        if q1 is not None and q2 is not None and q1 != q2:
            return False
    return True


def haken_sum(S1, S2):
    if S1.tri is not S2.tri:
        raise IncompatibleSurfaces("surfaces live in different triangulations")
    if not compatible(S1, S2):
        raise IncompatibleSurfaces("surfaces have different quad types in some tetrahedron")
    tri = S1.tri
    full = NormalSurface(
        tri,
        tuple(a + b for a, b in zip(S1.triangles, S2.triangles)),
        tuple(a + b for a, b in zip(S1.quads, S2.quads)),
    )
    reduced_tris = list(full.triangles)
    sigma = []
    for members in tri.skeleton.vertices:
        low = min(full.triangles[4 * t + v] for t, v in members)
        sigma.append(low)
        for t, v in members:
            reduced_tris[4 * t + v] -= low
    reduced = NormalSurface(tri, tuple(reduced_tris), full.quads)
    return HakenSum(full, reduced, tuple(sigma))


# ---------------------------------------------------------------------------
# summaries


@dataclass(frozen=True)
class SurfaceProperties:
    euler: int
    weight: int
    component_count: int
    orientable: bool
    two_sided: bool
    separating: bool
    genus: tuple
    vertex_linking: bool

    def to_dict(self):
        return {
            "chi": self.euler,
            "weight": self.weight,
            "components": self.component_count,
            "orientable": self.orientable,
            "two_sided": self.two_sided,
            "separating": self.separating,
            "genus": list(self.genus),
            "vertex_linking": self.vertex_linking,
        }


def properties(S):
    comps = components(S)
    genera = []
    for c in comps:
        genera.append(c.genus)
    sep = is_separating(S) if len(comps) == 1 else complement_component_count(S) > 1
    return SurfaceProperties(
        S.euler,
        S.weight,
        len(comps),
        all(c.orientable for c in comps),
        all(c.two_sided for c in comps),
        sep,
        tuple(genera),
        S.is_vertex_linking,
    )


def canonical_surface(tri, x):
    """The connected two-sided surface for a vertex ray: primitive or doubled."""
    S = reconstruct(tri, x)
    if S.is_empty or S.two_sided:
        return S, False
    return reconstruct(tri, tuple(2 * v for v in x)), True
