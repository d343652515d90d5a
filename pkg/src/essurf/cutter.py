"""Cutting a triangulation open along a normal surface, and truncation.

Each tetrahedron is split by the normal discs into cells: corner cells
between consecutive triangles at a vertex and central slabs between
consecutive quads.  Every cell is a convex polyhedron.  A cell that is
already a tetrahedron is kept; any other cell is coned from an interior
point, with polygonal faces of four or more sides first coned from their
own centre.  Faces are matched across the original face gluings by the
labels of their corner points, so both sides subdivide a shared polygon in
the same way.

Points are labelled ``("V", x)`` for a tetrahedron vertex and
``("P", x, y, k)`` (``x < y``) for the ``k``-th surface point on edge
``xy`` counted from ``x``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import perm as P
from .surface import NormalSurface
from .triangulation import QUAD_PAIRS, QUAD_OF, Triangulation, face_vertices

COPY_OF_S = 0


def _pt(x, y, k, weight):
    """Label of the ``k``-th point from ``x`` on edge ``xy`` (1-based)."""
    if k == 0:
        return ("V", x)
    if x < y:
        return ("P", x, y, k)
    return ("P", y, x, weight - k + 1)


@dataclass
class _Cell:
    faces: list = field(default_factory=list)  # (polygon, kind, info)


class _TetCutter:
    """Cell structure of one tetrahedron cut along a surface."""

    def __init__(self, S, t, shells, drop_corner):
        self.S = S
        self.t = t
        # shells[v] = number of extra innermost link triangles at corner v
        self.shell = shells
        self.tv = [S.triangles[4 * t + v] + shells[v] for v in range(4)]
        self.q, self.Q = S.quad_type(t)
        self.drop = drop_corner  # corners whose innermost cell is discarded
        self.w = {}
        for a in range(4):
            for b in range(a + 1, 4):
                self.w[(a, b)] = self.w[(b, a)] = S.edge_weight(t, a, b) + shells[a] + shells[b]

    def P(self, x, y, k):
        return _pt(x, y, k, self.w[(x, y)])

    def arcs(self, x, f):
        """Arcs at corner ``x`` in face ``f``."""
        n = self.tv[x]
        if self.Q and QUAD_OF[x][f] == self.q:
            n += self.Q
        return n

    def quad_slab(self, x, j):
        """Slab met just beyond ``j`` quads counted from corner ``x``'s side."""
        a, b, _, _ = QUAD_PAIRS[self.q]
        return j if x in (a, b) else self.Q - j

    def outer_slab(self, x):
        """Slab adjacent to the outermost triangle at ``x``."""
        if not self.Q:
            return 0
        return self.quad_slab(x, 0)

    def face_regions(self, f):
        """Polygons of tet face ``f`` with the cell each belongs to."""
        xs = face_vertices(f)
        out = []
        for x in xs:
            y, z = (v for v in xs if v != x)
            m = self.arcs(x, f)
            for k in range(m):
                if k == 0:
                    poly = (("V", x), self.P(x, y, 1), self.P(x, z, 1))
                else:
                    poly = (self.P(x, y, k), self.P(x, y, k + 1), self.P(x, z, k + 1), self.P(x, z, k))
                if k < self.tv[x]:
                    cell = ("c", x, k)
                else:
                    cell = ("z", self.quad_slab(x, k - self.tv[x]))
                out.append((poly, cell))
        # central polygon, walking x -> y -> z
        poly = []
        for i, x in enumerate(xs):
            prev, nxt = xs[i - 1], xs[(i + 1) % 3]
            m = self.arcs(x, f)
            if m == 0:
                poly.append(("V", x))
            else:
                poly.append(self.P(x, prev, m))
                poly.append(self.P(x, nxt, m))
        if not self.Q:
            cell = ("z", 0)
        else:
            a, b, c, d = QUAD_PAIRS[self.q]
            partner = {a: b, b: a, c: d, d: c}[f]
            cell = ("z", self.Q if self.quad_slab(partner, 0) == 0 else 0)
        out.append((tuple(poly), cell))
        return out

    def disc_faces(self):
        """Normal disc polygons with the two cells on either side."""
        out = []
        for v in range(4):
            others = [w for w in range(4) if w != v]
            for k in range(1, self.tv[v] + 1):
                poly = tuple(self.P(v, w, k) for w in others)
                inner = ("c", v, k - 1)
                outer = ("c", v, k) if k < self.tv[v] else ("z", self.outer_slab(v))
                link = k <= self.shell[v]
                out.append((poly, inner, outer, link))
        if self.Q:
            a, b, c, d = QUAD_PAIRS[self.q]
            for j in range(self.Q):
                ka = self.tv[a] + j + 1
                kb = self.tv[b] + j + 1
                poly = (self.P(a, c, ka), self.P(a, d, ka), self.P(b, d, kb), self.P(b, c, kb))
                out.append((poly, ("z", j), ("z", j + 1), False))
        return out

    def cells(self):
        cells = {}
        for f in range(4):
            for poly, cell in self.face_regions(f):
                cells.setdefault(cell, _Cell()).faces.append((poly, "face", f))
        for poly, inner, outer, link in self.disc_faces():
            for cell in (inner, outer):
                cells.setdefault(cell, _Cell()).faces.append((poly, "disc", link))
        for v in self.drop:
            cells.pop(("c", v, 0), None)
        return cells


def cut_along(tri, S=None, truncate_ideal=True, surface_tag=COPY_OF_S):
    """Cut ``tri`` open along ``S`` and truncate ideal vertices.

    Returns a list of :class:`CutPiece`, one per complementary region.
    Faces of the copies of ``S`` are tagged ``surface_tag``.  Truncated
    cusps and original boundary faces keep distinct positive tags.
    """
    n = tri.size
    if S is None:
        S = NormalSurface(tri, (0,) * (4 * n), (0,) * (3 * n))
    sk = tri.skeleton
    ideal = set(tri.ideal_vertices()) if truncate_ideal else set()
    base_tags = _original_tags(tri)
    cusp_tag = {}
    next_tag = 1 + max([0] + [t for row in base_tags for t in row if t is not None])
    for v in sorted(ideal):
        cusp_tag[v] = next_tag
        next_tag += 1

    labels = []  # per new tet: tuple of 4 labels (global)
    outer_faces = {}  # (orig tet, orig face, frozenset local labels) -> (new tet, face)
    disc_tags = {}  # (new tet, face) -> tag
    internal = {}  # (cell key, frozenset labels) -> list of (new tet, face)

    def add_tet(lab):
        labels.append(lab)
        return len(labels) - 1

    for t in range(n):
        shells = [1 if sk.vertex_of[t][v] in ideal else 0 for v in range(4)]
        drop = [v for v in range(4) if shells[v]]
        cutter = _TetCutter(S, t, shells, drop)
        for ckey, cell in cutter.cells().items():
            faces = cell.faces
            is_tet = len(faces) == 4 and all(len(p) == 3 for p, _, _ in faces)
            center = ("C", t, ckey)
            if is_tet:
                verts = []
                for poly, _, _ in faces:
                    for x in poly:
                        if x not in verts:
                            verts.append(x)
                lab = tuple((t, x) for x in verts)
                nt = add_tet(lab)
                for poly, kind, info in faces:
                    missing = next(i for i in range(4) if verts[i] not in poly)
                    _register(nt, missing, poly, kind, info, t, ckey, lab, outer_faces, disc_tags, internal, cusp_tag, surface_tag, sk)
                continue
            for poly, kind, info in faces:
                if len(poly) == 3:
                    lab = ((t, center),) + tuple((t, x) for x in poly)
                    nt = add_tet(lab)
                    _register(nt, 0, poly, kind, info, t, ckey, lab, outer_faces, disc_tags, internal, cusp_tag, surface_tag, sk)
                    for i in range(1, 4):
                        key = frozenset(lab[j] for j in range(4) if j != i)
                        internal.setdefault((t, ckey, key), []).append((nt, i))
                else:
                    mid = ("M", frozenset(poly))
                    for i in range(len(poly)):
                        seg = (poly[i], poly[(i + 1) % len(poly)])
                        lab = ((t, center), (t, mid), (t, seg[0]), (t, seg[1]))
                        nt = add_tet(lab)
                        sub = (mid, seg[0], seg[1])
                        _register(nt, 0, sub, kind, info, t, ckey, lab, outer_faces, disc_tags, internal, cusp_tag, surface_tag, sk)
                        for k in range(1, 4):
                            key = frozenset(lab[j] for j in range(4) if j != k)
                            internal.setdefault((t, ckey, key), []).append((nt, k))

    N = len(labels)
    table = [[None] * 4 for _ in range(N)]
    tags = [[None] * 4 for _ in range(N)]

    def glue(a, fa, b, fb):
        la, lb = labels[a], labels[b]
        img = {}
        for i in range(4):
            if i == fa:
                continue
            img[i] = lb.index(la[i]) if la[i] in lb else None
        return img

    # gluings inside a cell
    for key, owners in internal.items():
        if len(owners) != 2:
            raise RuntimeError(f"cell face shared by {len(owners)} tetrahedra")
        (a, fa), (b, fb) = owners
        img = glue(a, fa, b, fb)
        img[fa] = fb
        q = P.code(tuple(img[i] for i in range(4)))
        table[a][fa] = (b, q)
        table[b][fb] = (a, P.inverse(q))

    # surface discs become boundary
    for (a, fa), tag in disc_tags.items():
        tags[a][fa] = tag

    # gluings across original faces
    gl = tri.gluings
    for (t, f, key), (a, fa) in outer_faces.items():
        g = gl[t][f]
        if g is None:
            tags[a][fa] = base_tags[t][f]
            continue
        u, p = g
        uf = P.apply(p, f)
        if (u, uf) < (t, f) or ((u, uf) == (t, f)):
            continue
        src = _TetCutter(S, t, [1 if sk.vertex_of[t][v] in ideal else 0 for v in range(4)], [])
        dst = _TetCutter(S, u, [1 if sk.vertex_of[u][v] in ideal else 0 for v in range(4)], [])
        mapped = frozenset(_map_label(x, p, src, dst) for x in key)
        other = outer_faces.get((u, uf, mapped))
        if other is None:
            raise RuntimeError("no matching sub-face across a face gluing")
        b, fb = other
        la, lb = labels[a], labels[b]
        img = {}
        for i in range(4):
            if i == fa:
                continue
            img[i] = lb.index((u, _map_label(la[i][1], p, src, dst)))
        img[fa] = fb
        q = P.code(tuple(img[i] for i in range(4)))
        table[a][fa] = (b, q)
        table[b][fb] = (a, P.inverse(q))

    out = Triangulation(tuple(tuple(r) for r in table), tuple(tuple(r) for r in tags), tri.name)
    pieces = []
    for comp in out.components():
        pieces.append(CutPiece.of(comp))
    return pieces


def _register(nt, face, poly, kind, info, t, ckey, lab, outer_faces, disc_tags, internal, cusp_tag, surface_tag, sk):
    if kind == "face":
        key = frozenset(poly)
        outer_faces[(t, info, key)] = (nt, face)
    else:
        if info:
            # link triangle of a truncated cusp
            corner = _link_corner(poly)
            disc_tags[(nt, face)] = cusp_tag[sk.vertex_of[t][corner]]
        else:
            disc_tags[(nt, face)] = surface_tag


def _link_corner(poly):
    """The tetrahedron vertex a triangle of edge points encircles."""
    counts = {}
    for x in poly:
        if x[0] == "M":
            continue
        _, a, b, _ = x
        counts[a] = counts.get(a, 0) + 1
        counts[b] = counts.get(b, 0) + 1
    return next(v for v, c in counts.items() if c == 3)


def _map_label(x, p, src, dst):
    """Carry a point label of ``src`` across a face gluing ``p`` into ``dst``."""
    kind = x[0]
    if kind == "V":
        return ("V", P.apply(p, x[1]))
    if kind == "P":
        _, a, b, k = x
        return dst.P(P.apply(p, a), P.apply(p, b), k)
    if kind == "M":
        return ("M", frozenset(_map_label(y, p, src, dst) for y in x[1]))
    raise ValueError(f"cannot map label {x!r}")


def _original_tags(tri):
    """Positive tags for existing boundary faces, one per boundary component."""
    tags = [[None] * 4 for _ in range(tri.size)]
    if tri.tags is not None:
        for t in range(tri.size):
            for f in range(4):
                if tri.gluings[t][f] is None:
                    tags[t][f] = tri.tags[t][f]
        return tags
    for comp in tri.boundary_components:
        for t, f in comp.faces:
            tags[t][f] = comp.index + 1
    return tags


def truncate(tri):
    """Compact triangulation with each ideal vertex replaced by a boundary surface."""
    if not tri.ideal_vertices():
        return tri
    pieces = cut_along(tri, None, truncate_ideal=True)
    if len(pieces) != 1:
        raise RuntimeError("truncation disconnected the triangulation")
    return pieces[0].triangulation


@dataclass(frozen=True)
class CutPiece:
    triangulation: Triangulation
    boundary_tags: tuple  # per boundary component: (tag, genus)

    @classmethod
    def of(cls, tri):
        tags = []
        for comp in tri.boundary_components:
            (tag,) = comp.tags if len(comp.tags) == 1 else (min(comp.tags, key=repr),)
            tags.append((tag, comp.genus))
        return cls(tri, tuple(tags))

    @property
    def surface_copies(self):
        return [g for tag, g in self.boundary_tags if tag == COPY_OF_S]

    @property
    def original_boundaries(self):
        return [(tag, g) for tag, g in self.boundary_tags if tag != COPY_OF_S]


@dataclass(frozen=True)
class CompressibilityEvidence:
    kind: str
    detail: str


def normalize_vertices(tri, seed=0, restarts=32):
    """Simplify a compact triangulation towards one vertex per boundary component.

    Returns ``(triangulation, evidence)``.  ``evidence`` is set when the
    boundary structure shows that a copy of the cut surface compresses,
    namely a copy that is a sphere.  When the vertex goal cannot be met by moves the best
    triangulation found is returned; the later search does not rely on it.
    """
    from .simplify import simplify

    for comp in tri.boundary_components:
        if COPY_OF_S in comp.tags and comp.genus == 0:
            return tri, CompressibilityEvidence("sphere", "a copy of the surface bounds a sphere component")
    result = simplify(tri, restarts=restarts, seed=seed)
    return result.triangulation, None


def retriangulations(tri, count=3, seed=0, moves=(0, 2, 4)):
    """Up to ``count`` distinct variants of ``tri`` made by random 2-3 moves."""
    import random

    from .simplify import move_23

    rng = random.Random(seed)
    seen = set()
    out = []
    attempts = 0
    while len(out) < count and attempts < 4 * count:
        r = moves[attempts % len(moves)]
        attempts += 1
        cur = tri
        for _ in range(r):
            options = [
                (t, f)
                for t in range(cur.size)
                for f in range(4)
                if cur.gluings[t][f] is not None and cur.gluings[t][f][0] != t
            ]
            if not options:
                break
            nxt = move_23(cur, *rng.choice(options))
            if nxt is not None:
                cur = nxt
        key = cur.canonical_hash()
        if key in seen:
            continue
        seen.add(key)
        out.append(cur)
    return out
