"""Singular and ideal triangulations of 3-manifolds.

A triangulation is a list of tetrahedra together with face pairings.  Face
``f`` of a tetrahedron is the face opposite vertex ``f``; a gluing of face
``(t, f)`` is a pair ``(u, p)`` where ``p`` is a permutation code (see
:mod:`essurf.perm`) sending the vertices of ``t`` to those of ``u``, with
``p(f)`` the face of ``u`` on the other side.

Triangulations are immutable.  Derived data (the skeleton, vertex links,
boundary components) is computed lazily and cached.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from itertools import combinations

from . import perm as P
from ._unionfind import UnionFind, ParityUnionFind

EDGE_VERTS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
EDGE_NUM = [[-1] * 4 for _ in range(4)]
for _i, (_a, _b) in enumerate(EDGE_VERTS):
    EDGE_NUM[_a][_b] = EDGE_NUM[_b][_a] = _i
del _i, _a, _b

# Quadrilateral type k separates edge EDGE_VERTS[k] from EDGE_VERTS[5 - k].
QUAD_PAIRS = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))
QUAD_OF = [[-1] * 4 for _ in range(4)]
for _q, (_a, _b, _c, _d) in enumerate(QUAD_PAIRS):
    QUAD_OF[_a][_b] = QUAD_OF[_b][_a] = QUAD_OF[_c][_d] = QUAD_OF[_d][_c] = _q
del _q, _a, _b, _c, _d


class TriangulationError(ValueError):
    """Raised for malformed or inconsistent gluing data."""


class NonOrientableError(TriangulationError):
    pass


class Orientation(Enum):
    UNORIENTED = "unoriented"
    ORIENTED = "oriented"
    NON_ORIENTABLE = "non-orientable"


class VertexKind(Enum):
    MATERIAL = "material"
    IDEAL = "ideal"
    BOUNDARY = "boundary"


def face_vertices(f):
    return tuple(i for i in range(4) if i != f)


@dataclass(frozen=True)
class LinkSurface:
    """The triangulated link of a vertex class.

    ``triangles`` lists the corners ``(tet, vertex)`` of the vertex; link
    edges are the normal arcs ``(tet, vertex, w)`` lying in the face opposite
    ``w``.  ``edge_gluings`` pairs arcs that are identified by face gluings.
    """

    owner_vertex: int
    triangles: tuple
    edge_gluings: tuple
    boundary_arcs: tuple
    link_vertices: int
    euler: int
    orientable: bool
    boundary_circle_count: int = 0

    @property
    def closed(self):
        return not self.boundary_arcs

    @property
    def genus(self):
        if not self.closed:
            # Compact surface with boundary: genus of the capped-off surface.
            return None
        return (2 - self.euler) // 2 if self.orientable else 2 - self.euler


@dataclass(frozen=True)
class EdgeClass:
    index: int
    # (tet, perm code) in cyclic order; images[0], images[1] are the endpoints.
    embeddings: tuple
    boundary: bool
    valid: bool

    @property
    def degree(self):
        return len(self.embeddings)


@dataclass(frozen=True)
class BoundaryComponent:
    index: int
    faces: tuple
    euler: int
    orientable: bool
    tags: frozenset

    @property
    def genus(self):
        return (2 - self.euler) // 2 if self.orientable else 2 - self.euler


@dataclass(frozen=True)
class Skeleton:
    vertex_of: tuple  # vertex_of[t][v] -> vertex class
    edge_of: tuple  # edge_of[t][e] -> edge class
    face_of: tuple  # face_of[t][f] -> face class
    vertices: tuple  # per class: tuple of (tet, vertex)
    vertex_kinds: tuple
    edges: tuple  # EdgeClass
    face_count: int
    boundary_face_count: int

    @property
    def edge_degrees(self):
        return tuple(e.degree for e in self.edges)

    def interior_edges(self):
        return [e for e in self.edges if not e.boundary]


@dataclass(frozen=True)
class Triangulation:
    """Tetrahedra with face pairings.

    ``gluings[t][f]`` is ``None`` for a boundary face, else ``(u, p)``.
    ``tags`` optionally labels boundary faces with integers; tags survive
    relabelling, moves and crushing so that boundary components can be
    followed through a computation.
    """

    gluings: tuple
    tags: tuple = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        self._check()

    # -- construction -------------------------------------------------------

    @classmethod
    def from_gluing_list(cls, n, gluings, tags=None, name=""):
        """Build from ``(t, f, u, p)`` records, each gluing given once or twice."""
        table = [[None] * 4 for _ in range(n)]
        for t, f, u, p in gluings:
            if isinstance(p, (tuple, list)):
                p = P.code(p)
            if not (0 <= t < n and 0 <= u < n):
                raise TriangulationError(f"tetrahedron index out of range in {t} {f} -> {u}")
            g = P.apply(p, f)
            for a, b, want in ((t, f, (u, p)), (u, g, (t, P.inverse(p)))):
                if table[a][b] is not None and table[a][b] != want:
                    raise TriangulationError(f"face {a} {b} glued twice")
                table[a][b] = want
        return cls(tuple(tuple(row) for row in table), tags, name)

    @classmethod
    def single_tetrahedron(cls):
        return cls(((None, None, None, None),))

    # -- basic queries ------------------------------------------------------

    @property
    def size(self):
        return len(self.gluings)

    tet_count = size

    def adjacent(self, t, f):
        return self.gluings[t][f]

    def tag(self, t, f):
        if self.tags is None:
            return 0
        return self.tags[t][f]

    def is_boundary_face(self, t, f):
        return self.gluings[t][f] is None

    @property
    def boundary_face_count(self):
        return sum(1 for row in self.gluings for g in row if g is None)

    def _check(self):
        for t, row in enumerate(self.gluings):
            if len(row) != 4:
                raise TriangulationError(f"tetrahedron {t} does not have 4 faces")
            for f, g in enumerate(row):
                if g is None:
                    continue
                u, p = g
                if not 0 <= u < len(self.gluings):
                    raise TriangulationError(f"face {t} {f} glued to missing tetrahedron {u}")
                back = self.gluings[u][P.apply(p, f)]
                if back is None or back[0] != t or back[1] != P.inverse(p):
                    raise TriangulationError(
                        f"gluing of face {t} {f} is not involutive"
                    )
                if u == t and P.apply(p, f) == f:
                    raise TriangulationError(f"face {t} {f} glued to itself")

    # -- orientation --------------------------------------------------------

    @cached_property
    def orientation(self):
        if all(g is None or P.sign(g[1]) < 0 for row in self.gluings for g in row):
            return Orientation.ORIENTED
        try:
            self._orientation_signs()
        except NonOrientableError:
            return Orientation.NON_ORIENTABLE
        return Orientation.UNORIENTED

    @property
    def is_oriented(self):
        return self.orientation is Orientation.ORIENTED

    @property
    def is_orientable(self):
        return self.orientation is not Orientation.NON_ORIENTABLE

    def _orientation_signs(self):
        sign = [0] * self.size
        for start in range(self.size):
            if sign[start]:
                continue
            sign[start] = 1
            queue = deque([start])
            while queue:
                t = queue.popleft()
                for g in self.gluings[t]:
                    if g is None:
                        continue
                    u, p = g
                    want = -sign[t] * P.sign(p)
                    if sign[u] == 0:
                        sign[u] = want
                        queue.append(u)
                    elif sign[u] != want:
                        raise NonOrientableError("triangulation is not orientable")
        return sign

    def oriented(self):
        """Return an equivalent triangulation whose gluings are all odd."""
        if self.is_oriented:
            return self
        sign = self._orientation_signs()
        swap = P.transposition(2, 3)
        return self.relabel(list(range(self.size)), [P.IDENTITY if s > 0 else swap for s in sign])

    def relabel(self, order, vertex_perms):
        """Renumber tetrahedron ``t`` as ``order[t]`` with vertices moved by ``vertex_perms[t]``."""
        n = self.size
        table = [[None] * 4 for _ in range(n)]
        tags = [[None] * 4 for _ in range(n)] if self.tags is not None else None
        for t in range(n):
            rt = vertex_perms[t]
            for f in range(4):
                nf = P.apply(rt, f)
                g = self.gluings[t][f]
                if g is not None:
                    u, p = g
                    q = P.compose(vertex_perms[u], P.compose(p, P.inverse(rt)))
                    table[order[t]][nf] = (order[u], q)
                if tags is not None:
                    tags[order[t]][nf] = self.tags[t][f]
        return Triangulation(
            tuple(tuple(r) for r in table),
            None if tags is None else tuple(tuple(r) for r in tags),
            self.name,
        )

    # -- skeleton -----------------------------------------------------------

    @cached_property
    def skeleton(self):
        return compute_skeleton(self)

    @cached_property
    def _direction_tokens(self):
        return _direction_cache(self)

    @property
    def is_closed(self):
        sk = self.skeleton
        return self.boundary_face_count == 0 and all(k is VertexKind.MATERIAL for k in sk.vertex_kinds)

    @property
    def is_ideal(self):
        return any(k is VertexKind.IDEAL for k in self.skeleton.vertex_kinds)

    @property
    def is_valid(self):
        sk = self.skeleton
        if not all(e.valid for e in sk.edges):
            return False
        for v, kind in enumerate(sk.vertex_kinds):
            if kind is VertexKind.BOUNDARY:
                link = self.vertex_link(v)
                if link.euler != 1 or link.boundary_circle_count != 1:
                    return False
        return True

    def vertex_link(self, v):
        return self.vertex_links[v]

    @cached_property
    def vertex_links(self):
        return tuple(build_vertex_link(self, v) for v in range(len(self.skeleton.vertices)))

    @cached_property
    def boundary_components(self):
        return _boundary_components(self)

    def ideal_vertices(self):
        return [v for v, k in enumerate(self.skeleton.vertex_kinds) if k is VertexKind.IDEAL]

    def components(self):
        """Split into connected components; returns a list of triangulations."""
        uf = UnionFind(range(self.size))
        for t, row in enumerate(self.gluings):
            for g in row:
                if g is not None:
                    uf.union(t, g[0])
        groups = {}
        for t in range(self.size):
            groups.setdefault(uf.find(t), []).append(t)
        if len(groups) <= 1:
            return [self] if self.size else []
        return [self.subset(sorted(ts)) for ts in sorted(groups.values())]

    def subset(self, tets):
        """The sub-triangulation on ``tets`` (which must be closed under gluing)."""
        index = {t: i for i, t in enumerate(tets)}
        rows = []
        tags = []
        for t in tets:
            row = []
            for g in self.gluings[t]:
                if g is not None and g[0] not in index:
                    raise TriangulationError(f"tetrahedron {t} is glued outside the subset")
                row.append(None if g is None else (index[g[0]], g[1]))
            rows.append(tuple(row))
            tags.append(self.tags[t] if self.tags is not None else None)
        return Triangulation(tuple(rows), tuple(tags) if self.tags is not None else None, self.name)

    def with_tags(self, tags):
        return Triangulation(self.gluings, tags, self.name)

    def uniform_tags(self, value=0):
        tags = tuple(tuple(value if g is None else None for g in row) for row in self.gluings)
        return Triangulation(self.gluings, tags, self.name)

    # -- text ---------------------------------------------------------------

    def to_text(self):
        lines = [f"tets {self.size}"]
        for t, row in enumerate(self.gluings):
            for f, g in enumerate(row):
                if g is None:
                    lines.append(f"{t} {f} -> bdry")
                else:
                    lines.append(f"{t} {f} -> {g[0]} {P.to_text(g[1])}")
        return "\n".join(lines) + "\n"

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Triangulation{label} with {self.size} tetrahedra>"

    # -- canonical form -----------------------------------------------------

    def canonical_hash(self):
        return canonical_hash(self)


# ---------------------------------------------------------------------------
# parsing


def parse_gluings(text, name=""):
    """Parse the line-based gluing-table format.

    The first non-comment line is ``tets <n>``; each further line is either
    ``i f -> j p0p1p2p3`` or ``i f -> bdry``.  Faces left unspecified are
    treated as boundary only if they are never mentioned from either side.
    """
    n = None
    table = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "tets" or not parts[1].isdigit():
                raise TriangulationError(f"line {lineno}: expected 'tets <n>'")
            n = int(parts[1])
            table = [[None] * 4 for _ in range(n)]
            seen = [[False] * 4 for _ in range(n)]
            continue
        if "->" not in line:
            raise TriangulationError(f"line {lineno}: missing '->'")
        lhs, rhs = (s.split() for s in line.split("->", 1))
        try:
            t, f = int(lhs[0]), int(lhs[1])
        except (ValueError, IndexError):
            raise TriangulationError(f"line {lineno}: malformed face") from None
        if len(lhs) != 2 or not (0 <= t < n and 0 <= f < 4):
            raise TriangulationError(f"line {lineno}: face out of range")
        if seen[t][f]:
            raise TriangulationError(f"line {lineno}: face {t} {f} specified twice")
        seen[t][f] = True
        if rhs == ["bdry"]:
            table[t][f] = None
            continue
        if len(rhs) != 2:
            raise TriangulationError(f"line {lineno}: malformed destination")
        try:
            u = int(rhs[0])
            p = P.from_text(rhs[1])
        except ValueError as exc:
            raise TriangulationError(f"line {lineno}: {exc}") from None
        if not 0 <= u < n:
            raise TriangulationError(f"line {lineno}: tetrahedron {u} out of range")
        table[t][f] = (u, p)
    if n is None:
        raise TriangulationError("empty gluing table")
    for t in range(n):
        for f in range(4):
            g = table[t][f]
            if g is None:
                continue
            u, p = g
            g2 = P.apply(p, f)
            back = table[u][g2]
            if seen[u][g2] and (back is None or back != (t, P.inverse(p))):
                raise TriangulationError(f"gluing of face {t} {f} is not involutive")
            if not seen[u][g2]:
                table[u][g2] = (t, P.inverse(p))
                seen[u][g2] = True
    return Triangulation(tuple(tuple(r) for r in table), name=name)


def read_gluings(path):
    from pathlib import Path

    path = Path(path)
    return parse_gluings(path.read_text(), name=path.stem)


# ---------------------------------------------------------------------------
# skeleton


def _step(g, img):
    u, q = g
    a = P.S4[q]
    return u, P.code((a[img[0]], a[img[1]], a[img[3]], a[img[2]]))


def _edge_walk(tri, t, p):
    """Embeddings of the edge ``p[0] p[1]`` of ``t`` in cyclic order.

    Stepping forward leaves through the face opposite ``p[3]``; stepping
    backward leaves through the face opposite ``p[2]``.  For a boundary edge
    the walk starts at one end of the chain.
    """
    gl = tri.gluings
    limit = 6 * len(gl) + 1
    start = (t, p)
    cur = start
    boundary = False
    for _ in range(limit):
        g = gl[cur[0]][P.S4[cur[1]][2]]
        if g is None:
            boundary = True
            break
        cur = _step(g, P.S4[cur[1]])
        if cur == start:
            break
    first = cur if boundary else start
    out = [first]
    cur = first
    for _ in range(limit):
        g = gl[cur[0]][P.S4[cur[1]][3]]
        if g is None:
            break
        cur = _step(g, P.S4[cur[1]])
        if cur == first:
            break
        out.append(cur)
    return out, boundary


def _find(parent, x):
    root = x
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        parent[x], x = root, parent[x]
    return root


def compute_skeleton(tri):
    n = tri.size
    gl = tri.gluings
    vpar = list(range(4 * n))
    epar = list(range(6 * n))
    eflip = [0] * (6 * n)  # orientation relative to parent
    bad_edge = set()

    def efind(x):
        # returns (root, parity) with path compression
        path = []
        while epar[x] != x:
            path.append(x)
            x = epar[x]
        root = x
        # recompute parities from the top
        acc = 0
        for y in reversed(path):
            acc ^= eflip[y]
            eflip[y] = acc
            epar[y] = root
        return root

    for t in range(n):
        for f in range(4):
            g = gl[t][f]
            if g is None:
                continue
            u, p = g
            img = P.S4[p]
            for v in range(4):
                if v != f:
                    ra, rb = _find(vpar, 4 * t + v), _find(vpar, 4 * u + img[v])
                    if ra != rb:
                        vpar[rb] = ra
            for a, b in combinations(face_vertices(f), 2):
                ia, ib = img[a], img[b]
                x, y = 6 * t + EDGE_NUM[a][b], 6 * u + EDGE_NUM[ia][ib]
                d = int(ia > ib)
                rx, ry = efind(x), efind(y)
                px = eflip[x] if x != rx else 0
                py = eflip[y] if y != ry else 0
                if rx == ry:
                    if px ^ py != d:
                        bad_edge.add(rx)
                else:
                    epar[ry] = rx
                    eflip[ry] = px ^ py ^ d
                    if ry in bad_edge:
                        bad_edge.add(rx)

    vclasses = {}
    for x in range(4 * n):
        vclasses.setdefault(_find(vpar, x), []).append(divmod(x, 4))
    vlist = sorted(vclasses.values())
    vertex_of = [[0] * 4 for _ in range(n)]
    for i, members in enumerate(vlist):
        for t, v in members:
            vertex_of[t][v] = i

    eclasses = {}
    for x in range(6 * n):
        eclasses.setdefault(efind(x), []).append(divmod(x, 6))
    elist = sorted(eclasses.values())
    invalid_roots = {efind(r) for r in bad_edge}
    edge_of = [[0] * 6 for _ in range(n)]
    edges = []
    for i, members in enumerate(elist):
        for t, e in members:
            edge_of[t][e] = i
        t, e = members[0]
        a, b = EDGE_VERTS[e]
        c, d = (x for x in range(4) if x not in (a, b))
        p0 = P.code((a, b, c, d))
        valid = efind(6 * t + e) not in invalid_roots
        if valid:
            embs, bdry = _edge_walk(tri, t, p0)
            if len(embs) != len(members):
                # A degenerate walk (edge meets itself); treat as invalid.
                valid = False
        if not valid:
            embs = [(tt, P.code(_complete(EDGE_VERTS[ee]))) for tt, ee in members]
            bdry = any(
                gl[tt][x] is None for tt, ee in members for x in range(4) if x not in EDGE_VERTS[ee]
            )
        edges.append(EdgeClass(i, tuple(embs), bdry, valid))

    face_of = [[-1] * 4 for _ in range(n)]
    nf = 0
    nbf = 0
    for t in range(n):
        for f in range(4):
            if face_of[t][f] >= 0:
                continue
            face_of[t][f] = nf
            g = gl[t][f]
            if g is None:
                nbf += 1
            else:
                face_of[g[0]][P.apply(g[1], f)] = nf
            nf += 1

    kinds = _classify_vertices(tri, vlist, vertex_of)
    return Skeleton(
        tuple(tuple(r) for r in vertex_of),
        tuple(tuple(r) for r in edge_of),
        tuple(tuple(r) for r in face_of),
        tuple(tuple(m) for m in vlist),
        tuple(kinds),
        tuple(edges),
        nf,
        nbf,
    )


def _classify_vertices(tri, vlist, vertex_of):
    """Kinds of all vertex classes from one pass over the link points."""
    n = tri.size
    gl = tri.gluings
    nv = len(vlist)
    on_boundary = [False] * nv
    # link point (t, v, w) -> 16 t + 4 v + w
    par = list(range(16 * n))
    arcs2 = [0] * nv
    for t in range(n):
        for f in range(4):
            g = gl[t][f]
            for v in range(4):
                if v == f:
                    continue
                k = vertex_of[t][v]
                if g is None:
                    on_boundary[k] = True
                    arcs2[k] += 2
                    continue
                arcs2[k] += 1
                u, p = g
                img = P.S4[p]
                for w in range(4):
                    if w != v and w != f:
                        ra = _find(par, 16 * t + 4 * v + w)
                        rb = _find(par, 16 * u + 4 * img[v] + img[w])
                        if ra != rb:
                            par[rb] = ra
    points = [set() for _ in range(nv)]
    for t in range(n):
        for v in range(4):
            k = vertex_of[t][v]
            for w in range(4):
                if w != v:
                    points[k].add(_find(par, 16 * t + 4 * v + w))
    kinds = []
    for k, members in enumerate(vlist):
        if on_boundary[k]:
            kinds.append(VertexKind.BOUNDARY)
            continue
        euler = len(points[k]) - arcs2[k] // 2 + len(members)
        kinds.append(VertexKind.MATERIAL if euler == 2 else VertexKind.IDEAL)
    return kinds


def _complete(pair):
    a, b = pair
    return (a, b) + tuple(x for x in range(4) if x not in pair)


def _link_points(tri, members):
    """Union-find on link vertices ``(t, v, w)`` (the point of edge vw near v)."""
    gl = tri.gluings
    uf = UnionFind((t, v, w) for t, v in members for w in range(4) if w != v)
    for t, v in members:
        for f in range(4):
            if f == v:
                continue
            g = gl[t][f]
            if g is None:
                continue
            u, p = g
            img = P.S4[p]
            for w in range(4):
                if w not in (v, f):
                    uf.union((t, v, w), (u, img[v], img[w]))
    return uf


def _link_euler(tri, members):
    gl = tri.gluings
    uf = _link_points(tri, members)
    nv = len({uf.find(x) for x in uf})
    ne2 = 0
    for t, v in members:
        for f in range(4):
            if f != v:
                ne2 += 1 if gl[t][f] is not None else 2
    return nv - ne2 // 2 + len(members)


def build_vertex_link(tri, v):
    """Assemble the triangulated link of vertex class ``v``."""
    members = tri.skeleton.vertices[v]
    gl = tri.gluings
    uf = _link_points(tri, members)
    glued = []
    bdry = []
    seen = set()
    for t, x in members:
        for f in range(4):
            if f == x:
                continue
            arc = (t, x, f)
            if arc in seen:
                continue
            g = gl[t][f]
            if g is None:
                bdry.append(arc)
                seen.add(arc)
                continue
            u, p = g
            other = (u, P.apply(p, x), P.apply(p, f))
            seen.add(arc)
            seen.add(other)
            glued.append((arc, other))
    nv = len({uf.find(x) for x in uf})
    euler = nv - (len(glued) + len(bdry)) + len(members)
    orientable = _link_orientable(tri, members)
    circles = _count_boundary_circles(uf, bdry) if bdry else 0
    return LinkSurface(v, tuple(members), tuple(glued), tuple(bdry), nv, euler, orientable, circles)


def _count_boundary_circles(uf, bdry):
    # Each boundary arc (t, x, f) joins the link points (t, x, w) for w not in (x, f).
    cuf = UnionFind()
    for t, x, f in bdry:
        ends = [uf.find((t, x, w)) for w in range(4) if w not in (x, f)]
        cuf.add(ends[0])
        cuf.add(ends[1])
        cuf.union(ends[0], ends[1])
    return len({cuf.find(x) for x in cuf})


def _link_orientable(tri, members):
    # Orient each link triangle by the orientation it inherits from its
    # tetrahedron; gluings must reverse tetrahedron orientation locally.
    gl = tri.gluings
    sign = {}
    for start in members:
        if start in sign:
            continue
        sign[start] = 1
        queue = deque([start])
        while queue:
            t, x = queue.popleft()
            for f in range(4):
                if f == x:
                    continue
                g = gl[t][f]
                if g is None:
                    continue
                u, p = g
                nb = (u, P.apply(p, x))
                want = -sign[(t, x)] * P.sign(p)
                if nb not in sign:
                    sign[nb] = want
                    queue.append(nb)
                elif sign[nb] != want:
                    return False
    return True


def _boundary_components(tri):
    gl = tri.gluings
    sk = tri.skeleton
    faces = [(t, f) for t in range(tri.size) for f in range(4) if gl[t][f] is None]
    if not faces:
        return ()
    uf = UnionFind(faces)
    by_edge = {}
    for t, f in faces:
        for a, b in combinations(face_vertices(f), 2):
            by_edge.setdefault(sk.edge_of[t][EDGE_NUM[a][b]], []).append((t, f))
    for group in by_edge.values():
        for other in group[1:]:
            uf.union(group[0], other)
    groups = {}
    for face in faces:
        groups.setdefault(uf.find(face), []).append(face)
    comps = []
    for i, members in enumerate(sorted(groups.values())):
        verts = set()
        edges = set()
        for t, f in members:
            for a in face_vertices(f):
                verts.add(sk.vertex_of[t][a])
            for a, b in combinations(face_vertices(f), 2):
                edges.add(sk.edge_of[t][EDGE_NUM[a][b]])
        euler = len(verts) - len(edges) + len(members)
        orientable = _surface_orientable(tri, members)
        tags = frozenset(tri.tag(t, f) for t, f in members)
        comps.append(BoundaryComponent(i, tuple(members), euler, orientable, tags))
    return tuple(comps)


def _surface_orientable(tri, faces):
    """Orientability of a boundary surface, via induced face orientations."""
    sk = tri.skeleton
    faceset = set(faces)
    # Boundary faces meeting along an edge: orient each face by its tetrahedron's
    # orientation; the two faces along an edge are coherent when the edge
    # appears with opposite directions.
    by_edge = {}
    for t, f in faces:
        verts = face_vertices(f)
        s = P.sign(P.code((f,) + verts))
        cyc = [verts[0], verts[1], verts[2]] if s > 0 else [verts[0], verts[2], verts[1]]
        for i in range(3):
            a, b = cyc[i], cyc[(i + 1) % 3]
            e = sk.edge_of[t][EDGE_NUM[a][b]]
            va, vb = _edge_direction_token(tri, t, a, b)
            by_edge.setdefault(e, []).append(((t, f), (va, vb)))
    puf = ParityUnionFind(faceset)
    for e, items in by_edge.items():
        if len(items) != 2:
            continue
        (f1, d1), (f2, d2) = items
        # Same direction along the edge means the orientations disagree.
        same = d1 == d2
        if not puf.union(f1, f2, int(same)):
            return False
    return True


def _edge_direction_token(tri, t, a, b):
    """A direction-aware identifier for edge ``ab`` of tetrahedron ``t``."""
    return tri._direction_tokens[(t, a, b)]


def _direction_cache(tri):
    sk = tri.skeleton
    cache = {}
    for cls in sk.edges:
        for t, p in cls.embeddings:
            img = P.S4[p]
            cache[(t, img[0], img[1])] = (cls.index, 0)
            cache[(t, img[1], img[0])] = (cls.index, 1)
    return cache


# ---------------------------------------------------------------------------
# canonical labelling


def _component_code(tri, tets):
    best = None
    gl = tri.gluings
    for start in tets:
        for rho in range(24):
            order = {start: 0}
            rel = {start: rho}
            queue = [start]
            code = []
            qi = 0
            while qi < len(queue):
                t = queue[qi]
                qi += 1
                rt = rel[t]
                inv = P.INVERSE[rt]
                for nf in range(4):
                    f = P.S4[inv][nf]
                    g = gl[t][f]
                    if g is None:
                        code.append(-1)
                        continue
                    u, p = g
                    if u not in order:
                        order[u] = len(order)
                        # choose rel[u] so that the new gluing is the identity
                        rel[u] = P.COMPOSE[rt][P.INVERSE[p]]
                        queue.append(u)
                    q = P.COMPOSE[rel[u]][P.COMPOSE[p][inv]]
                    code.append(order[u] * 24 + q)
                if best is not None and code > best[: len(code)]:
                    break
            else:
                if best is None or code < best:
                    best = code
                continue
    return tuple(best)


def canonical_hash(tri):
    """A token equal for combinatorially isomorphic triangulations."""
    comps = tri.components()
    codes = sorted(
        (len(c.gluings), _component_code(c, range(c.size))) for c in comps
    )
    digest = hashlib.sha1(repr(codes).encode()).hexdigest()
    return f"{tri.size}:{digest}"
