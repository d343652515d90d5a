"""Quadrilateral coordinates: matching equations and the boundary map.

Coordinates are indexed ``3 * tet + q`` where quad type ``q`` is one of
``01|23``, ``02|13``, ``03|12`` (see ``QUAD_PAIRS``).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum

from . import perm as P
from ._unionfind import UnionFind
from .triangulation import QUAD_OF, VertexKind, TriangulationError


class Mode(Enum):
    Q = "q"
    Q0 = "q0"


class NotOrientedError(TriangulationError):
    pass


def slope(p, q):
    """Slope of quad type ``q`` at the edge embedding given by permutation ``p``.

    The edge runs from ``p[0]`` to ``p[1]``.  Reference: quad ``02|13`` at
    edge ``01`` of a positively labelled tetrahedron has slope +1.  The value
    is independent of the direction of the edge.
    """
    a, b, c, d = P.S4[p]
    if P.sign(p) < 0:
        c, d = d, c
    if q == QUAD_OF[a][c]:
        return 1
    if q == QUAD_OF[a][d]:
        return -1
    return 0


@dataclass(frozen=True)
class QMatchingSystem:
    rows: tuple  # each row a tuple of length 3n
    edges: tuple  # interior edge class index per row

    @property
    def ncols(self):
        return len(self.rows[0]) if self.rows else 0


def _require_oriented(tri):
    if not tri.is_oriented:
        raise NotOrientedError("triangulation must be coherently oriented; call oriented() first")


def build_matching_system(tri):
    _require_oriented(tri)
    n = tri.size
    rows = []
    edges = []
    for edge in tri.skeleton.edges:
        if edge.boundary:
            continue
        row = [0] * (3 * n)
        for t, p in edge.embeddings:
            for q in range(3):
                row[3 * t + q] += slope(p, q)
        rows.append(tuple(row))
        edges.append(edge.index)
    return QMatchingSystem(tuple(rows), tuple(edges))


def is_admissible(x, block=3):
    """Nonnegative with at most one nonzero quad coordinate per tetrahedron."""
    if any(v < 0 for v in x):
        return False
    for i in range(0, len(x), block):
        if sum(1 for v in x[i:i + 3] if v) > 1:
            return False
    return True


# ---------------------------------------------------------------------------
# the boundary map


def link_quad(t, v, w):
    """Coordinate index of the quad whose arc cuts corner ``v`` in face ``w``."""
    return 3 * t + QUAD_OF[v][w]


def crossing_terms(a_arc, b_arc):
    """Functional terms for crossing a link edge from arc ``a`` into arc ``b``.

    With ``t`` the triangle counts, arc matching gives
    ``t_B - t_A = x(q_A) - x(q_B)``, so a closed loop constrains the sum.
    """
    (ta, va, wa), (tb, vb, wb) = a_arc, b_arc
    return ((link_quad(ta, va, wa), 1), (link_quad(tb, vb, wb), -1))


@dataclass(frozen=True)
class LinkCycle:
    """A closed dual cycle on a vertex link, as a sequence of arc crossings."""

    vertex: int
    crossings: tuple  # ((t, v, w) leaving arc, (t', v', w') entering arc)

    def functional(self, ncols):
        row = [0] * ncols
        for a, b in self.crossings:
            for idx, c in crossing_terms(a, b):
                row[idx] += c
        return tuple(row)


@dataclass(frozen=True)
class BoundaryFunctionalSet:
    ncols: int
    per_vertex: dict = field(default_factory=dict)  # vertex -> tuple of rows
    cycles: dict = field(default_factory=dict)  # vertex -> tuple of LinkCycle

    @property
    def rows(self):
        out = []
        for v in sorted(self.per_vertex):
            out.extend(self.per_vertex[v])
        return tuple(out)


def link_generator_cycles(tri, v):
    """``2g`` dual cycles generating H1 of the link of vertex ``v``.

    Tree-cotree construction: a spanning tree of the dual graph, then a
    spanning forest of the primal graph avoiding the duals of tree edges;
    every remaining link edge closes up one generator.
    """
    link = tri.vertex_link(v)
    gl = tri.gluings
    triangles = link.triangles
    # dual graph: triangle -> list of (arc out, arc in, neighbour triangle)
    adj = {tr: [] for tr in triangles}
    for a, b in link.edge_gluings:
        adj[(a[0], a[1])].append((a, b, (b[0], b[1])))
        adj[(b[0], b[1])].append((b, a, (a[0], a[1])))
    root = triangles[0]
    parent = {root: None}
    tree = set()
    queue = deque([root])
    while queue:
        tr = queue.popleft()
        for a, b, nb in adj[tr]:
            if nb not in parent:
                parent[nb] = (b, a, tr)  # crossing from nb back towards tr
                tree.add(frozenset((a, b)))
                queue.append(nb)
    # primal graph on link vertices
    pts = UnionFind()
    for t, x in triangles:
        for w in range(4):
            if w != x:
                pts.add((t, x, w))
    for t, x in triangles:
        for f in range(4):
            if f == x or gl[t][f] is None:
                continue
            u, p = gl[t][f]
            for w in range(4):
                if w not in (x, f):
                    pts.union((t, x, w), (u, P.apply(p, x), P.apply(p, w)))
    forest = UnionFind()
    leftovers = []
    for a, b in link.edge_gluings:
        if frozenset((a, b)) in tree:
            continue
        t, x, f = a
        ends = [pts.find((t, x, w)) for w in range(4) if w not in (x, f)]
        forest.add(ends[0])
        forest.add(ends[1])
        if not forest.union(ends[0], ends[1]):
            leftovers.append((a, b))

    def path_to_root(tr):
        steps = []
        while parent[tr] is not None:
            out_arc, in_arc, up = parent[tr]
            steps.append((out_arc, in_arc))
            tr = up
        return steps

    cycles = []
    for a, b in leftovers:
        ta, tb = (a[0], a[1]), (b[0], b[1])
        # a -> b across the leftover edge, then b up to the root, then root down to a
        up_b = path_to_root(tb)
        up_a = path_to_root(ta)
        down_a = [(i, o) for o, i in reversed(up_a)]
        cycles.append(LinkCycle(v, ((a, b),) + tuple(up_b) + tuple(down_a)))
    return cycles


def small_loop_cycle(tri, edge_index, end=0):
    """The dual cycle on a vertex link encircling the endpoint of an interior edge.

    For an oriented triangulation its functional equals the matching row of
    the edge, for either endpoint.
    """
    edge = tri.skeleton.edges[edge_index]
    embs = edge.embeddings
    crossings = []
    for k, (t, p) in enumerate(embs):
        img = P.S4[p]
        nt, np_ = embs[(k + 1) % len(embs)]
        nimg = P.S4[np_]
        v, nv = img[end], nimg[end]
        crossings.append(((t, v, img[3]), (nt, nv, nimg[2])))
    vertex = tri.skeleton.vertex_of[embs[0][0]][P.S4[embs[0][1]][end]]
    # Traverse in the direction induced by the orientation, seen from the
    # endpoint, so that the functional is the edge's matching row.
    if P.sign(embs[0][1]) * (1 if end == 0 else -1) > 0:
        crossings = [(b, a) for a, b in reversed(crossings)]
    return LinkCycle(vertex, tuple(crossings))


def build_boundary_functionals(tri):
    _require_oriented(tri)
    ncols = 3 * tri.size
    per_vertex = {}
    cycles = {}
    for v, kind in enumerate(tri.skeleton.vertex_kinds):
        if kind is not VertexKind.IDEAL:
            continue
        cyc = link_generator_cycles(tri, v)
        cycles[v] = tuple(cyc)
        per_vertex[v] = tuple(c.functional(ncols) for c in cyc)
    return BoundaryFunctionalSet(ncols, per_vertex, cycles)


def evaluate_nu(functionals, x):
    if len(x) != functionals.ncols:
        raise ValueError(f"vector has length {len(x)}, expected {functionals.ncols}")
    return [sum(c * xi for c, xi in zip(row, x) if c) for row in functionals.rows]


@dataclass(frozen=True)
class ConstraintSystem:
    """Linear equations over the nonnegative orthant with admissibility blocks.

    ``blocks`` lists groups of coordinates of which at most one may be
    nonzero in an admissible vector.
    """

    ncols: int
    equations: tuple
    blocks: tuple
    mode: Mode = Mode.Q
    matching: QMatchingSystem = None
    boundary: BoundaryFunctionalSet = None

    def satisfied_by(self, x):
        return all(sum(a * b for a, b in zip(row, x) if a) == 0 for row in self.equations)

    def scaled(self, k):
        return ConstraintSystem(
            self.ncols,
            tuple(tuple(k * a for a in row) for row in self.equations),
            self.blocks,
            self.mode,
            self.matching,
            self.boundary,
        )

    def to_dict(self):
        return {
            "mode": self.mode.value,
            "columns": self.ncols,
            "matching": [list(r) for r in (self.matching.rows if self.matching else ())],
            "boundary": [list(r) for r in (self.boundary.rows if self.boundary else ())],
        }


def quad_blocks(n):
    return tuple(tuple(range(3 * t, 3 * t + 3)) for t in range(n))


def assemble(tri, mode=Mode.Q):
    mode = Mode(mode)
    matching = build_matching_system(tri)
    boundary = build_boundary_functionals(tri) if mode is Mode.Q0 else None
    eqs = list(matching.rows)
    if boundary is not None:
        eqs.extend(boundary.rows)
    return ConstraintSystem(3 * tri.size, tuple(eqs), quad_blocks(tri.size), mode, matching, boundary)
