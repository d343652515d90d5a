"""Local moves and greedy simplification of triangulations.

Every move returns a new :class:`Triangulation` or ``None`` when its
preconditions fail.  Moves that replace a small region (2-3, 3-2, 4-4, 1-4)
are described by vertex labels: the old tetrahedra are labelled, the new
tetrahedra are given as label tuples, and outer faces are matched by their
label sets.  Moves that delete tetrahedra (edge collapse, 2-0 moves, boundary
shelling) reuse the face chase from :mod:`essurf.crush`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import perm as P
from ._unionfind import UnionFind
from .crush import CrushError, flatten, manifold_problems
from .homology import first_homology
from .triangulation import EDGE_NUM, Triangulation, TriangulationError, VertexKind, face_vertices


class MoveError(ValueError):
    pass


# ---------------------------------------------------------------------------
# label-based region replacement


def replace_region(tri, old, labels, new_tets):
    """Replace tetrahedra ``old`` by ``new_tets`` (tuples of labels).

    ``labels[(t, v)]`` names vertex ``v`` of old tetrahedron ``t``; labels
    within one old tetrahedron must be distinct.  A face of an old
    tetrahedron is internal to the region when it is glued to another old
    tetrahedron along matching labels.
    """
    gl = tri.gluings
    old_set = set(old)
    keep = [t for t in range(tri.size) if t not in old_set]
    n_keep = len(keep)
    index = {t: i for i, t in enumerate(keep)}
    total = n_keep + len(new_tets)
    table = [[None] * 4 for _ in range(total)]
    tags = [[None] * 4 for _ in range(total)]
    for t in keep:
        for f in range(4):
            g = gl[t][f]
            if g is None:
                tags[index[t]][f] = tri.tag(t, f)
            elif g[0] not in old_set:
                table[index[t]][f] = (index[g[0]], g[1])

    new_faces = {}
    for k, lab in enumerate(new_tets):
        if len(set(lab)) != 4:
            raise MoveError("new tetrahedron repeats a label")
        for f in range(4):
            key = frozenset(lab[i] for i in range(4) if i != f)
            new_faces.setdefault(key, []).append((n_keep + k, f))

    def new_face_for(t, f):
        key = frozenset(labels[(t, v)] for v in range(4) if v != f)
        owners = new_faces.get(key)
        if not owners or len(owners) != 1:
            raise MoveError("outer face does not match exactly one new face")
        return owners[0], key

    def vertex_map(t, nf, nt):
        """Map vertices of new tetrahedron ``nt`` on the face to vertices of old ``t``."""
        lab = new_tets[nt - n_keep]
        inv = {labels[(t, v)]: v for v in range(4)}
        return {i: inv[lab[i]] for i in range(4) if i != nf}

    outer = []
    for t in old:
        for f in range(4):
            g = gl[t][f]
            if g is not None and g[0] in old_set:
                u, p = g
                same = all(labels[(t, v)] == labels[(u, P.apply(p, v))] for v in range(4) if v != f)
                if same:
                    continue
            outer.append((t, f))

    used = set()
    for t, f in outer:
        (nt, nf), key = new_face_for(t, f)
        if (nt, nf) in used:
            raise MoveError("two outer faces map to the same new face")
        used.add((nt, nf))
        g = gl[t][f]
        if g is None:
            table[nt][nf] = None
            tags[nt][nf] = tri.tag(t, f)
            continue
        u, p = g
        m = vertex_map(t, nf, nt)
        if u in old_set:
            (nu, nuf), _ = new_face_for(u, P.apply(p, f))
            mu = vertex_map(u, nuf, nu)
            inv_mu = {v: i for i, v in mu.items()}
            img = {i: inv_mu[P.apply(p, m[i])] for i in m}
            target = nu
        else:
            img = {i: P.apply(p, m[i]) for i in m}
            target = index[u]
        free_src = next(i for i in range(4) if i not in img)
        free_dst = next(j for j in range(4) if j not in img.values())
        img[free_src] = free_dst
        q = P.code(tuple(img[i] for i in range(4)))
        table[nt][nf] = (target, q)
        if u not in old_set:
            table[target][P.apply(q, nf)] = (nt, P.inverse(q))

    # internal faces between new tetrahedra
    for key, owners in new_faces.items():
        if len(owners) == 2:
            (a, fa), (b, fb) = owners
            if (a, fa) in used or (b, fb) in used:
                raise MoveError("internal face also used as an outer face")
            la, lb = new_tets[a - n_keep], new_tets[b - n_keep]
            img = {i: lb.index(la[i]) for i in range(4) if i != fa}
            img[fa] = fb
            q = P.code(tuple(img[i] for i in range(4)))
            table[a][fa] = (b, q)
            table[b][fb] = (a, P.inverse(q))
        elif len(owners) == 1 and owners[0] not in used:
            raise MoveError("new face left unglued")
        elif len(owners) > 2:
            raise MoveError("face shared by more than two new tetrahedra")
    return Triangulation(tuple(tuple(r) for r in table), tuple(tuple(r) for r in tags), tri.name)


# ---------------------------------------------------------------------------
# region moves


def move_23(tri, t, f):
    """2-3 move on the face ``f`` of ``t``."""
    g = tri.gluings[t][f]
    if g is None:
        return None
    u, p = g
    if u == t:
        return None
    labels = {}
    for v in range(4):
        labels[(t, v)] = ("A",) if v == f else ("F", v)
        labels[(u, P.apply(p, v))] = ("B",) if v == f else ("F", v)
    x, y, z = (("F", v) for v in face_vertices(f))
    new = [(("A",), ("B",), x, y), (("A",), ("B",), y, z), (("A",), ("B",), z, x)]
    try:
        return replace_region(tri, [t, u], labels, new)
    except (MoveError, TriangulationError):
        return None


def _edge_ring(tri, e, degree):
    edge = tri.skeleton.edges[e]
    if edge.boundary or not edge.valid or edge.degree != degree:
        return None
    tets = [t for t, _ in edge.embeddings]
    if len(set(tets)) != degree:
        return None
    return edge.embeddings


def move_32(tri, e):
    """3-2 move on the interior edge class ``e`` of degree three."""
    embs = _edge_ring(tri, e, 3)
    if embs is None:
        return None
    labels = {}
    for i, (t, p) in enumerate(embs):
        a, b, c, d = P.S4[p]
        labels[(t, a)] = "a"
        labels[(t, b)] = "b"
        labels[(t, c)] = ("E", i)
        labels[(t, d)] = ("E", (i - 1) % 3)
    E = [("E", i) for i in range(3)]
    new = [("a", E[0], E[1], E[2]), ("b", E[0], E[2], E[1])]
    try:
        return replace_region(tri, [t for t, _ in embs], labels, new)
    except (MoveError, TriangulationError):
        return None


def move_44(tri, e, axis=0):
    """4-4 move on the interior edge class ``e`` of degree four."""
    embs = _edge_ring(tri, e, 4)
    if embs is None:
        return None
    labels = {}
    for i, (t, p) in enumerate(embs):
        a, b, c, d = P.S4[p]
        labels[(t, a)] = "a"
        labels[(t, b)] = "b"
        labels[(t, c)] = ("E", i)
        labels[(t, d)] = ("E", (i - 1) % 4)
    E = [("E", (i + axis) % 4) for i in range(4)]
    new = [
        (E[0], E[2], "a", E[1]),
        (E[0], E[2], E[1], "b"),
        (E[0], E[2], "b", E[3]),
        (E[0], E[2], E[3], "a"),
    ]
    try:
        return replace_region(tri, [t for t, _ in embs], labels, new)
    except (MoveError, TriangulationError):
        return None


def move_14(tri, t):
    """1-4 move: subdivide ``t`` by coning from a new interior vertex."""
    labels = {(t, v): v for v in range(4)}
    new = [("X", 1, 2, 3), (0, "X", 2, 3), (0, 1, "X", 3), (0, 1, 2, "X")]
    return replace_region(tri, [t], labels, new)


# ---------------------------------------------------------------------------
# collapsing moves


def _flatten_or_none(tri, removed, partner, open_tag=None):
    try:
        out, _ = flatten(tri, removed, partner, open_tag)
    except (CrushError, TriangulationError):
        return None
    return out


def collapse_edge(tri, e):
    """Collapse edge class ``e`` to a point, deleting the tetrahedra around it."""
    sk = tri.skeleton
    edge = sk.edges[e]
    if not edge.valid:
        return None
    embs = edge.embeddings
    tets = [t for t, _ in embs]
    if len(set(tets)) != len(tets):
        return None
    t0, p0 = embs[0]
    img = P.S4[p0]
    v0 = sk.vertex_of[t0][img[0]]
    v1 = sk.vertex_of[t0][img[1]]
    if v0 == v1:
        return None
    kinds = sk.vertex_kinds
    ends = (kinds[v0], kinds[v1])
    if VertexKind.MATERIAL not in ends:
        # both ends on the boundary: only a boundary edge between real
        # boundary vertices may be collapsed
        if not edge.boundary or VertexKind.IDEAL in ends:
            return None
    # Edges squashed together must not already be joined.
    euf = UnionFind()
    faces_around = []
    for t, p in embs:
        a, b, c, d = P.S4[p]
        faces_around.append((t, a, b, c))
    if edge.boundary:
        t, p = embs[0]
        a, b, c, d = P.S4[p]
        faces_around.append((t, a, b, d))
    for t, a, b, c in faces_around:
        x, y = sk.edge_of[t][EDGE_NUM[a][c]], sk.edge_of[t][EDGE_NUM[b][c]]
        euf.add(x)
        euf.add(y)
        if not euf.union(x, y):
            return None
    # Faces squashed together must not already be joined (boundary counts as one).
    fuf = UnionFind()
    gl = tri.gluings
    for t, p in embs:
        a, b, _, _ = P.S4[p]
        x = -1 if gl[t][a] is None else sk.face_of[t][a]
        y = -1 if gl[t][b] is None else sk.face_of[t][b]
        fuf.add(x)
        fuf.add(y)
        if not fuf.union(x, y):
            return None
    partner = {}
    for t, p in embs:
        a, b, _, _ = P.S4[p]
        tau = P.transposition(a, b)
        partner[(t, a)] = (t, b, tau)
        partner[(t, b)] = (t, a, tau)
    return _flatten_or_none(tri, set(tets), partner)


def move_20_edge(tri, e):
    """Flatten the two tetrahedra around an interior degree-two edge."""
    embs = _edge_ring(tri, e, 2)
    if embs is None:
        return None
    (t0, p0), (t1, p1) = embs
    a0, b0, c0, d0 = P.S4[p0]
    a1, b1, c1, d1 = P.S4[p1]
    sk = tri.skeleton
    if sk.edge_of[t0][EDGE_NUM[c0][d0]] == sk.edge_of[t1][EDGE_NUM[c1][d1]]:
        return None
    tau = P.from_pairs((a0, b0, c0, d0), (a1, b1, d1, c1))
    inv = P.inverse(tau)
    partner = {
        (t0, a0): (t1, a1, tau),
        (t0, b0): (t1, b1, tau),
        (t1, a1): (t0, a0, inv),
        (t1, b1): (t0, b0, inv),
    }
    return _flatten_or_none(tri, {t0, t1}, partner)


def move_20_vertex(tri, v):
    """Remove an interior vertex meeting exactly two tetrahedra."""
    sk = tri.skeleton
    if sk.vertex_kinds[v] is not VertexKind.MATERIAL:
        return None
    corners = sk.vertices[v]
    if len(corners) != 2 or corners[0][0] == corners[1][0]:
        return None
    (t0, x0), (t1, x1) = corners
    maps = set()
    for f in range(4):
        if f == x0:
            continue
        g = tri.gluings[t0][f]
        if g is None or g[0] != t1:
            return None
        maps.add(g[1])
    if len(maps) != 1:
        return None
    tau = maps.pop()
    partner = {(t0, x0): (t1, x1, tau), (t1, x1): (t0, x0, P.inverse(tau))}
    return _flatten_or_none(tri, {t0, t1}, partner)


def shell_boundary(tri, t):
    """Remove a tetrahedron with one, two or three boundary faces."""
    gl = tri.gluings
    bfaces = [f for f in range(4) if gl[t][f] is None]
    if not bfaces or len(bfaces) == 4:
        return None
    if any(g is not None and g[0] == t for g in gl[t]):
        return None
    sk = tri.skeleton
    verts = {sk.vertex_of[t][v] for v in range(4)}
    edges = {sk.edge_of[t][k] for k in range(6)}
    if len(verts) != 4 or len(edges) != 6:
        return None
    if len(bfaces) == 1:
        a = bfaces[0]
        if sk.vertex_kinds[sk.vertex_of[t][a]] is not VertexKind.MATERIAL:
            return None
    elif len(bfaces) == 2:
        c, d = (f for f in range(4) if f not in bfaces)
        a, b = bfaces
        if sk.edges[sk.edge_of[t][EDGE_NUM[a][b]]].boundary:
            return None
    tag = tri.tag(t, bfaces[0])
    return _flatten_or_none(tri, {t}, {}, open_tag=tag)


def close_book(tri, e):
    """Fold the two boundary triangles meeting along boundary edge ``e``.

    Removes a boundary vertex without changing the manifold.
    """
    sk = tri.skeleton
    edge = sk.edges[e]
    if not edge.boundary or not edge.valid:
        return None
    (t1, p1), (t2, p2) = edge.embeddings[0], edge.embeddings[-1]
    a, b = P.S4[p1], P.S4[p2]
    f1, f2 = a[2], b[3]
    if (t1, f1) == (t2, f2):
        return None
    x1, x2 = sk.vertex_of[t1][a[3]], sk.vertex_of[t2][b[2]]
    if x1 == x2:
        return None
    for i in (0, 1):
        if sk.edge_of[t1][EDGE_NUM[a[i]][a[3]]] == sk.edge_of[t2][EDGE_NUM[b[i]][b[2]]]:
            return None
    comp = next(c for c in tri.boundary_components if (t1, f1) in c.faces)
    if len(comp.faces) <= 2:
        return None
    img = [0] * 4
    for i, j in ((0, 0), (1, 1), (3, 2), (2, 3)):
        img[a[i]] = b[j]
    q = P.code(tuple(img))
    table = [list(r) for r in tri.gluings]
    table[t1][f1] = (t2, q)
    table[t2][f2] = (t1, P.inverse(q))
    tags = None
    if tri.tags is not None:
        tags = [list(r) for r in tri.tags]
        tags[t1][f1] = tags[t2][f2] = None
        tags = tuple(tuple(r) for r in tags)
    try:
        return Triangulation(tuple(tuple(r) for r in table), tags, tri.name)
    except TriangulationError:
        return None


# ---------------------------------------------------------------------------
# simplification driver


@dataclass(frozen=True)
class Fingerprint:
    """Invariants every move must preserve."""

    components: int
    orientable: bool
    boundary: tuple
    homology: tuple

    @classmethod
    def of(cls, tri, with_homology=True):
        bdry = tuple(sorted((c.genus, c.orientable, tuple(sorted(c.tags, key=repr))) for c in tri.boundary_components))
        cusps = tuple(sorted(tri.vertex_link(v).genus for v in tri.ideal_vertices()))
        hom = first_homology(tri) if with_homology else None
        return cls(len(tri.components()), tri.is_orientable, (bdry, cusps), hom)


def _acceptable(new, ref, check_homology):
    if new is None:
        return False
    if manifold_problems(new, allow_ideal=bool(ref.boundary[1])):
        return False
    fp = Fingerprint.of(new, with_homology=check_homology)
    if fp.components != ref.components or fp.orientable != ref.orientable or fp.boundary != ref.boundary:
        return False
    if check_homology and fp.homology != ref.homology:
        return False
    return True


def interior_vertex_count(tri):
    return sum(1 for k in tri.skeleton.vertex_kinds if k is VertexKind.MATERIAL)


def extra_boundary_vertices(tri):
    """Boundary vertices beyond one per boundary component."""
    sk = tri.skeleton
    per_comp = {}
    for comp in tri.boundary_components:
        vs = set()
        for t, f in comp.faces:
            for v in face_vertices(f):
                vs.add(sk.vertex_of[t][v])
        per_comp[comp.index] = len(vs)
    return sum(n - 1 for n in per_comp.values())


def goal_met(tri):
    if tri.is_closed:
        return len(tri.skeleton.vertices) == 1
    return interior_vertex_count(tri) == 0 and extra_boundary_vertices(tri) == 0


def _score(tri):
    return (tri.size, len(tri.skeleton.vertices))


def _reducing_moves(tri):
    sk = tri.skeleton
    for e in range(len(sk.edges)):
        yield lambda e=e: collapse_edge(tri, e)
    for e, edge in enumerate(sk.edges):
        if not edge.boundary and edge.degree in (2, 3):
            if edge.degree == 3:
                yield lambda e=e: move_32(tri, e)
            else:
                yield lambda e=e: move_20_edge(tri, e)
    for v, kind in enumerate(sk.vertex_kinds):
        if kind is VertexKind.MATERIAL and len(sk.vertices[v]) == 2:
            yield lambda v=v: move_20_vertex(tri, v)
    for t in range(tri.size):
        if any(g is None for g in tri.gluings[t]):
            yield lambda t=t: shell_boundary(tri, t)
    for e, edge in enumerate(sk.edges):
        if edge.boundary:
            yield lambda e=e: close_book(tri, e)


def _improves(new, old):
    if new is None:
        return False
    return new.size < old.size or len(new.skeleton.vertices) < len(old.skeleton.vertices)


def descend(tri, ref=None, checked=False):
    """Apply size-reducing moves until none applies.

    Every move is guarded by local conditions only.  With ``checked`` each
    result is also compared against the fingerprint ``ref``.
    """
    while True:
        for make in _reducing_moves(tri):
            new = make()
            if not _improves(new, tri):
                continue
            if checked and not _acceptable(new, ref, check_homology=True):
                continue
            tri = new
            break
        else:
            return tri


def _random_walk(tri, rng, steps, ref=None, checked=False):
    """A few random 2-3 and 4-4 moves to leave a local minimum."""
    for _ in range(steps):
        options = []
        sk = tri.skeleton
        for e, edge in enumerate(sk.edges):
            if not edge.boundary and edge.degree == 4:
                options.append(("44", e))
        for t in range(tri.size):
            for f in range(4):
                g = tri.gluings[t][f]
                if g is not None and g[0] != t:
                    options.append(("23", (t, f)))
        if not options:
            return tri
        kind, arg = rng.choice(options)
        new = move_44(tri, arg, rng.randrange(2)) if kind == "44" else move_23(tri, *arg)
        if new is None:
            continue
        if checked and not _acceptable(new, ref, check_homology=False):
            continue
        tri = new
    return tri


@dataclass(frozen=True)
class SimplifyResult:
    triangulation: Triangulation
    goal_met: bool


def simplify(tri, restarts=32, seed=0, walk_steps=8):
    """Greedy simplification with random restarts.

    Never returns more tetrahedra than the input.  ``goal_met`` reports
    whether the result has no interior vertices (closed: a single vertex)
    and one vertex per boundary component.  The result is verified against
    the input's invariants; if the fast pass ever fails that check the
    search is repeated with every move checked.
    """
    if tri.size == 0:
        return SimplifyResult(tri, True)
    ref = Fingerprint.of(tri)
    best = _search(tri, ref, restarts, seed, walk_steps, checked=False)
    if not _acceptable(best, ref, check_homology=True):
        best = _search(tri, ref, restarts, seed, walk_steps, checked=True)
    if best.size > tri.size:
        best = tri
    return SimplifyResult(best, goal_met(best))


def _search(tri, ref, restarts, seed, walk_steps, checked):
    rng = random.Random(seed)
    best = descend(tri, ref, checked)
    for _ in range(restarts):
        if goal_met(best) and best.size <= 2:
            break
        start = _random_walk(best, rng, walk_steps, ref, checked)
        cand = descend(start, ref, checked)
        if _score(cand) < _score(best):
            best = cand
    return best
