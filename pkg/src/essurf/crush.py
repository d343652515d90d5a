"""Crushing a triangulation along a normal surface.

Tetrahedra containing quadrilaterals are deleted.  A deleted tetrahedron
with quads of type ``ab|cd`` is flattened: its face opposite ``a`` is
identified with the face opposite ``b`` (swapping ``a`` and ``b``), and
likewise for ``c`` and ``d``.  Every surviving face is then followed
through chains of flattened faces until it reaches another surviving face
or the boundary.  The same chase performs edge collapses and other
flattening moves in :mod:`essurf.simplify`.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import perm as P
from .triangulation import QUAD_PAIRS, Triangulation, VertexKind


class CrushError(ValueError):
    pass


class NonManifoldResult(CrushError):
    pass


class InvalidSurface(CrushError):
    pass


def flatten(tri, removed, partner, open_tag=None):
    """Delete ``removed`` tetrahedra, identifying faces as ``partner`` says.

    ``partner[(r, g)] = (r2, g2, tau)`` means face ``g`` of removed
    tetrahedron ``r`` is squashed onto face ``g2`` of removed tetrahedron
    ``r2`` by the vertex map ``tau``.  A face with no partner becomes
    boundary (tagged ``open_tag``).  Returns ``(triangulation, survivors)``
    where ``survivors`` lists the old index of each new tetrahedron.
    Boundary tags follow the chase.
    """
    gl = tri.gluings
    survivors = [t for t in range(tri.size) if t not in removed]
    index = {t: i for i, t in enumerate(survivors)}
    n = len(survivors)
    table = [[None] * 4 for _ in range(n)]
    tags = [[None] * 4 for _ in range(n)]
    limit = 4 * tri.size + 4
    for t in survivors:
        for f in range(4):
            g = gl[t][f]
            if g is None:
                tags[index[t]][f] = tri.tag(t, f)
                continue
            u, p = g
            face = P.apply(p, f)
            steps = 0
            end = None
            while u in removed:
                steps += 1
                if steps > limit:
                    raise NonManifoldResult("face chase does not terminate")
                link = partner.get((u, face))
                if link is None:
                    end = ("bdry", open_tag)
                    break
                u, g2, tau = link
                p = P.compose(tau, p)
                nxt = gl[u][g2]
                if nxt is None:
                    end = ("bdry", tri.tag(u, g2))
                    break
                u2, s = nxt
                p = P.compose(s, p)
                face = P.apply(s, g2)
                u = u2
            i = index[t]
            if end is not None:
                table[i][f] = None
                tags[i][f] = end[1]
                continue
            if u == t and face == f:
                raise NonManifoldResult(f"face {t} {f} would be glued to itself")
            table[i][f] = (index[u], p)
    for i in range(n):
        for f in range(4):
            g = table[i][f]
            if g is None:
                continue
            u, p = g
            back = table[u][P.apply(p, f)]
            if back != (i, P.inverse(p)):
                raise NonManifoldResult("flattened gluings are inconsistent")
    out = Triangulation(
        tuple(tuple(r) for r in table),
        tuple(tuple(r) for r in tags),
        tri.name,
    )
    return out, survivors


def quad_partners(removed_types):
    """Partner map for tetrahedra flattened along a quad type."""
    partner = {}
    for r, q in removed_types.items():
        a, b, c, d = QUAD_PAIRS[q]
        ab = P.transposition(a, b)
        cd = P.transposition(c, d)
        partner[(r, a)] = (r, b, ab)
        partner[(r, b)] = (r, a, ab)
        partner[(r, c)] = (r, d, cd)
        partner[(r, d)] = (r, c, cd)
    return partner


def manifold_problems(tri, allow_ideal=False):
    """Reasons why ``tri`` is not a valid manifold triangulation (empty if fine)."""
    problems = []
    sk = tri.skeleton
    if not all(e.valid for e in sk.edges):
        problems.append("edge identified with itself in reverse")
    for v, kind in enumerate(sk.vertex_kinds):
        link = tri.vertex_link(v)
        if kind is VertexKind.IDEAL and not allow_ideal:
            problems.append(f"vertex {v} has a non-sphere closed link")
        elif kind is VertexKind.BOUNDARY:
            if link.euler != 1 or link.boundary_circle_count != 1:
                problems.append(f"vertex {v} has a boundary link that is not a disc")
    return problems


@dataclass(frozen=True)
class CrushOutcome:
    result: Triangulation
    removed_tets: int
    components: tuple
    component_boundary_profiles: tuple

    @classmethod
    def of(cls, result, removed):
        comps = tuple(result.components())
        profiles = tuple(boundary_profile(c) for c in comps)
        return cls(result, removed, comps, profiles)


def boundary_profile(tri):
    """Sorted boundary genera, counting cusps as boundary surfaces."""
    genera = [c.genus for c in tri.boundary_components]
    for v in tri.ideal_vertices():
        genera.append(tri.vertex_link(v).genus)
    return tuple(sorted(genera))


def crush(tri, S, check=True):
    """Crush ``tri`` along the normal surface ``S``."""
    if S.tri is not tri and S.tri.gluings != tri.gluings:
        raise InvalidSurface("surface belongs to a different triangulation")
    removed = {}
    for t in range(tri.size):
        q, count = S.quad_type(t)
        if count:
            if sum(1 for k in range(3) if S.quads[3 * t + k]) > 1:
                raise InvalidSurface(f"tetrahedron {t} holds two quad types")
            removed[t] = q
    if not removed:
        return CrushOutcome.of(tri, 0)
    result, _ = flatten(tri, set(removed), quad_partners(removed))
    if check:
        problems = manifold_problems(result, allow_ideal=tri.is_ideal)
        if problems:
            raise NonManifoldResult("; ".join(problems))
    return CrushOutcome.of(result, len(removed))
