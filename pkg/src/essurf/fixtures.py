"""Bundled example triangulations.

Gluing tables live in ``essurf/data`` as ``.tri`` files.  A few are also
constructible from scratch here so that tests can cross-check the files.
"""

from __future__ import annotations

import itertools
import shutil
from importlib import resources
from pathlib import Path

from . import perm as P
from .isosig import decode_iso_sig
from .triangulation import Triangulation, read_gluings

ISO_SIGS = {
    "fig8": "cPcbbbiht",
    "m003": "cPcbbbdxm",
    "s33": "sLLLLPLPMvQAQbefijjlklkjpqqoorrraxaaaaaaaaxhaaaahhh",
}

# name -> short description
DESCRIPTIONS = {
    "s3": "3-sphere, one tetrahedron",
    "l4_1": "lens space L(4,1), one tetrahedron",
    "l5_2": "lens space L(5,2), one tetrahedron",
    "l3_1": "lens space L(3,1), two tetrahedra",
    "lens7": "lens space with first homology Z/7, two tetrahedra",
    "lens8": "lens space with first homology Z/8, two tetrahedra",
    "t3": "3-torus, six tetrahedra (cube with opposite faces identified)",
    "s2xs1": "S2 x S1, two tetrahedra (reducible)",
    "fig8": "figure-eight knot complement, two ideal tetrahedra",
    "m003": "figure-eight sister, two ideal tetrahedra",
    "s33": "circle bundle over a once-punctured genus-2 surface, 18 ideal tetrahedra",
    "gieseking": "Gieseking manifold, one ideal tetrahedron (non-orientable)",
    "ball": "3-ball, one tetrahedron",
    "solid_torus": "solid torus, one tetrahedron",
    "solid_torus_2v": "solid torus with two boundary vertices, two tetrahedra",
}

MINI_CENSUS = ("s3", "l4_1", "l5_2", "l3_1", "lens7", "lens8", "t3", "fig8", "m003", "s33")


def data_dir():
    return resources.files("essurf") / "data"


def names():
    return sorted(p.name[:-4] for p in data_dir().iterdir() if p.name.endswith(".tri"))


def path(name):
    p = data_dir() / f"{name}.tri"
    if not p.is_file():
        raise KeyError(f"unknown fixture {name!r}")
    return p


def load(name):
    with resources.as_file(path(name)) as p:
        tri = read_gluings(p)
    return Triangulation(tri.gluings, tri.tags, name)


def install(dest, selection=None):
    """Copy fixture files into ``dest``; returns the written paths."""
    dest = Path(dest)
    dest.mkdir(parents=True, exist_ok=True)
    out = []
    for name in selection or names():
        with resources.as_file(path(name)) as src:
            target = dest / f"{name}.tri"
            shutil.copyfile(src, target)
            out.append(target)
    return out


# ---------------------------------------------------------------------------
# constructions


def from_periodic_cells(cells, period=1):
    """Glue tetrahedra given by lattice points, with faces matched up to translation.

    ``cells`` is a list of 4-tuples of integer points.  Two faces are glued
    when their point sets differ by a translation in ``period * Z^d``.
    """

    def key(points):
        lo = [min(p[i] for p in points) // period * period for i in range(len(points[0]))]
        return frozenset(tuple(c - l for c, l in zip(p, lo)) for p in points), tuple(lo)

    faces = {}
    for t, cell in enumerate(cells):
        for f in range(4):
            pts = [cell[v] for v in range(4) if v != f]
            k, _ = key(pts)
            faces.setdefault(k, []).append((t, f))
    gluings = []
    for k, owners in faces.items():
        if len(owners) != 2:
            raise ValueError("periodic cells do not pair up faces")
        (t, f), (u, g) = owners
        st, su = key([cells[t][v] for v in range(4) if v != f]), key([cells[u][v] for v in range(4) if v != g])
        shift_t, shift_u = st[1], su[1]
        img = [0] * 4
        img[f] = g
        for v in range(4):
            if v == f:
                continue
            pt = tuple(c - s for c, s in zip(cells[t][v], shift_t))
            w = next(w for w in range(4) if w != g and tuple(c - s for c, s in zip(cells[u][w], shift_u)) == pt)
            img[v] = w
        gluings.append((t, f, u, P.code(tuple(img))))
    return Triangulation.from_gluing_list(len(cells), gluings)


def three_torus():
    """The six-tetrahedron Kuhn triangulation of the cube, made periodic."""
    cells = []
    for order in itertools.permutations(range(3)):
        pt = [0, 0, 0]
        cell = [tuple(pt)]
        for axis in order:
            pt[axis] += 1
            cell.append(tuple(pt))
        cells.append(tuple(cell))
    return from_periodic_cells(cells)


def solid_torus():
    """One tetrahedron with two faces glued: a solid torus with one boundary vertex."""
    return Triangulation.from_gluing_list(1, [(0, 0, 0, P.from_text("1230"))])


def solid_torus_two_vertices():
    """The one-tetrahedron solid torus with a tetrahedron stacked on a boundary face."""
    base = solid_torus()
    face = next(f for f in range(4) if base.gluings[0][f] is None)
    return Triangulation.from_gluing_list(2, [(0, 0, 0, P.from_text("1230")), (0, face, 1, P.IDENTITY)])


def gieseking():
    return Triangulation.from_gluing_list(1, [(0, 0, 0, P.from_text("1203")), (0, 2, 0, P.from_text("0231"))])


def from_iso_sig(name):
    return decode_iso_sig(ISO_SIGS[name], name)
