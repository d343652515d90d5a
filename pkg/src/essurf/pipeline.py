"""Decision procedures for incompressible and closed essential surfaces.

The incompressibility test cuts the ambient triangulation along a surface,
and on each side repeatedly searches for a normal sphere or disc that avoids
the original boundary.  Crushing such a surface either keeps a component
with the same boundary (the loop continues on a smaller triangulation) or
changes the boundary, which means the surface compresses on that side.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import dataclass, field
from enum import Enum

from . import perm as P
from .crush import CrushError, crush
from .cutter import COPY_OF_S, CompressibilityEvidence, cut_along, normalize_vertices, retriangulations
from .enumeration import EnumerationTimeout, _RankTracker, enumerate_admissible_rays
from .homology import Certificate, homology_certificate
from .qtheory import ConstraintSystem, Mode, assemble
from .surface import canonical_surface, from_standard, is_separating
from .triangulation import EDGE_NUM, QUAD_OF, face_vertices

log = logging.getLogger("essurf")


class Verdict(Enum):
    HAKEN_BY_HOMOLOGY = "HakenByHomology"
    HAS_CLOSED_ESSENTIAL_SURFACE = "HasClosedEssentialSurface"
    NO_CLOSED_ESSENTIAL_SURFACE = "NoClosedEssentialSurface"
    INCONCLUSIVE_BOUNDARY_PARALLEL = "InconclusiveBoundaryParallel"
    TIMEOUT = "Timeout"


class Compressibility(Enum):
    INCOMPRESSIBLE = "Incompressible"
    COMPRESSIBLE = "Compressible"


@dataclass(frozen=True)
class IncompressibilityVerdict:
    verdict: Compressibility
    witness: tuple = None  # (side, description)
    iterations: tuple = ()  # crush loops per side
    sizes: tuple = ()  # tetrahedra per side after normalization

    @property
    def incompressible(self):
        return self.verdict is Compressibility.INCOMPRESSIBLE


@dataclass
class CandidateRecord:
    ray: int
    genus: int
    euler: int
    doubled: bool
    separating: bool
    verdict: str = None
    piece_sizes: tuple = ()
    seconds: float = 0.0

    def to_dict(self):
        return {
            "ray": self.ray,
            "genus": self.genus,
            "euler": self.euler,
            "doubled": self.doubled,
            "separating": self.separating,
            "verdict": self.verdict,
            "piece_sizes": list(self.piece_sizes),
            "seconds": round(self.seconds, 4),
        }


@dataclass
class PipelineReport:
    verdict: Verdict
    witness_ray: int = None
    candidates_total: int = 0
    candidates_tested: int = 0
    candidates: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def sizes(self):
        return [c.piece_sizes for c in self.candidates if c.verdict is not None]

    def to_dict(self, with_timings=True):
        out = {
            "verdict": self.verdict.value,
            "witness_ray": self.witness_ray,
            "candidates_total": self.candidates_total,
            "candidates_tested": self.candidates_tested,
            "candidates": [c.to_dict() for c in self.candidates],
            "notes": list(self.notes),
        }
        if with_timings:
            out["timings"] = {k: round(v, 4) for k, v in self.timings.items()}
        else:
            for c in out["candidates"]:
                c.pop("seconds")
        return out


# ---------------------------------------------------------------------------
# simple compressing discs


def _boundary_edge_sign(tri, t, a, b):
    """Class index of edge ``ab`` of ``t`` and +1/-1 for its direction."""
    sk = tri.skeleton
    e = sk.edge_of[t][EDGE_NUM[a][b]]
    for u, p in sk.edges[e].embeddings:
        img = P.S4[p]
        if u == t and {img[0], img[1]} == {a, b}:
            return e, (1 if img[0] == a else -1)
    raise ValueError("edge embedding not found")


def _boundary_cycle_is_essential(tri, cycle, tags):
    """True if the 1-cycle on boundary edges is non-zero in rational homology of the boundary.

    Only boundary components whose tags meet ``tags`` are considered; the
    cycle must live on them.
    """
    tracker = _RankTracker()
    index = {}
    faces = []
    for comp in tri.boundary_components:
        if not comp.tags & tags:
            continue
        faces.extend(comp.faces)
    rows = []
    for t, f in faces:
        x, y, z = face_vertices(f)
        chain = {}
        for (a, b), s in (((x, y), 1), ((y, z), 1), ((x, z), -1)):
            e, d = _boundary_edge_sign(tri, t, a, b)
            index.setdefault(e, len(index))
            chain[e] = chain.get(e, 0) + s * d
        rows.append(chain)
    for e in cycle:
        if e not in index:
            return False
    m = len(index)
    for chain in rows:
        row = [0] * m
        for e, c in chain.items():
            row[index[e]] += c
        tracker.add(row)
    vec = [0] * m
    for e, c in cycle.items():
        vec[index[e]] += c
    if not any(vec):
        return False
    return tracker.add(vec)


def simple_disc_scan(tri, tags=frozenset({COPY_OF_S})):
    """Look for a compressing disc made from a single face or a degree-one edge.

    Returns :class:`CompressibilityEvidence` or ``None``.  Evidence is only
    given when the disc's boundary curve is non-zero in the rational first
    homology of the boundary; such a curve is essential, so by the loop
    theorem the boundary compresses.
    """
    if tri.is_closed:
        raise ValueError("simple disc scan needs a triangulation with boundary")
    sk = tri.skeleton
    gl = tri.gluings
    bedge = [e.boundary for e in sk.edges]
    seen = set()
    for t in range(tri.size):
        for f in range(4):
            g = gl[t][f]
            if g is None or sk.face_of[t][f] in seen:
                continue
            seen.add(sk.face_of[t][f])
            x, y, z = face_vertices(f)
            sides = ((x, y), (y, z), (z, x))
            if not all(bedge[sk.edge_of[t][EDGE_NUM[a][b]]] for a, b in sides):
                continue
            cycle = {}
            for a, b in sides:
                e, d = _boundary_edge_sign(tri, t, a, b)
                cycle[e] = cycle.get(e, 0) + d
            if _boundary_cycle_is_essential(tri, cycle, tags):
                return CompressibilityEvidence("face", f"face {f} of tetrahedron {t}")
    for e, edge in enumerate(sk.edges):
        if edge.boundary or edge.degree != 1:
            continue
        t, p = edge.embeddings[0]
        a, b, c, d = P.S4[p]
        # The triangle at a (or b) closes up into a disc whose boundary is
        # the arc in the opposite boundary face, homotopic to the edge cd.
        if gl[t][a] is not None and gl[t][b] is not None:
            continue
        e2, s = _boundary_edge_sign(tri, t, c, d)
        if _boundary_cycle_is_essential(tri, {e2: s}, tags):
            return CompressibilityEvidence("degree-one edge", f"disc around edge {e} in tetrahedron {t}")
    return None


# ---------------------------------------------------------------------------
# positive Euler characteristic search


def standard_system(tri, excluded=frozenset()):
    """Standard matching equations with discs meeting excluded boundary removed.

    Returns ``(system, columns)`` where ``columns[i]`` is the standard
    coordinate (``7 t + k``) of system column ``i``.
    """
    n = tri.size
    gl = tri.gluings
    banned = set()
    for t in range(n):
        for f in range(4):
            if gl[t][f] is None and tri.tag(t, f) in excluded:
                for v in range(4):
                    if v != f:
                        banned.add(7 * t + v)
                for q in range(3):
                    banned.add(7 * t + 4 + q)
    columns = [c for c in range(7 * n) if c not in banned]
    col = {c: i for i, c in enumerate(columns)}
    eqs = []
    for t in range(n):
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
                row = [0] * len(columns)
                for c, s in (
                    (7 * t + v, 1),
                    (7 * t + 4 + QUAD_OF[v][f], 1),
                    (7 * u + uv, -1),
                    (7 * u + 4 + QUAD_OF[uv][uf], -1),
                ):
                    if c in col:
                        row[col[c]] += s
                if any(row):
                    eqs.append(tuple(row))
    blocks = []
    for t in range(n):
        blk = tuple(col[7 * t + 4 + q] for q in range(3) if 7 * t + 4 + q in col)
        if len(blk) > 1:
            blocks.append(blk)
    system = ConstraintSystem(len(columns), tuple(eqs), tuple(blocks), Mode.Q)
    return system, columns


def find_positive_chi_surface(tri, excluded=frozenset(), deadline=None):
    """A connected normal surface with positive Euler characteristic.

    The surface is not a vertex link and meets no boundary face whose tag
    is in ``excluded``.  One-sided surfaces are replaced by their doubles.
    Returns ``None`` if no admissible vertex surface qualifies.
    """
    system, columns = standard_system(tri, frozenset(excluded))
    if system.ncols == 0:
        return None
    rays = enumerate_admissible_rays(system, deadline=deadline)
    best = None
    for ray in rays:
        vec = [0] * (7 * tri.size)
        for i, c in enumerate(columns):
            vec[c] = ray.vector[i]
        S = from_standard(tri, vec)
        if S.is_vertex_linking or not S.is_connected:
            continue
        if S.euler <= 0:
            continue
        if not S.two_sided:
            S = S.scaled(2)
        key = (S.disc_count, S.standard_vector())
        if best is None or key < best[0]:
            best = (key, S)
    return None if best is None else best[1]


# ---------------------------------------------------------------------------
# incompressibility


def _profile(tri):
    return tuple(sorted((tuple(sorted(c.tags, key=repr)), c.genus) for c in tri.boundary_components))


def _side_verdict(tri, seed=0, deadline=None):
    """Run the crush loop on one side; returns ``(compressible, note, iterations, size)``."""
    tri, evidence = normalize_vertices(tri, seed=seed)
    size = tri.size
    if evidence is not None:
        return True, evidence.detail, 0, size
    excluded = frozenset(tag for c in tri.boundary_components for tag in c.tags if tag != COPY_OF_S)
    target = _profile(tri)
    iterations = 0
    while True:
        found = simple_disc_scan(tri)
        if found is not None:
            return True, f"simple disc: {found.detail}", iterations, size
        E = find_positive_chi_surface(tri, excluded, deadline)
        if E is None:
            return False, None, iterations, size
        iterations += 1
        try:
            outcome = crush(tri, E)
        except CrushError as exc:
            raise RuntimeError(f"crushing a sphere or disc failed: {exc}") from exc
        keep = [c for c in outcome.components if _profile(c) == target]
        if not keep:
            return True, f"crushing a surface of euler characteristic {E.euler} changed the boundary", iterations, size
        nxt, evidence = normalize_vertices(keep[0], seed=seed)
        if nxt.size >= tri.size:
            raise RuntimeError("crush loop did not reduce the triangulation")
        tri = nxt


def _side_job(args):
    return _side_verdict(*args)


def _variants(piece, seed, count):
    if count <= 1:
        return [piece]
    return retriangulations(piece, count=count, seed=seed)


def test_incompressible(tri, S, jobs=1, seed=0, variants=1, pool=None, deadline=None):
    """Decide whether the closed two-sided surface ``S`` is incompressible.

    Ideal vertices are truncated before cutting.  With ``jobs > 1`` the two
    sides and their retriangulation variants run in parallel and each side
    takes the first answer to arrive; every variant is a complete search,
    so the verdict does not depend on scheduling.
    """
    if S.has_boundary():
        raise ValueError("surface must be closed")
    if not S.two_sided:
        raise ValueError("surface must be two-sided")
    pieces = cut_along(tri, S)
    sides = [p.triangulation for p in pieces]
    results = [None] * len(sides)
    if jobs <= 1 and pool is None:
        for i, side in enumerate(sides):
            results[i] = _side_verdict(_variants(side, seed + i, variants)[0], seed + i, deadline)
            if results[i][0]:
                break
    else:
        own = pool is None
        ex = pool or ProcessPoolExecutor(max_workers=jobs)
        try:
            futures = {}
            for i, side in enumerate(sides):
                for var in _variants(side, seed + i, variants):
                    futures[ex.submit(_side_job, (var, seed + i, deadline))] = i
            pending = set(futures)
            while pending and not _decided(results):
                done, pending = wait(pending, return_when=FIRST_COMPLETED)
                for fut in done:
                    i = futures[fut]
                    if results[i] is None:
                        results[i] = fut.result()
            for fut in pending:
                fut.cancel()
        finally:
            if own:
                ex.shutdown(wait=True, cancel_futures=True)
    iterations = tuple(r[2] if r else 0 for r in results)
    sizes = tuple(r[3] if r else 0 for r in results)
    for i, r in enumerate(results):
        if r is not None and r[0]:
            return IncompressibilityVerdict(Compressibility.COMPRESSIBLE, (i, r[1]), iterations, sizes)
    return IncompressibilityVerdict(Compressibility.INCOMPRESSIBLE, None, iterations, sizes)


def _decided(results):
    if any(r is not None and r[0] for r in results):
        return True
    return all(r is not None for r in results)


# ---------------------------------------------------------------------------
# top-level decisions


def candidate_surfaces(tri, mode, deadline=None):
    """Closed two-sided vertex surfaces other than spheres, sorted by genus."""
    rays = enumerate_admissible_rays(assemble(tri, mode), deadline=deadline)
    out = []
    for i, ray in enumerate(rays):
        S, doubled = canonical_surface(tri, ray.vector)
        if S.euler > 0:
            continue
        out.append((S.genus, i, S, doubled))
    out.sort(key=lambda c: (c[0], c[1]))
    return rays, out


class _Deadline:
    def __init__(self, seconds):
        self.end = None if seconds is None else time.monotonic() + seconds

    def expired(self):
        return self.end is not None and time.monotonic() > self.end


def _decide(tri, ideal, jobs=1, seed=0, timeout=None, use_homology=True, variants=1):
    start = time.perf_counter()
    report = PipelineReport(Verdict.NO_CLOSED_ESSENTIAL_SURFACE)
    if not tri.is_oriented:
        tri = tri.oriented()
    if use_homology:
        cert = homology_certificate(tri)
        report.timings["homology"] = time.perf_counter() - start
        if cert is not Certificate.NONE:
            report.verdict = Verdict.HAKEN_BY_HOMOLOGY
            report.notes.append(cert.value)
            return report
    t0 = time.perf_counter()
    deadline = _Deadline(timeout)
    mode = Mode.Q0 if ideal else Mode.Q
    try:
        rays, cands = candidate_surfaces(tri, mode, deadline.end)
    except EnumerationTimeout:
        report.verdict = Verdict.TIMEOUT
        report.timings["total"] = time.perf_counter() - start
        return report
    report.timings["enumeration"] = time.perf_counter() - t0
    report.candidates_total = len(cands)
    link_genera = {tri.vertex_link(v).genus for v in tri.ideal_vertices()}
    boundary_parallel = False
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    t0 = time.perf_counter()
    try:
        for genus, index, S, doubled in cands:
            if deadline.expired():
                report.verdict = Verdict.TIMEOUT
                break
            rec = CandidateRecord(index, genus, S.euler, doubled, is_separating(S))
            report.candidates.append(rec)
            if ideal and not rec.separating:
                report.notes.append(f"candidate {index} is non-separating")
            c0 = time.perf_counter()
            try:
                v = test_incompressible(tri, S, jobs, seed, variants, pool, deadline.end)
            except EnumerationTimeout:
                rec.seconds = time.perf_counter() - c0
                rec.verdict = Verdict.TIMEOUT.value
                report.verdict = Verdict.TIMEOUT
                log.info("candidate %d (genus %d): timed out", index, genus)
                break
            rec.seconds = time.perf_counter() - c0
            rec.verdict = v.verdict.value
            rec.piece_sizes = v.sizes
            report.candidates_tested += 1
            log.info("candidate %d (genus %d): %s in %.1fs", index, genus, rec.verdict, rec.seconds)
            if not v.incompressible:
                continue
            if ideal and genus in link_genera:
                boundary_parallel = True
                continue
            report.verdict = Verdict.HAS_CLOSED_ESSENTIAL_SURFACE
            report.witness_ray = index
            break
        else:
            if boundary_parallel:
                report.verdict = Verdict.INCONCLUSIVE_BOUNDARY_PARALLEL
    finally:
        if pool is not None:
            pool.shutdown(wait=True, cancel_futures=True)
    report.timings["testing"] = time.perf_counter() - t0
    report.timings["total"] = time.perf_counter() - start
    return report


def decide_closed(tri, jobs=1, seed=0, timeout=None, use_homology=True, variants=1):
    """Does the closed irreducible manifold contain a closed essential surface?

    The caller is responsible for irreducibility.
    """
    if not tri.is_closed:
        raise ValueError("decide_closed needs a closed triangulation")
    return _decide(tri, False, jobs, seed, timeout, use_homology, variants)


def decide_ideal(tri, jobs=1, seed=0, timeout=None, use_homology=True, variants=1):
    """Closed essential surfaces in the interior of a cusped manifold.

    The caller is responsible for irreducibility and boundary
    irreducibility of the compact manifold.
    """
    if not tri.is_ideal:
        raise ValueError("decide_ideal needs an ideal triangulation")
    return _decide(tri, True, jobs, seed, timeout, use_homology, variants)


def decide(tri, **kw):
    return decide_ideal(tri, **kw) if tri.is_ideal else decide_closed(tri, **kw)
