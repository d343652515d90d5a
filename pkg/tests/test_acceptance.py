"""Acceptance criteria 1 to 10.

Each test records one PASS/FAIL line; the lines are printed at the end of
the pytest run and also when this file is run directly.
"""

import csv
import random
import time

import pytest

from essurf import fixtures
from essurf import pipeline as pl
from essurf.cli import main as cli_main
from essurf.crush import NonManifoldResult, crush
from essurf.enumeration import enumerate_admissible_rays
from essurf.homology import Certificate, homology_certificate
from essurf.isosig import decode_iso_sig
from essurf.qtheory import Mode, assemble, build_boundary_functionals, build_matching_system, evaluate_nu, small_loop_cycle
from essurf.surface import NotClosed, canonical_surface, compatible, explicit_euler, haken_sum, properties

from conftest import ORIENTABLE, load
from oracles import oracle_rays, random_system

RESULTS = {}


def record(n, ok, detail):
    RESULTS[n] = (bool(ok), detail)
    print(summary_line(n))
    assert ok, detail


def summary_line(n):
    ok, detail = RESULTS[n]
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


def closed_vertex_surfaces(name):
    T = load(name)
    out = []
    for mode in (Mode.Q, Mode.Q0) if T.is_ideal else (Mode.Q,):
        for r in enumerate_admissible_rays(assemble(T, mode)):
            try:
                out.append(canonical_surface(T, r.vector)[0])
            except NotClosed:
                pass
    return out


@pytest.fixture(scope="module")
def s33_published():
    T = decode_iso_sig(fixtures.ISO_SIGS["s33"]).oriented()
    t0 = time.perf_counter()
    q = enumerate_admissible_rays(assemble(T, Mode.Q))
    q0 = enumerate_admissible_rays(assemble(T, Mode.Q0))
    return T, q, q0, time.perf_counter() - t0


def test_criterion_01_ray_counts(s33_published):
    _, q, q0, secs = s33_published
    record(1, (len(q), len(q0)) == (29, 81) and secs < 600, f"Q rays {len(q)} (29), Q0 rays {len(q0)} (81), {secs:.1f}s")


def test_criterion_02_classification(s33_published):
    T, q, q0, _ = s33_published
    genus2 = sep_tori = nonsep_tori = 0
    for r in q0:
        p = properties(canonical_surface(T, r.vector)[0])
        if p.genus == (2,):
            genus2 += 1
        elif p.genus == (1,):
            if p.separating:
                sep_tori += 1
            else:
                nonsep_tori += 1
    F = build_boundary_functionals(T)
    spun = sum(1 for r in q if any(evaluate_nu(F, r.vector)))
    got = (genus2, sep_tori, nonsep_tori, spun)
    record(2, got == (9, 4, 68, 20), f"genus-2 {genus2} (9), separating tori {sep_tori} (4), non-separating tori {nonsep_tori} (68), spun {spun} (20)")


def test_criterion_03_enumeration_oracle():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    bad = []
    systems = 120
    for i in range(systems):
        system = random_system(rng)
        assert system.ncols <= 12
        if {r.vector for r in enumerate_admissible_rays(system)} != oracle_rays(system):
            bad.append(i)
    secs = time.perf_counter() - t0
    record(3, not bad and secs < 60, f"{systems} random systems, {len(bad)} mismatches, {secs:.1f}s")


def test_criterion_04_euler_oracle():
    t0 = time.perf_counter()
    checked = mismatched = 0
    for name in ORIENTABLE:
        assert load(name).size <= 20
        for S in closed_vertex_surfaces(name):
            checked += 1
            mismatched += S.euler != explicit_euler(S)
    secs = time.perf_counter() - t0
    record(4, checked and not mismatched and secs < 60, f"{checked} vertex surfaces over {len(ORIENTABLE)} fixtures, {mismatched} mismatches, {secs:.1f}s")


def test_criterion_05_crush_law():
    performed = broken = 0
    for name in ORIENTABLE:
        T = load(name)
        for S in closed_vertex_surfaces(name):
            quad_tets = sum(1 for t in range(T.size) if S.quad_type(t)[1])
            try:
                out = crush(T, S)
            except NonManifoldResult:
                out = crush(T, S, check=False)
            performed += 1
            broken += out.result.size != T.size - quad_tets
    record(5, performed and not broken, f"{performed} crushes, {broken} violations")


def test_criterion_06_additivity():
    rng = random.Random(6)
    pool = {n: closed_vertex_surfaces(n) for n in ORIENTABLE}
    names = sorted(n for n, v in pool.items() if v)
    pairs = failures = 0
    while pairs < 500:
        surfs = pool[rng.choice(names)]
        a, b = rng.choice(surfs), rng.choice(surfs)
        if not compatible(a, b):
            continue
        a, b = a.scaled(rng.randint(1, 3)), b.scaled(rng.randint(1, 3))
        s = haken_sum(a, b).surface
        pairs += 1
        failures += s.euler != a.euler + b.euler or s.weight != a.weight + b.weight
    record(6, not failures, f"{pairs} compatible pairs, {failures} failures")


def test_criterion_07_small_loop():
    signs = set()
    edges = 0
    for name in ORIENTABLE:
        T = load(name)
        M = build_matching_system(T)
        for row, e in zip(M.rows, M.edges):
            edges += 1
            for end in (0, 1):
                f = small_loop_cycle(T, e, end).functional(M.ncols)
                if f == row:
                    signs.add(1)
                elif f == tuple(-x for x in row):
                    signs.add(-1)
                else:
                    signs.add(None)
    record(7, len(signs) == 1 and None not in signs, f"{edges} interior edges, both ends, signs seen {sorted(signs, key=str)}")


def test_criterion_08_fig8():
    t0 = time.perf_counter()
    rep = pl.decide_ideal(load("fig8"))
    secs = time.perf_counter() - t0
    ok = rep.verdict is pl.Verdict.NO_CLOSED_ESSENTIAL_SURFACE and secs < 300
    record(8, ok, f"figure-eight verdict {rep.verdict.value}, {secs:.2f}s")


def test_criterion_09_homology_certificates():
    t3 = pl.decide_closed(load("t3")).verdict
    s3 = homology_certificate(load("s3"))
    ok = t3 is pl.Verdict.HAKEN_BY_HOMOLOGY and s3 is Certificate.NONE
    record(9, ok, f"3-torus {t3.value}, 3-sphere certificate {s3.value}")


def test_criterion_10_batch_schedule_independence(tmp_path):
    src = tmp_path / "census"
    fixtures.install(src, fixtures.MINI_CENSUS)
    verdicts = []
    codes = []
    for jobs in (1, 2):
        out = tmp_path / f"jobs{jobs}.csv"
        codes.append(cli_main(["--jobs", str(jobs), "haken-batch", str(src), "--csv", str(out)]))
        rows = list(csv.DictReader(out.open()))
        verdicts.append([(r["name"], r["verdict"]) for r in rows])
    ok = len(verdicts[0]) == len(fixtures.MINI_CENSUS) and verdicts[0] == verdicts[1]
    record(10, ok, f"{len(verdicts[0])} manifolds, jobs 1 vs 2 identical: {verdicts[0] == verdicts[1]}, exit codes {codes}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
