import pytest

from essurf import fixtures
from essurf.cutter import cut_along, normalize_vertices, retriangulations, truncate
from essurf.homology import first_homology
from essurf.simplify import goal_met
from essurf.surface import canonical_surface, is_separating, vertex_link_surface

from conftest import load, rays


def test_truncated_fig8_has_torus_boundary(fig8):
    T = truncate(fig8)
    assert not T.is_ideal
    assert [c.genus for c in T.boundary_components] == [1]
    assert first_homology(T) == first_homology(fig8)


def test_truncation_leaves_closed_manifolds_alone():
    T = load("t3")
    assert truncate(T) is T


def test_truncated_s33_has_torus_boundary(s33):
    T = truncate(s33)
    assert [c.genus for c in T.boundary_components] == [1]


@pytest.mark.parametrize("index", [0, 5, 40, 80])
def test_cut_pieces_match_separation(s33, index):
    S, _ = canonical_surface(s33, rays("s33", "q0")[index].vector)
    pieces = cut_along(s33, S)
    copies = sum(len(p.surface_copies) for p in pieces)
    assert copies == 2
    assert len(pieces) == (2 if is_separating(S) else 1)
    for p in pieces:
        assert all(g == S.genus for g in p.surface_copies)
        assert not p.triangulation.is_ideal
    assert sum(len(p.original_boundaries) for p in pieces) == 1


def test_cut_closed_manifold_along_torus():
    T = load("t3")
    S, _ = canonical_surface(T, rays("t3", "q")[0].vector)
    (piece,) = cut_along(T, S)
    assert piece.surface_copies == [1, 1]
    assert piece.original_boundaries == []


def test_cut_along_vertex_link_splits_off_a_ball():
    T = load("s3")
    pieces = cut_along(T, vertex_link_surface(T, 0))
    assert sorted(len(p.surface_copies) for p in pieces) == [1, 1]
    assert all(g == 0 for p in pieces for g in p.surface_copies)


def test_piece_boundary_tags_survive_in_the_triangulation(s33):
    S, _ = canonical_surface(s33, rays("s33", "q0")[0].vector)
    for p in cut_along(s33, S):
        for comp in p.triangulation.boundary_components:
            assert len(comp.tags) == 1


def test_normalize_reaches_one_boundary_vertex():
    T = fixtures.load("solid_torus_2v")
    out, evidence = normalize_vertices(T)
    assert evidence is None
    assert goal_met(out) and len(out.skeleton.vertices) == 1


def test_normalize_removes_interior_vertices():
    from essurf.simplify import move_14

    T = move_14(fixtures.load("solid_torus"), 0)
    out, _ = normalize_vertices(T)
    assert goal_met(out) and out.size == 1


def test_normalize_reports_sphere_copies():
    T = load("s3")
    (a, b) = cut_along(T, vertex_link_surface(T, 0))
    _, evidence = normalize_vertices(a.triangulation)
    assert evidence is not None and evidence.kind == "sphere"


def test_retriangulations_are_distinct(fig8):
    out = retriangulations(fig8, count=3, seed=2)
    hashes = {t.canonical_hash() for t in out}
    assert len(hashes) == len(out) >= 2
    assert all(first_homology(t) == first_homology(fig8) for t in out)


def test_separating_torus_gives_two_pieces(s33):
    S, _ = canonical_surface(s33, rays("s33", "q0")[17].vector)
    assert S.genus == 1 and is_separating(S)
    pieces = cut_along(s33, S)
    assert len(pieces) == 2
    assert sorted(p.surface_copies for p in pieces) == [[1], [1]]
