
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from essurf import fixtures
from essurf import perm as P
from essurf.isosig import IsoSigError, decode_iso_sig
from essurf.triangulation import (
    NonOrientableError,
    Triangulation,
    TriangulationError,
    VertexKind,
    parse_gluings,
)

from conftest import CLOSED, load


def test_parse_roundtrip_and_missing_reverse_lines():
    text = "tets 1\n0 0 -> 0 1230   # solid torus\n0 2 -> bdry\n"
    T = parse_gluings(text)
    assert T.gluings[0][1] == (0, P.inverse(P.from_text("1230")))
    assert parse_gluings(T.to_text()) == T
    assert [c.genus for c in T.boundary_components] == [1]


@pytest.mark.parametrize(
    "text",
    [
        "tets 1\n0 0 -> 0 0123\n",  # face glued to itself
        "tets 2\n0 0 -> 1 0123\n1 0 -> 0 1023\n",  # inconsistent pair
        "tets 1\n0 0 -> 3 0123\n",  # no such tetrahedron
        "0 0 -> 0 1230\n",  # missing header
    ],
)
def test_parse_rejects_bad_tables(text):
    with pytest.raises(TriangulationError):
        parse_gluings(text)


def test_figure_eight_skeleton(fig8):
    sk = fig8.skeleton
    assert sorted(sk.edge_degrees) == [6, 6]
    assert sk.vertex_kinds == (VertexKind.IDEAL,)
    link = fig8.vertex_link(0)
    assert (link.euler, link.orientable, link.genus) == (0, True, 1)
    assert fig8.is_ideal and not fig8.is_closed and fig8.is_valid


def test_s33_vertex_link_is_a_torus(s33):
    assert s33.size == 18
    assert [s33.vertex_link(v).genus for v in s33.ideal_vertices()] == [1]
    assert sum(1 for d in s33.skeleton.edge_degrees if d == 2) == 9


@pytest.mark.parametrize("name", CLOSED)
def test_closed_fixtures_have_zero_euler_characteristic(name):
    T = load(name)
    sk = T.skeleton
    V, E, F = len(sk.vertices), len(sk.edges), sk.face_count
    assert V - E + F - T.size == 0
    assert T.is_closed and T.is_valid
    assert all(T.vertex_link(v).euler == 2 for v in range(V))


def test_three_torus_matches_construction():
    built = fixtures.three_torus()
    assert built.canonical_hash() == fixtures.load("t3").canonical_hash()
    assert len(built.skeleton.vertices) == 1
    assert len(built.skeleton.edges) == 7


def test_ball_and_solid_torus_links():
    ball = load("ball")
    assert all(k is VertexKind.BOUNDARY for k in ball.skeleton.vertex_kinds)
    assert all(ball.vertex_link(v).euler == 1 for v in range(4))
    st2 = load("solid_torus_2v")
    assert len(st2.skeleton.vertices) == 2
    assert [c.genus for c in st2.boundary_components] == [1]


def test_gieseking_is_non_orientable():
    G = fixtures.load("gieseking")
    assert not G.is_orientable
    link = G.vertex_link(0)
    assert link.euler == 0 and not link.orientable
    with pytest.raises(NonOrientableError):
        G.oriented()


@pytest.mark.parametrize("name", ["fig8", "l4_1", "t3", "solid_torus"])
def test_oriented_makes_every_gluing_odd(name):
    T = fixtures.load(name).oriented()
    assert T.is_oriented
    for row in T.gluings:
        for g in row:
            if g is not None:
                assert P.sign(g[1]) == -1


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["fig8", "m003", "t3", "lens8", "solid_torus_2v"]), st.randoms(use_true_random=False))
def test_canonical_hash_ignores_labelling(name, rnd):
    T = fixtures.load(name)
    order = list(range(T.size))
    rnd.shuffle(order)
    perms = [rnd.randrange(24) for _ in range(T.size)]
    R = T.relabel(order, perms)
    assert R.canonical_hash() == T.canonical_hash()


def test_canonical_hash_separates_fig8_and_sister():
    assert load("fig8").canonical_hash() != load("m003").canonical_hash()


def test_isosig_decoding():
    T = decode_iso_sig("cPcbbbdxm")
    assert T.size == 2 and T.is_ideal
    with pytest.raises(IsoSigError):
        decode_iso_sig("c!!")
    with pytest.raises(IsoSigError):
        decode_iso_sig("")


def test_components_and_subset():
    T = Triangulation.from_gluing_list(2, [])
    comps = T.components()
    assert len(comps) == 2 and all(c.size == 1 for c in comps)
    sub = T.subset([1])
    assert sub.size == 1 and sub.boundary_face_count == 4
    with pytest.raises(TriangulationError):
        load("fig8").subset([0])
