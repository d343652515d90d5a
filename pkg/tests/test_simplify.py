import pytest

from essurf import fixtures
from essurf.homology import first_homology
from essurf.simplify import (
    Fingerprint,
    close_book,
    goal_met,
    move_14,
    move_23,
    move_32,
    move_44,
    simplify,
)

from conftest import load


def first_23(tri):
    for t in range(tri.size):
        for f in range(4):
            out = move_23(tri, t, f)
            if out is not None:
                return out
    return None


@pytest.mark.parametrize("name", ["fig8", "m003", "t3", "lens7"])
def test_23_then_32_round_trip(name):
    T = load(name)
    up = first_23(T)
    assert up is not None and up.size == T.size + 1
    assert Fingerprint.of(up) == Fingerprint.of(T)
    back = [move_32(up, e) for e in range(len(up.skeleton.edges))]
    assert any(b is not None and b.canonical_hash() == T.canonical_hash() for b in back)


def test_44_preserves_invariants():
    T = load("t3")
    done = 0
    for cur in (T, first_23(T)):
        for e in range(len(cur.skeleton.edges)):
            for axis in (0, 1):
                out = move_44(cur, e, axis)
                if out is not None:
                    assert out.size == cur.size
                    assert Fingerprint.of(out) == Fingerprint.of(cur)
                    done += 1
    assert done


def test_14_adds_an_interior_vertex():
    T = load("s3")
    out = move_14(T, 0)
    assert out.size == 4
    assert len(out.skeleton.vertices) == 2
    assert first_homology(out) == first_homology(T)


@pytest.mark.parametrize("name", ["s3", "l4_1", "lens7", "t3", "fig8", "m003", "solid_torus"])
def test_inflated_fixtures_shrink_back(name):
    T = load(name)
    big = move_14(T, 0)
    big = first_23(big) or big
    res = simplify(big, restarts=8, seed=1)
    out = res.triangulation
    assert out.size <= T.size
    assert res.goal_met and goal_met(out)
    assert Fingerprint.of(out) == Fingerprint.of(T)


def test_simplify_never_grows():
    T = load("s33")
    assert simplify(T, restarts=2).triangulation.size <= T.size


def test_close_book_on_two_vertex_solid_torus():
    T = fixtures.load("solid_torus_2v")
    outs = [close_book(T, e) for e in range(len(T.skeleton.edges))]
    done = [o for o in outs if o is not None]
    assert done
    assert all(len(o.skeleton.vertices) < len(T.skeleton.vertices) and Fingerprint.of(o) == Fingerprint.of(T) for o in done)
    res = simplify(T, restarts=4)
    assert res.goal_met
    assert len(res.triangulation.skeleton.vertices) == 1
