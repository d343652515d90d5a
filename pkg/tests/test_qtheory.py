import pytest

from essurf import perm as P
from essurf.qtheory import (
    Mode,
    NotOrientedError,
    assemble,
    build_boundary_functionals,
    build_matching_system,
    evaluate_nu,
    is_admissible,
    slope,
    small_loop_cycle,
)
from essurf.triangulation import QUAD_OF

from conftest import IDEAL, ORIENTABLE, load, rays


def test_reference_slope():
    assert slope(P.IDENTITY, QUAD_OF[0][2]) == 1
    assert slope(P.IDENTITY, QUAD_OF[0][3]) == -1
    assert slope(P.IDENTITY, QUAD_OF[0][1]) == 0


@pytest.mark.parametrize("p", range(24))
def test_slope_ignores_edge_direction(p):
    a, b, c, d = P.S4[p]
    flipped = P.code((b, a, d, c))  # same tetrahedron orientation, edge reversed
    for q in range(3):
        assert slope(p, q) == slope(flipped, q)


@pytest.mark.parametrize("name", ORIENTABLE)
def test_small_loop_functional_is_the_matching_row(name):
    T = load(name)
    M = build_matching_system(T)
    for row, e in zip(M.rows, M.edges):
        for end in (0, 1):
            assert small_loop_cycle(T, e, end).functional(M.ncols) == row


def test_requires_orientation():
    T = load("fig8")
    assert T.is_oriented
    bad = T.relabel(list(range(T.size)), [P.IDENTITY, P.transposition(0, 1)])
    assert not bad.is_oriented
    with pytest.raises(NotOrientedError):
        build_matching_system(bad)


@pytest.mark.parametrize("name, count", [("fig8", 2), ("m003", 2), ("s33", 2), ("l4_1", 0)])
def test_functional_count_is_twice_the_cusp_genus(name, count):
    assert len(build_boundary_functionals(load(name)).rows) == count


@pytest.mark.parametrize("name", IDEAL)
def test_q0_rays_satisfy_every_equation(name):
    system = assemble(load(name), Mode.Q0)
    F = build_boundary_functionals(load(name))
    for ray in rays(name, "q0"):
        assert system.satisfied_by(ray.vector)
        assert not any(evaluate_nu(F, ray.vector))
        assert is_admissible(ray.vector)


def test_spun_count_for_s33():
    F = build_boundary_functionals(load("s33"))
    spun = [r for r in rays("s33", "q") if any(evaluate_nu(F, r.vector))]
    assert len(spun) == 20


def test_evaluate_nu_checks_length(fig8):
    with pytest.raises(ValueError):
        evaluate_nu(build_boundary_functionals(fig8), (0, 1))


def test_admissibility():
    assert is_admissible((1, 0, 0, 0, 2, 0))
    assert not is_admissible((1, 1, 0))
    assert not is_admissible((-1, 0, 0))


def test_constraint_system_scaling(fig8):
    sys_ = assemble(fig8, "q0")
    assert sys_.scaled(3).equations[0] == tuple(3 * a for a in sys_.equations[0])
    assert sys_.to_dict()["mode"] == "q0"
