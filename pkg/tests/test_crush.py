import pytest

from essurf.crush import CrushError, NonManifoldResult, crush
from essurf.surface import NotClosed, canonical_surface, vertex_link_surface

from conftest import ORIENTABLE, load, rays


def crushes(name):
    T = load(name)
    for mode in ("q", "q0"):
        for r in rays(name, mode):
            try:
                S, _ = canonical_surface(T, r.vector)
            except NotClosed:
                continue
            yield T, S


@pytest.mark.parametrize("name", ORIENTABLE)
def test_survivors_are_the_quad_free_tetrahedra(name):
    for T, S in crushes(name):
        quad_tets = sum(1 for t in range(T.size) if S.quad_type(t)[1])
        try:
            out = crush(T, S)
        except NonManifoldResult:
            out = crush(T, S, check=False)
        assert out.removed_tets == quad_tets
        assert out.result.size == T.size - quad_tets


def test_empty_surface_changes_nothing(fig8):
    S = vertex_link_surface(fig8, 0)
    out = crush(fig8, S)
    assert out.removed_tets == 0 and out.result is fig8


def test_crush_s33_tori_gives_torus_boundaries():
    T = load("s33")
    for r in rays("s33", "q0")[:6]:
        S, _ = canonical_surface(T, r.vector)
        out = crush(T, S)
        for prof in out.component_boundary_profiles:
            assert all(g >= 1 for g in prof)


def test_rejects_two_quad_types(fig8):
    from essurf.surface import NormalSurface

    bad = NormalSurface(fig8, (0,) * 8, (1, 1, 0, 0, 0, 0))
    with pytest.raises(CrushError):
        crush(fig8, bad)
