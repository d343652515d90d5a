import random

import pytest

from essurf.surface import (
    IncompatibleSurfaces,
    Inconsistent,
    NotClosed,
    canonical_surface,
    compatible,
    explicit_euler,
    haken_sum,
    is_separating,
    properties,
    reconstruct,
    vertex_link_surface,
)

from conftest import IDEAL, ORIENTABLE, load, rays


def closed_vertex_surfaces(name):
    T = load(name)
    out = []
    for mode in ("q", "q0"):
        for r in rays(name, mode):
            try:
                out.append(canonical_surface(T, r.vector)[0])
            except NotClosed:
                pass
    return out


@pytest.mark.parametrize("name", ORIENTABLE)
def test_closed_form_euler_matches_cell_complex(name):
    for S in closed_vertex_surfaces(name):
        assert S.euler == explicit_euler(S)


def test_s33_q0_classification():
    T = load("s33")
    kinds = {"genus2": 0, "sep_torus": 0, "nonsep_torus": 0}
    for r in rays("s33", "q0"):
        p = properties(canonical_surface(T, r.vector)[0])
        assert p.component_count == 1 and p.orientable and p.two_sided
        if p.genus == (2,):
            kinds["genus2"] += 1
        elif p.separating:
            kinds["sep_torus"] += 1
        else:
            kinds["nonsep_torus"] += 1
    assert kinds == {"genus2": 9, "sep_torus": 4, "nonsep_torus": 68}


def test_spun_rays_do_not_reconstruct():
    T = load("fig8")
    for r in rays("fig8", "q"):
        with pytest.raises(NotClosed):
            reconstruct(T, r.vector)


def test_reconstruct_rejects_bad_input(fig8):
    with pytest.raises(Inconsistent):
        reconstruct(fig8, (0, 0))
    with pytest.raises(Inconsistent):
        reconstruct(fig8, (-1, 0, 0, 0, 0, 0))


def test_vertex_link_is_a_torus_in_fig8(fig8):
    S = vertex_link_surface(fig8, 0)
    assert S.is_vertex_linking and S.euler == 0 and S.orientable
    assert S.euler == explicit_euler(S)


def test_vertex_link_of_s3_is_a_separating_sphere():
    T = load("s3")
    S = vertex_link_surface(T, 0)
    assert S.euler == 2


@pytest.mark.parametrize("name", ["ball", "solid_torus", "s2xs1", "l3_1"])
def test_properties_are_consistent(name):
    for S in closed_vertex_surfaces(name):
        p = properties(S)
        assert p.euler == sum(c.euler for c in S.components())
        if not p.two_sided:
            assert p.component_count == 1
        if p.component_count == 1:
            assert p.separating == is_separating(S)


def test_one_sided_surfaces_are_doubled():
    T = load("l4_1")
    found = False
    for r in rays("l4_1", "q"):
        S = reconstruct(T, r.vector)
        if not S.two_sided:
            found = True
            assert not S.orientable
            D, doubled = canonical_surface(T, r.vector)
            assert doubled and D.two_sided and D.euler == 2 * S.euler
    assert found


def test_nonseparating_torus_in_t3():
    for S in closed_vertex_surfaces("t3"):
        assert S.euler == 0 and not is_separating(S)


def _pairs(rng, count):
    pool = {n: closed_vertex_surfaces(n) for n in ORIENTABLE}
    pool = {n: v for n, v in pool.items() if v}
    names = sorted(pool)
    out = []
    while len(out) < count:
        surfs = pool[rng.choice(names)]
        a, b = rng.choice(surfs), rng.choice(surfs)
        if compatible(a, b):
            out.append((a.scaled(rng.randint(1, 3)), b.scaled(rng.randint(1, 3))))
    return out


def test_haken_sum_is_additive():
    for a, b in _pairs(random.Random(1), 100):
        hs = haken_sum(a, b)
        assert hs.surface.euler == a.euler + b.euler
        assert hs.surface.weight == a.weight + b.weight


def test_incompatible_sum_raises():
    surfs = closed_vertex_surfaces("s33")
    pair = next((a, b) for a in surfs for b in surfs if not compatible(a, b))
    with pytest.raises(IncompatibleSurfaces):
        haken_sum(*pair)


def test_reduced_sum_drops_vertex_links(fig8):
    S = vertex_link_surface(fig8, 0)
    hs = haken_sum(S, S)
    assert hs.sigma == (2,)
    assert hs.reduced.is_empty


@pytest.mark.parametrize("name", IDEAL)
def test_q0_surfaces_are_closed(name):
    T = load(name)
    for r in rays(name, "q0"):
        S, _ = canonical_surface(T, r.vector)
        assert not S.has_boundary()
