import random

import pytest
import sympy

from essurf.enumeration import EnumerationTimeout, enumerate_admissible_rays
from essurf.qtheory import ConstraintSystem, Mode, assemble

from conftest import load, rays
from oracles import oracle_rays, random_system


@pytest.mark.parametrize("seed", range(40))
def test_matches_bruteforce_oracle(seed):
    system = random_system(random.Random(seed))
    got = {r.vector for r in enumerate_admissible_rays(system)}
    assert got == oracle_rays(system)


def test_no_equations_gives_unit_vectors():
    system = ConstraintSystem(3, (), ((0, 1, 2),), Mode.Q)
    assert {r.vector for r in enumerate_admissible_rays(system)} == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_rays_are_primitive_sorted_and_admissible():
    rs = rays("s33", "q")
    vecs = rs.vectors()
    assert vecs == sorted(vecs)
    for v in vecs:
        assert sympy.igcd(0, *v) == 1
        for t in range(len(v) // 3):
            assert sum(1 for x in v[3 * t : 3 * t + 3] if x) <= 1


@pytest.mark.parametrize(
    "name, mode, count",
    [("fig8", "q", 4), ("m003", "q", 4), ("fig8", "q0", 0), ("s33", "q0", 81), ("s33", "q", 29), ("t3", "q", 9)],
)
def test_fixture_counts(name, mode, count):
    assert len(rays(name, mode)) == count


def test_scaling_does_not_change_rays():
    system = random_system(random.Random(7))
    a = [r.vector for r in enumerate_admissible_rays(system)]
    b = [r.vector for r in enumerate_admissible_rays(system.scaled(5))]
    assert a == b


def test_deadline_in_the_past_raises():
    with pytest.raises(EnumerationTimeout):
        enumerate_admissible_rays(assemble(load("s33"), "q"), deadline=0)
