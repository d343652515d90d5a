import itertools

import pytest

from essurf import perm as P


def test_s4_is_lexicographic():
    assert P.S4 == tuple(itertools.permutations(range(4)))
    assert P.images(P.IDENTITY) == (0, 1, 2, 3)


@pytest.mark.parametrize("a", range(24))
def test_group_laws(a):
    assert P.compose(a, P.inverse(a)) == P.IDENTITY
    assert P.compose(P.IDENTITY, a) == a
    for b in range(24):
        ab = P.compose(a, b)
        assert all(P.apply(ab, x) == P.apply(a, P.apply(b, x)) for x in range(4))
        assert P.sign(ab) == P.sign(a) * P.sign(b)


def test_transposition_and_text():
    t = P.transposition(1, 3)
    assert P.images(t) == (0, 3, 2, 1)
    assert P.sign(t) == -1
    assert P.from_text(P.to_text(t)) == t
    assert P.from_pairs((0, 1, 2, 3), (1, 0, 2, 3)) == P.transposition(0, 1)
