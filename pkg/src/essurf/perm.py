"""Permutations of {0, 1, 2, 3} stored as small integer codes.

A permutation is kept as an index into ``S4`` (the lexicographically ordered
list of image tuples), so composition and inversion are table lookups.
"""

from itertools import permutations

S4 = tuple(permutations(range(4)))
_INDEX = {p: i for i, p in enumerate(S4)}

IDENTITY = 0


def code(images):
    """Return the code of the permutation sending ``i`` to ``images[i]``."""
    return _INDEX[tuple(images)]


def images(p):
    return S4[p]


def _sign(p):
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                s = -s
    return s


SIGN = tuple(_sign(p) for p in S4)
INVERSE = tuple(_INDEX[tuple(sorted(range(4), key=lambda i: p[i]))] for p in S4)
# COMPOSE[a][b] is a after b: i -> a(b(i)).
COMPOSE = tuple(
    tuple(_INDEX[tuple(S4[a][S4[b][i]] for i in range(4))] for b in range(24))
    for a in range(24)
)


def apply(p, i):
    return S4[p][i]


def compose(a, b):
    return COMPOSE[a][b]


def inverse(p):
    return INVERSE[p]


def sign(p):
    return SIGN[p]


def transposition(i, j):
    img = list(range(4))
    img[i], img[j] = j, i
    return _INDEX[tuple(img)]


def from_pairs(src, dst):
    """Permutation sending ``src[k]`` to ``dst[k]``; the 4th point is inferred."""
    img = [-1] * 4
    for a, b in zip(src, dst):
        img[a] = b
    missing_src = [i for i in range(4) if img[i] < 0]
    missing_dst = sorted(set(range(4)) - set(img))
    for a, b in zip(missing_src, missing_dst):
        img[a] = b
    return _INDEX[tuple(img)]


def to_text(p):
    return "".join(str(i) for i in S4[p])


def from_text(text):
    if len(text) != 4 or sorted(text) != list("0123"):
        raise ValueError(f"not a permutation of 0123: {text!r}")
    return _INDEX[tuple(int(c) for c in text)]
