"""Brute-force reference implementations used by the tests."""

import itertools

import sympy

from essurf.qtheory import ConstraintSystem, Mode


def oracle_rays(system):
    """Extremal rays by brute force: admissible supports whose kernel is a single positive line."""
    A = sympy.Matrix(system.equations) if system.equations else sympy.zeros(0, system.ncols)
    blocks = [set(b) for b in system.blocks]
    out = set()
    for k in range(1, system.ncols + 1):
        for supp in itertools.combinations(range(system.ncols), k):
            if any(len(b.intersection(supp)) > 1 for b in blocks):
                continue
            sub = A[:, list(supp)] if A.rows else sympy.zeros(0, k)
            null = sub.nullspace() if A.rows else [sympy.eye(k)[:, i] for i in range(k)]
            if len(null) != 1:
                continue
            v = null[0]
            if all(x < 0 for x in v):
                v = -v
            if not all(x > 0 for x in v):
                continue
            den = sympy.ilcm(1, *[sympy.fraction(x)[1] for x in v])
            ints = [int(x * den) for x in v]
            g = sympy.igcd(0, *ints)
            vec = [0] * system.ncols
            for i, x in zip(supp, ints):
                vec[i] = x // g
            out.add(tuple(vec))
    return out


def random_system(rng):
    nblocks = rng.randint(1, 4)
    ncols = 3 * nblocks
    nrows = rng.randint(1, ncols - 1)
    eqs = tuple(tuple(rng.choice((-2, -1, -1, 0, 0, 0, 1, 1, 2)) for _ in range(ncols)) for _ in range(nrows))
    blocks = tuple(tuple(range(3 * b, 3 * b + 3)) for b in range(nblocks))
    return ConstraintSystem(ncols, eqs, blocks, Mode.Q)
