"""Decoding of isomorphism signatures in the standard census encoding.

A signature lists, in breadth-first order, what happens to each unglued
facet: left as boundary, glued to a fresh tetrahedron by the identity, or
joined to an existing tetrahedron with an explicit permutation.  Only
decoding is supported.
"""

from . import perm as P
from .triangulation import Triangulation, TriangulationError

_ALPHABET = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789+-"
_VALUE = {c: i for i, c in enumerate(_ALPHABET)}


class IsoSigError(TriangulationError):
    pass


class _Reader:
    def __init__(self, sig):
        self.sig = sig
        self.pos = 0

    def done(self):
        return self.pos >= len(self.sig)

    def char(self):
        if self.pos >= len(self.sig):
            raise IsoSigError("truncated isomorphism signature")
        c = self.sig[self.pos]
        self.pos += 1
        try:
            return _VALUE[c]
        except KeyError:
            raise IsoSigError(f"invalid character {c!r} in isomorphism signature") from None

    def number(self, nchars):
        value = 0
        for i in range(nchars):
            value |= self.char() << (6 * i)
        return value


def _decode_component(reader, offset, table):
    n = reader.char()
    nchars = 1
    if n == 63:
        nchars = reader.char()
        n = reader.number(nchars)
    if n == 0:
        return 0
    for _ in range(n):
        table.append([None] * 4)
    nfacets = 4 * n
    actions = []
    used = 0
    while used < nfacets:
        val = reader.char()
        for k in range(3):
            a = (val >> (2 * k)) & 3
            if used >= nfacets:
                if a != 0:
                    raise IsoSigError("malformed facet actions")
                continue
            if a == 3:
                raise IsoSigError("malformed facet actions")
            actions.append(a)
            used += 1 if a == 0 else 2
        if used > nfacets:
            raise IsoSigError("facet actions overrun")
    njoins = actions.count(2)
    dests = [reader.number(nchars) for _ in range(njoins)]
    perms = [reader.char() for _ in range(njoins)]

    glued = [[False] * 4 for _ in range(n)]
    facet = 0
    next_new = 1
    j = 0
    for a in actions:
        while facet < nfacets and glued[facet // 4][facet % 4]:
            facet += 1
        if facet >= nfacets:
            raise IsoSigError("facet actions overrun")
        s, f = divmod(facet, 4)
        if a == 0:
            glued[s][f] = True  # boundary; never revisited
        else:
            if a == 1:
                if next_new >= n:
                    raise IsoSigError("too many new tetrahedra")
                dest, p = next_new, P.IDENTITY
                next_new += 1
            else:
                dest, code = dests[j], perms[j]
                j += 1
                if dest >= n or code >= 24:
                    raise IsoSigError("join destination out of range")
                p = code
            g = P.apply(p, f)
            if glued[dest][g] or (dest == s and g == f):
                raise IsoSigError("join onto an already glued facet")
            table[offset + s][f] = (offset + dest, p)
            table[offset + dest][g] = (offset + s, P.inverse(p))
            glued[s][f] = glued[dest][g] = True
        facet += 1
    return n


def decode_iso_sig(sig, name=""):
    """Decode an isomorphism signature into a :class:`Triangulation`."""
    sig = sig.strip()
    if not sig:
        raise IsoSigError("empty isomorphism signature")
    reader = _Reader(sig)
    table = []
    while not reader.done():
        _decode_component(reader, len(table), table)
    return Triangulation(tuple(tuple(r) for r in table), name=name or sig)
