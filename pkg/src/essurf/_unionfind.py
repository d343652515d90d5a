"""Small union-find structures used by skeleton and region computations."""


class UnionFind:
    def __init__(self, items=()):
        self._parent = {}
        for x in items:
            self._parent[x] = x

    def add(self, x):
        self._parent.setdefault(x, x)

    def find(self, x):
        parent = self._parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self._parent[rb] = ra
        return True

    def __iter__(self):
        return iter(self._parent)

    def groups(self):
        out = {}
        for x in self._parent:
            out.setdefault(self.find(x), []).append(x)
        return list(out.values())


class ParityUnionFind:
    """Union-find tracking a Z/2 label relative to the root.

    ``union(a, b, d)`` records ``label(a) + label(b) = d``; it returns False
    if that contradicts what is already known.
    """

    def __init__(self, items=()):
        self._parent = {}
        self._parity = {}
        for x in items:
            self._parent[x] = x
            self._parity[x] = 0

    def add(self, x):
        if x not in self._parent:
            self._parent[x] = x
            self._parity[x] = 0

    def find(self, x):
        path = []
        while self._parent[x] != x:
            path.append(x)
            x = self._parent[x]
        root = x
        acc = 0
        for y in reversed(path):
            acc ^= self._parity[y]
            self._parity[y] = acc
            self._parent[y] = root
        return root, (self._parity[path[0]] if path else 0)

    def union(self, a, b, d=0):
        ra, pa = self.find(a)
        rb, pb = self.find(b)
        if ra == rb:
            return (pa ^ pb) == d
        self._parent[rb] = ra
        self._parity[rb] = pa ^ pb ^ d
        return True

    def __iter__(self):
        return iter(self._parent)
