# python 2 backwards compatibility
from __future__ import print_function

# external imports
import numpy as np


class UnionFind(object):
    """
    Disjoint sets over ``0..size-1`` with path compression and union by size.

    Used for the open-edge clusters of the WSK update and for ``eta`` percolation to the boundary.
    """

    def __init__(self, size):
        self.size = size
        # initially all elements disconnected
        self.parents = list(range(size))
        self.sizes = [1] * size
        self.num_components = size

    def find(self, elem):
        root = elem
        while root != self.parents[root]:
            root = self.parents[root]

        # point the whole path at the root
        while elem != root:
            self.parents[elem], elem = root, self.parents[elem]

        return root

    def union(self, a, b):
        ra = self.find(a)
        rb = self.find(b)
        if ra == rb:
            return ra

        if self.sizes[ra] < self.sizes[rb]:
            ra, rb = rb, ra
        self.parents[rb] = ra
        self.sizes[ra] += self.sizes[rb]
        self.num_components -= 1
        return ra

    def connected(self, a, b):
        return self.find(a) == self.find(b)

    def labels(self):
        """Root of every element, as an ``int64`` array."""
        return np.array([self.find(i) for i in range(self.size)], dtype=np.int64)

    def components(self):
        groups = {}
        for i in range(self.size):
            groups.setdefault(self.find(i), []).append(i)
        return list(groups.values())
