# python 2 backwards compatibility
from __future__ import print_function
from builtins import super

# external imports
import networkx as nx

# package imports
from .base import ModelBase
from .enum import Sublattice


class Quadrangulation(ModelBase):
    """
    A finite patch of a bipartite plane quadrangulation ``G``, together with its sublattice graphs ``G0`` (a
    triangulation on ``V0``) and ``G1`` (its dual on ``V1``).

    Vertex ids are ``0..n-1``; all ``V0`` ids precede all ``V1`` ids.  Edge lists hold sorted id pairs and are sorted.
    ``dual_of_g0[i]`` is the index in ``edges_g1`` of the edge crossing ``edges_g0[i]``.

    :ivar kind: ``"diced"`` or ``"schlafli"``
    :ivar p: degree of the triangulation (6 for the diced lattice)
    :ivar sublattice: per-vertex :class:`Sublattice` value
    :ivar labels: per-vertex hashable label (axial coordinates for the diced lattice)
    :ivar coords: per-vertex ``(x, y)``, rendering only
    :ivar interior: per-vertex flag, true when the full neighborhood of the vertex lies in the patch
    :ivar origin: the designated ``V0`` vertex
    """

    def __init__(self, kind, p, sublattice, labels, coords, edges_g, edges_g0, edges_g1, dual_of_g0, interior,
                 origin=0, extent=None):
        self.kind = kind
        self.p = p
        self.sublattice = list(sublattice)
        self.labels = list(labels)
        self.coords = list(coords)
        self.edges_g = list(edges_g)
        self.edges_g0 = list(edges_g0)
        self.edges_g1 = list(edges_g1)
        self.dual_of_g0 = list(dual_of_g0)
        self.interior = list(interior)
        self.origin = origin
        self.extent = extent
        self._cache = {}

    def _cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    @property
    def n_vertices(self):
        return len(self.sublattice)

    @property
    def v0_ids(self):
        return self._cached('v0', lambda: [v for v, s in enumerate(self.sublattice) if s == Sublattice.V0])

    @property
    def v1_ids(self):
        return self._cached('v1', lambda: [v for v, s in enumerate(self.sublattice) if s == Sublattice.V1])

    def is_v0(self, v):
        return self.sublattice[v] == Sublattice.V0

    def _adjacency(self, edges):
        adj = [[] for _ in range(self.n_vertices)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        return [tuple(sorted(a)) for a in adj]

    @property
    def neighbors(self):
        """Adjacency lists of ``G``."""
        return self._cached('adj', lambda: self._adjacency(self.edges_g))

    @property
    def g0_neighbors(self):
        return self._cached('adj0', lambda: self._adjacency(self.edges_g0))

    @property
    def g1_neighbors(self):
        return self._cached('adj1', lambda: self._adjacency(self.edges_g1))

    @property
    def g0_index(self):
        return self._cached('idx0', lambda: {e: i for i, e in enumerate(self.edges_g0)})

    @property
    def g1_index(self):
        return self._cached('idx1', lambda: {e: i for i, e in enumerate(self.edges_g1)})

    @property
    def dual_of_g1(self):
        def build():
            inverse = [None] * len(self.edges_g1)
            for i, j in enumerate(self.dual_of_g0):
                inverse[j] = i
            return inverse
        return self._cached('dual1', build)

    @property
    def label_index(self):
        return self._cached('labels', lambda: {label: v for v, label in enumerate(self.labels)})

    def g0_edge_id(self, u, v):
        return self.g0_index[(u, v) if u < v else (v, u)]

    def g1_edge_id(self, u, v):
        return self.g1_index[(u, v) if u < v else (v, u)]

    def graph(self, which='G'):
        """
        A networkx view of ``G``, ``G0`` or ``G1`` with a ``sublattice`` node attribute.  Built once and cached; callers
        must not mutate it.
        """

        def build():
            edges = {'G': self.edges_g, 'G0': self.edges_g0, 'G1': self.edges_g1}[which]
            if which == 'G':
                nodes = range(self.n_vertices)
            elif which == 'G0':
                nodes = self.v0_ids
            else:
                nodes = self.v1_ids
            g = nx.Graph()
            g.add_nodes_from((v, {'sublattice': self.sublattice[v]}) for v in nodes)
            g.add_edges_from(edges)
            return g

        return self._cached('graph-' + which, build)

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'kind': self.kind,
            'p': self.p,
            'extent': self.extent,
            'origin': self.origin,
            'v0': len(self.v0_ids),
            'v1': len(self.v1_ids),
            'edges_g': len(self.edges_g),
            'edges_g0': len(self.edges_g0),
            'edges_g1': len(self.edges_g1),
            'interior_v0': sum(1 for v in self.v0_ids if self.interior[v]),
            'interior_v1': sum(1 for v in self.v1_ids if self.interior[v])
        }


class Region(ModelBase):
    """
    A finite simply connected set ``Lambda`` of vertices with external boundary contained in ``V0``.

    :ivar quad: the :class:`Quadrangulation` the region lives in
    :ivar sites: sorted tuple of the ids in ``Lambda``
    :ivar boundary: sorted tuple of the ids in the external boundary
    :ivar edges_lambda: sorted ``G`` edges with at least one endpoint in ``Lambda``
    :ivar seed: the ``V1`` seed the region was built from, if any
    """

    def __init__(self, quad, sites, boundary, edges_lambda, seed=None):
        self.quad = quad
        self.sites = tuple(sorted(sites))
        self.boundary = tuple(sorted(boundary))
        self.edges_lambda = list(edges_lambda)
        self.seed = tuple(sorted(seed)) if seed is not None else None
        self.site_set = frozenset(self.sites)
        self.boundary_set = frozenset(self.boundary)
        self._cache = {}

    @property
    def closure(self):
        return tuple(sorted(self.site_set | self.boundary_set))

    @property
    def v0_sites(self):
        return tuple(v for v in self.sites if self.quad.is_v0(v))

    @property
    def v1_sites(self):
        return tuple(v for v in self.sites if not self.quad.is_v0(v))

    @property
    def g0_edges(self):
        """
        Indices of ``G0`` edges with both endpoints in ``Lambda`` union its boundary.
        """

        if 'g0' not in self._cache:
            closure = self.site_set | self.boundary_set
            self._cache['g0'] = [i for i, (u, v) in enumerate(self.quad.edges_g0) if u in closure and v in closure]
        return self._cache['g0']

    @property
    def g1_edges(self):
        """
        Indices of ``G1`` edges with both endpoints in ``Lambda``.
        """

        if 'g1' not in self._cache:
            self._cache['g1'] = [i for i, (u, v) in enumerate(self.quad.edges_g1)
                                 if u in self.site_set and v in self.site_set]
        return self._cache['g1']

    def __len__(self):
        return len(self.sites)

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'sites': list(self.sites),
            'boundary': list(self.boundary),
            'v0_sites': len(self.v0_sites),
            'v1_sites': len(self.v1_sites),
            'edges_lambda': len(self.edges_lambda),
            'seed': list(self.seed) if self.seed is not None else None
        }
