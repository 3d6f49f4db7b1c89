# python 2 backwards compatibility
from __future__ import print_function
from builtins import super

# package imports
from .base import ModelBase
from .enum import Provenance


class PolygonTable(ModelBase):
    """
    Counts of hexagonal-lattice polygons by length.

    :ivar entries: map from even ``L >= 6`` to ``q_L``, the number of circuits of length ``L`` surrounding a fixed
        triangular vertex
    :ivar p_entries: optional map ``L -> p_L``, the number of circuits modulo translation
    :ivar provenance: a :class:`Provenance` value
    """

    def __init__(self, entries, p_entries=None, provenance=Provenance.ENUMERATED):
        self.entries = {int(k): int(v) for k, v in entries.items()}
        self.p_entries = {int(k): int(v) for k, v in p_entries.items()} if p_entries is not None else None
        self.provenance = provenance

    @property
    def max_L(self):
        return max(self.entries) if self.entries else None

    def lengths(self):
        return sorted(self.entries)

    def __eq__(self, other):
        if not isinstance(other, PolygonTable):
            return NotImplemented
        return self.entries == other.entries and self.p_entries == other.p_entries

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'provenance': self.provenance,
            'max_L': self.max_L,
            'entries': {str(k): str(v) for k, v in sorted(self.entries.items())},
            'p_entries': {str(k): str(v) for k, v in sorted(self.p_entries.items())}
            if self.p_entries is not None else None
        }

    @classmethod
    def from_dict(cls, d):
        return cls(entries=d.get('entries', {}),
                   p_entries=d.get('p_entries'),
                   provenance=Provenance.from_string(d.get('provenance', Provenance.INGESTED)))


class Polygon(ModelBase):
    """
    A simple circuit in the hexagonal lattice, stored in translation-friendly axial labels.

    :ivar edges: sorted tuple of sorted label pairs ``(('D', q, r), ('U', q, r))``
    :ivar interior: frozenset of axial ``(q, r)`` triangular vertices enclosed by the circuit
    """

    def __init__(self, edges, interior=None):
        self.edges = tuple(sorted(tuple(sorted(e)) for e in edges))
        self.interior = frozenset(interior) if interior is not None else None

    @property
    def length(self):
        return len(self.edges)

    def vertices(self):
        return sorted(set(v for e in self.edges for v in e))

    def translate(self, dq, dr):
        def move(label):
            return label[0], label[1] + dq, label[2] + dr

        interior = None
        if self.interior is not None:
            interior = [(q + dq, r + dr) for q, r in self.interior]
        return Polygon([(move(a), move(b)) for a, b in self.edges], interior)

    def __eq__(self, other):
        if not isinstance(other, Polygon):
            return NotImplemented
        return self.edges == other.edges

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __hash__(self):
        return hash(self.edges)

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'length': self.length,
            'edges': [[list(a), list(b)] for a, b in self.edges],
            'interior': sorted(list(v) for v in self.interior) if self.interior is not None else None
        }

    @classmethod
    def from_dict(cls, d):
        edges = [(tuple(a), tuple(b)) for a, b in d['edges']]
        interior = [tuple(v) for v in d['interior']] if d.get('interior') is not None else None
        return cls(edges, interior)


class PathCountTable(ModelBase):
    """
    Self-avoiding path counts on the hexagonal lattice.

    :ivar c_star: map ``n -> C_n*``, the number of self-avoiding paths of ``n`` edges with a given first directed edge
    :ivar start_edge: the directed ``G1`` edge used as first edge
    :ivar per_edge_max: optional map ``n -> max over interior start edges``, when computed
    """

    def __init__(self, c_star, start_edge=None, per_edge_max=None):
        self.c_star = {int(k): int(v) for k, v in c_star.items()}
        self.start_edge = start_edge
        self.per_edge_max = per_edge_max

    @property
    def n_max(self):
        return max(self.c_star) if self.c_star else 0

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'c_star': {str(k): str(v) for k, v in sorted(self.c_star.items())},
            'start_edge': list(self.start_edge) if self.start_edge is not None else None,
            'per_edge_max': {str(k): str(v) for k, v in sorted(self.per_edge_max.items())}
            if self.per_edge_max is not None else None
        }

    @classmethod
    def from_dict(cls, d):
        return cls(c_star=d['c_star'], start_edge=d.get('start_edge'), per_edge_max=d.get('per_edge_max'))
