# python 2 backwards compatibility
from __future__ import print_function
from builtins import super

# package imports
from .base import ModelBase


class Contour(ModelBase):
    """
    One contour: a connected bridgeless set of ``G1`` edges.

    :ivar edges: frozenset of ``G1`` edge indices
    :ivar length: ``|gamma|``
    :ivar t: half the number of degree-3 vertices
    :ivar chi: number of interior colorings compatible with a fixed exterior color
    :ivar interiors: list of frozensets of ``V0`` ids, the finite components cut out by the contour
    """

    def __init__(self, edges, t, chi, interiors, degrees=None):
        self.edges = frozenset(edges)
        self.t = t
        self.chi = chi
        self.interiors = [frozenset(c) for c in interiors]
        self.degrees = dict(degrees) if degrees is not None else None

    @property
    def length(self):
        return len(self.edges)

    @property
    def is_simple(self):
        return self.t == 0

    @property
    def interior(self):
        return frozenset().union(*self.interiors) if self.interiors else frozenset()

    def __eq__(self, other):
        if not isinstance(other, Contour):
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
            'edges': sorted(self.edges),
            'length': self.length,
            't': self.t,
            'chi': self.chi,
            'interior_sizes': [len(c) for c in self.interiors]
        }


class ContourSet(ModelBase):
    """
    The decomposition of an unsatisfied-edge set into contours.

    :ivar region: the :class:`Region`
    :ivar contours: list of :class:`Contour`, sorted by their least edge
    """

    def __init__(self, region, contours):
        self.region = region
        self.contours = sorted(contours, key=lambda c: min(c.edges))

    @property
    def key(self):
        """The union of all contour edges; two configurations have the same contours iff their keys are equal."""
        return frozenset().union(*[c.edges for c in self.contours]) if self.contours else frozenset()

    @property
    def total_length(self):
        return sum(c.length for c in self.contours)

    def __len__(self):
        return len(self.contours)

    def __iter__(self):
        return iter(self.contours)

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'count': len(self.contours),
            'total_length': self.total_length,
            'contours': [c.to_dict() for c in self.contours]
        }


class ContourMeasure(ModelBase):
    """
    A probability distribution over contour configurations of a region.

    :ivar region: the :class:`Region`
    :ivar beta: the :class:`Beta`
    :ivar configurations: map from configuration key (frozenset of ``G1`` edge indices) to :class:`ContourSet`
    :ivar weights: map from key to unnormalized weight
    :ivar partition_function: sum of the weights
    """

    def __init__(self, region, beta, configurations, weights, partition_function):
        self.region = region
        self.beta = beta
        self.configurations = dict(configurations)
        self.weights = dict(weights)
        self.partition_function = partition_function

    def probability(self, key):
        weight = self.weights.get(frozenset(key), 0)
        return weight / self.partition_function

    def probabilities(self):
        return {key: self.probability(key) for key in self.weights}

    def __len__(self):
        return len(self.weights)

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'beta': self.beta.label(),
            'support': len(self.weights),
            'partition_function': self.partition_function,
            'configurations': [dict(self.configurations[key].to_dict(), probability=self.probability(key))
                               for key in sorted(self.weights, key=lambda k: (len(k), sorted(k)))]
        }
