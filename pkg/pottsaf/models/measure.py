# python 2 backwards compatibility
from __future__ import print_function
from builtins import super

# package imports
from .base import ModelBase
from .enum import EventKind
from ..errors import ValidationError


class GibbsParams(ModelBase):
    """
    Parameters of a finite-volume Gibbs measure.  The boundary color is always 1; the other boundary colors follow by
    relabeling.

    :ivar beta: the :class:`Beta`
    :ivar precision_bits: working precision for weights that are not exact
    """

    boundary_color = 1

    def __init__(self, beta, precision_bits=128):
        self.beta = beta
        self.precision_bits = precision_bits

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'beta': self.beta.label(),
            'boundary_color': self.boundary_color,
            'precision_bits': None if self.beta.is_exact else self.precision_bits
        }


class Event(ModelBase):
    """
    An event on spin configurations.

    Build events with the class methods rather than the constructor:

    ========================  =====================================================
    Constructor             Event
    ========================  =====================================================
    ``Event.J_k(k, sites)``   every site of ``sites`` has color ``k``
    ``Event.J(sites)``        the sites of ``sites`` share one color
    ``Event.improper(u, v)``  the edge ``{u, v}`` is monochromatic
    ``Event.color_of(v, k)``  ``sigma_v == k``
    ``Event.custom(f)``       ``f(colors, column)`` returns a boolean array
    ``Event.all_of(*es)``     intersection of events
    ========================  =====================================================
    """

    def __init__(self, kind, color=None, sites=None, predicate=None, parts=None, name=None):
        self.kind = kind
        self.color = color
        self.sites = tuple(sorted(sites)) if sites is not None else None
        self.predicate = predicate
        self.parts = list(parts) if parts is not None else None
        self.name = name

    @classmethod
    def J_k(cls, k, sites):
        if k not in (1, 2, 3):
            raise ValidationError("color must be 1, 2 or 3, got {}".format(k))
        if not sites:
            raise ValidationError("J events need a nonempty site set")
        return cls(EventKind.J_K, color=k, sites=sites)

    @classmethod
    def J(cls, sites):
        if not sites:
            raise ValidationError("J events need a nonempty site set")
        return cls(EventKind.J_ANY, sites=sites)

    @classmethod
    def improper(cls, u, v):
        return cls(EventKind.EDGE_IMPROPER, sites=(u, v))

    @classmethod
    def color_of(cls, v, k):
        if k not in (1, 2, 3):
            raise ValidationError("color must be 1, 2 or 3, got {}".format(k))
        return cls(EventKind.VERTEX_COLOR, color=k, sites=(v,))

    @classmethod
    def custom(cls, predicate, name='custom'):
        return cls(EventKind.CUSTOM, predicate=predicate, name=name)

    @classmethod
    def all_of(cls, *events):
        if not events:
            raise ValidationError("an intersection needs at least one event")
        return cls(EventKind.ALL_OF, parts=events)

    def label(self):
        if self.kind == EventKind.J_K:
            return "J_{}{}".format(self.color, list(self.sites))
        if self.kind == EventKind.J_ANY:
            return "J{}".format(list(self.sites))
        if self.kind == EventKind.EDGE_IMPROPER:
            return "improper{}".format(list(self.sites))
        if self.kind == EventKind.VERTEX_COLOR:
            return "sigma_{}={}".format(self.sites[0], self.color)
        if self.kind == EventKind.ALL_OF:
            return " & ".join(part.label() for part in self.parts)
        return self.name or 'custom'

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'kind': self.kind,
            'color': self.color,
            'sites': list(self.sites) if self.sites is not None else None,
            'parts': [part.to_dict(remove_nones=True) for part in self.parts] if self.parts is not None else None,
            'label': self.label()
        }

    @classmethod
    def from_dict(cls, d):
        kind = EventKind.parse(d.get('kind'))
        if kind == EventKind.J_K:
            return cls.J_k(int(d['color']), d['sites'])
        if kind == EventKind.J_ANY:
            return cls.J(d['sites'])
        if kind == EventKind.EDGE_IMPROPER:
            u, v = d['sites']
            return cls.improper(u, v)
        if kind == EventKind.VERTEX_COLOR:
            return cls.color_of(d['sites'][0], int(d['color']))
        if kind == EventKind.ALL_OF:
            return cls.all_of(*[cls.from_dict(part) for part in d['parts']])
        raise ValidationError("custom events cannot be read from a document")


class ExactMeasure(ModelBase):
    """
    The Gibbs measure of a region with boundary color 1, stored as one energy per configuration.

    Configuration ``i`` colors ``sites[j]`` with ``(i // 3**j) % 3 + 1``.  ``level_weights[h]`` is the weight of a
    configuration of energy ``h``: an exact ``Fraction`` when the Boltzmann factor is exact (integer ground-state
    counts at ``beta = inf``), else an mpmath real.

    :ivar region: the :class:`Region`
    :ivar params: the :class:`GibbsParams`
    :ivar sites: ``Lambda`` in sorted id order
    :ivar energies: numpy ``int16`` array of length ``3**len(sites)``
    :ivar level_counts: number of configurations per energy level
    :ivar level_weights: weight per energy level
    :ivar partition_function: ``Z``
    """

    def __init__(self, region, params, energies, level_counts, level_weights, partition_function):
        self.region = region
        self.params = params
        self.sites = region.sites
        self.column = {v: j for j, v in enumerate(self.sites)}
        self.energies = energies
        self.level_counts = list(level_counts)
        self.level_weights = list(level_weights)
        self.partition_function = partition_function

    @property
    def beta(self):
        return self.params.beta

    @property
    def n_configurations(self):
        return len(self.energies)

    @property
    def ground_state_count(self):
        return self.level_counts[0] if self.level_counts else 0

    @property
    def is_exact(self):
        return self.params.beta.is_exact

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'params': self.params,
            'sites': len(self.sites),
            'configurations': self.n_configurations,
            'ground_states': str(self.ground_state_count),
            'level_counts': [str(c) for c in self.level_counts],
            'partition_function': self.partition_function
        }


class SplitMeasure(ModelBase):
    """
    The Gibbs measure of a region with boundary color 1, stored by the colorings of its ``V0`` sites.  Every edge
    joins ``V0`` to ``V1``, so given a ``V0`` coloring the ``V1`` sites are independent and each one is summed out on
    its own.

    :ivar region: the :class:`Region`
    :ivar params: the :class:`GibbsParams`
    :ivar sites: ``Lambda`` in sorted id order
    :ivar v0_sites: the enumerated ``V0`` sites
    :ivar rows: one dict per ``V0`` coloring, from every ``V0`` vertex of the closure to its color
    :ivar color_weights: per row, a dict from each ``V1`` site to the weights of its colors 1, 2 and 3
    :ivar row_weights: per row, the total weight of the configurations extending it
    :ivar partition_function: ``Z``
    """

    def __init__(self, region, params, rows, color_weights, row_weights, partition_function):
        self.region = region
        self.params = params
        self.sites = region.sites
        self.v0_sites = tuple(region.v0_sites)
        self.rows = rows
        self.color_weights = color_weights
        self.row_weights = row_weights
        self.partition_function = partition_function

    @property
    def beta(self):
        return self.params.beta

    @property
    def n_configurations(self):
        return len(self.rows)

    @property
    def is_exact(self):
        return self.params.beta.is_exact

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'params': self.params,
            'sites': len(self.sites),
            'v0_colorings': self.n_configurations,
            'partition_function': self.partition_function
        }
