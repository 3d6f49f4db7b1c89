# python 2 backwards compatibility
from __future__ import print_function
from builtins import super

# external imports
import logging

# package imports
from .base import ModelBase
from ..errors import ValidationError

logger = logging.getLogger(__name__)

LATTICE_KEYS = frozenset(['type', 'radius', 'p', 'generations'])
SCHEDULE_KEYS = frozenset(['sweeps', 'thermalization', 'metropolis_per_wsk', 'wsk', 'seed', 'measure_every'])
CONSTANT_KEYS = frozenset(['C', 'constant_c', 'alpha_squared', 'beta0', 'precision', 'precision_bits',
                           'configuration_cap', 'max_configurations', 'contour_cap', 'es_edge_cap',
                           'polygon_length_guard', 'path_length_guard', 'schlafli_generation_cap'])
TOP_LEVEL_KEYS = frozenset(['command', 'lattice', 'region', 'beta', 'betas', 'table', 'tables', 'format', 'form',
                            'tail_from', 'lmax', 'nmax', 'constants', 'seed', 'output', 'schedule', 'observables',
                            'chains', 'threads', 'level', 'delta1', 'delta0', 'beta0', 'events', 'm0'])


def _reject_unknown(d, allowed, where):
    unknown = set(d) - allowed
    if unknown:
        raise ValidationError("unknown {} keys: {}".format(where, ", ".join(sorted(unknown))))


class RunConfig(ModelBase):
    """
    A run configuration document, as passed with ``--config``.  Every key is optional; command-line flags override
    document values.  Unknown keys are rejected at every level.

    Example::

        {"command": "simulate run",
         "lattice": {"type": "diced", "radius": 3},
         "region": "star",
         "beta": "2",
         "schedule": {"sweeps": 20000, "thermalization": 1000},
         "observables": ["color:0:1"],
         "seed": 7}
    """

    def __init__(self, **fields):
        _reject_unknown(fields, TOP_LEVEL_KEYS, 'config')
        lattice = fields.get('lattice') or {}
        schedule = fields.get('schedule') or {}
        constants = fields.get('constants') or {}
        for value, allowed, where in ((lattice, LATTICE_KEYS, 'lattice'),
                                      (schedule, SCHEDULE_KEYS, 'schedule'),
                                      (constants, CONSTANT_KEYS, 'constants')):
            if not isinstance(value, dict):
                raise ValidationError("'{}' must be a mapping".format(where))
            _reject_unknown(value, allowed, where)
        self.fields = dict(fields)

    def get(self, key, default=None):
        value = self.fields.get(key)
        return default if value is None else value

    @property
    def lattice(self):
        return self.fields.get('lattice') or {}

    @property
    def schedule(self):
        return self.fields.get('schedule') or {}

    @property
    def constants(self):
        return self.fields.get('constants') or {}

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return dict(self.fields)

    @classmethod
    def from_dict(cls, d):
        if d is None:
            return cls()
        if not isinstance(d, dict):
            raise ValidationError("a run configuration must be a mapping, got {}".format(type(d).__name__))
        return cls(**d)
