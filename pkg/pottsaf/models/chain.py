# python 2 backwards compatibility
from __future__ import print_function
from builtins import super

# package imports
from .base import ModelBase
from ..errors import ValidationError


class Schedule(ModelBase):
    """
    A Monte Carlo schedule.  One sweep is one WSK cluster update (when ``wsk`` is set) followed by
    ``metropolis_per_wsk`` single-site sweeps; measurements start after ``thermalization`` sweeps and are taken every
    ``measure_every`` sweeps.
    """

    def __init__(self, sweeps, thermalization=0, metropolis_per_wsk=1, wsk=True, seed=0, measure_every=1):
        self.sweeps = int(sweeps)
        self.thermalization = int(thermalization)
        self.metropolis_per_wsk = int(metropolis_per_wsk)
        self.wsk = bool(wsk)
        self.seed = int(seed)
        self.measure_every = int(measure_every)
        self.validate()

    def validate(self):
        if self.sweeps <= 0:
            raise ValidationError("sweeps must be positive, got {}".format(self.sweeps))
        if self.thermalization < 0 or self.thermalization >= self.sweeps:
            raise ValidationError("thermalization ({}) must be in [0, sweeps = {})"
                                  .format(self.thermalization, self.sweeps))
        if self.metropolis_per_wsk < 0:
            raise ValidationError("metropolis_per_wsk must be nonnegative")
        if not self.wsk and self.metropolis_per_wsk == 0:
            raise ValidationError("a schedule needs WSK or Metropolis updates")
        if self.measure_every < 1:
            raise ValidationError("measure_every must be at least 1")

    @property
    def measurements(self):
        return len(range(self.thermalization, self.sweeps, self.measure_every))

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'sweeps': self.sweeps,
            'thermalization': self.thermalization,
            'metropolis_per_wsk': self.metropolis_per_wsk,
            'wsk': self.wsk,
            'seed': self.seed,
            'measure_every': self.measure_every
        }

    @classmethod
    def from_dict(cls, d):
        unknown = set(d) - {'sweeps', 'thermalization', 'metropolis_per_wsk', 'wsk', 'seed', 'measure_every'}
        if unknown:
            raise ValidationError("unknown schedule keys: {}".format(", ".join(sorted(unknown))))
        if 'sweeps' not in d:
            raise ValidationError("a schedule needs 'sweeps'")
        return cls(**d)


class ChainState(ModelBase):
    """
    Mutable state of one Markov chain.

    :ivar geometry: the precomputed index arrays of the region (see ``montecarlo.RegionArrays``)
    :ivar beta: the :class:`Beta`
    :ivar colors: numpy ``int8`` colors of ``Lambda`` followed by its boundary (entries stay 1) and one padding entry 0
    :ivar rng: numpy ``Generator``
    :ivar sweep_count: completed sweeps
    """

    def __init__(self, geometry, beta, colors, rng, seed=None, sweep_count=0):
        self.geometry = geometry
        self.beta = beta
        self.colors = colors
        self.rng = rng
        self.seed = seed
        self.sweep_count = sweep_count

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'beta': self.beta.label(),
            'seed': self.seed,
            'sweep_count': self.sweep_count,
            'sites': len(self.geometry.sites)
        }


class Estimate(ModelBase):

    def __init__(self, mean, error, bins, plateau, samples):
        self.mean = mean
        self.error = error
        self.bins = bins
        self.plateau = plateau
        self.samples = samples

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'mean': self.mean,
            'error': self.error,
            'bins': self.bins,
            'plateau': self.plateau,
            'samples': self.samples
        }


class EstimateReport(ModelBase):
    """
    Binned Monte Carlo estimates.

    :ivar estimates: ordered map from observable name to :class:`Estimate`
    :ivar assumptions: list of caveats attached to the run (e.g. assumed ergodicity at ``beta = inf``)
    :ivar series: per observable, one array of measurements per chain (not serialized)
    """

    def __init__(self, estimates, beta, schedule, chains=1, assumptions=None, region=None, series=None):
        self.estimates = estimates
        self.beta = beta
        self.schedule = schedule
        self.chains = chains
        self.assumptions = list(assumptions) if assumptions else []
        self.region = region
        self.series = series or {}

    def __getitem__(self, name):
        return self.estimates[name]

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'beta': self.beta.label(),
            'seed': self.schedule.seed,
            'schedule': self.schedule,
            'chains': self.chains,
            'estimates': {name: e.to_dict() for name, e in self.estimates.items()},
            'assumptions': self.assumptions,
            'region': self.region
        }
