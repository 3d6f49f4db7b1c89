# python 2 backwards compatibility
from __future__ import print_function, division

# external imports
import math

import numpy as np

# package imports
from .errors import ValidationError
from .models import Estimate

# minimum number of bins kept at the coarsest level
MIN_BINS = 8

# relative change between the two coarsest levels below which the error counts as converged
PLATEAU_TOLERANCE = 0.15


def bin_errors(samples, min_bins=MIN_BINS):
    """
    Standard error of the mean at every binning level.

    Level 0 is the raw series; each following level averages neighbouring pairs (dropping the first sample when the
    count is odd) until fewer than ``min_bins`` bins would remain.

    :param samples: one-dimensional series of measurements
    :return: ``float64`` array of errors, one per level
    """

    series = np.asarray(samples, dtype=np.float64).reshape(-1)
    if len(series) < 2:
        raise ValidationError("binning needs at least 2 samples, got {}".format(len(series)))

    levels = int(math.floor(math.log(len(series) / min_bins, 2))) + 1 if len(series) >= min_bins else 1
    errors = np.zeros(levels)
    errors[0] = np.std(series) / math.sqrt(len(series) - 1)
    for level in range(1, levels):
        if len(series) % 2:
            series = series[1:]
        series = (series[::2] + series[1::2]) / 2
        errors[level] = np.std(series) / math.sqrt(len(series) - 1)
    return errors


def converged(errors, tolerance=PLATEAU_TOLERANCE):
    """
    True when the two coarsest levels agree to ``tolerance``.  A series too short for two levels never converges.
    """

    if len(errors) < 2:
        return False
    if errors[-2] == 0:
        return errors[-1] == 0
    return abs(errors[-1] - errors[-2]) / errors[-2] <= tolerance


def autocorrelation_time(errors):
    """Integrated autocorrelation time in samples, ``((D_last / D_0)**2 - 1) / 2``."""
    if errors[0] == 0:
        return 0.0
    return 0.5 * ((errors[-1] / errors[0]) ** 2 - 1)


def estimate(samples, min_bins=MIN_BINS):
    """
    Binned :class:`Estimate` of a series: the mean, the largest error over binning levels, the number of bins at the
    coarsest level and the plateau flag.
    """

    series = np.asarray(samples, dtype=np.float64).reshape(-1)
    errors = bin_errors(series, min_bins=min_bins)
    bins = len(series) >> (len(errors) - 1)
    return Estimate(mean=float(series.mean()),
                    error=float(errors.max()),
                    bins=int(bins),
                    plateau=bool(converged(errors)),
                    samples=len(series))


def combine(estimates):
    """
    Merge estimates of the same observable from independent chains, weighting by sample count.
    """

    estimates = list(estimates)
    if not estimates:
        raise ValidationError("nothing to combine")
    if len(estimates) == 1:
        return estimates[0]

    total = sum(e.samples for e in estimates)
    mean = sum(e.mean * e.samples for e in estimates) / total
    error = math.sqrt(sum((e.error * e.samples) ** 2 for e in estimates)) / total
    return Estimate(mean=mean,
                    error=error,
                    bins=sum(e.bins for e in estimates),
                    plateau=all(e.plateau for e in estimates),
                    samples=total)
