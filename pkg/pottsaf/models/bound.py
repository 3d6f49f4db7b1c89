# python 2 backwards compatibility
from __future__ import print_function
from builtins import super

# package imports
from .base import ModelBase
from ..utils import decimal_string


class ContourWeights(ModelBase):
    """
    The contour weights ``p_beta`` and ``q_beta`` at one inverse temperature.

    When the Boltzmann factor is exact both weights are exact fractions and the intervals are degenerate.  Otherwise
    ``p`` and ``q`` are mpmath reals and ``[p_lo, p_hi]``, ``[q_lo, q_hi]`` are dyadic enclosures.

    :ivar beta: the :class:`Beta`
    :ivar p: ``p_beta``
    :ivar q: ``q_beta``
    """

    def __init__(self, beta, p, q, p_lo, p_hi, q_lo, q_hi, precision_bits=None):
        self.beta = beta
        self.p = p
        self.q = q
        self.p_lo = p_lo
        self.p_hi = p_hi
        self.q_lo = q_lo
        self.q_hi = q_hi
        self.precision_bits = precision_bits

    @property
    def is_exact(self):
        return self.p_lo == self.p_hi and self.q_lo == self.q_hi

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'beta': self.beta.label(),
            'exact': self.is_exact,
            'p': self.p,
            'q': self.q,
            'p_interval': [self.p_lo, self.p_hi],
            'q_interval': [self.q_lo, self.q_hi],
            'precision_bits': None if self.is_exact else self.precision_bits
        }


class BoundReport(ModelBase):
    """
    A rigorous Peierls bound on ``mu(sigma_v != 1)``.

    Every component is exact: ``prefix_sum`` is a ``Fraction``, ``tail_sum`` an :class:`ExactQuad`, and the total is
    enclosed in ``[total_lo, total_hi]``.  The magnetization bound is ``1 - 2 * total_hi``; when that is negative the
    report clamps it at 0 and sets ``vacuous``.
    """

    def __init__(self, prefix_sum, tail_sum, total_lo, total_hi, form, beta=None, max_L=None, tail_from=None,
                 extra_sum=None, ratio=None, total_exact=None, rigorous=True):
        self.prefix_sum = prefix_sum
        self.tail_sum = tail_sum
        self.total_lo = total_lo
        self.total_hi = total_hi
        self.form = form
        self.beta = beta
        self.max_L = max_L
        self.tail_from = tail_from
        self.extra_sum = extra_sum
        self.ratio = ratio
        self.total_exact = total_exact
        self.rigorous = rigorous

    @property
    def raw_magnetization_lower(self):
        return 1 - 2 * self.total_hi

    @property
    def magnetization_lower(self):
        return max(0, self.raw_magnetization_lower)

    @property
    def vacuous(self):
        return self.raw_magnetization_lower <= 0

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'form': self.form,
            'beta': self.beta.label() if self.beta is not None else None,
            'max_L': self.max_L,
            'tail_from': self.tail_from,
            'prefix_sum': self.prefix_sum,
            'prefix_sum_decimal': decimal_string(self.prefix_sum, 10, 'up'),
            'tail_sum': self.tail_sum.to_dict() if self.tail_sum is not None else None,
            'tail_sum_decimal': decimal_string(self.tail_sum.upper(), 10, 'up') if self.tail_sum is not None else None,
            'extra_sum': self.extra_sum,
            'ratio': self.ratio,
            'total': [self.total_lo, self.total_hi],
            'total_decimal': [decimal_string(self.total_lo, 10, 'down'), decimal_string(self.total_hi, 10, 'up')],
            'magnetization_lower': self.magnetization_lower,
            'magnetization_lower_decimal': decimal_string(self.magnetization_lower, 10, 'down'),
            'vacuous': self.vacuous,
            'rigorous': self.rigorous
        }
