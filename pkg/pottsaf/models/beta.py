# python 2 backwards compatibility
from __future__ import print_function
from six import string_types

# external imports
import math
from fractions import Fraction

import mpmath

# package imports
from .base import ModelBase
from ..errors import ValidationError
from ..utils import dyadic_ceil, dyadic_floor, fraction_string, parse_rational

INFINITY_STRINGS = ('inf', 'infinity', '+inf', 'oo', u'∞')


class Beta(ModelBase):
    """
    An inverse temperature in ``[0, inf]``.

    Besides the value itself, a ``Beta`` may know the Boltzmann factor ``x = exp(-beta)`` exactly.  That happens for
    ``beta = 0`` (``x = 1``), ``beta = inf`` (``x = 0``) and for logarithms of rationals, written ``"ln:2"`` (meaning
    ``beta = ln 2``, so ``x = 1/2``).  Every other beta is handled through outward-rounded enclosures of ``x``.

    :ivar value: ``beta`` as an exact ``Fraction``, or ``None`` when it is infinite or a logarithm
    :ivar boltzmann: ``exp(-beta)`` as an exact ``Fraction`` when known, else ``None``
    :ivar log_of: ``r`` when ``beta = ln r``
    """

    def __init__(self, value=None, boltzmann=None, log_of=None):
        self.value = value
        self.boltzmann = boltzmann
        self.log_of = log_of

    @classmethod
    def parse(cls, value):
        """
        Build a ``Beta`` from user input.

        :param value: a ``Beta``, a number, ``float('inf')``, ``"inf"``, a decimal or rational string, or ``"ln:<r>"``
        :return: the ``Beta``
        :raises ValidationError: for negative or malformed values
        """

        if isinstance(value, Beta):
            return value

        if isinstance(value, float) and math.isinf(value):
            if value < 0:
                raise ValidationError("beta must be nonnegative, got {}".format(value))
            return cls.infinite()

        if isinstance(value, string_types):
            text = value.strip().lower()
            if text in INFINITY_STRINGS:
                return cls.infinite()
            if text.startswith('ln:') or text.startswith('log:'):
                r = parse_rational(text.split(':', 1)[1])
                if r < 1:
                    raise ValidationError("beta = ln({}) would be negative".format(r))
                if r == 1:
                    return cls(value=Fraction(0), boltzmann=Fraction(1))
                return cls(boltzmann=1 / r, log_of=r)

        beta = parse_rational(value)
        if beta < 0:
            raise ValidationError("beta must be nonnegative, got {}".format(value))
        if beta == 0:
            return cls(value=Fraction(0), boltzmann=Fraction(1))
        return cls(value=beta)

    @classmethod
    def infinite(cls):
        return cls(boltzmann=Fraction(0))

    @property
    def is_infinite(self):
        return self.value is None and self.log_of is None

    @property
    def is_exact(self):
        return self.boltzmann is not None

    def to_mpf(self):
        if self.is_infinite:
            return mpmath.inf
        if self.log_of is not None:
            return mpmath.log(mpmath.mpf(self.log_of.numerator) / self.log_of.denominator)
        return mpmath.mpf(self.value.numerator) / self.value.denominator

    def __float__(self):
        return float(self.to_mpf())

    def boltzmann_mpf(self, bits=128):
        """
        ``exp(-beta)`` as an mpmath real computed with ``bits`` of working precision.
        """

        with mpmath.workprec(bits):
            if self.boltzmann is not None:
                return mpmath.mpf(self.boltzmann.numerator) / self.boltzmann.denominator
            return mpmath.exp(-self.to_mpf())

    def boltzmann_interval(self, bits=128):
        """
        Dyadic rational enclosure ``lo <= exp(-beta) <= hi``.  Exact (``lo == hi``) when the factor is known exactly.

        :param bits: target precision; the exponential is evaluated with 32 guard bits and widened by ``2**-bits``
        """

        if self.boltzmann is not None:
            return self.boltzmann, self.boltzmann
        with mpmath.workprec(bits + 32):
            x = mpmath.exp(-self.to_mpf())
            center = _mpf_to_fraction(x)
        slack = Fraction(1, 1 << bits)
        lo = max(Fraction(0), dyadic_floor(center - slack, bits))
        hi = min(Fraction(1), dyadic_ceil(center + slack, bits))
        return lo, hi

    def label(self):
        if self.is_infinite:
            return 'inf'
        if self.log_of is not None:
            return 'ln:{}'.format(self.log_of)
        if self.value.denominator == 1:
            return str(self.value.numerator)
        return str(float(self.value))

    def __eq__(self, other):
        if not isinstance(other, Beta):
            return NotImplemented
        return (self.value, self.boltzmann, self.log_of) == (other.value, other.boltzmann, other.log_of)

    def __hash__(self):
        return hash((self.value, self.boltzmann, self.log_of))

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super(Beta, self).to_dict(remove_nones=True)
        return {
            'beta': self.label(),
            'boltzmann': fraction_string(self.boltzmann) if self.boltzmann is not None else None
        }

    @classmethod
    def from_dict(cls, d):
        return cls.parse(d.get('beta'))


def _mpf_to_fraction(x):
    """Exact rational value of a finite mpmath real."""
    mantissa, exponent = mpmath.mpf(x).man_exp
    mantissa = int(mantissa)
    if exponent >= 0:
        return Fraction(mantissa << exponent)
    return Fraction(mantissa, 1 << -exponent)
