# python 2 backwards compatibility
from __future__ import print_function
from builtins import object

# external imports
import math
from fractions import Fraction
from functools import total_ordering
from numbers import Rational

import mpmath

# package imports
from .errors import ValidationError
from .utils import fraction_string, parse_rational


def sqrt2_bounds(bits):
    """
    Dyadic rationals ``lo < sqrt(2) < hi`` with ``hi - lo = 2**-bits``.
    """

    lo = math.isqrt(2 << (2 * bits))
    return Fraction(lo, 1 << bits), Fraction(lo + 1, 1 << bits)


@total_ordering
class ExactQuad(object):
    """
    An element ``a + b*sqrt(2)`` of the field Q[sqrt 2] with rational ``a`` and ``b``.

    Field operations are exact, and so are sign and comparisons (with rationals or other elements).
    """

    __slots__ = ('_a', '_b')

    def __init__(self, a=0, b=0):
        self._a = Fraction(a)
        self._b = Fraction(b)

    @property
    def a(self):
        return self._a

    @property
    def b(self):
        return self._b

    @classmethod
    def coerce(cls, other):
        if isinstance(other, ExactQuad):
            return other
        if isinstance(other, Rational):
            return cls(other, 0)
        return None

    def __repr__(self):
        return "ExactQuad({}, {})".format(self._a, self._b)

    def __str__(self):
        sign = '+' if self._b >= 0 else '-'
        return "{} {} {}*sqrt2".format(self._a, sign, abs(self._b))

    def __hash__(self):
        return hash((self._a, self._b))

    def __eq__(self, other):
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return self._a == other.a and self._b == other.b

    def __ne__(self, other):
        result = self.__eq__(other)
        if result is NotImplemented:
            return result
        return not result

    def __lt__(self, other):
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return (self - other).sign() < 0

    def __add__(self, other):
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return ExactQuad(self._a + other.a, self._b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return ExactQuad(-self._a, -self._b)

    def __sub__(self, other):
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return ExactQuad(self._a - other.a, self._b - other.b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return ExactQuad(self._a * other.a + 2 * self._b * other.b,
                         self._a * other.b + self._b * other.a)

    __rmul__ = __mul__

    def conjugate(self):
        """The Galois conjugate ``a - b*sqrt(2)``."""
        return ExactQuad(self._a, -self._b)

    def norm(self):
        """``a^2 - 2 b^2``, a rational."""
        return self._a * self._a - 2 * self._b * self._b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("ExactQuad division by zero")
        return ExactQuad(self._a / n, -self._b / n)

    def __truediv__(self, other):
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self.coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    __div__ = __truediv__
    __rdiv__ = __rtruediv__

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ExactQuad(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def sign(self):
        """
        Exact sign: -1, 0 or 1.
        """

        a, b = self._a, self._b
        if a >= 0 and b >= 0:
            return 0 if (a == 0 and b == 0) else 1
        if a <= 0 and b <= 0:
            return -1
        # opposite signs: compare a^2 with 2 b^2
        if a > 0:
            return 1 if a * a > 2 * b * b else -1
        return 1 if 2 * b * b > a * a else -1

    def is_rational(self):
        return self._b == 0

    def bounds(self, bits=200):
        """
        Rational enclosure ``lo <= value <= hi`` of width at most ``|b| * 2**-bits``.
        """

        if self._b == 0:
            return self._a, self._a
        s_lo, s_hi = sqrt2_bounds(bits)
        x, y = self._a + self._b * s_lo, self._a + self._b * s_hi
        return (x, y) if x <= y else (y, x)

    def upper(self, bits=200):
        return self.bounds(bits)[1]

    def lower(self, bits=200):
        return self.bounds(bits)[0]

    def to_mpf(self):
        return mpmath.mpf(self._a.numerator) / self._a.denominator \
            + mpmath.mpf(self._b.numerator) / self._b.denominator * mpmath.sqrt(2)

    def __float__(self):
        lo, hi = self.bounds(64)
        return float((lo + hi) / 2)

    def to_dict(self, remove_nones=False):
        return {'a': fraction_string(self._a), 'b': fraction_string(self._b)}

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(parse_rational(d['a']), parse_rational(d['b']))
        except KeyError as e:
            raise ValidationError("ExactQuad dictionary is missing key {}".format(e))


SQRT2 = ExactQuad(0, 1)
ALPHA_SQUARED = ExactQuad(2, 1)
