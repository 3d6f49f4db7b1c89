# python 2 backwards compatibility
from __future__ import print_function
from six import string_types

# external imports
import logging
from fractions import Fraction
from numbers import Integral, Rational

# package imports
from .errors import ValidationError


def parse_boolean(value):
    """
    Coerce a value to boolean.

    :param value: the value, could be a string, boolean, or None
    :return: the value as coerced to a boolean
    """

    if value is None:
        return None

    if isinstance(value, bool):
        return value

    if isinstance(value, string_types):
        value = value.lower()
        if value == 'false':
            return False
        if value == 'true':
            return True

    raise ValueError("Could not convert value to boolean: {}".format(value))


def parse_rational(value):
    """
    Coerce a value to an exact ``Fraction``.

    Accepts integers, fractions, strings such as ``"3/7"``, ``"0.90301"`` or ``"1e-3"``, and floats (converted through
    their shortest decimal representation, so ``0.1`` becomes ``1/10``).

    :param value: the value
    :return: the value as a ``Fraction``
    """

    if isinstance(value, bool):
        raise ValidationError("Could not convert boolean to a rational: {}".format(value))

    if isinstance(value, Fraction):
        return value

    if isinstance(value, (Integral, Rational)):
        return Fraction(value)

    if isinstance(value, float):
        if value != value or value in (float('inf'), float('-inf')):
            raise ValidationError("Could not convert value to a rational: {}".format(value))
        return Fraction(repr(value))

    if isinstance(value, string_types):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass

    raise ValidationError("Could not convert value to a rational: {}".format(value))


def parse_beta(value):
    """
    Coerce a value to a :class:`Beta` (numbers, rational or decimal strings, ``"inf"`` and ``"ln:<r>"``).
    """

    from .models import Beta
    return Beta.parse(value)


def fraction_string(value):
    """
    Render an exact rational as ``"num/den"`` (integers keep the ``/1``).
    """

    value = Fraction(value)
    return "{}/{}".format(value.numerator, value.denominator)


def decimal_string(value, digits=10, direction='down'):
    """
    Render a rational as a decimal string with a fixed number of digits, rounding in a stated direction.

    :param value: a rational (anything ``Fraction`` accepts)
    :param digits: digits after the decimal point
    :param direction: ``'down'`` (toward -inf), ``'up'`` (toward +inf) or ``'nearest'``
    :return: the decimal string
    """

    value = Fraction(value)
    scaled = value * 10 ** digits
    if direction == 'down':
        n = scaled.numerator // scaled.denominator
    elif direction == 'up':
        n = -((-scaled.numerator) // scaled.denominator)
    elif direction == 'nearest':
        n = int(round(scaled))
    else:
        raise ValidationError("Unknown rounding direction: {}".format(direction))

    sign = '-' if n < 0 else ''
    n = abs(n)
    whole, frac = divmod(n, 10 ** digits)
    if digits == 0:
        return "{}{}".format(sign, whole)
    return "{}{}.{}".format(sign, whole, str(frac).zfill(digits))


def dyadic_floor(value, bits):
    """
    Largest multiple of ``2**-bits`` that is <= value.
    """

    value = Fraction(value)
    return Fraction((value.numerator << bits) // value.denominator, 1 << bits)


def dyadic_ceil(value, bits):
    """
    Smallest multiple of ``2**-bits`` that is >= value.
    """

    value = Fraction(value)
    return Fraction(-((-(value.numerator << bits)) // value.denominator), 1 << bits)


def get_logger(name=None):
    """
    Get a logger.
    :param name: The name of the logger.
    :return: The logger.
    """

    return logging.getLogger(name)


logger = logging.getLogger(__name__)
