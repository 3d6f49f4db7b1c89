# python 2 backwards compatibility
from __future__ import print_function
from builtins import object
from six import string_types

# external imports
import json
from fractions import Fraction

import mpmath

# package imports
from ..utils import fraction_string


def to_jsonable(value):
    """
    Convert a model field into plain JSON-compatible data.  Exact rationals become ``"num/den"`` strings, high-precision
    reals become decimal strings with 20 significant digits, and nested models/containers are converted recursively.
    """

    if value is None or isinstance(value, (bool, string_types)):
        return value
    if isinstance(value, Fraction):
        return fraction_string(value)
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        return value
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, 20)
    if hasattr(value, 'to_dict'):
        return to_jsonable(value.to_dict(remove_nones=True))
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [to_jsonable(v) for v in items]
    if getattr(value, 'ndim', 0):
        return to_jsonable(value.tolist())
    if hasattr(value, 'item'):
        # numpy scalars
        return value.item()
    raise TypeError("Cannot serialize value of type {}".format(type(value).__name__))


class ModelBase(object):
    """
    This is the base class for all models.
    """

    def to_dict(self, remove_nones=False):
        """
        Creates a dictionary representation of the object.

        :param remove_nones: Whether ``None`` values should be filtered out of the dictionary.  Defaults to ``False``.
        :return: The dictionary representation.
        """

        if remove_nones:
            return {k: v for k, v in self.to_dict().items() if v is not None}
        else:
            raise NotImplementedError()

    @classmethod
    def from_dict(cls, d):
        """
        Creates an instance of the class from a dictionary representation.
        :return: The instance.
        """
        raise NotImplementedError()

    def to_json(self, **kwargs):
        """
        :return: A json string of the object, with exact values rendered as strings.
        """

        return json.dumps(to_jsonable(self.to_dict(remove_nones=True)), sort_keys=True, **kwargs)

    def __str__(self):
        """
        :return: A json representation of the object.
        """
        return str(to_jsonable(self.to_dict(remove_nones=True)))

    def __repr__(self):
        """
        :return: The string representation of the object.
        """

        return str(self)
