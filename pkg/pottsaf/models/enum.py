import logging

from ..errors import ValidationError

logger = logging.getLogger(__name__)


class Enum(object):

    def __new__(cls, *args, **kwargs):
        raise Exception("Enums cannot be instantiated.")

    @classmethod
    def values(cls):
        return [getattr(cls, attr) for attr in dir(cls) if not callable(getattr(cls, attr)) and not attr.startswith("__")]

    @classmethod
    def from_string(cls, string):
        """
        Simply logs a warning if the desired enum value is not found.

        :param string:
        :return:
        """

        # find enum value
        for attr in dir(cls):
            value = getattr(cls, attr)
            if value == string:
                return value

        # if not found, log warning and return the value passed in
        logger.warning("{} is not a valid enum value for {}.".format(string, cls.__name__))
        return string

    @classmethod
    def parse(cls, string):
        """
        Strict variant of :meth:`from_string` for user input.

        :raises ValidationError: if ``string`` is not one of :meth:`values`
        """

        if string in cls.values():
            return string
        raise ValidationError("{} is not one of {} for {}".format(string, sorted(cls.values()), cls.__name__))


class Sublattice(Enum):

    V0 = 0
    V1 = 1


class LatticeKind(Enum):

    DICED = "diced"
    SCHLAFLI = "schlafli"


class WeightForm(Enum):

    WEAK = "weak"
    STRONG = "strong"


class Provenance(Enum):

    ENUMERATED = "enumerated"
    INGESTED = "ingested"
    MERGED = "merged"


class SeriesFormat(Enum):

    CANONICAL = "canonical"
    MOMENT_SERIES = "moment-series"


class EventKind(Enum):

    J_K = "J_k"
    J_ANY = "J"
    EDGE_IMPROPER = "edge_improper"
    VERTEX_COLOR = "vertex_color"
    CUSTOM = "custom"
    ALL_OF = "and"


class VerifyLevel(Enum):

    QUICK = "quick"
    DESK = "desk"
