# python 2 backwards compatibility
from __future__ import print_function
from builtins import super


class PottsError(Exception):
    """
    Base class for every error raised by this package.
    """


class ValidationError(PottsError, ValueError):
    """
    Raised when an input violates a documented precondition (bad table, rejected region, unknown config key...).
    """


class ParseError(ValidationError):
    """
    Raised when a text input cannot be parsed.  ``line_number`` is 1-based, or ``None`` for whole-input errors.
    """

    def __init__(self, message, line_number=None):
        if line_number is not None:
            message = "line {}: {}".format(line_number, message)
        super().__init__(message)
        self.line_number = line_number


class CapExceededError(ValidationError):
    """
    Raised when an exhaustive computation would exceed a configured size cap.
    """

    def __init__(self, what, required, cap):
        super().__init__("{} requires {} but the configured cap is {}".format(what, required, cap))
        self.required = required
        self.cap = cap


class MergeError(ValidationError):
    """
    Raised when two polygon tables disagree on shared lengths.
    """

    def __init__(self, mismatched):
        self.mismatched = sorted(mismatched)
        super().__init__("tables disagree at L = {}".format(", ".join(str(l) for l in self.mismatched)))


class NonConvergentError(ValidationError):
    """
    Raised when a geometric series in a bound does not converge.
    """

    def __init__(self, name, ratio):
        super().__init__("{} = {} is not < 1; the bound does not converge".format(name, ratio))
        self.ratio = ratio


class ZeroProbabilityError(ValidationError):
    """
    Raised when conditioning on an event of probability zero.
    """


class InvariantViolation(PottsError, AssertionError):
    """
    Raised when an internal invariant is broken.  This signals a bug or a hand-built invalid input.
    """


class AcceptanceFailure(PottsError):
    """
    Raised by the verification suite when at least one check fails.
    """

    def __init__(self, failed):
        self.failed = list(failed)
        super().__init__("{} check(s) failed: {}".format(len(self.failed), ", ".join(self.failed)))
