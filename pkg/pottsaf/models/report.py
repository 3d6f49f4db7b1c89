# python 2 backwards compatibility
from __future__ import print_function
from builtins import super

# package imports
from .base import ModelBase


class CheckReport(ModelBase):
    """
    Outcome of a property check.

    :ivar name: what was checked
    :ivar passed: overall verdict
    :ivar checked: number of instances examined
    :ivar failures: list of failing instances (free-form, JSON-compatible)
    :ivar details: extra values (margins, measured constants...)
    """

    def __init__(self, name, passed, checked=0, failures=None, details=None):
        self.name = name
        self.passed = bool(passed)
        self.checked = checked
        self.failures = list(failures) if failures else []
        self.details = dict(details) if details else {}

    def __bool__(self):
        return self.passed

    __nonzero__ = __bool__

    def to_dict(self, remove_nones=False):
        if remove_nones:
            return super().to_dict(remove_nones=True)
        return {
            'name': self.name,
            'passed': self.passed,
            'checked': self.checked,
            'failures': self.failures[:20],
            'failure_count': len(self.failures),
            'details': self.details
        }

    @classmethod
    def from_dict(cls, d):
        return cls(name=d.get('name'),
                   passed=d.get('passed'),
                   checked=d.get('checked', 0),
                   failures=d.get('failures'),
                   details=d.get('details'))
