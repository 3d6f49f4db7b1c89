# python 2 backwards compatibility
from __future__ import print_function
from builtins import super

import logging
import os
import sys
from logging.config import dictConfig

from .utils import parse_boolean

DETAILED_FORMAT = '%(asctime)s - %(levelname)-7s - %(name)s:%(lineno)d - %(message)s'


class InfoFilter(logging.Filter):
    """
    Passes records at or below ``threshold`` (``below=True``) or strictly above it (``below=False``).
    """

    def __init__(self, below, threshold=logging.INFO):
        super(InfoFilter, self).__init__()
        self.below = below
        self.threshold = threshold

    def filter(self, record):
        return (record.levelno <= self.threshold) == self.below


def logging_config(payload_stream='ext://sys.stdout', level='INFO'):
    """
    The dictConfig for pottsaf: records up to INFO go to ``payload_stream``, WARNING and above to stderr.

    :param payload_stream: where low-severity records go; the CLI passes stderr so stdout carries only JSON or CSV
    :param level: level of the ``pottsaf`` logger; ``PottsAF(config={'verbose': True})`` lowers it to DEBUG
    """

    def handler(stream, below, handler_level):
        return {
            'class': 'logging.StreamHandler',
            'level': handler_level,
            'formatter': 'detailed',
            'filters': ['low' if below else 'high'],
            'stream': stream,
        }

    config = {
        'version': 1,
        'disable_existing_loggers': False,
        'filters': {
            'low': {'()': InfoFilter, 'below': True},
            'high': {'()': InfoFilter, 'below': False},
        },
        'formatters': {
            'detailed': {'class': 'logging.Formatter', 'format': DETAILED_FORMAT},
        },
        'handlers': {
            'console': handler(payload_stream, True, 'DEBUG'),
            'error_console': handler('ext://sys.stderr', False, 'WARNING'),
        },
        'loggers': {
            'pottsaf': {'level': level},
        },
        'root': {
            'level': 'INFO',
            'handlers': ['console', 'error_console'],
        },
    }
    return config


def _log_uncaught(exc_type, exc_value, exc_traceback):
    if issubclass(exc_type, KeyboardInterrupt):
        sys.__excepthook__(exc_type, exc_value, exc_traceback)
        return
    logging.getLogger("error").error("Uncaught exception", exc_info=(exc_type, exc_value, exc_traceback))


def configure_logging(stdout_free=False, level=None):
    """
    Install :func:`logging_config` and log uncaught exceptions to the ``error`` logger.  Does nothing when the
    environment variable DISABLE_POTTSAF_LOGGING is true.

    :param stdout_free: route INFO records to stderr as well (CLI use)
    :param level: level override for the ``pottsaf`` logger, e.g. ``'DEBUG'``
    """

    if parse_boolean(os.environ.get('DISABLE_POTTSAF_LOGGING')):
        return

    stream = 'ext://sys.stderr' if stdout_free else 'ext://sys.stdout'
    dictConfig(logging_config(stream, level or 'INFO'))
    sys.excepthook = _log_uncaught
