# python 2 backwards compatibility
from __future__ import print_function
from builtins import object

# external imports
import logging

# package imports
from . import peierls
from .models import WeightForm

logger = logging.getLogger(__name__)


class BoundClient(object):

    def zero_temp_bound(self, table=None, form=WeightForm.WEAK, tail_from=None):
        """
        The zero-temperature Peierls bound of a table, or of the published prefix sums when ``table`` is ``None``.

        :return: a :class:`BoundReport`
        """

        if table is None:
            report = peierls.published_bound(form)
        else:
            report = peierls.zero_temp_bound(table, form, tail_from)
        logger.info("zero-temperature %s bound: magnetization >= %.6f", report.form,
                    float(report.magnetization_lower))
        return report

    def positive_temp_bound(self, table, beta, tail_from=None):
        """The positive-temperature bound with the configured ``C``, ``alpha^2`` and precision."""
        return peierls.positive_temp_bound(table, beta,
                                           constant_c=self.config['constant_c'],
                                           alpha_squared=self.config['alpha_squared'],
                                           tail_from=tail_from,
                                           precision_bits=self.config['precision_bits'])

    def tail_bound(self, L_start, p=None):
        if p is None:
            return peierls.tail_bound(L_start)
        return peierls.tail_bound(L_start, p)

    def v1_bound(self, m0_lower, beta):
        return peierls.v1_upper_bound(m0_lower, beta)

    def large_beta_profile(self, table, betas, tail_from=None):
        return peierls.large_beta_profile(table, betas,
                                          constant_c=self.config['constant_c'],
                                          alpha_squared=self.config['alpha_squared'],
                                          tail_from=tail_from,
                                          precision_bits=self.config['precision_bits'])
