# python 2 backwards compatibility
from __future__ import print_function
from builtins import object

# external imports
import logging

# package imports
from . import contour, gibbs_exact
from .models import Beta

logger = logging.getLogger(__name__)


class ContourClient(object):

    def contour_measure(self, region, beta):
        """The contour measure of ``region`` over every configuration with at most ``contour_cap`` dual edges."""
        return contour.contour_measure(region, beta, contour_cap=self.config['contour_cap'],
                                       precision_bits=self.config['precision_bits'])

    def contour_checks(self, region, beta=None):
        """
        At ``beta = inf`` the multiplicity check of the ground states; at finite ``beta`` the pushforward check.
        Both also run the Peierls inequality on the contour measure.

        :return: list of :class:`CheckReport`
        """

        beta = Beta.infinite() if beta is None else Beta.parse(beta)
        measure = gibbs_exact.enumerate_measure(region, beta,
                                                precision_bits=self.config['precision_bits'],
                                                configuration_cap=self.config['configuration_cap'],
                                                threads=self.config['threads'])
        nu = self.contour_measure(region, beta)
        if beta.is_infinite:
            reports = [contour.zero_temperature_multiplicity_check(measure, self.config['contour_cap'])]
        else:
            reports = [contour.pushforward_check(measure, nu, self.config['contour_cap'])]
        reports.append(contour.peierls_inequality_check(nu))
        for report in reports:
            logger.info("%s at beta=%s: %s", report.name, beta.label(), 'passed' if report.passed else 'FAILED')
        return reports

    def chi_statistics(self, region, max_faces=4):
        return contour.chi_check(contour.generate_contours(region, max_faces))
