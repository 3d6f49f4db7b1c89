# python 2 backwards compatibility
from __future__ import print_function
from builtins import object

# external imports
import logging

# package imports
from . import gibbs_exact
from .models import Event

logger = logging.getLogger(__name__)


class ExactClient(object):

    def exact_measure(self, region, beta):
        """
        Enumerate the Gibbs measure of ``region`` with boundary color 1, within the configured configuration cap.

        :return: an :class:`ExactMeasure`
        """

        return gibbs_exact.enumerate_measure(region, beta,
                                             precision_bits=self.config['precision_bits'],
                                             configuration_cap=self.config['configuration_cap'],
                                             threads=self.config['threads'])

    def split_measure(self, region, beta):
        """
        The Gibbs measure of ``region`` with its ``V1`` sites summed out, for regions too large to enumerate in full.
        Supports marginals, events and the spin-bond coupling.

        :return: a :class:`SplitMeasure`
        """

        return gibbs_exact.split_measure(region, beta,
                                         precision_bits=self.config['precision_bits'],
                                         configuration_cap=self.config['configuration_cap'])

    def event_probabilities(self, measure, events):
        """
        :param events: list of :class:`Event` (or their dict form)
        :return: list of ``(label, probability)``
        """

        events = [e if isinstance(e, Event) else Event.from_dict(e) for e in events]
        return [(e.label(), gibbs_exact.event_probability(measure, e)) for e in events]

    def es_identity(self, measure, sites=None, delta0s=()):
        return gibbs_exact.es_identity_check(measure, sites, delta0s, edge_cap=self.config['es_edge_cap'])

    def es_joint(self, measure, sigma):
        """The coupled edge configurations of one spin configuration, with their probabilities."""
        return gibbs_exact.es_joint(measure, sigma, edge_cap=self.config['es_edge_cap'])

    def comparison(self, measure, delta1, beta0=None):
        """The comparison inequality for the thick set of ``delta1``; ``beta0`` defaults to the configured value."""
        if beta0 is None:
            beta0 = self.config['beta0']
        return gibbs_exact.comparison_check(measure, delta1, beta0, edge_cap=self.config['es_edge_cap'])

    def measure_checks(self, measure, delta0=None):
        """Color symmetry, DLR and (for a ``delta0``) the magnetization identity and the uniform-coloring bound."""
        reports = [gibbs_exact.color_symmetry_check(measure)]
        for v in measure.region.v1_sites[:1]:
            reports.append(gibbs_exact.dlr_check(measure, v))
        if delta0:
            reports.append(gibbs_exact.magnetization_identity(measure, delta0))
            reports.append(gibbs_exact.uniform_coloring_check(measure, delta0))
        return reports
