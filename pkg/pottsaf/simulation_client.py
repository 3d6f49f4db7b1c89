# python 2 backwards compatibility
from __future__ import print_function
from builtins import object

# external imports
import logging

# package imports
from . import montecarlo
from .models import Schedule

logger = logging.getLogger(__name__)


class SimulationClient(object):

    def _schedule(self, schedule):
        if isinstance(schedule, Schedule):
            return schedule
        schedule = dict(schedule)
        schedule.setdefault('seed', self.config['seed'])
        return Schedule.from_dict(schedule)

    def simulate(self, region, beta, schedule, observables, chains=1):
        """
        Monte Carlo estimates of ``observables`` (see :class:`montecarlo.Observable`) under the Gibbs measure of
        ``region`` with boundary color 1.  A schedule without a seed takes the configured one.

        Example:

        >>> potts = PottsAF(config={})
        >>> report = potts.simulate(potts.build_region('star'), '2', {'sweeps': 20000, 'thermalization': 1000},
        ...                         ['color:0:1'])

        :return: an :class:`EstimateReport`
        """

        return montecarlo.run_chains(region, beta, self._schedule(schedule), observables, chains=chains,
                                     threads=self.config['threads'])

    def scan(self, region, betas, schedule, observables, chains=1):
        """Estimates over a list of betas; returns ``(reports, csv_text)``."""
        return montecarlo.beta_scan(region, betas, self._schedule(schedule), observables, chains=chains,
                                    threads=self.config['threads'])

    def percolation(self, region, beta, schedule, sites=None, delta0s=(), chains=1):
        """Percolation estimates of the coupling and the identities tying them to spin differences."""
        return montecarlo.percolation_estimator(region, beta, self._schedule(schedule), sites, delta0s,
                                                chains=chains, threads=self.config['threads'])

    def oracle_check(self, measure, report, sigmas=3):
        return montecarlo.oracle_check(measure, report, sigmas=sigmas, edge_cap=self.config['es_edge_cap'])
