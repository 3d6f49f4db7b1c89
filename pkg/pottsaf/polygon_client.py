# python 2 backwards compatibility
from __future__ import print_function
from builtins import object

# external imports
import logging

# package imports
from . import sap, series_io
from .errors import ValidationError
from .models import CheckReport, PolygonTable, Provenance

logger = logging.getLogger(__name__)


class PolygonClient(object):

    def count_polygons(self, L_max, with_p=False):
        """
        Self-enumerated ``q_L`` for every even ``L <= L_max`` (and ``p_L`` when ``with_p`` is set).

        :return: a :class:`PolygonTable`
        """

        guard = self.config['polygon_length_guard']
        table = sap.enumerate_q(L_max, threads=self.config['threads'], guard=guard)
        if with_p:
            table.p_entries = sap.enumerate_p(L_max, guard=guard).p_entries
        return table

    def load_series(self, path=None, format=None):
        """
        Read an external polygon table.  ``path`` defaults to the configured ``series_path``.
        """

        path = path or self.config.get('series_path')
        if not path:
            raise ValidationError("no series path given and none configured")
        return series_io.read_polygon_table(path, format)

    def merged_table(self, L_max, path=None, format=None):
        """The self-enumerated prefix merged with the external series; shared lengths must agree."""
        return series_io.merge_tables(self.count_polygons(L_max), self.load_series(path, format))

    def validate_polygons(self, table, L_max=None, oracle_L_max=14):
        """
        Checks on a ``q_L`` table: agreement with a fresh enumeration up to ``L_max`` and with the polyhex oracle, and
        the circuit bound for every entry.

        :return: list of :class:`CheckReport`
        """

        reports = []
        if L_max is not None:
            reports.append(sap.compare_tables(self.count_polygons(L_max), table, L_max))
        oracle_L_max = min(oracle_L_max, table.max_L)
        if oracle_L_max >= 6:
            oracle = PolygonTable(sap.polyhex_oracle(oracle_L_max), provenance=Provenance.ENUMERATED)
            report = sap.compare_tables(oracle, table, oracle_L_max)
            report.name = 'polyhex_oracle'
            reports.append(report)
        reports.append(sap.circuit_bound_check(table))
        for report in reports:
            logger.info("%s: %s", report.name, 'passed' if report.passed else 'FAILED')
        return reports

    def crossing_check(self, L_max):
        """The ray-crossing property for every circuit of length <= ``L_max`` surrounding the origin."""
        classes = sap.enumerate_polygons(L_max, guard=self.config['polygon_length_guard'])
        return sap.crossing_check([t for polygon in classes for t in sap.surrounding_translates(polygon)])

    def count_paths(self, n_max):
        """``C_n*`` and the connective-constant checks on it."""
        table = sap.enumerate_paths(n_max, guard=self.config['path_length_guard'])
        return table, [sap.connective_estimate(table), sap.submultiplicativity_check(table)]

    def timing_report(self, lengths):
        rows = sap.timing_report(lengths, threads=self.config['threads'], guard=self.config['polygon_length_guard'])
        return series_io.write_timing_report(rows)
