import unittest
from pottsaf import *

import logging
import os
import shutil
import tempfile
from fractions import Fraction
from unittest.mock import patch

from pottsaf.exact_quad import ALPHA_SQUARED, ExactQuad
from pottsaf.logger import InfoFilter, configure_logging, logging_config

CONF = """[pottsaf]
C = 3/2
threads = 2
verbose = false
series_path = q.csv

[other]
contour_cap = 9
"""

YAML = """dev:
  precision: 64
  alpha_squared:
    a: 2
    b: 1
  beta0: ln:3
"""


class ConfigTests(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def write(self, name, text):
        path = os.path.join(self.directory, name)
        with open(path, 'w') as f:
            f.write(text)
        return path

    def test_defaults(self):
        config = PottsAF(config={'threads': 1}).config
        self.assertEqual(config['configuration_cap'], 3 ** 16)
        self.assertEqual(config['contour_cap'], 14)
        self.assertEqual(config['es_edge_cap'], 20)
        self.assertEqual(config['constant_c'], Fraction(100))
        self.assertEqual(config['beta0'].label(), '5')
        self.assertEqual(config['alpha_squared'], ALPHA_SQUARED)
        self.assertIsNone(config['series_path'])
        self.assertFalse(config['verbose'])

    def test_threads_from_environment(self):
        with patch.dict(os.environ, {'POTTSAF_THREADS': '3'}):
            self.assertEqual(PottsAF(config={}).config['threads'], 3)
        with patch.dict(os.environ, {'POTTSAF_THREADS': 'many'}):
            with self.assertRaises(ValidationError):
                PottsAF(config={})

    def test_remapped_keys(self):
        self.assertEqual(PottsAF(config={'C': 50, 'threads': 1}).config['constant_c'], 50)
        config = PottsAF(config={'C': 50, 'constant_c': 7, 'threads': 1}).config
        self.assertEqual(config['constant_c'], 7)
        self.assertEqual(PottsAF(config={'max_configurations': 81, 'threads': 1}).config['configuration_cap'], 81)

    def test_passed_config_is_not_mutated(self):
        passed = {'C': 50, 'threads': 1}
        PottsAF(config=passed)
        self.assertEqual(passed, {'C': 50, 'threads': 1})

    def test_rejections(self):
        bad = [{'temperature': 1}, {'threads': 'x'}, {'threads': 0}, {'configuration_cap': -1}, {'C': 0},
               {'verbose': 'maybe'}, {'alpha_squared': -2}, {'beta0': 'hot'}]
        for config in bad:
            with self.assertRaises(ValidationError):
                PottsAF(config=config)
        self.assertEqual(PottsAF(config={'seed': 0, 'threads': 1}).config['seed'], 0)

    def test_conf_file(self):
        path = self.write('pottsaf.conf', CONF)
        config = PottsAF(config_file=path).config
        self.assertEqual(config['constant_c'], Fraction(3, 2))
        self.assertEqual(config['threads'], 2)
        self.assertFalse(config['verbose'])
        self.assertEqual(config['series_path'], os.path.join(self.directory, 'q.csv'))
        self.assertEqual(PottsAF(config_file=path, config_role='other').config['contour_cap'], 9)
        with self.assertRaises(KeyError):
            PottsAF(config_file=path, config_role='missing')

    def test_environment_paths(self):
        path = self.write('pottsaf.conf', CONF)
        with patch.dict(os.environ, {'POTTSAF_CONFIG_PATH': path, 'POTTSAF_CONFIG_ROLE': 'other'}):
            self.assertEqual(PottsAF().config['contour_cap'], 9)

    def test_yaml_file(self):
        path = self.write('pottsaf.yml', YAML)
        config = PottsAF(config_file=path, config_role='dev').config
        self.assertEqual(config['precision_bits'], 64)
        self.assertEqual(config['alpha_squared'], ExactQuad(2, 1))
        self.assertEqual(config['beta0'].label(), 'ln:3')

    def test_unknown_file_type(self):
        path = self.write('pottsaf.toml', '')
        with self.assertRaises(IOError):
            PottsAF(config_file=path)

    def test_to_dict(self):
        d = PottsAF(config={'threads': 1}).to_dict()
        self.assertEqual(d['constant_c'], '100')
        self.assertEqual(d['beta0'], '5')
        self.assertEqual(d['alpha_squared'], {'a': '2/1', 'b': '1/1'})


class PottsAFTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.potts = PottsAF(config={'threads': 1, 'seed': 3})

    def test_lattice(self):
        quad = self.potts.build_lattice(radius=2)
        self.assertEqual(len(quad.v0_ids), 19)
        self.assertTrue(self.potts.export_lattice(quad).startswith('quadrangulation'))
        with self.assertRaises(ValidationError):
            self.potts.build_lattice()
        with self.assertRaises(ValidationError):
            self.potts.build_lattice('schlafli', p=7)
        self.assertTrue(self.potts.dual_distance_check(2).passed)

    def test_polygons(self):
        table = self.potts.count_polygons(12, with_p=True)
        self.assertEqual(table.entries, {6: 1, 8: 0, 10: 6, 12: 6})
        self.assertEqual(table.p_entries, {6: 1, 8: 0, 10: 3, 12: 2})
        reports = self.potts.validate_polygons(table, L_max=10)
        self.assertEqual([r.name for r in reports][-1], 'circuit_bound')
        self.assertTrue(all(r.passed for r in reports))
        self.assertTrue(self.potts.crossing_check(12).passed)
        with self.assertRaises(ValidationError):
            self.potts.load_series()

    def test_paths(self):
        table, reports = self.potts.count_paths(8)
        self.assertEqual(table.c_star[6], 30)
        self.assertTrue(all(r.passed for r in reports))

    def test_bounds(self):
        report = self.potts.zero_temp_bound()
        self.assertEqual(report.tail_from, 142)
        self.assertEqual(self.potts.tail_bound(142), self.potts.zero_temp_bound(
            form=WeightForm.STRONG).tail_sum)
        self.assertEqual(self.potts.v1_bound(1, 'inf'), 0)

    def test_exact(self):
        region = self.potts.build_region('star')
        measure = self.potts.exact_measure(region, 'inf')
        origin = region.quad.origin
        [(label, probability)] = self.potts.event_probabilities(
            measure, [{'kind': 'vertex_color', 'color': 1, 'sites': [origin]}])
        self.assertEqual(probability, Fraction(32, 33))
        self.assertTrue(all(r.passed for r in self.potts.measure_checks(measure, [origin])))
        self.assertTrue(self.potts.es_identity(measure).passed)
        with self.assertRaises(ValidationError):
            self.potts.comparison(measure, [region.v1_sites[0]])

    def test_split_measure(self):
        region = self.potts.build_region('triple-star')
        measure = self.potts.split_measure(region, 'inf')
        self.assertEqual(measure.n_configurations, 27)
        seed = min(region.quad.neighbors[region.quad.origin])
        report = self.potts.comparison(measure, [seed])
        self.assertTrue(report.passed, report.details)
        self.assertEqual(report.details['E_delta'], 3)

    def test_contours(self):
        region = self.potts.build_region('star')
        self.assertTrue(all(r.passed for r in self.potts.contour_checks(region)))
        self.assertTrue(all(r.passed for r in self.potts.contour_checks(region, 'ln:2')))
        self.assertEqual(len(self.potts.contour_measure(region, 'inf')), 2)

    def test_simulation(self):
        region = self.potts.build_region('star')
        report = self.potts.simulate(region, 'inf', {'sweeps': 50, 'thermalization': 10}, ['color:0:1'])
        self.assertEqual(report.schedule.seed, 3)
        self.assertEqual(report['color:0:1'].samples, 40)
        reports, text = self.potts.scan(region, ['ln:2', 'inf'], {'sweeps': 20}, ['improper_density'])
        self.assertEqual(len(text.splitlines()), 3)


class LoggingTests(unittest.TestCase):

    def tearDown(self):
        logging.getLogger('pottsaf').setLevel(logging.INFO)

    def test_verbose(self):
        PottsAF(config={'threads': 1, 'verbose': True})
        self.assertEqual(logging.getLogger('pottsaf').level, logging.DEBUG)

    def test_config_routes_by_level(self):
        config = logging_config('ext://sys.stderr')
        self.assertEqual(config['handlers']['console']['stream'], 'ext://sys.stderr')
        self.assertEqual(config['handlers']['error_console']['level'], 'WARNING')
        low = InfoFilter(below=True)
        high = InfoFilter(below=False)
        record = logging.LogRecord('pottsaf', logging.DEBUG, __file__, 1, "m", None, None)
        self.assertTrue(low.filter(record))
        self.assertFalse(high.filter(record))
        record.levelno = logging.WARNING
        self.assertFalse(low.filter(record))
        self.assertTrue(high.filter(record))

    def test_disabled(self):
        with patch.dict(os.environ, {'DISABLE_POTTSAF_LOGGING': 'true'}):
            with patch('pottsaf.logger.dictConfig') as dict_config:
                configure_logging()
        dict_config.assert_not_called()


if __name__ == '__main__':
    unittest.main()
