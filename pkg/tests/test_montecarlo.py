import unittest

import math

import numpy as np

from pottsaf import *
from pottsaf import gibbs_exact, lattice, montecarlo


def star():
    return lattice.region_from_spec(lattice.build_diced_patch(2), 'star')


class KernelTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.region = star()
        cls.geometry = montecarlo.RegionArrays(cls.region)
        cls.origin = cls.region.quad.origin

    def test_geometry(self):
        g = self.geometry
        self.assertEqual((g.n_lambda, g.n_total, g.n_edges), (7, 13, 18))
        self.assertEqual(len(g.v0_block), 1)
        self.assertEqual(len(g.v1_block), 6)
        with self.assertRaises(ValidationError):
            g.local(10 ** 6)
        with self.assertRaises(ValidationError):
            g.edge_index(self.origin, self.region.boundary[0])

    def test_staggered_start(self):
        state = montecarlo.init_state(self.geometry, 'ln:2', np.random.SeedSequence(1))
        self.assertEqual(montecarlo.energy(state), 0)
        config = montecarlo.configuration(state)
        self.assertEqual(config[self.origin], 1)
        self.assertEqual(set(config[t] for t in self.region.v1_sites), {2})

    def test_local_energy_change(self):
        state = montecarlo.init_state(self.geometry, 'ln:2', np.random.SeedSequence(1))
        site = np.array([self.geometry.local(self.origin)])
        self.assertEqual(list(montecarlo.local_energy_change(self.geometry, state.colors, site, [2])), [6])
        self.assertEqual(list(montecarlo.local_energy_change(self.geometry, state.colors, site, [3])), [0])

    def test_ground_states_are_kept_at_infinite_beta(self):
        state = montecarlo.init_state(self.geometry, 'inf', np.random.SeedSequence(7))
        for _ in range(50):
            montecarlo.wsk_sweep(state)
            montecarlo.metropolis_sweep(state)
            self.assertEqual(montecarlo.energy(state), 0)
        self.assertEqual(state.sweep_count, 100)
        self.assertTrue(np.all(state.colors[self.geometry.n_lambda:self.geometry.n_total] == 1))

    def test_eta(self):
        state = montecarlo.init_state(self.geometry, 'inf', np.random.SeedSequence(3))
        eta = montecarlo.sample_eta(self.geometry, state.colors, 'inf', state.rng)
        # staggered start: every edge joins colors 1 and 2
        self.assertTrue(np.all(eta))
        connected = montecarlo.boundary_connected(self.geometry, eta)
        self.assertTrue(np.all(connected[:self.geometry.n_total]))
        closed = montecarlo.boundary_connected(self.geometry, np.zeros(self.geometry.n_edges, dtype=bool))
        self.assertFalse(np.any(closed[:self.geometry.n_lambda]))


class ObservableTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.region = star()
        cls.geometry = montecarlo.RegionArrays(cls.region)

    def test_parse(self):
        origin = self.region.quad.origin
        t = self.region.v1_sites[0]
        self.assertEqual(montecarlo.parse_observable(self.geometry, 'color:{}:1'.format(origin)).color, 1)
        self.assertIsNone(montecarlo.parse_observable(self.geometry, 'J:any:{},{}'.format(origin, t)).color)
        improper = montecarlo.parse_observable(self.geometry, 'improper:{}:{}'.format(origin, t))
        self.assertEqual(improper.event(self.geometry).kind, EventKind.EDGE_IMPROPER)
        self.assertTrue(montecarlo.parse_observable(self.geometry, 'perc:{}'.format(t)).needs_eta)
        self.assertIsNone(montecarlo.parse_observable(self.geometry, 'improper_density').event(self.geometry))

    def test_parse_errors(self):
        origin = self.region.quad.origin
        names = ['nonsense', 'color:{}:4'.format(origin), 'color:{}:x'.format(origin), 'J:5:{}'.format(origin),
                 'J:1:', 'diff:{},{}'.format(origin, self.region.v1_sites[0]), 'color:999999:1',
                 'improper:{}:{}'.format(origin, self.region.boundary[0]), 'diff:a']
        for name in names:
            with self.assertRaises(ValidationError):
                montecarlo.parse_observable(self.geometry, name)


class ChainTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.region = star()
        cls.origin = cls.region.quad.origin
        cls.triangle = cls.region.v1_sites[0]
        cls.names = ['color:{}:1'.format(cls.origin), 'diff:{}'.format(cls.triangle), 'improper_density',
                     'perc:{}'.format(cls.triangle)]

    def test_same_seed_same_report(self):
        schedule = Schedule(200, thermalization=20, seed=11)
        a = montecarlo.run_chains(self.region, 'ln:2', schedule, self.names)
        b = montecarlo.run_chains(self.region, 'ln:2', schedule, self.names)
        for name in self.names:
            np.testing.assert_array_equal(a.series[name][0], b.series[name][0])
            self.assertEqual(a[name].mean, b[name].mean)

    def test_threads_do_not_change_results(self):
        schedule = {'sweeps': 200, 'thermalization': 20, 'seed': 5}
        serial = montecarlo.run_chains(self.region, 'ln:2', schedule, self.names, chains=2, threads=1)
        parallel = montecarlo.run_chains(self.region, 'ln:2', schedule, self.names, chains=2, threads=2)
        for name in self.names:
            self.assertEqual(serial[name].mean, parallel[name].mean)
            self.assertEqual(serial[name].error, parallel[name].error)
        self.assertEqual(serial[self.names[0]].samples, 360)

    def test_exact_oracle(self):
        for beta in ('ln:2', 'inf'):
            measure = gibbs_exact.enumerate_measure(self.region, beta)
            schedule = Schedule(6000, thermalization=500, seed=2024)
            report = montecarlo.run_chains(self.region, beta, schedule, self.names, chains=2)
            check = montecarlo.oracle_check(measure, report, sigmas=5)
            self.assertTrue(check.passed, check.details)

    def test_exact_values(self):
        measure = gibbs_exact.enumerate_measure(self.region, 'inf')
        self.assertAlmostEqual(montecarlo.exact_value(measure, self.names[0]), 32.0 / 33, places=12)
        self.assertEqual(montecarlo.exact_value(measure, 'improper_density'), 0.0)
        self.assertAlmostEqual(montecarlo.exact_value(measure, 'M0:{}'.format(self.origin)), 1 - 1.5 / 33, places=12)

    def test_oracle_beta_mismatch(self):
        measure = gibbs_exact.enumerate_measure(self.region, 'inf')
        report = montecarlo.run_chains(self.region, 'ln:2', Schedule(20, seed=1), self.names[:1])
        with self.assertRaises(ValidationError):
            montecarlo.oracle_check(measure, report)

    def test_infinite_beta_assumption(self):
        report = montecarlo.run_chains(self.region, 'inf', Schedule(20, seed=1), self.names[:1])
        self.assertIn(montecarlo.INFINITE_BETA_ASSUMPTION, report.assumptions)
        d = report.to_dict()
        self.assertEqual(d['beta'], 'inf')
        self.assertEqual(d['seed'], 1)

    def test_percolation_identities(self):
        report, check = montecarlo.percolation_estimator(self.region, 'ln:2', Schedule(3000, thermalization=300, seed=17),
                                                         sites=[self.origin, self.triangle], delta0s=[[self.origin]],
                                                         chains=2, sigmas=5)
        self.assertTrue(check.passed, check.details)
        self.assertEqual(check.checked, 3)
        self.assertIn('J:2:{}'.format(self.origin), report.estimates)

        report, check = montecarlo.percolation_estimator(self.region, 0, Schedule(200, seed=17),
                                                         sites=[self.origin], sigmas=5)
        self.assertEqual(report['perc:{}'.format(self.origin)].mean, 0.0)
        with self.assertRaises(ValidationError):
            montecarlo.percolation_estimator(self.region, 'ln:2', Schedule(20), sites=[])

    def test_staggered_order(self):
        names = ['color:{}:1'.format(self.origin), 'color:{}:1'.format(self.triangle)]
        report = montecarlo.run_chains(self.region, 'inf', Schedule(2000, thermalization=100, seed=9), names)
        self.assertEqual(report[names[1]].mean, 0.0)
        self.assertTrue(montecarlo.staggered_order_check(report, names[0], names[1]).passed)

    def test_rejections(self):
        with self.assertRaises(ValidationError):
            montecarlo.run_chains(self.region, 'inf', Schedule(10, thermalization=9), self.names)
        with self.assertRaises(ValidationError):
            montecarlo.run_chains(self.region, 'inf', Schedule(10), [])
        with self.assertRaises(ValidationError):
            montecarlo.run_chains(self.region, 'inf', Schedule(10), self.names, chains=0)
        with self.assertRaises(ValidationError):
            montecarlo.run_chains(self.region, 'inf', {'sweeps': 10, 'temperature': 1}, self.names)
        with self.assertRaises(ValidationError):
            Schedule(10, thermalization=10)
        with self.assertRaises(ValidationError):
            Schedule(10, wsk=False, metropolis_per_wsk=0)

    def test_csv_output(self):
        name = self.names[0]
        report = montecarlo.run_chains(self.region, 'ln:2', Schedule(5, seed=3), [name], chains=2)
        lines = montecarlo.time_series_csv(report, name).splitlines()
        self.assertEqual(lines[0], 'chain,measurement,value')
        self.assertEqual(len(lines), 11)
        self.assertTrue(lines[-1].startswith('1,4,'))
        with self.assertRaises(ValidationError):
            montecarlo.time_series_csv(report, 'improper_density')

        reports, text = montecarlo.beta_scan(self.region, ['ln:2', 'inf'], Schedule(5, seed=3), [name])
        self.assertEqual(len(reports), 2)
        header, first, second = text.splitlines()
        self.assertEqual(header, 'beta,{0},{0}_error'.format(name))
        self.assertTrue(first.startswith('ln:2,'))
        self.assertTrue(second.startswith('inf,'))


class SlopeTests(unittest.TestCase):

    def test_log_slope(self):
        betas = [1, 2, 3, 4]
        self.assertAlmostEqual(montecarlo.log_slope(betas, [math.exp(-b) for b in betas]), -1.0, places=9)
        with self.assertRaises(ValidationError):
            montecarlo.log_slope([1, 2], [0.1, 0.0])
        with self.assertRaises(ValidationError):
            montecarlo.log_slope([1], [0.1])


if __name__ == '__main__':
    unittest.main()
