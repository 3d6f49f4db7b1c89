import unittest

from fractions import Fraction

from pottsaf import *
from pottsaf import gibbs_exact, lattice


def named_region(spec):
    quad = lattice.build_diced_patch(lattice.default_patch_radius(spec))
    return lattice.region_from_spec(quad, spec)


class SingleSiteTests(unittest.TestCase):

    def test_closed_form(self):
        region = named_region('single')
        measure = gibbs_exact.enumerate_measure(region, 'ln:2')
        site = region.sites[0]
        m = gibbs_exact.marginal(measure, site)
        self.assertEqual(m[1], Fraction(1, 17))
        self.assertEqual(m[2], Fraction(8, 17))
        self.assertEqual(sum(m.values()), 1)

    def test_infinite_beta(self):
        region = named_region('single')
        measure = gibbs_exact.enumerate_measure(region, 'inf')
        self.assertEqual(measure.ground_state_count, 2)
        self.assertEqual(gibbs_exact.marginal(measure, region.sites[0])[1], 0)


class StarTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.region = named_region('star')
        cls.origin = cls.region.quad.origin
        cls.zero = gibbs_exact.enumerate_measure(cls.region, 'inf')
        cls.finite = gibbs_exact.enumerate_measure(cls.region, 'ln:2')

    def test_ground_states(self):
        self.assertEqual(self.zero.n_configurations, 3 ** 7)
        self.assertEqual(self.zero.ground_state_count, 66)
        self.assertEqual(self.zero.partition_function, 66)
        self.assertEqual(gibbs_exact.marginal(self.zero, self.origin)[1], Fraction(32, 33))

    def test_hamiltonian(self):
        sigma = {v: 2 for v in self.region.v1_sites}
        sigma[self.origin] = 1
        self.assertEqual(gibbs_exact.hamiltonian(self.region, sigma), 0)
        self.assertEqual(gibbs_exact.hamiltonian(self.region, {v: 1 for v in self.region.sites}), 18)
        boundary = self.region.boundary[0]
        self.assertEqual(gibbs_exact.hamiltonian(self.region, sigma, {boundary: 2}), 2)
        with self.assertRaises(ValidationError):
            gibbs_exact.hamiltonian(self.region, {self.origin: 1})
        with self.assertRaises(ValidationError):
            gibbs_exact.hamiltonian(self.region, {v: 4 for v in self.region.sites})
        with self.assertRaises(ValidationError):
            gibbs_exact.hamiltonian(self.region, sigma, {self.origin: 2})

    def test_decode(self):
        config = gibbs_exact.decode_configuration(self.zero, 0)
        self.assertEqual(set(config.values()), {1})
        with self.assertRaises(ValidationError):
            gibbs_exact.decode_configuration(self.zero, 3 ** 7)

    def test_color_symmetry(self):
        for measure in (self.zero, self.finite):
            report = gibbs_exact.color_symmetry_check(measure)
            self.assertTrue(report.passed, report.failures)
            self.assertEqual(report.checked, 7)

    def test_dlr(self):
        for v in self.region.v1_sites:
            report = gibbs_exact.dlr_check(self.finite, v)
            self.assertTrue(report.passed, report.failures)
        with self.assertRaises(ValidationError):
            gibbs_exact.dlr_check(self.finite, self.origin)

    def test_magnetization_identity(self):
        report = gibbs_exact.magnetization_identity(self.finite, [self.origin])
        self.assertTrue(report.passed, report.details)
        _, delta0, _ = lattice.thick_set(self.region.quad, [self.region.v1_sites[0]])
        report = gibbs_exact.magnetization_identity(self.finite, delta0)
        self.assertTrue(report.passed, report.details)

    def test_long_range(self):
        report = gibbs_exact.long_range_check(self.zero, [self.origin])
        self.assertTrue(report.passed)
        self.assertEqual(report.details['conditional'], Fraction(32, 33))

    def test_uniform_coloring(self):
        report = gibbs_exact.uniform_coloring_check(self.zero, [self.origin])
        self.assertTrue(report.passed, report.details)
        self.assertEqual(report.details['M'], 0)
        self.assertEqual(report.details['M_boundary'], 6)
        with self.assertRaises(ValidationError):
            gibbs_exact.uniform_coloring_check(self.zero, [self.region.v1_sites[0]])

    def test_conditioning(self):
        triangle = self.region.v1_sites[0]
        with self.assertRaises(ZeroProbabilityError):
            gibbs_exact.event_probability(self.zero, Event.color_of(self.origin, 1),
                                          given=Event.color_of(triangle, 1))
        conditional = gibbs_exact.event_probability(self.zero, Event.color_of(triangle, 2),
                                                    given=Event.color_of(self.origin, 1))
        self.assertEqual(conditional, Fraction(1, 2))

    def test_es_identity(self):
        for measure in (self.zero, self.finite):
            report = gibbs_exact.es_identity_check(measure, delta0s=[frozenset([self.origin])])
            self.assertTrue(report.passed, report.failures)
            self.assertEqual(report.checked, 8)

    def test_es_joint(self):
        first = self.region.v1_sites[0]
        sigma = {v: 3 for v in self.region.v1_sites}
        sigma[first] = 2
        sigma[self.origin] = 1

        law = gibbs_exact.es_joint(self.finite, sigma)
        self.assertEqual(len(law), 8)
        self.assertEqual(sum(w for _, w in law), 1 / self.finite.partition_function)
        self.assertTrue(all(first in edge for eta, _ in law for edge in eta))

        [(eta, weight)] = gibbs_exact.es_joint(self.zero, sigma)
        self.assertEqual(len(eta), 3)
        self.assertEqual(weight, Fraction(1, 66))
        with self.assertRaises(CapExceededError):
            gibbs_exact.es_joint(self.finite, sigma, edge_cap=2)

    def test_comparison_needs_the_thick_set_inside(self):
        # the corners of a star triangle other than the origin sit on the boundary
        seed = [self.region.v1_sites[0]]
        with self.assertRaises(ValidationError):
            gibbs_exact.comparison_check(self.zero, seed, 1)

    def test_real_valued_measure(self):
        measure = gibbs_exact.enumerate_measure(self.region, 2, precision_bits=96)
        self.assertFalse(measure.is_exact)
        m = gibbs_exact.marginal(measure, self.origin)
        self.assertAlmostEqual(float(m[1] + m[2] + m[3]), 1.0, places=12)
        self.assertTrue(gibbs_exact.color_symmetry_check(measure).passed)
        self.assertTrue(float(m[1]) > float(gibbs_exact.marginal(self.finite, self.origin)[1]))


class SplitMeasureTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.region = named_region('star')
        cls.origin = cls.region.quad.origin
        cls.pairs = [(gibbs_exact.enumerate_measure(cls.region, beta), gibbs_exact.split_measure(cls.region, beta))
                     for beta in ('ln:2', 'inf')]

    def test_partition_function(self):
        for full, split in self.pairs:
            self.assertEqual(split.n_configurations, 3)
            self.assertTrue(split.is_exact)
            self.assertEqual(split.partition_function, full.partition_function)
        self.assertEqual(self.pairs[1][1].partition_function, 66)

    def test_marginals(self):
        for full, split in self.pairs:
            for v in self.region.sites:
                self.assertEqual(gibbs_exact.marginal(split, v), gibbs_exact.marginal(full, v), v)

    def test_events(self):
        first, second = self.region.v1_sites[:2]
        events = [Event.J_k(1, [self.origin]), Event.J([first, second]), Event.improper(self.origin, first),
                  Event.all_of(Event.color_of(first, 2), Event.color_of(second, 3))]
        for full, split in self.pairs:
            for event in events:
                self.assertEqual(gibbs_exact.event_probability(split, event),
                                 gibbs_exact.event_probability(full, event), event.label())
            self.assertEqual(gibbs_exact.event_probability(split, Event.color_of(first, 2),
                                                           given=Event.color_of(self.origin, 1)),
                             gibbs_exact.event_probability(full, Event.color_of(first, 2),
                                                           given=Event.color_of(self.origin, 1)))

    def test_connections(self):
        first = self.region.v1_sites[0]
        queries = [gibbs_exact.ConnectionQuery([self.origin]),
                   gibbs_exact.ConnectionQuery([first, self.origin], 'all'),
                   gibbs_exact.ConnectionQuery([first], 'any', Event.J([self.origin]))]
        for full, split in self.pairs:
            self.assertEqual(gibbs_exact.es_probabilities(split, queries),
                             gibbs_exact.es_probabilities(full, queries))
            report = gibbs_exact.es_identity_check(split, delta0s=[frozenset([self.origin])])
            self.assertTrue(report.passed, report.failures)
            self.assertEqual(report.details, gibbs_exact.es_identity_check(
                full, delta0s=[frozenset([self.origin])]).details)

    def test_real_valued(self):
        full = gibbs_exact.enumerate_measure(self.region, 2)
        split = gibbs_exact.split_measure(self.region, 2)
        self.assertFalse(split.is_exact)
        m_full = gibbs_exact.marginal(full, self.origin)
        m_split = gibbs_exact.marginal(split, self.origin)
        for k in (1, 2, 3):
            self.assertAlmostEqual(float(m_split[k]), float(m_full[k]), places=12)
        self.assertTrue(gibbs_exact.es_identity_check(split).passed)

    def test_rejections(self):
        split = self.pairs[0][1]
        with self.assertRaises(ValidationError):
            gibbs_exact.event_probability(split, Event.custom(lambda sigma: True))
        with self.assertRaises(ValidationError):
            gibbs_exact.marginal(split, self.region.boundary[0] + 10 ** 6)
        with self.assertRaises(CapExceededError):
            gibbs_exact.split_measure(named_region('triple-star'), 2, configuration_cap=10)


class TripleStarTests(unittest.TestCase):
    # the thick set of a triangle at the origin, with its three corners, lies inside this region

    @classmethod
    def setUpClass(cls):
        cls.region = named_region('triple-star')
        quad = cls.region.quad
        cls.seed = min(quad.neighbors[quad.origin])
        cls.delta, cls.delta0, _ = lattice.thick_set(quad, [cls.seed])
        cls.measures = {beta: gibbs_exact.split_measure(cls.region, beta) for beta in ('1/2', '2')}

    def test_size(self):
        self.assertEqual(len(self.region), 16)
        for measure in self.measures.values():
            self.assertEqual(measure.n_configurations, 27)

    def test_es_identity(self):
        for beta, measure in self.measures.items():
            report = gibbs_exact.es_identity_check(measure, sites=sorted(self.delta), delta0s=[self.delta0])
            self.assertTrue(report.passed, (beta, report.failures))
            self.assertEqual(report.checked, 5)

    def test_comparison(self):
        for beta, measure in self.measures.items():
            report = gibbs_exact.comparison_check(measure, [self.seed], '1/2')
            self.assertTrue(report.passed, (beta, report.details))
            self.assertEqual(report.details['E_delta'], 3)
            self.assertEqual(report.details['delta0'], sorted(self.delta0))
            self.assertTrue(report.details['rhs'] > 0)

    def test_comparison_rejections(self):
        measure = self.measures['1/2']
        with self.assertRaises(ValidationError):
            gibbs_exact.comparison_check(measure, [self.seed], 0)
        with self.assertRaises(ValidationError):
            gibbs_exact.comparison_check(measure, [self.seed], 1)


class ImproperRarityTests(unittest.TestCase):
    # origin-triangle edge of the star: exp(beta) mu(improper) goes from 1/3 at beta = 0 down to 1/33

    @classmethod
    def setUpClass(cls):
        cls.region = named_region('star')
        cls.origin = cls.region.quad.origin
        cls.triangle = cls.region.v1_sites[0]

    def profile(self, betas, **kwargs):
        return gibbs_exact.improper_rarity_profile(self.region, self.origin, self.triangle, betas, **kwargs)

    def test_bounded_and_decreasing(self):
        report = self.profile([2, 4, 6, 8])
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.checked, 4)
        scaled = [row['scaled'] for row in report.details['rows']]
        self.assertAlmostEqual(report.details['fitted_constant'], 0.0676, places=3)
        self.assertAlmostEqual(scaled[-1], 1 / 33, places=3)
        self.assertEqual(scaled, sorted(scaled, reverse=True))

    def test_bound_is_tight(self):
        self.assertTrue(self.profile([2, 4, 6, 8], bound='0.07').passed)
        report = self.profile([2, 4, 6, 8], bound='0.065')
        self.assertEqual(report.failures, ['bound at beta=2'])

    def test_increase_is_caught(self):
        # 1/3 at beta = 0, about 0.352 at beta = ln(5/4)
        report = self.profile(['ln:5/4', 0], bound=1)
        self.assertEqual(report.details['rows'][0]['scaled'], 1 / 3)
        self.assertEqual(report.failures, ['increase at beta=ln:5/4'])
        self.assertFalse(self.profile([0, 'ln:5/4']).passed)

    def test_rejections(self):
        with self.assertRaises(ValidationError):
            self.profile([2, 'inf'])
        with self.assertRaises(ValidationError):
            self.profile([])
        with self.assertRaises(ValidationError):
            self.profile([2], bound=0)


class ComparisonEpsilonTests(unittest.TestCase):

    def test_value(self):
        epsilon = gibbs_exact.comparison_epsilon(1, 3, 1)
        self.assertIsInstance(epsilon, Fraction)
        self.assertAlmostEqual(float(epsilon), 0.0841934, places=6)
        self.assertEqual(gibbs_exact.comparison_epsilon(2, 4, 'inf'), Fraction(1, 9))
        self.assertEqual(gibbs_exact.comparison_epsilon(1, 2, 'ln:2'), Fraction(1, 12))


class CapTests(unittest.TestCase):

    def test_configuration_cap(self):
        with self.assertRaises(CapExceededError):
            gibbs_exact.enumerate_measure(named_region('star'), 'inf', configuration_cap=100)

    def test_coupling_edge_cap(self):
        region = named_region('star+1')
        measure = gibbs_exact.enumerate_measure(region, 'ln:2')
        with self.assertRaises(CapExceededError):
            gibbs_exact.es_identity_check(measure)

    def test_threads(self):
        region = named_region('star')
        serial = gibbs_exact.enumerate_measure(region, 'inf')
        parallel = gibbs_exact.enumerate_measure(region, 'inf', threads=2)
        self.assertEqual(serial.level_counts, parallel.level_counts)


if __name__ == '__main__':
    unittest.main()
