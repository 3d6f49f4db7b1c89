import unittest

from fractions import Fraction

from pottsaf import *
from pottsaf import contour, gibbs_exact, lattice


def named_region(spec, radius=None):
    quad = lattice.build_diced_patch(radius or lattice.default_patch_radius(spec))
    return lattice.region_from_spec(quad, spec)


class ContourGeometryTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.region = named_region('star')
        cls.quad = cls.region.quad
        cls.hexagon = frozenset(cls.region.g1_edges)

    def test_unsatisfied_edges(self):
        sigma = {self.quad.origin: 1}
        self.assertEqual(contour.unsatisfied_edges(self.region, sigma), (frozenset(), frozenset()))
        e0, e1 = contour.unsatisfied_edges(self.region, {self.quad.origin: 2})
        self.assertEqual(len(e0), 6)
        self.assertEqual(e1, self.hexagon)
        with self.assertRaises(ValidationError):
            contour.unsatisfied_edges(self.region, {})
        with self.assertRaises(ValidationError):
            contour.unsatisfied_edges(self.region, {self.quad.origin: 1, self.region.boundary[0]: 2})

    def test_hexagon(self):
        contours = contour.decompose(self.region, self.hexagon)
        self.assertEqual(len(contours), 1)
        hexagon = list(contours)[0]
        self.assertTrue(hexagon.is_simple)
        self.assertEqual((hexagon.length, hexagon.t, hexagon.chi), (6, 0, 2))
        self.assertEqual(hexagon.interior, frozenset([self.quad.origin]))
        self.assertTrue(contour.surrounds(hexagon, [self.quad.origin]))
        self.assertFalse(contour.surrounds(hexagon, [self.region.boundary[0]]))
        with self.assertRaises(ValidationError):
            contour.surrounds(hexagon, [])

    def test_rejections(self):
        path = frozenset(sorted(self.hexagon)[:3])
        self.assertFalse(contour.is_admissible(self.quad, path))
        with self.assertRaises(InvariantViolation):
            contour.build_contour(self.region, path)
        with self.assertRaises(InvariantViolation):
            contour.build_contour(self.region, [])
        outside = [i for i in range(len(self.quad.edges_g1)) if i not in self.hexagon]
        with self.assertRaises(ValidationError):
            contour.decompose(self.region, outside[:1])

    def test_configurations(self):
        found = contour.contour_configurations(self.region)
        self.assertEqual(sorted(found, key=len), [frozenset(), self.hexagon])
        with self.assertRaises(CapExceededError):
            contour.contour_configurations(self.region, contour_cap=5)


class ContourMeasureTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.region = named_region('star')
        cls.origin = cls.region.quad.origin
        cls.hexagon = frozenset(cls.region.g1_edges)

    def test_infinite_beta(self):
        measure = contour.contour_measure(self.region, 'inf')
        self.assertEqual(len(measure), 2)
        self.assertEqual(measure.probability(self.hexagon), Fraction(1, 33))
        self.assertEqual(measure.probability(frozenset()), Fraction(32, 33))
        stats = contour.contour_statistics(measure, self.origin)
        self.assertEqual(stats['surrounding'], Fraction(1, 33))
        self.assertEqual(stats['nonsimple_surrounding'], 0)

    def test_finite_beta(self):
        measure = contour.contour_measure(self.region, 'ln:2')
        p = Fraction(14, 17)
        r = 2 * p ** 6
        self.assertEqual(measure.probability(self.hexagon), r / (1 + r))

    def test_pushforward(self):
        for beta in ('inf', 'ln:2', '1/2'):
            measure = gibbs_exact.enumerate_measure(self.region, beta)
            report = contour.pushforward_check(measure)
            self.assertTrue(report.passed, (beta, report.failures))
            self.assertEqual(report.details['support'], 2)

    def test_pushforward_real_valued(self):
        measure = gibbs_exact.enumerate_measure(self.region, 2)
        self.assertTrue(contour.pushforward_check(measure).passed)

    def test_peierls_inequality(self):
        for beta in ('inf', 'ln:2', 2):
            report = contour.peierls_inequality_check(contour.contour_measure(self.region, beta))
            self.assertTrue(report.passed, (beta, report.failures))
            self.assertEqual(report.checked, 1)

    def test_nonsimple_profile_without_room(self):
        report = contour.nonsimple_profile(self.region, self.origin, ['ln:2', 2])
        self.assertTrue(report.passed)
        self.assertEqual([row['scaled'] for row in report.details['rows']], [0.0, 0.0])
        with self.assertRaises(ValidationError):
            contour.nonsimple_profile(self.region, self.origin, ['ln:2', 'inf'])


class NonsimpleRarityTests(unittest.TestCase):
    # the double star holds one non-simple contour, the theta of the two hexagons (weight 2 p^11 q), next to the two
    # hexagons and their common outline

    @classmethod
    def setUpClass(cls):
        cls.region = named_region('double-star')
        cls.origin = cls.region.quad.origin

    def test_theta_contour(self):
        measure = contour.contour_measure(self.region, 0)
        self.assertEqual(len(measure), 5)
        stats = contour.contour_statistics(measure, self.origin)
        self.assertEqual(stats['nonsimple_surrounding'], Fraction(2, 9))

    def test_bounded_and_decreasing(self):
        report = contour.nonsimple_profile(self.region, self.origin, [4, 2, 3])
        self.assertTrue(report.passed, report.failures)
        self.assertEqual([row['beta'] for row in report.details['rows']], ['2', '3', '4'])
        scaled = [row['scaled'] for row in report.details['rows']]
        self.assertAlmostEqual(scaled[0], 0.0471, places=3)
        self.assertTrue(scaled[0] > scaled[1] > scaled[2] > 0.0165)

    def test_bound_is_tight(self):
        self.assertTrue(contour.nonsimple_profile(self.region, self.origin, [2, 3, 4], bound='0.05').passed)
        report = contour.nonsimple_profile(self.region, self.origin, [2, 3, 4], bound='0.045')
        self.assertFalse(report.passed)
        self.assertEqual(report.failures, ['bound at beta=2'])

    def test_increase_is_caught(self):
        # 2/9 at beta = 0, about 0.31 at beta = ln(5/4)
        report = contour.nonsimple_profile(self.region, self.origin, [0, 'ln:5/4'], bound=1)
        self.assertEqual(report.details['rows'][0]['scaled'], 2 / 9)
        self.assertEqual(report.failures, ['increase at beta=ln:5/4'])


class MultiplicityTests(unittest.TestCase):

    def test_star(self):
        measure = gibbs_exact.enumerate_measure(named_region('star'), 'inf')
        report = contour.zero_temperature_multiplicity_check(measure)
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.details['ground_states'], 66)
        self.assertEqual(report.details['configurations'], 2)

    def test_star_plus_one(self):
        measure = gibbs_exact.enumerate_measure(named_region('star+1'), 'inf')
        report = contour.zero_temperature_multiplicity_check(measure)
        self.assertTrue(report.passed, report.failures)
        self.assertEqual(report.details['ground_states'], measure.ground_state_count)

    def test_finite_beta_rejected(self):
        measure = gibbs_exact.enumerate_measure(named_region('single'), 'ln:2')
        with self.assertRaises(ValidationError):
            contour.zero_temperature_multiplicity_check(measure)


class ChiTests(unittest.TestCase):

    def test_generated_contours(self):
        region = named_region('ball:2', radius=3)
        contours = contour.generate_contours(region, max_faces=3)
        self.assertTrue(any(c.is_simple and c.length == 6 for c in contours))
        report = contour.chi_check(contours)
        self.assertTrue(report.passed, report.failures)
        self.assertTrue(report.details['zero_chi_found'])
        self.assertGreaterEqual(report.details['max_t'], 1)


if __name__ == '__main__':
    unittest.main()
