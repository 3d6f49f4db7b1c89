import unittest

from pottsaf import *
from pottsaf import sap


class PolygonCountTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.table = sap.enumerate_q(14, threads=1)

    def test_first_counts(self):
        entries = self.table.entries
        self.assertEqual(sorted(entries), [6, 8, 10, 12, 14])
        self.assertEqual((entries[6], entries[8], entries[10], entries[12]), (1, 0, 6, 6))
        self.assertEqual(self.table.provenance, Provenance.ENUMERATED)

    def test_polyhex_oracle(self):
        oracle = sap.polyhex_oracle(14)
        self.assertEqual(self.table.entries, oracle)

    def test_translation_classes(self):
        table = sap.enumerate_p(12)
        self.assertEqual(table.p_entries, {6: 1, 8: 0, 10: 3, 12: 2})
        # area weighting of the classes gives back q_L
        self.assertEqual(table.entries, {L: q for L, q in self.table.entries.items() if L <= 12})

    def test_polygons(self):
        polygons = sap.enumerate_polygons(10)
        self.assertEqual([p.length for p in polygons], [6, 10, 10, 10])
        hexagon = polygons[0]
        self.assertEqual(len(hexagon.vertices()), 6)
        self.assertEqual(len(sap.polygon_interior(hexagon.edges)), 1)
        self.assertEqual(len(sap.surrounding_translates(polygons[1])), 2)

    def test_crossing(self):
        classes = sap.enumerate_polygons(14)
        polygons = [t for polygon in classes for t in sap.surrounding_translates(polygon)]
        self.assertEqual(len(polygons), sum(self.table.entries.values()))
        report = sap.crossing_check(polygons)
        self.assertTrue(report.passed, report.failures)

    def test_circuit_bound(self):
        self.assertTrue(sap.circuit_bound_check(self.table).passed)
        self.assertFalse(sap.circuit_bound_check(PolygonTable({6: 1, 8: 0, 10: 10 ** 6})).passed)

    def test_compare_tables(self):
        self.assertTrue(sap.compare_tables(self.table, PolygonTable({6: 1, 8: 0, 10: 6})).passed)
        report = sap.compare_tables(self.table, PolygonTable({6: 1, 8: 0, 10: 5}))
        self.assertFalse(report.passed)
        self.assertEqual(report.failures[0]['L'], 10)

    def test_parallel_matches_serial(self):
        self.assertEqual(sap.enumerate_q(12, threads=2).entries,
                         {L: q for L, q in self.table.entries.items() if L <= 12})

    def test_guards(self):
        with self.assertRaises(CapExceededError):
            sap.enumerate_q(40, guard=38)
        for L_max in (5, 7, 4):
            with self.assertRaises(ValidationError):
                sap.enumerate_q(L_max)

    def test_timing_report(self):
        rows = sap.timing_report([6, 10])
        self.assertEqual([(L, count) for L, count, _ in rows], [(6, 1), (10, 6)])


class PathCountTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.table = sap.enumerate_paths(13)

    def test_counts(self):
        c = self.table.c_star
        for n in range(1, 6):
            self.assertEqual(c[n], 2 ** (n - 1))
        self.assertEqual(c[6], 30)
        self.assertEqual(c[13], 2796)

    def test_every_start_edge(self):
        for n, count in self.table.per_edge_max.items():
            self.assertEqual(count, self.table.c_star[n])

    def test_connective(self):
        report = sap.connective_estimate(self.table)
        self.assertTrue(report.passed, report.failures)
        roots = dict(report.details['roots'])
        for n in range(1, 5):
            self.assertAlmostEqual(roots[n], 2.0, places=12)
        self.assertAlmostEqual(roots[12], 2796 ** (1.0 / 12), places=9)
        self.assertAlmostEqual(report.details['infimum'], 1.937, places=3)

    def test_submultiplicativity(self):
        self.assertTrue(sap.submultiplicativity_check(self.table).passed)

    def test_supermultiplicativity(self):
        self.assertTrue(sap.supermultiplicativity_check(sap.enumerate_p(14)).passed)

    def test_guard(self):
        with self.assertRaises(CapExceededError):
            sap.enumerate_paths(27, guard=26)
        with self.assertRaises(ValidationError):
            sap.enumerate_paths(0)


if __name__ == '__main__':
    unittest.main()
