import unittest

import os
import shutil
import tempfile

from pottsaf import *
from pottsaf import peierls, series_io

CANONICAL = "6,1\n8,0\n10,6\n12,6\n"
SERIES_PATH = os.environ.get('POTTSAF_SERIES_PATH')


class SeriesIOTests(unittest.TestCase):

    def setUp(self):
        self.directory = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.directory)

    def test_parse_canonical(self):
        table = series_io.parse_polygon_table(CANONICAL)
        self.assertEqual(table.entries, {6: 1, 8: 0, 10: 6, 12: 6})
        self.assertEqual(table.max_L, 12)
        self.assertEqual(table.provenance, Provenance.INGESTED)

    def test_write_canonical(self):
        table = PolygonTable({12: 6, 6: 1, 10: 6, 8: 0})
        self.assertEqual(series_io.write_polygon_table(table), CANONICAL)

    def test_parse_moment_series(self):
        text = "# polygons on the honeycomb lattice\nL  count\n6 1\n8 0\n\n10 6 extra\n"
        table = series_io.parse_polygon_table(text, 'moment-series')
        self.assertEqual(table.entries, {6: 1, 8: 0, 10: 6})

    def test_parse_errors(self):
        cases = {
            "": None,
            "6,1\n6,1\n": 2,
            "6,1\n7,0\n": 2,
            "4,0\n": 1,
            "6,2\n": 1,
            "6,1\n8,1\n": 2,
            "6,1\n10,-1\n": 2,
            "6,1\n10,x\n": 2,
            "6,1,3\n": 1,
        }
        for text, line_number in cases.items():
            with self.assertRaises(ParseError) as context:
                series_io.parse_polygon_table(text)
            self.assertEqual(context.exception.line_number, line_number, text)

    def test_unknown_format(self):
        with self.assertRaises(ValidationError):
            series_io.parse_polygon_table(CANONICAL, 'binary')

    def test_read_by_extension(self):
        canonical = os.path.join(self.directory, 'q.csv')
        with open(canonical, 'w') as f:
            f.write(CANONICAL)
        moments = os.path.join(self.directory, 'q.txt')
        with open(moments, 'w') as f:
            f.write("6 1\n8 0\n10 6\n12 6\n")
        self.assertEqual(series_io.read_polygon_table(canonical), series_io.read_polygon_table(moments))

    def test_merge(self):
        enumerated = PolygonTable({6: 1, 8: 0, 10: 6})
        ingested = PolygonTable({6: 1, 8: 0, 10: 6, 12: 6}, provenance=Provenance.INGESTED)
        merged = series_io.merge_tables(enumerated, ingested)
        self.assertEqual(merged.entries, {6: 1, 8: 0, 10: 6, 12: 6})
        self.assertEqual(merged.provenance, Provenance.MERGED)

    def test_merge_mismatch(self):
        enumerated = PolygonTable({6: 1, 8: 0, 10: 6, 12: 6})
        ingested = PolygonTable({6: 1, 8: 0, 10: 7, 12: 5})
        with self.assertRaises(MergeError) as context:
            series_io.merge_tables(enumerated, ingested)
        self.assertEqual(context.exception.mismatched, [10, 12])

    def test_timing_report(self):
        text = series_io.write_timing_report([(6, 1, 0.5), (8, 0, 0.25)])
        self.assertEqual(text, "L,count,seconds\n6,1,0.500000\n8,0,0.250000\n")


@unittest.skipUnless(SERIES_PATH, "POTTSAF_SERIES_PATH is not set")
class PublishedSeriesTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        table = series_io.read_polygon_table(SERIES_PATH)
        cls.table = PolygonTable({L: q for L, q in table.entries.items() if L <= peierls.PUBLISHED_MAX_L},
                                 provenance=table.provenance)

    def test_weak_prefix_sum(self):
        prefix = peierls.prefix_sum(self.table)
        self.assertEqual(prefix, peierls.PUBLISHED_WEAK_PREFIX)
        self.assertLess(prefix, 0.03168)

    def test_strong_bound(self):
        report = peierls.zero_temp_bound(self.table, WeightForm.STRONG)
        self.assertLess(report.prefix_sum, peierls.PUBLISHED_STRONG_PREFIX)
        self.assertGreaterEqual(report.magnetization_lower, 0.90301)

    def test_enumerated_prefix(self):
        for L, q in series_io.parse_polygon_table(CANONICAL).entries.items():
            self.assertEqual(self.table.entries[L], q)


if __name__ == '__main__':
    unittest.main()
