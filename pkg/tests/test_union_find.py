import unittest

from pottsaf.union_find import UnionFind


class UnionFindTests(unittest.TestCase):

    def test_union(self):
        uf = UnionFind(6)
        self.assertEqual(uf.num_components, 6)
        uf.union(0, 1)
        uf.union(2, 3)
        uf.union(1, 3)
        uf.union(0, 2)
        self.assertEqual(uf.num_components, 3)
        self.assertTrue(uf.connected(0, 3))
        self.assertFalse(uf.connected(0, 4))
        self.assertEqual(sorted(sorted(c) for c in uf.components()), [[0, 1, 2, 3], [4], [5]])

    def test_labels(self):
        uf = UnionFind(4)
        uf.union(3, 1)
        labels = uf.labels()
        self.assertEqual(labels[1], labels[3])
        self.assertEqual(len(set(labels.tolist())), 3)

    def test_path_compression(self):
        uf = UnionFind(5)
        uf.parents = [0, 0, 1, 2, 3]
        self.assertEqual(uf.find(4), 0)
        self.assertEqual(uf.parents, [0, 0, 0, 0, 0])


if __name__ == '__main__':
    unittest.main()
