import unittest

from pottsaf import *
from pottsaf import lattice


class LatticeTests(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.quad = lattice.build_diced_patch(3)

    def test_diced_counts(self):
        for radius in (1, 2, 3):
            quad = lattice.build_diced_patch(radius)
            self.assertEqual(len(quad.v0_ids), 1 + 3 * radius * (radius + 1))

    def test_origin(self):
        quad = self.quad
        self.assertEqual(quad.origin, 0)
        self.assertTrue(quad.is_v0(quad.origin))
        self.assertTrue(quad.interior[quad.origin])
        self.assertEqual(len(quad.neighbors[quad.origin]), 6)
        self.assertEqual(len(quad.g0_neighbors[quad.origin]), 6)

    def test_bipartite_structure(self):
        quad = self.quad
        for u, v in quad.edges_g:
            self.assertNotEqual(quad.is_v0(u), quad.is_v0(v))
        for t in quad.v1_ids:
            if quad.interior[t]:
                self.assertEqual(len(quad.neighbors[t]), 3)
                self.assertEqual(len(quad.g1_neighbors[t]), 3)

    def test_dual_bijection(self):
        quad = self.quad
        self.assertEqual(len(quad.edges_g0), len(quad.edges_g1))
        self.assertEqual(sorted(quad.dual_of_g0), list(range(len(quad.edges_g1))))
        # the G1 edge dual to a G0 edge joins the two triangles sharing that side
        for i, (a, b) in enumerate(quad.edges_g0):
            s, t = quad.edges_g1[quad.dual_of_g0[i]]
            for triangle in (s, t):
                self.assertIn(a, quad.neighbors[triangle])
                self.assertIn(b, quad.neighbors[triangle])

    def test_named_regions(self):
        sizes = {'single': 1, 'star': 7, 'star+1': 8, 'double-star': 12, 'triple-star': 16}
        for spec, size in sizes.items():
            quad = lattice.build_diced_patch(lattice.default_patch_radius(spec))
            region = lattice.region_from_spec(quad, spec)
            self.assertEqual(len(region), size, spec)
            for b in region.boundary:
                self.assertTrue(quad.is_v0(b))

    def test_star(self):
        quad = lattice.build_diced_patch(2)
        region = lattice.region_from_spec(quad, 'star')
        self.assertEqual(region.v0_sites, (quad.origin,))
        self.assertEqual(len(region.v1_sites), 6)
        self.assertEqual(len(region.boundary), 6)
        self.assertEqual(len(region.edges_lambda), 18)
        self.assertEqual(len(region.g1_edges), 6)

    def test_single(self):
        quad = lattice.build_diced_patch(2)
        region = lattice.region_from_spec(quad, 'single')
        self.assertEqual(len(region.v0_sites), 0)
        self.assertEqual(len(region.boundary), 3)

    def test_double_star_g1_edges(self):
        quad = lattice.build_diced_patch(3)
        region = lattice.region_from_spec(quad, 'double-star')
        self.assertEqual(len(region.v0_sites), 2)
        self.assertEqual(len(region.g1_edges), 11)

    def test_triple_star(self):
        quad = lattice.build_diced_patch(3)
        region = lattice.region_from_spec(quad, 'triple-star')
        self.assertEqual(len(region.v0_sites), 3)
        self.assertEqual(len(region.v1_sites), 13)
        self.assertEqual(len(region.boundary), 9)
        self.assertEqual(len(region.edges_lambda), 39)
        seed = min(quad.neighbors[quad.origin])
        delta, delta0, _ = lattice.thick_set(quad, [seed])
        self.assertEqual(delta0, frozenset(region.v0_sites))
        self.assertTrue(delta <= region.site_set)

    def test_ball(self):
        quad = lattice.build_diced_patch(3)
        region = lattice.region_from_spec(quad, 'ball:2')
        self.assertIn(quad.origin, region.site_set)
        # V0 sites are the hexagon of radius 1
        self.assertEqual(len(region.v0_sites), 7)
        # every triangle with all corners within distance 2
        self.assertEqual(len(region.v1_sites), 24)

    def test_region_rejections(self):
        quad = lattice.build_diced_patch(2)
        with self.assertRaises(ValidationError):
            lattice.region_from_spec(quad, 'ball:2')
        with self.assertRaises(ValidationError):
            lattice.region_from_spec(quad, 'nowhere')
        with self.assertRaises(ValidationError):
            lattice.region_from_seed(quad, [quad.origin])
        with self.assertRaises(ValidationError):
            lattice.region_from_seed(quad, [])
        with self.assertRaises(ValidationError):
            lattice.default_patch_radius('ball:x')
        self.assertEqual(lattice.default_patch_radius('ball:4'), 5)

    def test_thick_set(self):
        quad = self.quad
        seed = min(quad.neighbors[quad.origin])
        delta, delta0, delta1 = lattice.thick_set(quad, [seed])
        self.assertEqual(delta1, frozenset([seed]))
        self.assertEqual(len(delta0), 3)
        self.assertIn(quad.origin, delta0)
        self.assertEqual(delta, delta0 | delta1)

    def test_connected_subsets(self):
        quad = self.quad
        pairs = lattice.connected_subsets(quad, 2)
        interior = set(t for t in quad.v1_ids if quad.interior[t])
        edges = set(tuple(sorted(e)) for e in quad.edges_g1 if e[0] in interior and e[1] in interior)
        self.assertEqual(set(pairs), edges)

    def test_dual_distance(self):
        quad = lattice.build_diced_patch(5)
        checked, violations = lattice.dual_distance_violations(quad, 3)
        self.assertGreater(checked, 0)
        self.assertEqual(violations, [])

    def test_geodesic_ray(self):
        quad = lattice.build_diced_patch(5)
        ray = lattice.geodesic_ray(quad)
        self.assertEqual(ray[0], quad.origin)
        self.assertGreaterEqual(len(ray), 6)
        self.assertTrue(lattice.ray_is_geodesic(quad, ray))

    def test_edge_list(self):
        quad = lattice.build_diced_patch(2)
        text = lattice.export_edge_list(quad)
        self.assertTrue(text.startswith("quadrangulation v0=19 "))
        parsed = lattice.parse_edge_list(text)
        self.assertEqual(parsed.edges_g, quad.edges_g)
        self.assertEqual(parsed.dual_of_g0, quad.dual_of_g0)
        self.assertEqual(parsed.interior, quad.interior)
        self.assertTrue(lattice.patches_isomorphic(parsed, quad))

    def test_edge_list_errors(self):
        with self.assertRaises(ParseError):
            lattice.parse_edge_list("")
        with self.assertRaises(ParseError) as context:
            lattice.parse_edge_list("quadrangulation v0=1 v1=1\nG 0 x\n")
        self.assertEqual(context.exception.line_number, 2)

    def test_dual_pair_errors_carry_line_numbers(self):
        text = lattice.export_edge_list(lattice.build_diced_patch(2))
        n_lines = len(text.splitlines())
        for pair in ("9999 0", "0 9999", "-1 0"):
            with self.assertRaises(ParseError) as context:
                lattice.parse_edge_list(text + "D {}\n".format(pair))
            self.assertEqual(context.exception.line_number, n_lines + 1, pair)
            self.assertIn("line {}:".format(n_lines + 1), str(context.exception))

        without_last_dual = "\n".join(text.splitlines()[:-1]) + "\n"
        with self.assertRaises(ParseError) as context:
            lattice.parse_edge_list(without_last_dual)
        self.assertEqual(context.exception.line_number, n_lines - 1)

    def test_schlafli(self):
        euclidean = lattice.build_schlafli_patch(6, 4)
        self.assertTrue(euclidean.interior[euclidean.origin])
        self.assertEqual(len(euclidean.g0_neighbors[euclidean.origin]), 6)

        hyperbolic = lattice.build_schlafli_patch(7, 4)
        self.assertTrue(hyperbolic.interior[hyperbolic.origin])
        self.assertEqual(len(hyperbolic.g0_neighbors[hyperbolic.origin]), 7)
        self.assertEqual(len(hyperbolic.edges_g0), len(hyperbolic.edges_g1))

    def test_schlafli_rejections(self):
        with self.assertRaises(ValidationError):
            lattice.build_schlafli_patch(5, 2)
        with self.assertRaises(CapExceededError):
            lattice.build_schlafli_patch(7, 7, generation_cap=6)


if __name__ == '__main__':
    unittest.main()
