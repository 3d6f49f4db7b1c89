import unittest

from fractions import Fraction

from pottsaf.exact_quad import ALPHA_SQUARED, SQRT2, ExactQuad, sqrt2_bounds


class ExactQuadTests(unittest.TestCase):

    def test_arithmetic(self):
        self.assertEqual(SQRT2 * SQRT2, 2)
        self.assertEqual(ALPHA_SQUARED * ALPHA_SQUARED.conjugate(), 2)
        self.assertEqual(ALPHA_SQUARED.norm(), 2)
        self.assertEqual(ALPHA_SQUARED * ALPHA_SQUARED.inverse(), 1)
        self.assertEqual(1 / SQRT2, ExactQuad(0, Fraction(1, 2)))
        self.assertEqual(ALPHA_SQUARED ** 2, ExactQuad(6, 4))
        self.assertEqual(ALPHA_SQUARED ** -1, ExactQuad(1, Fraction(-1, 2)))
        self.assertEqual(3 - SQRT2, ExactQuad(3, -1))
        self.assertEqual(Fraction(1, 2) * SQRT2 + 1, ExactQuad(1, Fraction(1, 2)))

    def test_sign_and_order(self):
        self.assertEqual(ExactQuad(0, 0).sign(), 0)
        self.assertEqual(ExactQuad(3, -2).sign(), 1)
        self.assertEqual(ExactQuad(-3, 2).sign(), -1)
        self.assertEqual(ExactQuad(1, -1).sign(), -1)
        self.assertTrue(SQRT2 < Fraction(1415, 1000))
        self.assertTrue(SQRT2 > Fraction(1414, 1000))
        self.assertTrue(ExactQuad(3, -2) < ExactQuad(1, -Fraction(1, 2)))

    def test_bounds(self):
        lo, hi = sqrt2_bounds(64)
        self.assertEqual(hi - lo, Fraction(1, 2 ** 64))
        self.assertTrue(lo * lo < 2 < hi * hi)
        for bits in (0, 1, 7, 200, 1000):
            lo, hi = sqrt2_bounds(bits)
            self.assertEqual(hi - lo, Fraction(1, 2 ** bits), bits)
            self.assertTrue(lo * lo < 2 < hi * hi, bits)
        self.assertEqual(sqrt2_bounds(3), (Fraction(11, 8), Fraction(12, 8)))
        lo, hi = ALPHA_SQUARED.bounds(100)
        self.assertTrue(lo <= hi)
        self.assertTrue(ExactQuad(lo) <= ALPHA_SQUARED <= ExactQuad(hi))
        self.assertEqual(ExactQuad(Fraction(1, 3)).bounds(), (Fraction(1, 3), Fraction(1, 3)))
        self.assertAlmostEqual(float(ALPHA_SQUARED), 3.414213562373095, places=12)

    def test_division_by_zero(self):
        with self.assertRaises(ZeroDivisionError):
            ExactQuad(0, 0).inverse()

    def test_dict(self):
        value = ExactQuad(Fraction(2907, 9), Fraction(-1531, 7))
        self.assertEqual(value.to_dict(), {'a': '323/1', 'b': '-1531/7'})
        self.assertEqual(ExactQuad.from_dict(value.to_dict()), value)


if __name__ == '__main__':
    unittest.main()
