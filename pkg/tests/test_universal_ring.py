import os
import sys
import unittest
from unittest import mock

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from engine_errors import LimitError
from engine_settings import get_settings, set_settings
from lattice_core import hnf_rows
from universal_ring import (Fraction, LocalizedRing, integer_ring, is_field, is_integral_ring,
                            is_nilpotent, product_ring, residue_ring, ring_ideals_finite,
                            ring_spectrum_finite, tensor_ring)


class TestFiniteRings(unittest.TestCase):
    def test_residue_ring(self):
        ring = residue_ring([6])
        self.assertEqual(ring.cardinality(), 6)
        self.assertEqual(len(ring.elements()), 6)
        self.assertEqual(ring.mul((4,), (5,)), (2,))
        self.assertEqual(ring.power((2,), 3), (2,))

    def test_describe(self):
        description = residue_ring([2, 3]).describe()
        self.assertEqual(description, {
            "dimension": 2,
            "cardinality": 6,
            "torsion_invariants": [6],
            "free_rank": 0,
        })
        self.assertEqual(integer_ring().describe()["free_rank"], 1)
        self.assertIsNone(integer_ring().cardinality())

    def test_units(self):
        ring = residue_ring([15])
        self.assertEqual(ring.inverse((2,)), (8,))
        self.assertIsNone(ring.inverse((3,)))
        self.assertTrue(ring.is_unit((14,)))

    def test_annihilator_and_quotient(self):
        ring = residue_ring([12])
        self.assertEqual(ring.annihilator((4,)).index(), 3)
        self.assertEqual(ring.quotient(hnf_rows([(4,)], 1)).cardinality(), 4)
        self.assertEqual(ring.ideal([(8,)]).index(), 4)

    def test_products(self):
        self.assertEqual(product_ring([residue_ring([2]), residue_ring([3])]).cardinality(), 6)
        self.assertEqual(tensor_ring(residue_ring([4]), residue_ring([6])).cardinality(), 2)

    def test_fields(self):
        self.assertTrue(is_field(residue_ring([7])))
        self.assertFalse(is_field(residue_ring([6])))
        self.assertFalse(is_field(residue_ring([4])))
        self.assertFalse(is_field(integer_ring()))

    def test_ring_limit(self):
        saved = get_settings()
        try:
            set_settings(saved.override(ring_limit=10))
            with self.assertRaises(LimitError):
                residue_ring([12]).elements()
        finally:
            set_settings(saved)
        with self.assertRaises(LimitError):
            integer_ring().elements()


class TestIdeals(unittest.TestCase):
    def test_ideals_of_z12(self):
        ideals = ring_ideals_finite(residue_ring([12]))
        self.assertEqual(sorted(i.index() for i in ideals), [1, 2, 3, 4, 6, 12])

    def test_spectrum_of_z12(self):
        primes = ring_spectrum_finite(residue_ring([12]))
        self.assertEqual(sorted(p.residue_size for p in primes), [2, 3])

    def test_spectrum_of_field(self):
        primes = ring_spectrum_finite(residue_ring([5]))
        self.assertEqual([p.residue_size for p in primes], [5])


class TestIntegralAndNilpotent(unittest.TestCase):
    def test_integral(self):
        self.assertTrue(is_integral_ring(integer_ring()))
        self.assertFalse(is_integral_ring(product_ring([integer_ring(), integer_ring()])))
        self.assertTrue(is_integral_ring(residue_ring([5])))
        self.assertFalse(is_integral_ring(residue_ring([9])))

    def test_integral_without_primitive_element(self):
        with mock.patch("universal_ring._minimal_polynomial", return_value=None):
            with self.assertRaises(LimitError) as ctx:
                is_integral_ring(integer_ring())
            self.assertEqual(ctx.exception.code, "PrimitiveElementNotFound")
            self.assertTrue(is_integral_ring(residue_ring([5])))

    def test_nilpotent(self):
        z4 = residue_ring([4])
        self.assertTrue(is_nilpotent(z4, (2,)))
        self.assertFalse(is_nilpotent(z4, (1,)))
        self.assertTrue(is_nilpotent(integer_ring(), (0,)))
        self.assertFalse(is_nilpotent(integer_ring(), (3,)))
        self.assertTrue(is_nilpotent(residue_ring([8]), (6,)))


class TestLocalization(unittest.TestCase):
    def test_finite_localization(self):
        loc = LocalizedRing(residue_ring([6]), [(2,)])
        self.assertEqual(loc.cardinality(), 3)
        self.assertEqual(loc.stabilized_at, 1)
        self.assertEqual(loc.fraction((1,), 1), Fraction((2,), 0))
        self.assertEqual(len(loc.elements()), 3)

    def test_nilpotent_denominator_kills_everything(self):
        loc = LocalizedRing(residue_ring([4]), [(2,)])
        self.assertTrue(loc.is_zero_ring())

    def test_infinite_localization(self):
        loc = LocalizedRing(integer_ring(), [(2,)])
        self.assertFalse(loc.is_finite())
        self.assertEqual(loc.fraction((4,), 1), Fraction((2,), 0))
        half = loc.fraction((1,), 1)
        self.assertEqual(half, Fraction((1,), 1))
        self.assertEqual(loc.mul_fraction(half, loc.fraction((2,))), loc.one())
        self.assertEqual(loc.add_fraction(half, half), loc.one())
        self.assertEqual(loc.value((3,), [2]), Fraction((3,), 2))


if __name__ == '__main__':
    unittest.main()
