import unittest

from support import golden

from engine_errors import DomainError, UsageError
from sesquiad import validate_morphism
from spectrum import (Congruence, basic_open, closed_point_criterion, closed_points, closure,
                      covering_edges, generic_point, is_congruence, is_irreducible, is_open,
                      is_prime, is_simple, minimal_open, nilpotent_congruence, nilradical,
                      product_spectrum_check, pullback, reduce, simple_by_maximal_ideals,
                      spec_c, spec_z)

FINITE_GOLDEN = ("idempotent", "klein", "f7-squares", "z15-units", "z4-nilpotent",
                 "z6-units", "z3-field", "tau-involution", "f1", "idempotent-pair")


class TestCongruences(unittest.TestCase):
    def test_restricted_growth(self):
        c = Congruence.from_classes(["x", "y", "x"])
        self.assertEqual(c.class_of, (0, 1, 0))
        self.assertEqual(c.blocks(), [(0, 2), (1,)])
        self.assertTrue(Congruence.diagonal(3) <= c)
        self.assertFalse(c <= Congruence.diagonal(3))

    def test_prime_checks(self):
        a = golden("idempotent")
        self.assertTrue(is_prime(a, (0, 1, 0)))
        self.assertTrue(is_congruence(a, (0, 0, 0)))
        self.assertFalse(is_prime(a, (0, 0, 0)))
        with self.assertRaises(DomainError) as ctx:
            is_prime(a, (0, 0, 1))
        self.assertEqual(ctx.exception.code, "NotACongruence")


class TestIdempotentSpectrum(unittest.TestCase):
    def setUp(self):
        self.a = golden("idempotent")
        self.s = spec_c(self.a)

    def test_points(self):
        self.assertEqual(self.s.labels(), ["{0,e}", "{1,e}"])
        self.assertEqual(self.s.strategy, "partitions")

    def test_discrete_order(self):
        self.assertEqual(covering_edges(self.s), [])
        self.assertEqual(closed_points(self.s), frozenset({0, 1}))
        self.assertTrue(nilradical(self.a, self.s).is_diagonal())
        self.assertFalse(is_irreducible(self.a, self.s))


class TestUnitsOfZ15(unittest.TestCase):
    def setUp(self):
        self.a = golden("z15-units")
        self.s = spec_c(self.a)

    def test_points(self):
        self.assertEqual(self.s.labels(), ["Δ", "{1,11} {2,7} {4,14} {8,13}",
                                           "{1,4,7,13} {2,8,11,14}"])

    def test_strategies_agree(self):
        self.assertEqual(spec_c(self.a, "ring").points, self.s.points)
        self.assertEqual(spec_c(self.a, "group").points, self.s.points)

    def test_order(self):
        self.assertTrue(self.s.leq(0, 1) and self.s.leq(0, 2))
        self.assertFalse(self.s.leq(1, 2))
        self.assertEqual(covering_edges(self.s), [(0, 1), (0, 2)])
        self.assertEqual(closed_points(self.s), frozenset({1, 2}))
        self.assertEqual(closure(self.s, 0), frozenset({0, 1, 2}))
        self.assertEqual(minimal_open(self.s, 2), frozenset({0, 2}))

    def test_opens(self):
        self.assertTrue(is_open(self.s, {0}))
        self.assertFalse(is_open(self.s, {1}))
        index = self.a.table.index
        self.assertEqual(basic_open(self.s, [(index("1"), index("2"))]), frozenset({0, 1, 2}))
        self.assertEqual(basic_open(self.s, [(index("1"), index("4"))]), frozenset({0, 1}))

    def test_point_lookup(self):
        self.assertEqual(self.s.index("Δ"), 0)
        with self.assertRaises(UsageError):
            self.s.index("{1,2}")
        with self.assertRaises(UsageError):
            self.s.index(7)

    def test_generic_points(self):
        self.assertEqual(generic_point(self.s, {0, 1, 2}), 0)
        self.assertEqual(generic_point(self.s, {2}), 2)
        with self.assertRaises(DomainError) as ctx:
            generic_point(self.s, {1, 2})
        self.assertEqual(ctx.exception.code, "NotIrreducible")
        with self.assertRaises(DomainError):
            generic_point(self.s, {0})

    def test_closed_point_criterion(self):
        self.assertTrue(closed_point_criterion(self.a, self.s.points[2]))
        self.assertFalse(closed_point_criterion(self.a, self.s.points[0]))
        self.assertFalse(simple_by_maximal_ideals(self.a))


class TestOtherSpectra(unittest.TestCase):
    def test_klein(self):
        a = golden("klein")
        s = spec_c(a)
        self.assertEqual(len(s), 5)
        self.assertEqual(s.strategy, "group")
        self.assertEqual(set(spec_c(a, "partitions").points), set(s.points))
        self.assertEqual(spec_z(a).primes, ((0,),))

    def test_involution(self):
        s = spec_c(golden("tau-involution"))
        self.assertEqual(s.labels(), ["Δ", "{1,τ}"])
        self.assertTrue(s.leq(0, 1))

    def test_nilpotent_element(self):
        a = golden("z4-nilpotent")
        s = spec_c(a)
        self.assertEqual(s.labels(), ["{0,2}"])
        self.assertEqual(s.strategy, "ring")
        self.assertTrue(is_irreducible(a, s))
        reduced = reduce(a, s)
        self.assertEqual(reduced.size, 2)
        self.assertEqual(len(spec_c(reduced)), len(s))

    def test_simple(self):
        z3 = golden("z3-field")
        self.assertTrue(is_simple(z3))
        self.assertTrue(simple_by_maximal_ideals(z3))

    def test_zariski_spectrum(self):
        z = spec_z(golden("idempotent"))
        self.assertEqual(z.primes, ((0,), (0, 2)))
        self.assertEqual(z.labels(), ["{0}", "{0,e}"])

    def test_bad_strategy(self):
        with self.assertRaises(UsageError):
            spec_c(golden("idempotent"), "guess")
        with self.assertRaises(UsageError):
            spec_c(golden("idempotent"), "group")


class TestFunctoriality(unittest.TestCase):
    def test_pullback_is_prime(self):
        z6, z3 = golden("z6-units"), golden("z3-field")
        m = validate_morphism(z6, z3, (0, 1, 2))
        source = spec_c(z6)
        for point in spec_c(z3).points:
            pulled = pullback(m, point)
            self.assertTrue(is_prime(z6, pulled))
            self.assertIn(pulled, source.points)

    def test_product_spectrum(self):
        f1 = golden("f1")
        self.assertTrue(product_spectrum_check(f1, f1))

    def test_nilradical_matches_nilpotents(self):
        for name in FINITE_GOLDEN:
            with self.subTest(name=name):
                a = golden(name)
                self.assertEqual(nilradical(a), nilpotent_congruence(a))


if __name__ == '__main__':
    unittest.main()
