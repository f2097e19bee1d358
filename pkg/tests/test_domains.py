import unittest

from support import golden

from domains import (e_hat, fibers, group_completion, is_semi_closed, quotient_field,
                     semi_closed_kernel)
from engine_errors import DomainError
from spectrum import spec_c


class TestQuotientFields(unittest.TestCase):
    def test_group_with_zero_is_its_own_field(self):
        field = quotient_field(golden("tau-involution"))
        self.assertEqual(field.table.size, 3)
        tau = field.embedding[2]
        self.assertEqual(field.inverse(tau), tau)

    def test_completion_at_prime(self):
        a = golden("idempotent")
        field = group_completion(a, (0, 2))
        self.assertEqual(field.table.size, 2)
        self.assertEqual(field.embedding, (0, 1, 0))

    def test_completion_collapses_idempotent(self):
        field = group_completion(golden("idempotent"))
        self.assertEqual(field.table.size, 2)
        self.assertEqual(field.embedding, (0, 1, 1))

    def test_requirements(self):
        with self.assertRaises(DomainError) as ctx:
            quotient_field(golden("idempotent"))
        self.assertEqual(ctx.exception.code, "NotIntegral")
        with self.assertRaises(DomainError) as ctx:
            quotient_field(golden("z15-units"))
        self.assertEqual(ctx.exception.code, "NotAMonoid")


class TestKleinFibres(unittest.TestCase):
    def setUp(self):
        self.a = golden("klein")
        self.s = spec_c(self.a)

    def test_single_fibre(self):
        found = fibers(self.a, self.s)
        self.assertEqual(len(found), 1)
        fibre = found[0]
        self.assertEqual(fibre.base, (0,))
        self.assertEqual(fibre.points, (0, 1, 2, 3, 4))
        self.assertEqual(fibre.subgroup_count, 5)
        self.assertTrue(fibre.bijective)
        self.assertEqual(sorted(len(members) for _, members in fibre.tags), [1, 2, 2, 2, 4])

    def test_semi_closed(self):
        top = self.s.index("{1,a,b,c}")
        self.assertEqual(e_hat(self.a, 0, self.s), self.s.all_points())
        self.assertEqual(e_hat(self.a, top, self.s), frozenset({top}))
        self.assertEqual(semi_closed_kernel(self.a, {0}, self.s), frozenset())
        self.assertEqual(semi_closed_kernel(self.a, {top}, self.s), frozenset({top}))
        self.assertTrue(is_semi_closed(self.a, self.s.all_points(), self.s))
        self.assertFalse(is_semi_closed(self.a, {0}, self.s))


class TestIdempotentFibres(unittest.TestCase):
    def test_two_fibres(self):
        a = golden("idempotent")
        found = fibers(a)
        self.assertEqual([f.base for f in found], [(0,), (0, 2)])
        self.assertTrue(all(f.bijective for f in found))


if __name__ == '__main__':
    unittest.main()
