import unittest
from unittest import mock

from support import golden

from engine_errors import DomainError, UsageError
from sesquiad import defined_sum, validate_morphism
from sheaf import (Verdict, common_kernel_check, essential_spectrum, gamma_morphism,
                   global_sections, is_conservative, is_tame, localized_morphism, materialize,
                   o_of_subset, sections, stalk, stalk_sesquiad)
from spectrum import basic_open, spec_c


class TestIdempotentSheaf(unittest.TestCase):
    def setUp(self):
        self.a = golden("idempotent")
        self.s = spec_c(self.a)

    def test_stalks_are_bounded(self):
        for point in self.s.points:
            st = stalk(self.a, point)
            self.assertEqual(st.size, 2)
            self.assertFalse(st.exact)

    def test_global_sections(self):
        gamma = global_sections(self.a, spectrum=self.s)
        self.assertEqual(gamma.size, 4)
        self.assertFalse(gamma.exact)
        self.assertEqual(gamma.constant, (0, 1, 2))
        self.assertEqual(gamma.names[:3], ("0", "1", "e"))

    def test_split_sum_is_defined(self):
        gamma = materialize(global_sections(self.a, spectrum=self.s))
        self.assertEqual(gamma.sesquiad.size, 4)
        self.assertEqual(defined_sum(gamma.sesquiad, [(1, 2), (1, 3)]), 1)

    def test_not_conservative(self):
        self.assertIs(is_conservative(self.a), Verdict.FALSE)
        self.assertTrue(common_kernel_check(self.a, self.s))


class TestFieldSheaves(unittest.TestCase):
    def test_squares_in_f7(self):
        a = golden("f7-squares")
        gamma = global_sections(a)
        self.assertEqual(gamma.size, 7)
        self.assertTrue(gamma.exact)
        self.assertIs(is_conservative(a), Verdict.FALSE)
        self.assertEqual(essential_spectrum(a).points, frozenset({0}))

    def test_ring_shortcut(self):
        gamma = global_sections(golden("z3-field"))
        self.assertEqual(gamma.shortcut, "ring")
        self.assertEqual(gamma.size, 3)


class TestUnitsOfZ15Sheaf(unittest.TestCase):
    def setUp(self):
        self.a = golden("z15-units")
        self.s = spec_c(self.a)

    def test_stalks(self):
        generic = stalk(self.a, self.s.points[0])
        self.assertTrue(generic.is_zero_ring())
        self.assertEqual(generic.size, 1)
        k3 = stalk(self.a, self.s.points[2])
        self.assertTrue(k3.exact)
        self.assertEqual(k3.size, 3)
        self.assertEqual(stalk_sesquiad(k3).size, 3)

    def test_global_sections(self):
        gamma = global_sections(self.a, spectrum=self.s)
        self.assertEqual(gamma.size, 15)
        self.assertTrue(gamma.exact)
        ring = materialize(gamma).sesquiad.ring
        self.assertEqual(ring.cardinality(), 15)
        self.assertEqual(ring.describe()["torsion_invariants"], [15])

    def test_essential_spectrum(self):
        ess = essential_spectrum(self.a, spectrum=self.s)
        self.assertEqual(ess.points, frozenset({1, 2}))
        self.assertEqual(ess.undecided, frozenset())
        self.assertTrue(ess.exact)

    def test_unclosed_sections_leave_points_undecided(self):
        failure = DomainError("NonMaterializable", "section set is not closed under multiplication")
        with mock.patch("sheaf.materialize", side_effect=failure):
            ess = essential_spectrum(self.a, spectrum=self.s)
            verdict = is_tame(self.a, {0, 1, 2}, spectrum=self.s)
        self.assertEqual(ess.points, frozenset())
        self.assertEqual(ess.undecided, frozenset({0, 1, 2}))
        self.assertFalse(ess.exact)
        self.assertIs(verdict, Verdict.UNKNOWN)

    def test_basic_opens_are_tame(self):
        opens = set()
        for x in range(self.a.size):
            for y in range(x + 1, self.a.size):
                u = basic_open(self.s, [(x, y)])
                if u:
                    opens.add(u)
        self.assertIn(frozenset({0, 1, 2}), opens)
        for u in opens:
            with self.subTest(points=sorted(u)):
                self.assertIs(is_tame(self.a, u, spectrum=self.s), Verdict.TRUE)

    def test_open_required(self):
        with self.assertRaises(DomainError) as ctx:
            sections(self.a, {1}, spectrum=self.s)
        self.assertEqual(ctx.exception.code, "NotOpen")
        with self.assertRaises(UsageError) as ctx:
            o_of_subset(self.a, set(), spectrum=self.s)
        self.assertEqual(ctx.exception.code, "EmptySubset")

    def test_bad_depth(self):
        with self.assertRaises(UsageError):
            stalk(self.a, self.s.points[0], depth=-1)


class TestInvolutionSheaf(unittest.TestCase):
    def setUp(self):
        self.a = golden("tau-involution")
        self.s = spec_c(self.a)

    def test_integral_monoid_shortcut(self):
        gamma = global_sections(self.a, spectrum=self.s)
        self.assertEqual(gamma.shortcut, "integral-monoid")
        self.assertEqual(gamma.size, 3)
        self.assertIs(is_conservative(self.a), Verdict.TRUE)

    def test_closed_point_is_not_tame(self):
        c = self.s.index("{1,τ}")
        self.assertEqual(o_of_subset(self.a, {c}, spectrum=self.s).sesquiad.size, 3)
        self.assertIs(is_tame(self.a, {c}, spectrum=self.s), Verdict.FALSE)
        self.assertIs(is_tame(self.a, self.s.all_points(), spectrum=self.s), Verdict.TRUE)


class TestMorphismSheaves(unittest.TestCase):
    def setUp(self):
        self.m = validate_morphism(golden("z6-units"), golden("z3-field"), (0, 1, 2))

    def test_localized_morphism_is_local(self):
        target = spec_c(self.m.target)
        for point in target.points:
            local = localized_morphism(self.m, point)
            self.assertTrue(local.local)
            self.assertTrue(local.exact)

    def test_section_map(self):
        phi = gamma_morphism(self.m)
        self.assertEqual(phi.source.size, 3)
        self.assertEqual(phi.target.size, 3)
        self.assertEqual(len(phi.mapping), phi.source.size)
        self.assertEqual(phi.injective, None not in phi.mapping and len(set(phi.mapping)) == 3)


class TestIdempotence(unittest.TestCase):
    def test_sections_of_sections(self):
        for name in ("idempotent", "f7-squares", "z15-units"):
            with self.subTest(name=name):
                gamma = global_sections(golden(name))
                again = global_sections(materialize(gamma).sesquiad)
                self.assertEqual(again.size, gamma.size)


if __name__ == '__main__':
    unittest.main()
