import unittest

import sympy

from support import golden

from engine_errors import LimitError, UsageError
from presented_f1 import (F1Point, PresentedSesquiad, canonical, check_point, evaluate,
                          f1_points, from_sympy, gl_model, o_model, permutation_assignments,
                          sp_model, split_form, weyl_order, weyl_report)

x, y = sympy.symbols("x y")


class TestPolynomials(unittest.TestCase):
    def test_exponent_vectors(self):
        poly = from_sympy(x * y - 1, [x, y])
        self.assertEqual(poly, ((-1, (0, 0)), (1, (1, 1))))
        self.assertEqual(evaluate(poly, [1, 1]), 0)
        self.assertEqual(evaluate(poly, [0, 1]), -1)

    def test_integer_coefficients_only(self):
        with self.assertRaises(UsageError) as ctx:
            from_sympy(x / 2, [x])
        self.assertEqual(ctx.exception.code, "NonIntegerCoefficient")

    def test_canonical_order(self):
        p = PresentedSesquiad(("y", "x"), (from_sympy(y - x, [y, x]),))
        q, order = canonical(p)
        self.assertEqual(q.generators, ("x", "y"))
        self.assertEqual(order, [1, 0])
        self.assertEqual(evaluate(q.relations[0], [0, 1]), 1)


class TestPointSearch(unittest.TestCase):
    def test_orthogonal_idempotents(self):
        p = PresentedSesquiad(("x", "y"), (from_sympy(x * y, [x, y]),),
                              (("s", from_sympy(x + y, [x, y])),))
        points = f1_points(p)
        self.assertEqual(sorted(pt.assignment for pt in points),
                         [(("x", 0), ("y", 0)), (("x", 0), ("y", 1)), (("x", 1), ("y", 0))])
        self.assertTrue(all(check_point(p, pt) for pt in points))
        self.assertFalse(check_point(p, F1Point((("x", 1), ("y", 1)))))

    def test_no_generators(self):
        self.assertEqual(f1_points(PresentedSesquiad(())), [F1Point(())])

    def test_too_many_generators(self):
        with self.assertRaises(LimitError):
            f1_points(PresentedSesquiad(tuple(f"g{i}" for i in range(65))))
        with self.assertRaises(LimitError):
            gl_model(8)


class TestTitsModels(unittest.TestCase):
    def test_gl_points_are_permutations(self):
        for n in (2, 3, 4):
            with self.subTest(n=n):
                points = f1_points(gl_model(n))
                self.assertEqual(set(points), set(permutation_assignments(n)))
                self.assertEqual(len(points), weyl_order("gl", n))

    def test_gl_golden_model(self):
        model = golden("gl2-model")
        self.assertEqual(model.name, "GL2")
        self.assertEqual(len(model.generators), 5)

    def test_sp_report(self):
        report = weyl_report("sp", 1)
        self.assertEqual(report["reference"], 2)
        self.assertEqual(report["generators"], 4)
        self.assertEqual(report["match"], report["count"] == 2)
        self.assertEqual(report["count"], len(f1_points(sp_model(1))))

    def test_orthogonal(self):
        self.assertEqual(split_form(3), sympy.Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))
        report = weyl_report("o", 2)
        self.assertEqual(report["reference"], 2)
        self.assertEqual(report["count"], 2)
        self.assertEqual(o_model(2).name, "O2")

    def test_bad_models(self):
        with self.assertRaises(UsageError):
            weyl_report("e8", 1)
        with self.assertRaises(UsageError):
            gl_model(0)
        with self.assertRaises(UsageError):
            o_model(1)


if __name__ == '__main__':
    unittest.main()
