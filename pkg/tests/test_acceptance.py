"""End-to-end checks of the worked examples through the command surface"""

import unittest

from support import golden, golden_text

from cli import run
from sheaf import global_sections, materialize

FINITE_GOLDEN = ("idempotent", "klein", "f7-squares", "z15-units", "z4-nilpotent",
                 "z6-units", "z3-field", "tau-involution", "f1", "idempotent-pair")
PRIMES_TO_30 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)


def result(command, name=None, **flags):
    report, code = run(command, golden_text(name) if name else None, **flags)
    if code != 0:
        raise AssertionError(f"{command} {name} failed: {report.get('error')}")
    return report["result"]


class TestIdempotentExample(unittest.TestCase):
    def test_two_discrete_points(self):
        spectrum = result("spectrum", "idempotent")
        self.assertEqual([p["label"] for p in spectrum["points"]], ["{0,e}", "{1,e}"])
        self.assertEqual(spectrum["order"], [])

    def test_stalks_and_sections(self):
        for point in ("0", "1"):
            self.assertEqual(result("stalk", "idempotent", point=point)["size"], 2)
        gamma = result("gamma", "idempotent")
        self.assertEqual(gamma["sections"], 4)
        self.assertTrue(any(s.endswith("= 1") for s in gamma["materialized"]["defined_sums"]))
        self.assertEqual(result("conservative", "idempotent")["verdict"], "false")

    def test_empty_zeta_product(self):
        zeta = result("zeta", "idempotent", s=2)
        self.assertEqual(zeta["factors"], [])
        self.assertEqual(zeta["unbounded"], ["{0,e}", "{1,e}"])
        self.assertEqual(zeta["value"], "1.0")


class TestSquaresInF7(unittest.TestCase):
    def test_single_point_seven_sections(self):
        self.assertEqual([p["label"] for p in result("spectrum", "f7-squares")["points"]], ["Δ"])
        conservative = result("conservative", "f7-squares")
        self.assertEqual(conservative["sections"], 7)
        self.assertEqual(conservative["verdict"], "false")


class TestUnitsOfZ15(unittest.TestCase):
    def test_spectrum(self):
        spectrum = result("spectrum", "z15-units")
        labels = [p["label"] for p in spectrum["points"]]
        self.assertEqual(labels[0], "Δ")
        self.assertEqual(sorted(spectrum["order"]), sorted([["Δ", labels[1]], ["Δ", labels[2]]]))

    def test_sections_and_zeta(self):
        gamma = result("gamma", "z15-units")
        self.assertEqual(gamma["sections"], 15)
        self.assertEqual(gamma["materialized"]["ring"]["torsion_invariants"], [15])
        essential = result("essential", "z15-units")
        self.assertEqual(essential["excluded"], ["Δ"])
        self.assertEqual(len(essential["points"]), 2)
        self.assertEqual(result("zeta", "z15-units")["finite"], [3, 5])


class TestKleinMonoid(unittest.TestCase):
    def test_fibre_bijection(self):
        self.assertEqual(len(result("spectrum", "klein")["points"]), 5)
        (fibre,) = result("fibers", "klein")["fibers"]
        self.assertEqual(fibre["subgroups"], 5)
        self.assertTrue(fibre["bijective"])
        self.assertEqual(sorted(len(h) for h in fibre["tags"].values()), [1, 2, 2, 2, 4])


class TestNilradical(unittest.TestCase):
    def test_ring_side_agrees(self):
        for name in FINITE_GOLDEN:
            with self.subTest(name=name):
                self.assertTrue(result("nilradical", name)["agree"])
                self.assertTrue(result("reduce", name)["spectrum_preserved"])


class TestTameness(unittest.TestCase):
    def test_closed_point_of_involution(self):
        (entry,) = result("tame", "tau-involution", points="{1,τ}")["sets"]
        self.assertEqual(entry["verdict"], "false")
        self.assertEqual(entry["sections"], 3)

    def test_units_of_z15(self):
        sets = result("tame", "z15-units")["sets"]
        self.assertEqual(sets[0]["points"], [p["label"] for p in result("spectrum", "z15-units")["points"]])
        self.assertTrue(all(entry["verdict"] == "true" for entry in sets))


class TestXbFamily(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.report = result("xb", base=2, max_n=30)

    def test_closed_points(self):
        expected = ["τ~0"] + [f"τ^{p}~1" for p in PRIMES_TO_30]
        self.assertEqual(self.report["closed"], expected)

    def test_z_closed_points(self):
        z_closed = [p["label"] for p in self.report["points"]
                    if p["z_closed"] and p["label"].startswith("τ^")]
        self.assertEqual(z_closed, [f"τ^{p}~1" for p in (2, 3, 5, 7, 13, 17, 19)])

    def test_zeta(self):
        self.assertEqual(result("zeta", family="xb", base=2, max_n=13)["finite"],
                         [2, 3, 7, 31, 127, 8191])


class TestTitsModels(unittest.TestCase):
    def test_general_linear(self):
        for n, order in ((2, 2), (3, 6), (4, 24)):
            with self.subTest(n=n):
                report = result("tits", group="gl", n=n)
                self.assertEqual(report["count"], order)
                self.assertTrue(report["match"])

    def test_symplectic_is_reported(self):
        report = result("tits", group="sp", n=1)
        self.assertEqual(report["reference"], 2)
        self.assertEqual(report["match"], report["count"] == 2)


class TestSectionsAreStable(unittest.TestCase):
    def test_sections_of_sections(self):
        for name in ("idempotent", "f7-squares", "z15-units"):
            with self.subTest(name=name):
                gamma = global_sections(golden(name))
                self.assertEqual(global_sections(materialize(gamma).sesquiad).size, gamma.size)


class TestDiscrepancyReport(unittest.TestCase):
    def test_published_claim_is_quoted(self):
        report = result("morphism", "z6-units", second=golden_text("z3-field"), map="5=2")
        reference = report["reference"]
        self.assertIn("is injective, but the induced morphism on sections", reference["quote"])
        self.assertEqual(reference["claimed"], {"injective": True, "gamma_injective": False})
        self.assertTrue(report["injective"])
        self.assertEqual(reference["computed"],
                         {"injective": report["injective"], "gamma_injective": report["gamma"]["injective"]})
        self.assertEqual(reference["agrees"], not report["gamma"]["injective"])

    def test_user_claim_is_consistent(self):
        report = result("morphism", "z6-units", second=golden_text("z3-field"),
                        map="5=2", expect_gamma_injective="yes")
        claim = report["claim"]
        self.assertEqual(claim["statement"], "φ_Γ is injective")
        self.assertEqual(claim["agrees"], report["gamma"]["injective"])
        self.assertEqual(claim["computed"] == claim["statement"], claim["agrees"])


if __name__ == '__main__':
    unittest.main()
