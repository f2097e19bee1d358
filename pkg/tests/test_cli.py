import io
import json
import unittest
from contextlib import redirect_stdout

from support import golden, golden_path, golden_text

from cli import ENGINE_VERSION, emit_dot, format_report, main, run
from spectrum import spec_c


class TestReports(unittest.TestCase):
    def test_success_envelope(self):
        report, code = run("validate", golden_text("idempotent"))
        self.assertEqual(code, 0)
        self.assertEqual(report["status"], "success")
        self.assertEqual(report["command"], "validate")
        self.assertEqual(report["engine_version"], ENGINE_VERSION)
        self.assertEqual(report["result"]["elements"], ["0", "1", "e"])

    def test_spectrum_report(self):
        report, code = run("spectrum", golden_text("z15-units"))
        self.assertEqual(code, 0)
        result = report["result"]
        self.assertEqual([p["label"] for p in result["points"]],
                         ["Δ", "{1,11} {2,7} {4,14} {8,13}", "{1,4,7,13} {2,8,11,14}"])
        self.assertEqual(len(result["order"]), 2)
        self.assertEqual(len(result["closed"]), 2)

    def test_gamma_report(self):
        report, code = run("gamma", golden_text("idempotent"))
        self.assertEqual(code, 0)
        result = report["result"]
        self.assertEqual(result["sections"], 4)
        self.assertFalse(result["exact"])
        self.assertEqual(result["materialized"]["elements"], 4)
        self.assertTrue(result["materialized"]["defined_sums"])

    def test_conservative_report(self):
        report, _ = run("conservative", golden_text("f7-squares"))
        self.assertEqual(report["result"]["sections"], 7)
        self.assertEqual(report["result"]["verdict"], "false")

    def test_zeta_family(self):
        report, code = run("zeta", family="xb", base=2, max_n=13)
        self.assertEqual(code, 0)
        self.assertEqual(report["result"]["finite"], [2, 3, 7, 31, 127, 8191])

    def test_tits_group(self):
        report, code = run("tits", group="gl", n=3)
        self.assertEqual(code, 0)
        self.assertEqual(report["result"]["count"], 6)
        self.assertTrue(report["result"]["match"])

    def test_tits_document(self):
        report, code = run("tits", golden_text("gl2-model"))
        self.assertEqual(code, 0)
        self.assertEqual(report["result"]["count"], 2)
        self.assertEqual(report["result"]["reference"], 2)

    def test_morphism_claim(self):
        report, code = run("morphism", golden_text("z6-units"), second=golden_text("z3-field"),
                           map="5=2", expect_gamma_injective="no")
        self.assertEqual(code, 0)
        result = report["result"]
        self.assertEqual(result["map"], {"0": "0", "1": "1", "5": "2"})
        self.assertTrue(result["local"])
        claim = result["claim"]
        self.assertEqual(claim["agrees"], not result["gamma"]["injective"])
        self.assertEqual(claim["statement"], "φ_Γ is not injective")
        self.assertIn("reference", result)

    def test_morphism_without_reference(self):
        report, code = run("morphism", golden_text("z3-field"), second=golden_text("z3-field"), map="2=2")
        self.assertEqual(code, 0)
        self.assertTrue(report["result"]["injective"])
        self.assertNotIn("reference", report["result"])


class TestExitCodes(unittest.TestCase):
    def test_usage(self):
        report, code = run("spectrum")
        self.assertEqual(code, 1)
        self.assertEqual(report["error"]["code"], "MissingDocument")
        _, code = run("spectrum", golden_text("x2"))
        self.assertEqual(code, 1)
        _, code = run("nonsense", golden_text("idempotent"))
        self.assertEqual(code, 1)

    def test_document_error(self):
        report, code = run("validate", "format 1\nkind table\n")
        self.assertEqual(code, 1)
        self.assertEqual(report["error"]["kind"], "usage")

    def test_domain(self):
        report, code = run("morphism", golden_text("z6-units"), second=golden_text("z3-field"),
                           map="5=1")
        self.assertEqual(code, 2)
        self.assertEqual(report["error"]["kind"], "domain")

    def test_limit(self):
        report, code = run("spectrum", golden_text("z15-units"), strategy="partitions",
                           max_elements=5)
        self.assertEqual(code, 3)
        self.assertEqual(report["error"]["code"], "TooLarge")

    def test_settings_restored(self):
        run("spectrum", golden_text("z15-units"), strategy="partitions", max_elements=5)
        _, code = run("spectrum", golden_text("z15-units"), strategy="partitions")
        self.assertEqual(code, 0)


class TestOutput(unittest.TestCase):
    def test_dot(self):
        dot = emit_dot(spec_c(golden("z15-units")))
        self.assertTrue(dot.startswith("digraph spectrum {"))
        self.assertEqual(dot.count("[label="), 3)
        self.assertEqual(dot.count("->"), 2)

    def test_json_is_deterministic(self):
        first = format_report(run("essential", golden_text("z15-units"))[0], as_json=True)
        second = format_report(run("essential", golden_text("z15-units"))[0], as_json=True)
        self.assertEqual(first, second)
        self.assertEqual(json.loads(first)["result"]["points"],
                         ["{1,11} {2,7} {4,14} {8,13}", "{1,4,7,13} {2,8,11,14}"])

    def test_text_rendering(self):
        text = format_report(run("validate", golden_text("idempotent"))[0])
        self.assertIn("status: success", text)
        self.assertIn("- e", text)


class TestMain(unittest.TestCase):
    def call(self, *argv):
        out = io.StringIO()
        with redirect_stdout(out):
            code = main(list(argv))
        return code, out.getvalue()

    def test_json_output(self):
        code, out = self.call("spectrum", golden_path("klein"), "--json")
        self.assertEqual(code, 0)
        self.assertEqual(len(json.loads(out)["result"]["points"]), 5)

    def test_dot_output(self):
        code, out = self.call("spectrum", golden_path("z15-units"), "--dot")
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith("digraph spectrum {"))

    def test_repeat_runs_match(self):
        first = self.call("gamma", golden_path("z15-units"), "--json")
        second = self.call("gamma", golden_path("z15-units"), "--json")
        self.assertEqual(first, second)

    def test_bad_arguments(self):
        code, out = self.call("spectrum", golden_path("idempotent"), "--strategy", "guess")
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(out)["error"]["code"], "BadArguments")

    def test_missing_file(self):
        code, out = self.call("validate", golden_path("does-not-exist"))
        self.assertEqual(code, 1)
        self.assertEqual(json.loads(out)["error"]["code"], "UnreadableFile")


if __name__ == '__main__':
    unittest.main()
