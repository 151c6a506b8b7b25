"""End-to-end checks of the maxbound command-line tool.

Usage: cli_test.py <path-to-maxbound> <source-dir>
"""

import csv
import io
import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

BINARY = None
SOURCE = None
SCHEMA = None


def run(*args, env=None):
    full_env = dict(os.environ)
    full_env.pop("MAXBOUND_CONFIG", None)
    if env:
        full_env.update(env)
    proc = subprocess.run([BINARY, *args], capture_output=True, text=True, env=full_env, timeout=300)
    return proc.returncode, proc.stdout, proc.stderr


def csv_rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


class Gamma(unittest.TestCase):
    def test_rows_and_header(self):
        code, out, _ = run("gamma", "--n-max", "2")
        self.assertEqual(code, 0)
        self.assertRegex(out.splitlines()[0], r"^# maxbound \S+ seed=42 config_hash=[0-9a-f]{16}$")
        rows = csv_rows(out)
        self.assertEqual(len(rows), 2)
        self.assertEqual(float(rows[0]["gamma_n"]), 0.5)
        self.assertAlmostEqual(float(rows[1]["gamma_n"]), 0.5 + math.log(2) / 4, places=15)
        self.assertAlmostEqual(float(rows[1]["g_closed_at_0"]), float(rows[1]["gamma_n"]), places=15)

    def test_zero_rows_is_a_usage_error(self):
        code, _, err = run("gamma", "--n-max", "0")
        self.assertEqual(code, 2)
        self.assertIn("n-max", err)


class GnTable(unittest.TestCase):
    def test_grid(self):
        code, out, _ = run("gn-table", "--n-max", "3", "--t-min", "0", "--t-max", "1", "--t-points", "3")
        self.assertEqual(code, 0)
        rows = csv_rows(out)
        self.assertEqual(len(rows), 4 * 3)
        at = {(int(r["n"]), float(r["t"])): r for r in rows}
        self.assertAlmostEqual(float(at[(1, 1.0)]["g_closed"]), 0.25, places=15)

    def test_bad_range(self):
        self.assertEqual(run("gn-table", "--t-min", "-1")[0], 2)


class Constants(unittest.TestCase):
    def test_json_validates_and_epsilon_positive(self):
        code, out, _ = run("constants", "--p", "1.5,2", "--format", "json", "--n-max", "50")
        self.assertEqual(code, 0)
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        p15, p2 = doc["reports"]
        self.assertGreater(p15["best_epsilon"], 0)
        self.assertEqual(p2["rows"][0]["epsilon"], 0)
        self.assertEqual(p2["best_n"], 2)

    def test_csv_summary_and_detail_rows(self):
        code, out, _ = run("constants", "--p", "2", "--n-max", "3")
        self.assertEqual(code, 0)
        rows = csv_rows(out)
        self.assertEqual([r["row"] for r in rows], ["detail"] * 3 + ["summary"])
        self.assertEqual(float(rows[0]["epsilon"]), 0)
        self.assertAlmostEqual(float(rows[1]["epsilon"]), (1 + (3 / 15) ** 2 * (math.sqrt(1 + math.log(2) / 2) - 1) ** 2) ** 0.5 - 1, places=12)
        self.assertEqual(rows[3]["best_n"], "2")
        self.assertEqual(rows[3]["c1"], "2")

    def test_empty_or_invalid_grid(self):
        self.assertEqual(run("constants", "--p", "")[0], 2)
        self.assertEqual(run("constants", "--p", "1")[0], 2)
        self.assertEqual(run("constants", "--format", "xml")[0], 2)

    def test_small_p_flagged(self):
        code, out, _ = run("constants", "--p", "1.005", "--n-max", "5")
        self.assertEqual(code, 0)
        self.assertIn("out_of_validated_range", out)


class Verify(unittest.TestCase):
    def test_lemma5_passes_and_validates(self):
        code, out, _ = run("verify", "--suite", "lemma5", "--functions", "15", "--points", "5")
        self.assertEqual(code, 0)
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        self.assertEqual(doc["summary"]["lemma5"]["violations"], 0)
        self.assertEqual(doc["checks"][0]["function"], "indicator")

    def test_all_suites_on_an_input_file(self):
        path = os.path.join(SOURCE, "samples", "staircase.stepfn")
        code, out, _ = run("verify", "--suite", "all", "--input", path, "--points", "5")
        self.assertEqual(code, 0)
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        self.assertEqual(sorted(doc["summary"]), ["growth", "lemma5", "lemma7", "main", "thm2"])
        self.assertTrue(all(c["function"] == "input" for c in doc["checks"]))

    def test_zero_function_is_rejected_not_a_violation(self):
        path = os.path.join(SOURCE, "samples", "zero.stepfn")
        code, out, err = run("verify", "--suite", "thm2", "--input", path)
        self.assertEqual(code, 2)
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        self.assertIn("zero", doc["input_error"])
        self.assertNotIn("checks", doc)

    def test_small_p_warns(self):
        code, out, err = run("verify", "--suite", "main", "--p", "1.005", "--functions", "2", "--points", "2")
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        self.assertTrue(any("validated range" in w for w in doc["warnings"]))
        self.assertIn("warning", err)
        self.assertEqual(doc["summary"]["main"]["violations"], 0)
        self.assertEqual(code, 0)

    def test_unknown_suite(self):
        code, _, err = run("verify", "--suite", "lemma6")
        self.assertEqual(code, 2)
        self.assertIn("unknown suite", err)

    def test_reports_are_reproducible(self):
        args = ("verify", "--suite", "lemma7", "--functions", "5", "--points", "3")
        a = json.loads(run(*args)[1])
        b = json.loads(run(*args)[1])
        a.pop("timestamp")
        b.pop("timestamp")
        self.assertEqual(json.dumps(a, sort_keys=True), json.dumps(b, sort_keys=True))


class Search(unittest.TestCase):
    def test_single_piece(self):
        code, out, _ = run("search", "--p", "1.5", "--pieces", "1", "--iterations", "1")
        self.assertEqual(code, 0)
        doc = json.loads(out)
        jsonschema.validate(doc, SCHEMA)
        self.assertEqual(doc["label"], "empirical")
        self.assertFalse(doc["certified"])
        self.assertAlmostEqual(doc["min_ratio"], (1 + math.sqrt(2)) ** (2 / 3), places=8)

    def test_eight_pieces_at_p2_stay_above_the_floor(self):
        code, out, _ = run("search", "--p", "2", "--pieces", "8", "--iterations", "2000", "--seed", "42")
        self.assertEqual(code, 0)
        doc = json.loads(out)
        tol = doc["quadrature"]["tolerance"]
        self.assertGreaterEqual(doc["min_ratio"], doc["one_plus_epsilon"] - tol)
        self.assertTrue(doc["above_floor"])

    def test_bad_arguments(self):
        self.assertEqual(run("search", "--pieces", "0")[0], 2)
        self.assertEqual(run("search", "--iterations", "0")[0], 2)
        self.assertEqual(run("search", "--p", "1.5,2")[0], 2)


class Configuration(unittest.TestCase):
    def test_precedence_and_echo(self):
        with tempfile.TemporaryDirectory() as tmp:
            cfg = os.path.join(tmp, "run.cfg")
            with open(cfg, "w") as f:
                f.write("# test config\nseed = 7\nn_max = 3\n")
            _, out, _ = run("gamma", "--config", cfg)
            self.assertIn("seed=7", out.splitlines()[0])
            self.assertEqual(len(csv_rows(out)), 3)
            _, out, _ = run("gamma", "--config", cfg, "--seed", "9")
            self.assertIn("seed=9", out.splitlines()[0])
            _, out, _ = run("gamma", env={"MAXBOUND_CONFIG": cfg})
            self.assertIn("seed=7", out.splitlines()[0])
            self.assertEqual(run("gamma", "--config", os.path.join(tmp, "missing.cfg"))[0], 2)

    def test_out_directory(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = os.path.join(tmp, "results")
            code, out, _ = run("constants", "--format", "both", "--n-max", "5", "--out", target)
            self.assertEqual(code, 0)
            self.assertEqual(out, "")
            self.assertEqual(sorted(os.listdir(target)), ["constants.csv", "constants.json"])
            with open(os.path.join(target, "constants.json")) as f:
                jsonschema.validate(json.load(f), SCHEMA)

    def test_unknown_flag(self):
        self.assertEqual(run("gamma", "--bogus")[0], 2)


if __name__ == "__main__":
    BINARY = os.path.abspath(sys.argv[1])
    SOURCE = os.path.abspath(sys.argv[2])
    with open(os.path.join(SOURCE, "docs", "report.schema.json")) as f:
        SCHEMA = json.load(f)
    unittest.main(argv=[sys.argv[0], "-v"])
