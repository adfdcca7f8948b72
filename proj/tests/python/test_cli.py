# Copyright 2026 The Chainwatch Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end tests of the chainwatch CLI binary."""

import json
import math
import os
import subprocess
import tempfile
import unittest

import chainwatch as cw

CLI = os.environ["CHAINWATCH_BIN"]
PI = math.pi


def run(*args, env_extra=None, expect=0):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    proc = subprocess.run([CLI, *args], capture_output=True, text=True,
                          env=env)
    if expect is not None and proc.returncode != expect:
        raise AssertionError(
            f"exit {proc.returncode} != {expect}\nstdout: {proc.stdout}\n"
            f"stderr: {proc.stderr}")
    return proc


class CliTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.tmp.name, name)

    def write_config(self, name, doc):
        path = self.path(name)
        with open(path, "w") as fh:
            json.dump(doc, fh)
        return path

    def test_chain_shorthand_uniform(self):
        config = self.write_config("uniform.json",
                                   {"p": 0.5, "angles": [0.39269908169872414]})
        proc = run("chain", config, "--output", self.path("out.json"),
                   "--reproducible", "--no-oracle", "--no-venn")
        with open(self.path("out.json")) as fh:
            report = json.load(fh)
        entropies = [d["entropy_closed_form"] for d in report["detectors"]]
        self.assertAlmostEqual(entropies[0], 1.0, places=12)
        self.assertAlmostEqual(entropies[1], 1.0, places=12)
        self.assertEqual(proc.returncode, 0)

    def test_chain_deterministic_prep_oracle_green(self):
        # p = 0 is a deterministic preparation: every reported pair passes
        config = self.write_config("det.json",
                                   {"p": 0.0, "angles": [PI / 8, PI / 8]})
        run("chain", config, "--oracle", "--output", self.path("out.json"),
            "--reproducible")
        with open(self.path("out.json")) as fh:
            report = json.load(fh)
        entropies = [d["entropy_closed_form"] for d in report["detectors"]]
        self.assertAlmostEqual(entropies[0], 0.0, places=12)
        self.assertAlmostEqual(entropies[1], 0.60087603669285616, places=9)
        self.assertAlmostEqual(entropies[2], 0.81127812445913283, places=9)
        self.assertTrue(report["summary"]["within_tolerance"])
        self.assertLessEqual(report["summary"]["max_abs_diff"], 1e-9)

    def test_chain_explicit_random_unitaries_oracle_green(self):
        # explicit 3-level chain, deterministic preparation, two seeded
        # random unitaries: closed forms and engine agree everywhere
        unitaries = [cw.random_unitary(3, seed=5), cw.random_unitary(3, seed=6)]
        config = self.write_config(
            "explicit.json",
            {"amplitudes": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
             "unitaries": [[[[z.real, z.imag] for z in row] for row in u]
                           for u in unitaries]})
        proc = run("chain", config, "--oracle", "--output",
                   self.path("out.json"), "--reproducible")
        with open(self.path("out.json")) as fh:
            report = json.load(fh)
        self.assertTrue(report["summary"]["within_tolerance"])
        self.assertLessEqual(report["summary"]["max_abs_diff"], 1e-9)
        self.assertEqual(proc.returncode, 0)

    def test_chain_entropic_prep_oracle_violation_is_named(self):
        # an entropic preparation breaks the pairwise identities; the run
        # must exit nonzero and name the worst offender
        config = self.write_config("mixed.json",
                                   {"p": 0.5, "angles": [PI / 8, PI / 8]})
        proc = run("chain", config, "--oracle", "--output",
                   self.path("out.json"), "--reproducible", expect=3)
        self.assertIn("tolerance violation", proc.stderr)
        self.assertIn("largest |closed_form - oracle|", proc.stderr)
        with open(self.path("out.json")) as fh:
            report = json.load(fh)
        self.assertFalse(report["summary"]["within_tolerance"])
        self.assertAlmostEqual(report["summary"]["max_abs_diff"],
                               0.60087603669285616, places=9)

    def test_chain_reports_are_deterministic(self):
        config = self.write_config("det.json",
                                   {"p": 0.25, "angles": [PI / 8]})
        run("chain", config, "--output", self.path("a.json"), "--reproducible")
        run("chain", config, "--output", self.path("b.json"), "--reproducible")
        with open(self.path("a.json"), "rb") as fh:
            a = fh.read()
        with open(self.path("b.json"), "rb") as fh:
            b = fh.read()
        self.assertEqual(a, b)

    def test_chain_csv(self):
        config = self.write_config("csv.json",
                                   {"p": 0.0, "angles": [PI / 8, PI / 8]})
        run("chain", config, "--format", "csv", "--output",
            self.path("out.csv"), "--reproducible")
        with open(self.path("out.csv")) as fh:
            lines = fh.read().strip().split("\n")
        self.assertEqual(lines[0], "k,entropy_closed_form,entropy_oracle,"
                                   "abs_diff,p0,p1")
        self.assertEqual(len(lines), 4)

    def test_chain_config_errors(self):
        proc = run("chain", self.path("missing.json"), expect=2)
        self.assertIn("error", proc.stderr)
        bad = self.write_config("bad.json", {"p": 0.5, "amplitudes": []})
        run("chain", bad, expect=2)
        not_unitary = self.write_config(
            "nu.json", {"amplitudes": [[1.0, 0.0], [0.0, 0.0]],
                        "unitaries": [[[[0.9, 0.0], [0.0, 0.0]],
                                       [[0.0, 0.0], [1.0, 0.0]]]]})
        run("chain", not_unitary, expect=2)

    def test_dimension_cap_env(self):
        config = self.write_config("cap.json",
                                   {"p": 0.5, "angles": [0.1] * 10})
        proc = run("chain", config, env_extra={"CHAINWATCH_DIM_CAP": "1024"},
                   expect=4)
        self.assertIn("exceeds cap", proc.stderr)

    def test_zeno_csv(self):
        run("zeno", "--n", "1", "--p", "1", "--format", "csv", "--output",
            self.path("zeno.csv"))
        with open(self.path("zeno.csv")) as fh:
            lines = fh.read().strip().split("\n")
        self.assertEqual(lines[0], "n,q_simulated,q_closed_form,abs_diff")
        fields = lines[1].split(",")
        self.assertEqual(fields[0], "1")
        self.assertAlmostEqual(float(fields[1]), 0.5, places=14)
        self.assertAlmostEqual(float(fields[2]), 0.5, places=14)

    def test_zeno_json(self):
        run("zeno", "--n", "4", "--p", "1", "--output", self.path("zeno.json"),
            "--reproducible")
        with open(self.path("zeno.json")) as fh:
            doc = json.load(fh)
        self.assertAlmostEqual(doc["q_closed_form"], 0.86427669529663687,
                               places=12)
        self.assertEqual(len(doc["entropies"]), 5)

    def test_antizeno_json(self):
        run("antizeno", "--n", "5", "--trials", "100000", "--seed", "7",
            "--output", self.path("az.json"), "--reproducible")
        with open(self.path("az.json")) as fh:
            doc = json.load(fh)
        for key in ("n", "trials", "seed", "sample_mean", "std_error",
                    "theory", "sigmas"):
            self.assertIn(key, doc)
        self.assertAlmostEqual(doc["theory"], (2 / PI) ** 5, places=12)
        self.assertLessEqual(doc["sigmas"], 5.0)

    def test_sweep_csv(self):
        run("sweep", "--theta", "0.39269908169872414", "--steps", "2",
            "--grid", "101", "--format", "csv", "--output",
            self.path("sweep.csv"))
        with open(self.path("sweep.csv")) as fh:
            lines = fh.read().strip().split("\n")
        self.assertEqual(lines[0], "p,H0,H1,H2")
        self.assertEqual(len(lines), 102)
        middle = lines[51].split(",")  # p = 0.5
        for h in middle[1:]:
            self.assertAlmostEqual(float(h), 1.0, places=12)

    def test_selftest(self):
        proc = run("selftest", "--chains", "10", "--seed", "3")
        self.assertIn("all checks passed", proc.stdout)

    def test_usage_error(self):
        proc = run("zeno", "--format", "xml", expect=None)
        self.assertNotEqual(proc.returncode, 0)


if __name__ == "__main__":
    unittest.main()
