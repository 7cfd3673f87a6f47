import json
import os
import tempfile
import unittest
from pathlib import Path
from unittest import mock

from oscint import config
from oscint.errors import ConfigError
from oscint.providers.symmetric8 import phase_fitted_method
from oscint.services import analysis
from oscint.services.problems import LONG_INTERVAL


class LoadConfigTests(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / "config.json"

    def tearDown(self):
        self.tmp.cleanup()

    def _write(self, payload):
        self.path.write_text(json.dumps(payload), encoding="utf-8")

    def test_missing_file_uses_defaults(self):
        with mock.patch.dict(os.environ, {"OSCINT_WORKERS": ""}):
            loaded = config.load_config(self.path)
        self.assertEqual(loaded.workers, config.DEFAULT_WORKERS)
        self.assertEqual(loaded.default_methods, config.DEFAULT_METHODS)
        self.assertEqual(loaded.output_dir, Path(self.tmp.name) / "results")
        self.assertEqual(loaded.steps_for("two-body"), config.DEFAULT_STEP_GRIDS["two-body"])

    def test_invalid_entries_fall_back(self):
        self._write(
            {
                "workers": "many",
                "default_methods": ["", "fixed8"],
                "step_grids": {"two-body": [100, 50], "custom": [10, 20, 40]},
                "accuracy_cap": -3,
            }
        )
        with mock.patch.dict(os.environ, {"OSCINT_WORKERS": ""}):
            loaded = config.load_config(self.path)
        self.assertEqual(loaded.workers, 1)
        self.assertEqual(loaded.default_methods, ["fixed8"])
        self.assertEqual(loaded.steps_for("two-body"), config.DEFAULT_STEP_GRIDS["two-body"])
        self.assertEqual(loaded.steps_for("custom"), [10, 20, 40])
        self.assertEqual(loaded.accuracy_cap, config.DEFAULT_ACCURACY_CAP)

    def test_environment_overrides_workers(self):
        self._write({"workers": 2})
        with mock.patch.dict(os.environ, {"OSCINT_WORKERS": "6"}):
            self.assertEqual(config.load_config(self.path).workers, 6)

    def test_environment_selects_config_file(self):
        self._write({"output_dir": "elsewhere"})
        with mock.patch.dict(os.environ, {"OSCINT_CONFIG": str(self.path), "OSCINT_WORKERS": ""}):
            loaded = config.load_config()
        self.assertEqual(loaded.output_dir, Path(self.tmp.name) / "elsewhere")

    def test_repository_config_is_valid(self):
        loaded = config.load_config(config.CONFIG_PATH)
        for grid in loaded.step_grids.values():
            self.assertGreaterEqual(len(grid), 2)


class SweepFileTests(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / "sweep.cfg"

    def tearDown(self):
        self.tmp.cleanup()

    def test_parses_keys_and_comments(self):
        self.path.write_text(
            "# inhomogeneous sweep\nproblem = inhomogeneous\nmethods=fixed8, phasefit8  # both\n\nsteps=16000,32000\n",
            encoding="utf-8",
        )
        values = config.parse_sweep_file(self.path)
        self.assertEqual(values["problem"], "inhomogeneous")
        self.assertEqual(config.split_list(values["methods"]), ["fixed8", "phasefit8"])
        self.assertEqual(config.parse_steps(values["steps"]), [16000, 32000])

    def test_unknown_key(self):
        self.path.write_text("solver=rk4\n", encoding="utf-8")
        with self.assertRaises(ConfigError):
            config.parse_sweep_file(self.path)

    def test_malformed_line(self):
        self.path.write_text("problem inhomogeneous\n", encoding="utf-8")
        with self.assertRaises(ConfigError):
            config.parse_sweep_file(self.path)

    def test_missing_file(self):
        with self.assertRaises(ConfigError):
            config.parse_sweep_file(self.path)

    def test_non_integer_steps(self):
        with self.assertRaises(ConfigError):
            config.parse_steps("100,2e3")


class DefaultGridTests(unittest.TestCase):
    def test_inhomogeneous_grid_stays_periodic_for_phase_fitting(self):
        coarsest = config.DEFAULT_STEP_GRIDS["inhomogeneous"][0]
        v = 10.0 * LONG_INTERVAL / coarsest
        self.assertTrue(analysis.is_periodic(phase_fitted_method(), v), msg=f"v={v}")

    def test_shipped_config_matches_defaults(self):
        shipped = json.loads(config.CONFIG_PATH.read_text(encoding="utf-8"))
        self.assertEqual(shipped["step_grids"], config.DEFAULT_STEP_GRIDS)


if __name__ == "__main__":
    unittest.main()
