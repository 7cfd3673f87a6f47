import math
import tempfile
import unittest
from pathlib import Path

import numpy as np

from oscint import methodRegistry
from oscint.errors import ConfigError, OscintError, UnknownIdentifier
from oscint.schemas import RunResult
from oscint.services import bench
from oscint.services.integrator import Trajectory
from oscint.services.problems import harmonic_oscillator

TEST_PROBLEM = "test-harmonic"
FAST_PROBLEM = "test-fast-harmonic"


def _result(method: str, n_steps: int, error: float, note: str | None = None) -> RunResult:
    return RunResult(
        method=method,
        problem=TEST_PROBLEM,
        n_steps=n_steps,
        stages=1,
        work=n_steps,
        log10_work=math.log10(n_steps),
        error=error,
        accuracy=bench.accuracy_from_error(error),
        wall_seconds=0.125,
        note=note,
    )


def setUpModule():
    methodRegistry.register_problem(TEST_PROBLEM, lambda: harmonic_oscillator(1.0, x_end=10.0), replace=True)
    methodRegistry.register_problem(FAST_PROBLEM, lambda: harmonic_oscillator(10.0, x_end=20.0), replace=True)


def tearDownModule():
    methodRegistry.unregister_problem(TEST_PROBLEM)
    methodRegistry.unregister_problem(FAST_PROBLEM)


class ErrorMetricTests(unittest.TestCase):
    def setUp(self):
        self.xs = np.linspace(0.0, 1.0, 11)
        self.exact = lambda x: np.array([math.cos(x), math.sin(x)])
        self.ys = np.array([self.exact(x) for x in self.xs])

    def test_exact_trajectory_has_zero_error(self):
        traj = Trajectory(xs=self.xs, ys=self.ys, h=0.1, method="exact")
        self.assertEqual(bench.max_interval_error(traj, self.exact), 0.0)
        self.assertEqual(bench.endpoint_error(traj, self.exact), 0.0)

    def test_single_perturbation(self):
        ys = self.ys.copy()
        ys[4, 1] += 1e-5
        traj = Trajectory(xs=self.xs, ys=ys, h=0.1, method="perturbed")
        self.assertAlmostEqual(bench.max_interval_error(traj, self.exact), 1e-5, delta=1e-15)
        self.assertEqual(bench.endpoint_error(traj, self.exact), 0.0)

    def test_accuracy_cap_and_nan(self):
        self.assertEqual(bench.accuracy_from_error(0.0), 15.0)
        self.assertEqual(bench.accuracy_from_error(1e-20), 15.0)
        self.assertAlmostEqual(bench.accuracy_from_error(1e-3), 3.0, places=12)
        self.assertTrue(math.isnan(bench.accuracy_from_error(math.nan)))


class SweepConfigTests(unittest.TestCase):
    def test_steps_must_increase(self):
        with self.assertRaises(ConfigError):
            bench.build_sweep_config(problem=TEST_PROBLEM, methods=["fixed8"], steps=[200, 100])

    def test_needs_two_step_counts(self):
        with self.assertRaises(ConfigError):
            bench.build_sweep_config(problem=TEST_PROBLEM, methods=["fixed8"], steps=[200])

    def test_unknown_metric(self):
        with self.assertRaises(ConfigError):
            bench.build_sweep_config(problem=TEST_PROBLEM, methods=["fixed8"], steps=[100, 200], metric="mean")

    def test_unknown_method(self):
        config = bench.build_sweep_config(problem=TEST_PROBLEM, methods=["rk4"], steps=[100, 200])
        with self.assertRaises(UnknownIdentifier):
            bench.validate_sweep(config)

    def test_unknown_problem(self):
        config = bench.build_sweep_config(problem="pendulum", methods=["fixed8"], steps=[100, 200])
        with self.assertRaises(UnknownIdentifier):
            bench.validate_sweep(config)

    def test_metric_must_fit_problem(self):
        exact_metric = bench.build_sweep_config(problem="schrodinger-341", methods=["fixed8"], steps=[100, 200])
        with self.assertRaises(ConfigError):
            bench.validate_sweep(exact_metric)
        phase_metric = bench.build_sweep_config(
            problem=TEST_PROBLEM, methods=["fixed8"], steps=[100, 200], metric="phase-shift"
        )
        with self.assertRaises(ConfigError):
            bench.validate_sweep(phase_metric)


class RunSweepTests(unittest.TestCase):
    def _config(self, **overrides):
        values = dict(
            problem=TEST_PROBLEM,
            methods=["numerov", "fixed8"],
            steps=[100, 200, 400],
            record_timing=False,
        )
        values.update(overrides)
        return bench.build_sweep_config(**values)

    def test_cardinality_and_order(self):
        results = bench.run_sweep(self._config())
        self.assertEqual(len(results), 6)
        keys = [(row.method, row.n_steps) for row in results]
        self.assertEqual(keys, sorted(keys))
        for row in results:
            self.assertEqual(row.work, row.n_steps * row.stages)
            self.assertFalse(row.failed)
            self.assertTrue(math.isfinite(row.accuracy))

    def test_rerun_is_bit_identical(self):
        first = bench.render_csv(bench.run_sweep(self._config()))
        second = bench.render_csv(bench.run_sweep(self._config()))
        self.assertEqual(first, second)

    def test_numerov_order_four(self):
        results = bench.run_sweep(self._config(methods=["numerov"], steps=[200, 400, 800]))
        for exponent in bench.convergence_exponents(results, "numerov"):
            self.assertAlmostEqual(exponent, 4.0, delta=0.25)

    def test_failed_run_is_recorded(self):
        config = self._config(problem=FAST_PROBLEM, methods=["phasefit8"], steps=[20, 2000])
        results = bench.run_sweep(config)
        self.assertEqual(len(results), 2)
        failed, ok = results
        self.assertTrue(failed.failed)
        self.assertTrue(math.isnan(failed.accuracy))
        self.assertIn("DomainError", failed.note)
        self.assertFalse(ok.failed)
        self.assertIsNone(ok.note)
        self.assertEqual(ok.corrector_iterations, 0)

    def test_accuracy_at_work_interpolates(self):
        results = [_result("m", 100, 1e-4), _result("m", 1000, 1e-8)]
        self.assertAlmostEqual(bench.accuracy_at_work(results, "m", 2.5), 6.0, places=12)

    def test_worker_pool_matches_serial(self):
        config = bench.build_sweep_config(
            problem="schrodinger-163",
            methods=["phasefit8"],
            steps=[400, 800],
            metric="phase-shift",
            record_timing=False,
        )
        serial = bench.run_sweep(config)
        parallel = bench.run_sweep(config.model_copy(update={"workers": 2}))
        self.assertEqual([row.error for row in serial], [row.error for row in parallel])


class CsvTests(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.path = Path(self.tmp.name) / "out" / "sweep.csv"

    def tearDown(self):
        self.tmp.cleanup()

    def test_empty_results_write_header_only(self):
        bench.write_csv([], self.path)
        self.assertEqual(self.path.read_text(encoding="utf-8"), ",".join(bench.CSV_HEADER) + "\n")

    def test_line_count_and_endings(self):
        results = [_result(method, n, 10.0 ** -n / 7) for method in ("a", "b") for n in (3, 4, 5)]
        bench.write_csv(results, self.path)
        raw = self.path.read_bytes()
        self.assertNotIn(b"\r\n", raw)
        self.assertEqual(len(raw.decode("utf-8").splitlines()), 7)

    def test_round_trip_is_bit_exact(self):
        results = [
            _result("fixed8", 1000, 1 / 3),
            _result("fixed8", 2000, 2.220446049250313e-16),
            _result("numerov", 1000, math.pi * 1e-7),
            _result("numerov", 2000, math.nan, note="CorrectorDiverged: no convergence, x=1.5"),
        ]
        bench.write_csv(results, self.path)
        parsed = bench.read_csv(self.path)
        self.assertEqual(len(parsed), len(results))
        for original, loaded in zip(results, parsed):
            if math.isnan(original.error):
                self.assertTrue(math.isnan(loaded.error))
                self.assertEqual(loaded.note, original.note)
            else:
                self.assertEqual(loaded.error, original.error)
                self.assertEqual(loaded.accuracy, original.accuracy)
            self.assertEqual(loaded.log10_work, original.log10_work)

    def test_note_column_on_every_row(self):
        bench.write_csv([_result("fixed8", 1000, 1e-3)], self.path)
        header, row = (line.split(",") for line in self.path.read_text(encoding="utf-8").splitlines())
        self.assertEqual(len(header), 10)
        self.assertEqual(header[-1], "note")
        self.assertEqual(len(row), 10)
        self.assertEqual(row[-1], "")

    def test_failed_row_writes_nan(self):
        bench.write_csv([_result("numerov", 10, math.nan, note="failed")], self.path)
        row = self.path.read_text(encoding="utf-8").splitlines()[1].split(",")
        self.assertEqual(row[6], "NaN")
        self.assertEqual(row[-1], "failed")

    def test_write_error_names_path(self):
        blocker = Path(self.tmp.name) / "blocker"
        blocker.write_text("x", encoding="utf-8")
        target = blocker / "sweep.csv"
        with self.assertRaises(OscintError) as ctx:
            bench.write_csv([], target)
        self.assertIn(str(target), str(ctx.exception))


if __name__ == "__main__":
    unittest.main()
