"""
Tests for the invariant suite
"""

# Standard Library
from unittest import TestCase
from unittest.mock import patch

# sitemix
from sitemix import app_settings, constants
from sitemix.models import ParameterDomainError
from sitemix.services.validation import CheckResult, ValidationFailure, ValidationReport, ValidationSuite, run_validate


class RunValidateTest(TestCase):
    """Test the full suite on small lattices"""

    def setUp(self):
        """Keep the random sample counts small"""
        self.samples_patcher = patch.object(app_settings, "SITEMIX_VALIDATION_SAMPLES", 100)
        self.bcs_patcher = patch.object(app_settings, "SITEMIX_VALIDATION_BCS_SETTINGS", 4)
        self.samples_patcher.start()
        self.bcs_patcher.start()

    def tearDown(self):
        """Stop patching settings"""
        self.samples_patcher.stop()
        self.bcs_patcher.stop()

    def test_all_checks_pass(self):
        """Every invariant holds up to four sites"""
        report = run_validate(max_L=4, seed=0)
        failures = [(result.name, result.worst, result.error) for result in report.failures]
        self.assertEqual(failures, [])
        self.assertTrue(report.passed)
        report.raise_for_failures()

    def test_every_check_is_reported(self):
        """One row per check, each having looked at some cases"""
        report = run_validate(max_L=4, seed=1)
        names = [result.name for result in report.results]
        self.assertEqual(len(names), len(set(names)))
        self.assertIn("anticommutation", names)
        self.assertIn("wootters_equivalence", names)
        self.assertIn("bcs_pairing_sum_rule", names)
        self.assertIn("nagaoka_oracle", names)
        for result in report.results:
            if result.name != "finite_size_trend":
                self.assertGreater(result.cases, 0, result.name)

    def test_all_checks_pass_up_to_ten_sites(self):
        """Oracle checks at the full sizes: norm derivative, finite-size trend and BCS on six and eight sites"""
        report = run_validate(max_L=10, seed=5)
        failures = [(result.name, result.worst, result.error) for result in report.failures]
        self.assertEqual(failures, [])
        results = {result.name: result for result in report.results}
        # three amplitudes, each comparing L = 4 -> 6 -> 8 -> 10
        self.assertEqual(results["finite_size_trend"].cases, 9)
        # L = 4, 6, 8 at three amplitudes
        self.assertEqual(results["normalization_derivative"].cases, 9)
        # 4 settings on each of L = 4, 6, 8, every site
        self.assertEqual(results["bcs_pairing_sum_rule"].cases, 4 * (4 + 6 + 8))
        self.assertEqual(results["bcs_double_occupancy"].cases, 4 * 3)
        for result in report.results:
            self.assertGreater(result.cases, 0, result.name)

    def test_deterministic(self):
        """The same seed renders the same bytes"""
        first = run_validate(max_L=3, seed=7).render()
        second = run_validate(max_L=3, seed=7).render()
        self.assertEqual(first, second)

    def test_max_L_range(self):
        """max_L must lie in 2..10"""
        for max_L in (1, 11):
            with self.subTest(max_L=max_L):
                with self.assertRaises(ParameterDomainError):
                    run_validate(max_L=max_L, seed=0)


class ReportTest(TestCase):
    """Test report bookkeeping and rendering"""

    def test_record_tracks_worst(self):
        """The largest deviation wins and NaN always fails"""
        result = CheckResult(name="demo", tolerance=1e-3)
        result.record(1e-5)
        result.record(1e-4)
        result.record(1e-6)
        self.assertEqual((result.worst, result.cases), (1e-4, 3))
        self.assertTrue(result.passed)
        result.record(float("nan"))
        self.assertFalse(result.passed)

    def test_render(self):
        """Header, then one row per check"""
        report = ValidationReport(max_L=2, seed=0)
        report.results.append(CheckResult(name="ok", tolerance=1e-12, worst=0.0, cases=3))
        report.results.append(CheckResult(name="bad", tolerance=1e-12, worst=0.5, cases=1))
        lines = report.render(constants.FORMAT_TSV).splitlines()
        self.assertEqual(lines[0], "check\tstatus\ttolerance\tworst_deviation\tcases")
        self.assertEqual(lines[1], "ok\tPASS\t1.0e-12\t0.000e+00\t3")
        self.assertEqual(lines[2], "bad\tFAIL\t1.0e-12\t5.000e-01\t1")
        self.assertFalse(report.passed)
        with self.assertRaisesRegex(ValidationFailure, "bad"):
            report.raise_for_failures()

    def test_crashing_check_is_a_failure(self):
        """An exception inside a check is reported, not propagated"""

        def check_broken():
            raise ValueError("boom")

        suite = ValidationSuite(max_L=2, seed=0)
        with patch.object(suite, "checks", return_value=[check_broken]):
            with self.assertLogs("sitemix.services.validation", level="ERROR"):
                report = suite.run()
        self.assertEqual(len(report.results), 1)
        self.assertEqual(report.results[0].name, "broken")
        self.assertEqual(report.results[0].error, "boom")
        self.assertFalse(report.passed)
