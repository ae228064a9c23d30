"""
Tests for the identity suite.
"""
import random
import unittest

from src.core.identities import (
    basis_forms, chart_suite, commutator_check, identity_suite,
    invariant_suite, random_form, random_vector_form
)
from src.core.loader import load_model
from src.core.models import ChartModel

class TestGenerators(unittest.TestCase):
    """Test random and basis inputs."""

    def test_basis_forms(self):
        """Test that every bidegree contributes its basis."""
        self.assertEqual(len(basis_forms(load_model("torus2"))), 16)

    def test_seeded(self):
        """Test that random inputs only depend on the seed."""
        model = load_model("iwasawa")
        a = random_form(random.Random(3), model)
        b = random_form(random.Random(3), model)
        self.assertEqual(a, b)
        phi = random_vector_form(random.Random(3), 3)
        self.assertEqual(phi, random_vector_form(random.Random(3), 3))

class TestInvariantSuite(unittest.TestCase):
    """Test the identity suite on invariant models."""

    def test_commutator(self):
        """Test the bracket against the commutator of contractions."""
        check = commutator_check(load_model("iwasawa"), 25, seed=1)
        self.assertTrue(check.passed)
        self.assertEqual(check.cases, 25)

    def test_torus(self):
        """Test every identity on a flat torus."""
        model = load_model("torus2")
        report = invariant_suite(model, model.family("mixed"), order=3, t_values=["1/10"], samples=10)
        self.assertTrue(report.passed, report.to_dict())
        self.assertTrue(report.integrability["integrable"])

    def test_kodaira_thurston(self):
        """Test every identity on an integrable Kodaira-Thurston family."""
        model = load_model("kodaira_thurston")
        report = invariant_suite(model, model.family("integrable"), order=2, t_values=["1/10+1/7i"], samples=10)
        self.assertTrue(report.passed, report.to_dict())

    def test_bundled_families_at_order_six(self):
        """Test every identity at order 6 and both default values."""
        cases = [
            ("iwasawa", "nakamura"),
            ("affine2", "integrable"),
            ("torus3", "mixed"),
            ("kodaira_thurston", "integrable"),
        ]
        for name, family in cases:
            model = load_model(name)
            report = invariant_suite(model, model.family(family), order=6, samples=20)
            checks = report.to_dict()["checks"]
            self.assertTrue(report.passed, f"{name}/{family}: {checks}")
            self.assertTrue(report.integrability["integrable"], name)
            for tag in ("series N=6", "t=1/10", "t=1/10+1/7i"):
                self.assertIn(f"master[{tag}]", checks)
                self.assertGreater(checks[f"master[{tag}]"]["cases"], 0)

    def test_non_integrable_skips_specializations(self):
        """Test that specializations are skipped without integrability."""
        model = load_model("kodaira_thurston")
        report = invariant_suite(model, model.family("nonintegrable"), order=2, t_values=[], samples=5)
        checks = report.to_dict()["checks"]
        self.assertFalse(report.integrability["integrable"])
        self.assertIsNotNone(checks["p0_specialization[series N=2]"]["skipped"])
        self.assertIsNotNone(checks["0q_specialization[series N=2]"]["skipped"])
        self.assertIsNone(checks["master[series N=2]"]["skipped"])

    def test_dispatch_needs_beltrami(self):
        """Test that invariant models need a Beltrami series."""
        with self.assertRaises(ValueError):
            identity_suite(load_model("torus1"))

class TestChartSuite(unittest.TestCase):
    """Test the identity suite on a chart."""

    def test_chart(self):
        """Test the frame formula and holomorphicity on a one-dimensional chart."""
        report = chart_suite(ChartModel(1, 6))
        self.assertTrue(report.passed, report.to_dict())
        names = [c.name for c in report.checks]
        self.assertEqual(names, ["dvz", "holomorphicity"])
        self.assertEqual(identity_suite(ChartModel(1, 6)).to_dict(), report.to_dict())

if __name__ == '__main__':
    unittest.main()
