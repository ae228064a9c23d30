"""
Tests for bundled models and the shipped corpus.
"""
import unittest
from pathlib import Path

from src.core.algebra import wedge
from src.core.constants import Sector
from src.core.exceptions import ValidationError
from src.core.loader import load_beltrami, load_model
from src.plugins import BUNDLED_CONFIGS, bundled_model, bundled_model_config
from src.plugins.affine import AffineModel
from src.plugins.iwasawa import IWASAWA_CONFIG, IwasawaModel
from src.plugins.kodaira_thurston import KodairaThurstonModel
from src.plugins.torus import TorusModel

CORPUS = Path(__file__).resolve().parents[2] / "corpus"

class TestBundledModels(unittest.TestCase):
    """Test models shipped with the package."""

    def test_all_bundled_models_validate(self):
        """Test that every bundled model loads and validates."""
        for name in BUNDLED_CONFIGS:
            model = bundled_model(name)
            self.assertEqual(model.name, name)

    def test_lookup(self):
        """Test lookup by name."""
        self.assertIs(bundled_model_config("iwasawa"), IWASAWA_CONFIG)
        self.assertIsNone(bundled_model("nope"))
        self.assertIsNone(bundled_model_config("nope"))

    def test_structures(self):
        """Test the defining structure equations."""
        kt = KodairaThurstonModel()
        self.assertEqual(kt.d(kt.frame(2)), wedge(kt.frame(1), kt.frame(1, Sector.ANTIHOL)))
        affine = AffineModel()
        self.assertEqual(affine.d(affine.frame(2)), wedge(affine.frame(1), affine.frame(2)))
        torus = TorusModel(3)
        self.assertFalse(torus.d(torus.frame(2)))

    def test_torus_dimensions(self):
        """Test torus dimension checks and expected Hodge numbers."""
        with self.assertRaises(ValueError):
            TorusModel(4)
        self.assertEqual(TorusModel(3).expected_hodge_number(1, 2), 9)

    def test_nakamura_helper(self):
        """Test the Nakamura family helper."""
        model = IwasawaModel()
        self.assertEqual(model.nakamura(3).order, 3)
        self.assertEqual(model.nakamura().terms, model.family("nakamura").terms)

class TestCorpus(unittest.TestCase):
    """Test the files under corpus/."""

    def test_models(self):
        """Test that every corpus model but the broken one validates."""
        for name in ("torus3", "iwasawa", "kodaira_thurston", "affine2", "chart1"):
            model = load_model(CORPUS / f"{name}.json")
            self.assertEqual(model.name, name)
        with self.assertRaises(ValidationError):
            load_model(CORPUS / "broken.json")

    def test_corpus_matches_bundled(self):
        """Test that corpus model files agree with the bundled structures."""
        for name in ("iwasawa", "kodaira_thurston", "affine2"):
            from_file = load_model(CORPUS / f"{name}.json")
            bundled = bundled_model(name)
            for label, g in bundled.generators():
                self.assertEqual(from_file.d(g), bundled.d(g), (name, label))

    def test_beltrami_files(self):
        """Test that corpus Beltrami files agree with the bundled families."""
        model = IwasawaModel()
        for name in ("integrable", "nakamura", "nonintegrable"):
            series = load_beltrami(CORPUS / f"beltrami_{name}.json", model)
            self.assertEqual(series.name, name)
            self.assertEqual(series.terms, model.family(name).terms)

if __name__ == '__main__':
    unittest.main()
