"""
Tests for the JSON codec.
"""
import hashlib
import json
import os
import tempfile
import unittest
from pathlib import Path

from src.core.algebra import Form
from src.core.exceptions import ParseError
from src.core.scalars import make_scalar, value_ring
from src.utils.codec import (
    file_digest, form_to_config, parse_beltrami_config, parse_form,
    parse_form_label, parse_model_config, read_json
)

CORPUS = Path(__file__).resolve().parents[2] / "corpus"

class TestModelDocuments(unittest.TestCase):
    """Test model document parsing."""

    def test_iwasawa(self):
        """Test structure constants of the Iwasawa model."""
        parsed = parse_model_config(read_json(CORPUS / "iwasawa.json"))
        self.assertEqual(parsed["dim"], 3)
        self.assertEqual(parsed["backend"], "invariant")
        self.assertEqual(parsed["structure"][3], [(make_scalar(-1), (1, 2))])

    def test_chart(self):
        """Test chart documents."""
        parsed = parse_model_config(read_json(CORPUS / "chart1.json"))
        self.assertEqual(parsed["backend"], "chart")
        self.assertEqual(parsed["maxdeg"], 6)
        self.assertIsNone(parse_model_config({"dim": 1, "backend": "chart"})["maxdeg"])
        with self.assertRaises(ParseError):
            parse_model_config({"dim": 1, "backend": "chart", "maxdeg": "6"})

    def test_schema_errors(self):
        """Test rejected model documents."""
        bad = [
            {},
            {"dim": 0},
            {"dim": "2"},
            {"dim": 2, "backend": "lattice"},
            {"dim": 2, "structure": {"3": []}},
            {"dim": 2, "structure": {"1": [{"coeff": "1", "factors": [1, 0]}]}},
            {"dim": 2, "structure": {"1": [{"coeff": "1", "factors": [1, 2, 2]}]}},
            {"dim": 2, "structure": {"1": [{"coeff": "0.5", "factors": [1, 2]}]}},
            {"dim": 1, "backend": "chart"},
        ]
        for data in bad:
            with self.assertRaises(ParseError, msg=str(data)):
                parse_model_config(data)

class TestBeltramiDocuments(unittest.TestCase):
    """Test Beltrami document parsing."""

    def test_nakamura(self):
        """Test the bundled Nakamura document."""
        order, terms = parse_beltrami_config(read_json(CORPUS / "beltrami_nakamura.json"))
        self.assertEqual(order, 6)
        self.assertEqual(sorted(terms), [1, 2])
        self.assertEqual(terms[2], [(3, 3, make_scalar(-1))])

    def test_schema_errors(self):
        """Test rejected Beltrami documents."""
        bad = [
            {"terms": {}},
            {"order": 0},
            {"order": 2, "terms": {"0": []}},
            {"order": 2, "terms": {"x": []}},
            {"order": 2, "terms": {"1": [{"row": 1}]}},
        ]
        for data in bad:
            with self.assertRaises(ParseError, msg=str(data)):
                parse_beltrami_config(data)

class TestFormDocuments(unittest.TestCase):
    """Test form documents and labels."""

    def setUp(self):
        """Set up test fixtures."""
        self.ring = value_ring()

    def test_parse_form(self):
        """Test a form file."""
        form = parse_form(read_json(CORPUS / "omegabar1.json"), 3, self.ring)
        self.assertEqual(form, Form.monomial(3, self.ring, antihol=[1]))

    def test_bidegree_mismatch(self):
        """Test that terms must match the declared bidegree."""
        data = {"bidegree": [1, 0], "terms": [{"hol": [1, 2], "antihol": []}]}
        with self.assertRaises(ParseError):
            parse_form(data, 2, self.ring)

    def test_labels(self):
        """Test form labels."""
        self.assertEqual(parse_form_label("w1^wb2", 2, self.ring), Form.monomial(2, self.ring, [1], [2]))
        self.assertEqual(parse_form_label("wb2^w1", 2, self.ring), -Form.monomial(2, self.ring, [1], [2]))
        for text in ("w1^w1", "x1", "w3", "w"):
            with self.assertRaises(ParseError, msg=text):
                parse_form_label(text, 2, self.ring)

    def test_form_to_config(self):
        """Test serialisation of a constant form."""
        form = Form.monomial(2, self.ring, [2], [1], "1/2-i")
        config = form_to_config(form)
        self.assertEqual(config["bidegree"], [1, 1])
        self.assertEqual(config["terms"], [{"hol": [2], "antihol": [1], "coeff": "1/2-i"}])

class TestFiles(unittest.TestCase):
    """Test file helpers."""

    def test_read_json_errors(self):
        """Test missing and malformed files."""
        with tempfile.TemporaryDirectory() as tmp:
            with self.assertRaises(ParseError):
                read_json(os.path.join(tmp, "missing.json"))
            broken = os.path.join(tmp, "broken.json")
            with open(broken, "w", encoding="utf-8") as f:
                f.write("{not json")
            with self.assertRaises(ParseError):
                read_json(broken)
            listing = os.path.join(tmp, "list.json")
            with open(listing, "w", encoding="utf-8") as f:
                json.dump([1, 2], f)
            with self.assertRaises(ParseError):
                read_json(listing)

    def test_file_digest(self):
        """Test SHA-256 digests of input files."""
        path = CORPUS / "torus3.json"
        self.assertEqual(file_digest(path), hashlib.sha256(path.read_bytes()).hexdigest())

if __name__ == '__main__':
    unittest.main()
