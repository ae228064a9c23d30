"""
Tests for the bigraded exterior algebra.
"""
import random
import unittest

from src.core.algebra import (
    Form, FrameValuedForm, Monomial, conjugate, contract_endomorphism,
    contract_vector_form, normalize, substitute, wedge
)
from src.core.constants import Sector
from src.core.exceptions import BidegreeError, ModelMismatchError
from src.core.identities import random_form
from src.core.loader import load_model
from src.core.scalars import random_scalar, series_ring, value_ring

class TestForm(unittest.TestCase):
    """Test forms and products."""

    def setUp(self):
        """Set up test fixtures."""
        self.ring = value_ring()
        self.w1 = Form.frame(2, self.ring, 1)
        self.w2 = Form.frame(2, self.ring, 2)
        self.wb1 = Form.frame(2, self.ring, 1, Sector.ANTIHOL)
        self.wb2 = Form.frame(2, self.ring, 2, Sector.ANTIHOL)

    def test_normalize(self):
        """Test canonical ordering and signs."""
        self.assertEqual(normalize([(1, 1), (0, 1)]), (-1, Monomial((1,), (1,))))
        self.assertEqual(normalize([(0, 2), (0, 1)]), (-1, Monomial((1, 2), ())))
        self.assertEqual(normalize([(0, 1), (0, 1)]), (0, None))

    def test_wedge_anticommutes(self):
        """Test graded commutativity of 1-forms."""
        self.assertEqual(wedge(self.w1, self.w2), -wedge(self.w2, self.w1))
        self.assertEqual(wedge(self.wb1, self.w1), -wedge(self.w1, self.wb1))
        self.assertFalse(wedge(self.w1, self.w1))

    def test_bidegree(self):
        """Test bidegree bookkeeping."""
        a = wedge(self.w1, self.wb2)
        self.assertEqual(tuple(a.bidegree), (1, 1))
        mixed = self.w1 + wedge(self.w1, self.w2)
        self.assertFalse(mixed.is_pure)
        with self.assertRaises(BidegreeError):
            mixed.bidegree
        self.assertEqual(mixed.component(2, 0), wedge(self.w1, self.w2))
        with self.assertRaises(BidegreeError):
            a.expect_bidegree(q=0)

    def test_conjugate(self):
        """Test conjugation swaps sectors with the right sign."""
        self.assertEqual(conjugate(self.w1), self.wb1)
        a = wedge(self.w1, self.wb2).scale("i")
        self.assertEqual(conjugate(a), wedge(self.w2, self.wb1).scale("i"))
        self.assertEqual(conjugate(conjugate(a)), a)

    def test_frame_index_range(self):
        """Test that frame indices are checked."""
        with self.assertRaises(BidegreeError):
            Form.monomial(2, self.ring, hol=[3])

    def test_model_mismatch(self):
        """Test that forms of different dimension do not mix."""
        with self.assertRaises(ModelMismatchError):
            self.w1 + Form.frame(3, self.ring, 1)

    def test_interior(self):
        """Test contraction as an even derivation."""
        phi = FrameValuedForm(Sector.HOL, [self.wb1, Form.zero(2, self.ring)])
        self.assertEqual(phi.contract(self.w1), self.wb1)
        self.assertEqual(phi.contract(wedge(self.w1, self.w2)), wedge(self.wb1, self.w2))
        self.assertFalse(phi.contract(self.wb1))
        self.assertEqual(contract_vector_form(phi, self.w1), self.wb1)

    def test_identity_endomorphism_counts_factors(self):
        """Test that the identity endomorphism scales a (p,q)-form by p."""
        one = FrameValuedForm(Sector.HOL, [self.w1, self.w2])
        self.assertEqual(contract_endomorphism(one, wedge(self.w1, self.w2)), wedge(self.w1, self.w2).scale(2))
        self.assertEqual(contract_endomorphism(one, wedge(self.w1, self.wb2)), wedge(self.w1, self.wb2))
        self.assertFalse(contract_endomorphism(one, self.wb1))

    def test_substitute(self):
        """Test the algebra homomorphism on frame generators."""
        images = [self.w1 + self.wb1, self.w2]
        result = substitute(wedge(self.w1, self.w2), images, None)
        self.assertEqual(result, wedge(self.w1, self.w2) + wedge(self.wb1, self.w2))

class TestRandomizedLaws(unittest.TestCase):
    """Test algebraic laws on seeded random forms."""

    CASES = 40

    def setUp(self):
        """Set up test fixtures."""
        self.model = load_model("iwasawa")
        self.rng = random.Random(11)

    def _pair(self):
        return random_form(self.rng, self.model, 3), random_form(self.rng, self.model, 3)

    def test_derivation_law(self):
        """Test d(a^b) = da^b + (-1)^|a| a^db."""
        d = self.model.d
        for _ in range(self.CASES):
            a, b = self._pair()
            sign = (-1) ** sum(a.bidegree) if a else 1
            self.assertEqual(d(wedge(a, b)), wedge(d(a), b) + wedge(a, d(b)).scale(sign))

    def test_wedge_conjugate(self):
        """Test that conjugation is multiplicative."""
        for _ in range(self.CASES):
            a, b = self._pair()
            self.assertEqual(conjugate(wedge(a, b)), wedge(conjugate(a), conjugate(b)))

    def test_d_is_real(self):
        """Test that d commutes with conjugation."""
        for _ in range(self.CASES):
            a, _ = self._pair()
            self.assertEqual(conjugate(self.model.d(a)), self.model.d(conjugate(a)))

class TestSeriesRingAxioms(unittest.TestCase):
    """Test ring axioms of truncated series on seeded random data."""

    def _random_series(self, rng, ring):
        terms = {
            (i, j): random_scalar(rng)
            for i in range(ring.order + 1) for j in range(ring.order + 1 - i)
            if rng.random() < 0.5
        }
        return ring.from_terms(terms)

    def test_axioms(self):
        """Test commutativity, associativity and distributivity."""
        ring = series_ring(3)
        rng = random.Random(7)
        for _ in range(30):
            a, b, c = (self._random_series(rng, ring) for _ in range(3))
            self.assertEqual(a * b, b * a)
            self.assertEqual((a * b) * c, a * (b * c))
            self.assertEqual(a * (b + c), a * b + a * c)
            self.assertEqual((a + b) - b, a)
            self.assertEqual(a * ring.one, a)

if __name__ == '__main__':
    unittest.main()
