"""
Tests for Beltrami differentials, integrability and frame endomorphisms.
"""
import random
import unittest

from sympy.polys.domains import QQ

from src.core.algebra import Form, wedge
from src.core.beltrami import (
    BeltramiSeries, VectorForm, beltrami_matrix, bracket, build_endomorphisms,
    check_integrability, delbar_vector_form, frame_residual,
    maurer_cartan_residual, require_integrable, vector_form_from_matrix
)
from src.core.constants import Sector
from src.core.exceptions import (
    DegenerateDeformationError, IntegrabilityError, ParseError
)
from src.core.identities import random_vector_form
from src.core.loader import load_model
from src.core.scalars import make_scalar, parse_scalar, series_ring, value_ring
from src.plugins import BUNDLED_CONFIGS

class TestBeltramiSeries(unittest.TestCase):
    """Test Beltrami series construction and evaluation."""

    def test_from_entries(self):
        """Test building a series from sparse entries."""
        phi = BeltramiSeries.from_entries(2, {1: [(1, 2, "1/2")], 3: [(2, 2, "i")]}, order=4)
        self.assertEqual(sorted(phi.terms), [1, 3])
        self.assertEqual(phi.terms[1][0][1], make_scalar(QQ(1, 2)))
        with self.assertRaises(ParseError):
            BeltramiSeries.from_entries(2, {1: [(3, 1, "1")]})

    def test_rejects_bad_order(self):
        """Test order and term index checks."""
        with self.assertRaises(ValueError):
            BeltramiSeries(1, {}, order=0)
        with self.assertRaises(ValueError):
            BeltramiSeries(1, {0: [[make_scalar(1)]]})

    def test_at_value(self):
        """Test exact evaluation of phi(t0)."""
        phi = BeltramiSeries.from_entries(1, {1: [(1, 1, "1")], 2: [(1, 1, "1")]}, order=4)
        matrix = beltrami_matrix(phi.at("1/2"))
        self.assertEqual(matrix[0][0], value_ring().scalar("3/4"))

    def test_in_ring_truncates(self):
        """Test that terms above the order are dropped."""
        phi = BeltramiSeries.from_entries(1, {1: [(1, 1, "1")], 3: [(1, 1, "1")]}, order=2)
        ring = series_ring(2)
        matrix = beltrami_matrix(phi.in_ring(ring))
        self.assertEqual(matrix[0][0], ring.gen("t"))

class TestIntegrability(unittest.TestCase):
    """Test the Maurer-Cartan and frame-ideal checks."""

    def setUp(self):
        """Set up test fixtures."""
        self.iwasawa = load_model("iwasawa")
        self.kt = load_model("kodaira_thurston")

    def test_torus_is_unobstructed(self):
        """Test that every constant family on a torus is integrable."""
        torus = load_model("torus2")
        report = check_integrability(torus.family("mixed"), torus)
        self.assertTrue(report.integrable)
        self.assertTrue(report.agree)
        self.assertIsNone(report.first_failure)

    def test_iwasawa_integrable(self):
        """Test the integrable Iwasawa family."""
        for name in ("integrable", "nakamura"):
            report = check_integrability(self.iwasawa.family(name), self.iwasawa, order=4)
            self.assertTrue(report.integrable, name)
            self.assertEqual(len(report.checks), 4)

    def test_checks_fail_first_at_same_order(self):
        """Test both criteria on every bundled family."""
        seen = 0
        for name in BUNDLED_CONFIGS:
            model = load_model(name)
            for family in model.families:
                report = check_integrability(model.family(family), model, order=3)
                first_mc = next((c.order for c in report.checks if not c.maurer_cartan), None)
                first_frame = next((c.order for c in report.checks if not c.frame), None)
                self.assertEqual(first_mc, first_frame, f"{name}/{family}")
                seen += 1
        self.assertGreaterEqual(seen, 6)

    def test_iwasawa_obstructed_at_order_two(self):
        """Test that t(w1bar e1 + w2bar e2) fails at order 2 in both checks."""
        report = check_integrability(self.iwasawa.family("nonintegrable"), self.iwasawa, order=3)
        self.assertFalse(report.integrable)
        self.assertTrue(report.agree)
        self.assertEqual(report.first_failure, 2)
        self.assertTrue(report.checks[0].maurer_cartan)
        self.assertFalse(report.checks[1].maurer_cartan)
        self.assertFalse(report.checks[1].frame)
        self.assertEqual(report.to_dict()["first_failure_frame"], 2)

    def test_kodaira_thurston_obstructed_at_order_one(self):
        """Test that t(w2bar e1) is not integrable on the Kodaira-Thurston surface."""
        report = check_integrability(self.kt.family("nonintegrable"), self.kt, order=2)
        self.assertFalse(report.integrable)
        self.assertEqual(report.first_failure, 1)
        with self.assertRaises(IntegrabilityError):
            require_integrable(self.kt.family("nonintegrable"), self.kt)

    def test_value_mode(self):
        """Test integrability of phi(t0) at one exact value."""
        report = check_integrability(self.iwasawa.family("nonintegrable"), self.iwasawa, t0="1/10")
        self.assertEqual(report.mode, "value")
        self.assertFalse(report.integrable)
        self.assertEqual(report.to_dict()["t0"], "1/10")

    def test_degenerate_value(self):
        """Test that |t0| = 1 degenerates the coframe of t(w1bar e1)."""
        with self.assertRaises(DegenerateDeformationError):
            check_integrability(self.iwasawa.family("integrable"), self.iwasawa, t0=1)

    def test_zero_has_no_residual(self):
        """Test that phi = 0 is trivially integrable."""
        zero = VectorForm.zero(3, value_ring())
        self.assertFalse(any(maurer_cartan_residual(zero, self.iwasawa).rows))
        self.assertFalse(any(delbar_vector_form(zero, self.iwasawa).rows))
        self.assertFalse(any(bracket(zero, zero, self.iwasawa).rows))

def _vector_form(n, entries):
    """Vector form over the value ring from ``{(i, j): c}`` meaning ``c wb^j`` in row ``i``."""
    ring = value_ring()
    matrix = [[ring.zero] * n for _ in range(n)]
    for (i, j), c in entries.items():
        matrix[i - 1][j - 1] = ring.scalar(c)
    return vector_form_from_matrix(matrix, n, ring)

class TestBracketAndDelbar(unittest.TestCase):
    """Test the bracket and delbar of vector forms."""

    def setUp(self):
        """Set up test fixtures."""
        self.iwasawa = load_model("iwasawa")
        self.ring = value_ring()
        self.wb = [Form.frame(3, self.ring, j, Sector.ANTIHOL) for j in (1, 2, 3)]

    def test_iwasawa_bracket(self):
        """Test [e1 wb1, e2 wb2] = e3 wb1^wb2."""
        result = bracket(_vector_form(3, {(1, 1): 1}), _vector_form(3, {(2, 2): 1}), self.iwasawa)
        zero = Form.zero(3, self.ring)
        self.assertEqual(list(result.rows), [zero, zero, wedge(self.wb[0], self.wb[1])])

    def test_iwasawa_delbar(self):
        """Test delbar(e3 wb3) = -e3 wb1^wb2."""
        result = delbar_vector_form(_vector_form(3, {(3, 3): 1}), self.iwasawa)
        self.assertFalse(result.rows[0])
        self.assertFalse(result.rows[1])
        self.assertEqual(result.rows[2], -wedge(self.wb[0], self.wb[1]))

    def test_bracket_symmetric(self):
        """Test [phi, psi] = [psi, phi] on random constant vector forms."""
        rng = random.Random(4)
        for _ in range(20):
            phi = random_vector_form(rng, 3)
            psi = random_vector_form(rng, 3)
            self.assertEqual(
                list(bracket(phi, psi, self.iwasawa).rows),
                list(bracket(psi, phi, self.iwasawa).rows)
            )

    def test_delbar_linear(self):
        """Test delbar(a phi + b psi) = a delbar phi + b delbar psi."""
        rng = random.Random(9)
        a, b = parse_scalar("1/2+i"), parse_scalar("-3")
        for _ in range(10):
            phi = random_vector_form(rng, 3)
            psi = random_vector_form(rng, 3)
            lhs = delbar_vector_form(phi.scale(a) + psi.scale(b), self.iwasawa)
            dphi = delbar_vector_form(phi, self.iwasawa)
            dpsi = delbar_vector_form(psi, self.iwasawa)
            expected = [x.scale(a) + y.scale(b) for x, y in zip(dphi.rows, dpsi.rows)]
            self.assertEqual(list(lhs.rows), expected)

    def test_kodaira_thurston_sign(self):
        """Test that the Maurer-Cartan residual matches the frame residual row by row."""
        kt = load_model("kodaira_thurston")
        ring = value_ring()
        wb1 = Form.frame(2, ring, 1, Sector.ANTIHOL)
        wb2 = Form.frame(2, ring, 2, Sector.ANTIHOL)
        phi = _vector_form(2, {(1, 2): 1})
        frame = frame_residual(phi, kt)
        self.assertEqual(frame, [-wedge(wb1, wb2), wedge(wb1, wb2)])
        self.assertEqual(list(maurer_cartan_residual(phi, kt).rows), frame)

class TestEndomorphisms(unittest.TestCase):
    """Test phibar.phi, phi.phibar and their inverses."""

    def test_constant_one_dimensional(self):
        """Test 1/(1 - |c|^2) for phi = c wbar e."""
        torus = load_model("torus1")
        endos = build_endomorphisms(torus.family("constant"), t0=1)
        self.assertEqual(endos.phibar_phi.constant_entries(), [[make_scalar(QQ(1, 4))]])
        self.assertEqual(endos.inv_1_minus_phibar_phi.constant_entries(), [[make_scalar(QQ(4, 3))]])
        self.assertEqual(endos.inv_1_minus_phi_phibar.constant_entries(), [[make_scalar(QQ(4, 3))]])

    def test_series_inverse(self):
        """Test the Neumann inverse in series mode."""
        torus = load_model("torus1")
        ring = series_ring(4)
        endos = build_endomorphisms(torus.family("constant"), order=4)
        entry = endos.inv_1_minus_phibar_phi.entries[0][0]
        expected = ring.from_terms({(0, 0): 1, (1, 1): "1/4", (2, 2): "1/16"})
        self.assertEqual(entry, expected)

if __name__ == '__main__':
    unittest.main()
