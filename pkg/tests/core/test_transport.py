"""
Tests for the canonical map, the transported differential and the extension formulas.
"""
import unittest
from unittest.mock import patch

from src.core.algebra import Form, conjugate, wedge
from src.core.beltrami import BeltramiSeries, vector_form_from_matrix
from src.core.constants import ContextMode, Sector
from src.core.exceptions import (
    BidegreeError, DegenerateDeformationError, IntegrabilityError,
    UnsupportedBackendError
)
from src.core.loader import load_model
from src.core.models import ChartModel
from src.core.transport import (
    TransportContext, canonical_map, deformed_dolbeault, e_iphi,
    extension_formula_0q, extension_formula_general, extension_formula_p0,
    extension_residual, holomorphicity_criterion, inverse_canonical_map,
    transported_differential, verify_dvz
)

class TestCanonicalMap(unittest.TestCase):
    """Test e^{i_phi | i_phibar} and its inverse."""

    def setUp(self):
        """Set up test fixtures."""
        self.model = load_model("iwasawa")
        self.ctx = TransportContext.value(self.model, self.model.family("nakamura"), "1/10+1/7i")

    def test_context(self):
        """Test context bookkeeping."""
        self.assertEqual(self.ctx.mode, ContextMode.VALUE)
        self.assertEqual(self.ctx.describe()["t0"], "1/10+1/7i")
        series = TransportContext.series(self.model, self.model.family("nakamura"), 3)
        self.assertEqual(series.mode, ContextMode.SERIES)
        self.assertEqual(series.ring.order, 3)

    def test_frame_images(self):
        """Test that w^i goes to w^i + phi^i."""
        w1 = self.model.frame(1)
        self.assertEqual(canonical_map(self.ctx, w1), w1 + self.ctx.phi.rows[0])

    def test_round_trip(self):
        """Test that the inverse undoes the canonical map on mixed monomials."""
        m = self.model
        for w in (m.frame(3), wedge(m.frame(1), m.frame(2, Sector.ANTIHOL)), wedge(m.frame(3), m.frame(3, Sector.ANTIHOL))):
            self.assertEqual(inverse_canonical_map(self.ctx, canonical_map(self.ctx, w)), w)

    def test_reality(self):
        """Test that the canonical map commutes with conjugation."""
        w = wedge(self.model.frame(1), self.model.frame(3))
        self.assertEqual(canonical_map(self.ctx, conjugate(w)), conjugate(canonical_map(self.ctx, w)))

    def test_e_iphi_methods(self):
        """Test substitution against the exponential series."""
        w = wedge(self.model.frame(1), self.model.frame(2))
        self.assertEqual(e_iphi(self.ctx, w, "substitution"), e_iphi(self.ctx, w, "series"))
        with self.assertRaises(ValueError):
            e_iphi(self.ctx, w, "guess")

    def test_degenerate(self):
        """Test that a singular coframe is refused."""
        with self.assertRaises(DegenerateDeformationError):
            TransportContext.value(self.model, self.model.family("integrable"), 1)

class TestExtensionFormulas(unittest.TestCase):
    """Test the extension formulas against the direct pull-back."""

    def setUp(self):
        """Set up test fixtures."""
        self.model = load_model("iwasawa")
        self.ctx = TransportContext.value(self.model, self.model.family("nakamura"), "1/10")

    def test_zero_beltrami_collapses_to_d(self):
        """Test that every formula returns d w at phi = 0."""
        ctx = TransportContext.series(self.model, BeltramiSeries.zero(3), 2)
        w3 = self.model.frame(3)
        wb3 = self.model.frame(3, Sector.ANTIHOL)
        self.assertEqual(extension_formula_general(ctx, w3), ctx.lift(self.model.d(w3)))
        self.assertEqual(extension_formula_p0(ctx, w3), ctx.lift(self.model.d(w3)))
        self.assertEqual(extension_formula_0q(ctx, wb3), ctx.lift(self.model.d(wb3)))

    def test_general_formula(self):
        """Test the general formula on a (1,1)-form."""
        w = wedge(self.model.frame(3), self.model.frame(1, Sector.ANTIHOL))
        self.assertTrue(extension_residual(self.ctx, w, "general").holds)
        self.assertEqual(extension_formula_general(self.ctx, w), transported_differential(self.ctx, w))

    def test_specializations(self):
        """Test the (p,0) and (0,q) formulas on integrable data."""
        w3 = self.model.frame(3)
        wb3 = self.model.frame(3, Sector.ANTIHOL)
        self.assertEqual(extension_formula_p0(self.ctx, w3), extension_formula_general(self.ctx, w3))
        self.assertEqual(extension_formula_0q(self.ctx, wb3), extension_formula_general(self.ctx, wb3))
        self.assertEqual(
            extension_formula_0q(self.ctx, wb3),
            conjugate(extension_formula_p0(self.ctx, w3))
        )

    def test_bidegree_checks(self):
        """Test that the specialized formulas check their input type."""
        with self.assertRaises(BidegreeError):
            extension_formula_p0(self.ctx, self.model.frame(1, Sector.ANTIHOL))
        with self.assertRaises(BidegreeError):
            extension_formula_0q(self.ctx, self.model.frame(1))

class TestDeformedDolbeault(unittest.TestCase):
    """Test the split of the transported differential."""

    def test_nakamura_drops_a_holomorphic_form(self):
        """Test that w3 is no longer delbar_t-closed along the Nakamura family."""
        model = load_model("iwasawa")
        ctx = TransportContext.value(model, model.family("nakamura"), "1/10")
        result = deformed_dolbeault(ctx, model.frame(3))
        self.assertTrue(result.delbar_t)
        self.assertFalse(deformed_dolbeault(ctx, model.frame(1)).delbar_t)
        direct = deformed_dolbeault(ctx, model.frame(3), via="direct")
        self.assertEqual(direct.delbar_t, result.delbar_t)

    def test_default_uses_extension_formula(self):
        """Test that the split reads the general extension formula unless told otherwise."""
        model = load_model("iwasawa")
        ctx = TransportContext.value(model, model.family("nakamura"), "1/10")
        with patch("src.core.transport.extension_formula_general", wraps=extension_formula_general) as formula:
            deformed_dolbeault(ctx, model.frame(3), check=False)
            self.assertEqual(formula.call_count, 1)
            deformed_dolbeault(ctx, model.frame(3), via="direct", check=False)
            self.assertEqual(formula.call_count, 1)
        with self.assertRaises(ValueError):
            deformed_dolbeault(ctx, model.frame(3), via="series")

    def test_non_integrable_value(self):
        """Test that stray bidegrees are reported as non-integrability."""
        model = load_model("iwasawa")
        ctx = TransportContext.value(model, model.family("nonintegrable"), "1/10")
        with self.assertRaises(IntegrabilityError):
            deformed_dolbeault(ctx, model.frame(3))

class TestChartIdentities(unittest.TestCase):
    """Test the local frame formula and the holomorphicity criterion."""

    def setUp(self):
        """Set up test fixtures."""
        self.model = ChartModel(1, 6)
        ring = self.model.ring
        self.c = ring.scalar("1/3+1/2i")
        self.ctx = TransportContext.from_vector_form(self.model, vector_form_from_matrix([[self.c]], 1, ring))

    def test_constant_beltrami_dvz(self):
        """Test the frame formula for a constant Beltrami form."""
        self.assertTrue(verify_dvz(self.ctx).holds)

    def test_holomorphic_function(self):
        """Test that z + c zbar is holomorphic for phi = c."""
        f = self.model.coordinate(1) + self.model.conj_coordinate(1).scale(self.c)
        result = holomorphicity_criterion(self.ctx, f)
        self.assertTrue(result.holomorphic)
        self.assertTrue(result.decomposition_holds)

    def test_non_holomorphic_function(self):
        """Test that zbar is not holomorphic for phi = c."""
        result = holomorphicity_criterion(self.ctx, self.model.conj_coordinate(1))
        self.assertFalse(result.holomorphic)
        self.assertTrue(result.decomposition_holds)

    def test_invariant_model_refused(self):
        """Test that chart identities need a chart model."""
        model = load_model("torus1")
        ctx = TransportContext.value(model, model.family("constant"), "1/10")
        with self.assertRaises(UnsupportedBackendError):
            verify_dvz(ctx)
        with self.assertRaises(UnsupportedBackendError):
            holomorphicity_criterion(ctx, Form.constant(1, ctx.ring))

if __name__ == '__main__':
    unittest.main()
