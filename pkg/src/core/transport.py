"""
Transport of forms to a deformed structure.

The canonical map sends ``w^i`` to ``theta^i = w^i + phi^i`` and ``wb^i`` to
its conjugate. Pulling ``d`` back through it gives the transported
differential, whose (+1,0) and (0,+1) parts are the deformed operators. The
extension formulas compute the same pull-back term by term.
"""
import logging
from dataclasses import dataclass
from math import factorial
from typing import Any, Dict, List, Optional

from sympy.polys.domains import QQ

from .algebra import Form, substitute, wedge
from .beltrami import (
    BeltramiSeries, Endomorphisms, FrameEndomorphism, VectorForm,
    beltrami_matrix, differentiate_vector_form, endomorphisms_at,
    endomorphisms_of, matrix_product
)
from .constants import Backend, ContextMode, Sector
from .exceptions import BidegreeError, IntegrabilityError, UnsupportedBackendError
from .scalars import (
    CoefficientRing, Scalar, ScalarLike, format_scalar, make_scalar, parse_scalar, series_ring
)
from ..utils.codec import form_to_config

logger = logging.getLogger(__name__)

@dataclass(frozen=True)
class TransportContext:
    """Model, Beltrami data over one coefficient ring and its endomorphisms."""
    model: Any
    phi: VectorForm
    phibar: VectorForm
    endos: Endomorphisms
    mode: ContextMode
    order: Optional[int] = None
    t0: Optional[Scalar] = None
    beltrami: Optional[BeltramiSeries] = None

    @property
    def ring(self) -> CoefficientRing:
        return self.phi.ring

    @property
    def n(self) -> int:
        return self.phi.n

    @classmethod
    def series(cls, model, beltrami: BeltramiSeries, order: Optional[int] = None) -> "TransportContext":
        """Series mode: everything per t-order up to N, lazy Neumann inverses."""
        order = order or beltrami.order
        phi = beltrami.in_ring(series_ring(order))
        return cls(model, phi, phi.conjugate(), endomorphisms_of(phi), ContextMode.SERIES, order, None, beltrami)

    @classmethod
    def value(cls, model, beltrami: BeltramiSeries, t0: ScalarLike) -> "TransportContext":
        """Value mode at an exact parameter; exact matrix inverses.

        Raises:
            DegenerateDeformationError: If the deformed coframe is not a basis at t0
        """
        t0 = parse_scalar(t0)
        phi = beltrami.at(t0)
        return cls(model, phi, phi.conjugate(), endomorphisms_at(phi), ContextMode.VALUE, None, t0, beltrami)

    @classmethod
    def from_vector_form(cls, model, phi: VectorForm) -> "TransportContext":
        """Context for a fixed Beltrami form over its own ring, e.g. on a chart."""
        if phi.n != model.n:
            raise ValueError(f"Beltrami form of dimension {phi.n} on model of dimension {model.n}")
        return cls(model, phi, phi.conjugate(), endomorphisms_at(phi), ContextMode.VALUE, phi.ring.order, None, None)

    def lift(self, a: Form) -> Form:
        """Move a form into the context ring."""
        return a.to_ring(self.ring)

    def describe(self) -> Dict[str, Any]:
        return {
            "mode": self.mode.value,
            "order": self.order,
            "t0": format_scalar(self.t0) if self.t0 is not None else None,
            "beltrami": self.beltrami.name if self.beltrami is not None else None,
        }

def _frame(ctx: TransportContext, i: int, sector: Sector = Sector.HOL) -> Form:
    return Form.frame(ctx.n, ctx.ring, i, sector)

def e_iphi(ctx: TransportContext, a: Form, method: str = "substitution") -> Form:
    """``e^{i_phi}`` applied to a form.

    Args:
        ctx: Transport context
        a: Form over the context ring (or liftable to it)
        method: ``"substitution"`` for the homomorphism ``w^i -> w^i + phi^i``,
            ``"series"`` for ``sum_k i_phi^k / k!``
    """
    a = ctx.lift(a)
    if method == "substitution":
        images = [_frame(ctx, i) + ctx.phi.rows[i - 1] for i in range(1, ctx.n + 1)]
        return substitute(a, images, None)
    if method != "series":
        raise ValueError(f"Unknown method {method!r}")
    result = a
    term = a
    k = 0
    while True:
        k += 1
        term = ctx.phi.contract(term)
        if not term:
            break
        result = result + term.scale(make_scalar(QQ(1, factorial(k))))
    return result

def canonical_map(ctx: TransportContext, a: Form) -> Form:
    """``e^{i_phi | i_phibar}``: holomorphic block by ``e^{i_phi}``, antiholomorphic by ``e^{i_phibar}``."""
    a = ctx.lift(a)
    hol = [_frame(ctx, i) + ctx.phi.rows[i - 1] for i in range(1, ctx.n + 1)]
    antihol = [_frame(ctx, i, Sector.ANTIHOL) + ctx.phibar.rows[i - 1] for i in range(1, ctx.n + 1)]
    return substitute(a, hol, antihol)

def inverse_canonical_map(ctx: TransportContext, a: Form) -> Form:
    """Inverse of ``canonical_map``: ``w -> (1 - phi.phibar)^-1 (w - phi)`` and conjugate."""
    a = ctx.lift(a)
    m_hol = ctx.endos.inv_1_minus_phi_phibar.entries
    m_antihol = ctx.endos.inv_1_minus_phibar_phi.entries
    hol_base = [_frame(ctx, k) - ctx.phi.rows[k - 1] for k in range(1, ctx.n + 1)]
    antihol_base = [_frame(ctx, k, Sector.ANTIHOL) - ctx.phibar.rows[k - 1] for k in range(1, ctx.n + 1)]
    hol, antihol = [], []
    for i in range(ctx.n):
        h = Form.zero(ctx.n, ctx.ring)
        b = Form.zero(ctx.n, ctx.ring)
        for k in range(ctx.n):
            if m_hol[i][k]:
                h = h + hol_base[k].scale(m_hol[i][k])
            if m_antihol[i][k]:
                b = b + antihol_base[k].scale(m_antihol[i][k])
        hol.append(h)
        antihol.append(b)
    return substitute(a, hol, antihol)

def transported_differential(ctx: TransportContext, w: Form) -> Form:
    """``e^-1(d(e(w)))``, computed directly."""
    return inverse_canonical_map(ctx, ctx.model.d(canonical_map(ctx, w)))

def _pure_degree(w: Form, p: Optional[int] = None, q: Optional[int] = None):
    w.expect_bidegree(p, q)
    return w.bidegree

def extension_formula_p0(ctx: TransportContext, w: Form) -> Form:
    """Pull-back of ``d(e(w))`` for a (p,0)-form by the (p,0) extension formula.

    Raises:
        BidegreeError: If ``w`` is not of type (p,0)
    """
    w = ctx.lift(w)
    bd = _pure_degree(w, q=0)
    if bd is None:
        return w
    model = ctx.model
    phi, phibar = ctx.phi, ctx.phibar
    inv_antihol = ctx.endos.inv_1_minus_phibar_phi
    inv_hol = ctx.endos.inv_1_minus_phi_phibar
    dw = model.delta(w)
    inner = model.delbar(w) + model.delta(phi.contract(w))
    return (
        inv_antihol.contract(inner - phi.contract(dw))
        + inv_hol.contract(dw)
        - dw.scale(bd.p)
        - phibar.apply_endomorphism(inv_hol).contract(inner)
    )

def extension_formula_0q(ctx: TransportContext, w: Form) -> Form:
    """Pull-back of ``d(e(w))`` for a (0,q)-form, the conjugate of the (p,0) formula.

    Raises:
        BidegreeError: If ``w`` is not of type (0,q)
    """
    w = ctx.lift(w)
    bd = _pure_degree(w, p=0)
    if bd is None:
        return w
    model = ctx.model
    phi, phibar = ctx.phi, ctx.phibar
    inv_antihol = ctx.endos.inv_1_minus_phibar_phi
    inv_hol = ctx.endos.inv_1_minus_phi_phibar
    dbw = model.delbar(w)
    inner = model.delta(w) + model.delbar(phibar.contract(w))
    return (
        inv_hol.contract(inner - phibar.contract(dbw))
        + inv_antihol.contract(dbw)
        - dbw.scale(bd.q)
        - phi.apply_endomorphism(inv_antihol).contract(inner)
    )

def _recontract(outer: VectorForm, inner: VectorForm) -> VectorForm:
    """``outer`` contracted into the rows of ``inner``, keeping ``inner``'s sector."""
    return VectorForm(inner.sector, [outer.contract(row) for row in inner.rows])

def extension_formula_general(ctx: TransportContext, w: Form) -> Form:
    """Pull-back of ``d(e(w))`` for any form by the general extension formula."""
    w = ctx.lift(w)
    model = ctx.model
    n, ring = ctx.n, ctx.ring
    phi, phibar = ctx.phi, ctx.phibar
    endos = ctx.endos
    inv_hol = endos.inv_1_minus_phi_phibar
    inv_antihol = endos.inv_1_minus_phibar_phi
    hol_part = FrameEndomorphism(Sector.HOL, matrix_product(endos.phi_phibar.entries, inv_hol.entries), n, ring)
    antihol_part = FrameEndomorphism(Sector.ANTIHOL, matrix_product(endos.phibar_phi.entries, inv_antihol.entries), n, ring)
    phibar_inv = phibar.apply_endomorphism(inv_hol)
    phi_inv = phi.apply_endomorphism(inv_antihol)

    dw = model.delta(w)
    dbw = model.delbar(w)
    d_phibar_inv = differentiate_vector_form(phibar_inv, "delta", model)
    db_inv_hol = differentiate_vector_form(inv_hol, "delbar", model)
    db_phi_inv = differentiate_vector_form(phi_inv, "delbar", model)
    d_inv_antihol = differentiate_vector_form(inv_antihol, "delta", model)

    result = dw
    result = result + hol_part.contract(dw)
    result = result - model.delta(hol_part.contract(w))
    result = result + _recontract(d_phibar_inv, phi).contract(w)
    result = result - phibar_inv.contract(dbw)
    result = result + model.delbar(phibar_inv.contract(w))
    result = result - _recontract(db_inv_hol, phibar).contract(w)
    result = result + dbw
    result = result + antihol_part.contract(dbw)
    result = result - model.delbar(antihol_part.contract(w))
    result = result + _recontract(db_phi_inv, phibar).contract(w)
    result = result - phi_inv.contract(dw)
    result = result + model.delta(phi_inv.contract(w))
    result = result - _recontract(d_inv_antihol, phi).contract(w)
    return result

@dataclass
class ExtensionResidual:
    """Both sides of an extension identity."""
    lhs: Form
    rhs: Form

    @property
    def residual(self) -> Form:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return not self.residual

def extension_residual(ctx: TransportContext, w: Form, formula: str = "general") -> ExtensionResidual:
    """``d(e(w))`` against ``e(formula(w))``."""
    fn = {"general": extension_formula_general, "p0": extension_formula_p0, "0q": extension_formula_0q}[formula]
    lhs = ctx.model.d(canonical_map(ctx, w))
    rhs = canonical_map(ctx, fn(ctx, w))
    return ExtensionResidual(lhs, rhs)

def _require_chart(ctx: TransportContext) -> None:
    if ctx.model.backend is not Backend.CHART:
        raise UnsupportedBackendError(f"Model {ctx.model.name} is not a chart model")

@dataclass
class HolomorphicityResult:
    """Obstruction ``(delbar - phi.del) f`` and the df decomposition check."""
    obstruction: Form
    decomposition_residual: Form

    @property
    def holomorphic(self) -> bool:
        return not self.obstruction

    @property
    def decomposition_holds(self) -> bool:
        return not self.decomposition_residual

def holomorphicity_criterion(ctx: TransportContext, f: Form) -> HolomorphicityResult:
    """``(delbar - phi.del) f`` for a chart function, with the df decomposition.

    The decomposition ``df = e((1 - phi.phibar)^-1 (del - phibar.delbar) f
    + (1 - phibar.phi)^-1 (delbar - phi.del) f)`` is compared below degree D-1.

    Raises:
        UnsupportedBackendError: On non-chart models
    """
    _require_chart(ctx)
    model = ctx.model
    f.expect_bidegree(0, 0)
    df_hol = model.delta(f)
    df_antihol = model.delbar(f)
    obstruction = df_antihol - ctx.phi.contract(df_hol)
    rhs = canonical_map(
        ctx,
        ctx.endos.inv_1_minus_phi_phibar.contract(df_hol - ctx.phibar.contract(df_antihol))
        + ctx.endos.inv_1_minus_phibar_phi.contract(obstruction)
    )
    residual = model.truncation_safe(model.d(f) - rhs)
    return HolomorphicityResult(obstruction, residual)

def dvz_rhs(ctx: TransportContext, i: int) -> Form:
    """Right side of the local ``d(e^{i_phi} dz^i)`` formula, written in the undeformed frame."""
    n, ring = ctx.n, ctx.ring
    big_phi = beltrami_matrix(ctx.phi)
    big_phibar = [[c.conjugate() for c in row] for row in big_phi]
    b = ctx.endos.inv_1_minus_phibar_phi.entries
    a = matrix_product(b, big_phibar)
    result = Form.zero(n, ring)
    for j in range(1, n + 1):
        for l in range(n):
            partial = big_phi[i - 1][l].diff(f"z{j}")
            if not partial:
                continue
            w_j = Form.frame(n, ring, j)
            for k in range(n):
                if a[l][k]:
                    result = result + Form.monomial(n, ring, [k + 1, j]).scale(a[l][k] * partial)
                if b[l][k]:
                    result = result - wedge(Form.frame(n, ring, k + 1, Sector.ANTIHOL), w_j).scale(b[l][k] * partial)
    return result

@dataclass
class DvzReport:
    """Per-generator residuals of the local frame formula."""
    residuals: List[Form]

    @property
    def holds(self) -> bool:
        return not any(self.residuals)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "holds": self.holds,
            "residuals": {str(i + 1): form_to_config(r) for i, r in enumerate(self.residuals) if r},
        }

def verify_dvz(ctx: TransportContext) -> DvzReport:
    """Compare ``d(e^{i_phi} dz^i)`` computed directly with the local frame formula.

    Raises:
        UnsupportedBackendError: On non-chart models
    """
    _require_chart(ctx)
    model = ctx.model
    residuals = []
    for i in range(1, ctx.n + 1):
        theta = e_iphi(ctx, Form.frame(ctx.n, ctx.ring, i))
        direct = inverse_canonical_map(ctx, model.d(theta))
        residuals.append(model.truncation_safe(direct - dvz_rhs(ctx, i)))
    report = DvzReport(residuals)
    logger.debug(f"dvz check on {model.name}: holds={report.holds}")
    return report

@dataclass
class DeformedDolbeault:
    """Coefficient forms of the deformed operators on ``e(w)``."""
    del_t: Form
    delbar_t: Form

def deformed_dolbeault(ctx: TransportContext, w: Form, via: str = "formula", check: bool = True) -> DeformedDolbeault:
    """Split the transported differential of a pure form into its two parts.

    Args:
        ctx: Transport context
        w: Pure (p,q)-form
        via: ``"formula"`` uses the general extension formula,
            ``"direct"`` pulls ``d`` back through the canonical map
        check: Also verify that the deformed delbar squares to zero on ``w``

    Raises:
        IntegrabilityError: If any other bidegree appears, or delbar_t^2 != 0
    """
    w = ctx.lift(w)
    bd = w.bidegree
    if bd is None:
        return DeformedDolbeault(w, w)
    if via == "direct":
        image = transported_differential(ctx, w)
    elif via == "formula":
        image = extension_formula_general(ctx, w)
    else:
        raise ValueError(f"Unknown method {via!r}")
    del_t = image.component(bd.p + 1, bd.q)
    delbar_t = image.component(bd.p, bd.q + 1)
    stray = image - del_t - delbar_t
    if stray:
        logger.error(f"Transported differential of a ({bd.p},{bd.q})-form has bidegrees {stray.bidegrees()}")
        raise IntegrabilityError(
            f"Deformed structure is not integrable: d of a ({bd.p},{bd.q})-form "
            f"has components {[tuple(b) for b in stray.bidegrees()]}"
        )
    if check and delbar_t:
        again = deformed_dolbeault(ctx, delbar_t, via=via, check=False).delbar_t
        if again:
            raise IntegrabilityError("Deformed delbar does not square to zero")
    return DeformedDolbeault(del_t, delbar_t)
