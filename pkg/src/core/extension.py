"""
Order-by-order extension of forms along a Beltrami family.

A holomorphic (p,0)-form ``sigma_0`` is extended to ``sigma_t = sum t^k sigma_k``
with ``delbar sigma_k = eta_k = -del(sum_{i=1}^k phi_i.sigma_{k-i})`` and
``del sigma_k = 0``. A d-closed (0,q)-form is extended through the conjugate
system on ``sigma_bar``. Each order first checks that ``delbar eta_k``
vanishes, computed directly and through the bracket expansion.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ_I

from .algebra import Form
from .beltrami import HALF, BeltramiSeries, VectorForm, bracket, require_integrable
from .cohomology import (
    HodgeTable, delbar_matrix_at, class_name, classify_EDB,
    d_closed_representative, dolbeault_basis, hodge_numbers
)
from .constants import (
    DEFAULT_WORKERS, SCAN_CAVEAT, Backend, ExtensionKind
)
from .exceptions import (
    HypothesisError, NoSolutionError, NotClosedError, ObstructionError,
    UnsupportedBackendError
)
from .models import coordinates, from_coordinates
from .scalars import ScalarLike, conj, format_scalar, parse_scalar, series_ring, value_ring
from .transport import TransportContext, deformed_dolbeault, transported_differential
from ..utils import linalg
from ..utils.codec import form_to_config

logger = logging.getLogger(__name__)

@dataclass
class HypothesisReport:
    """E/D/B classes a theorem needs, each with its status."""
    kind: ExtensionKind
    degree: int
    checks: List[Tuple[str, bool]]

    @property
    def satisfied(self) -> bool:
        return all(ok for _, ok in self.checks)

    def failing(self) -> List[str]:
        return [name for name, ok in self.checks if not ok]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "degree": self.degree,
            "satisfied": self.satisfied,
            "checks": {name: ok for name, ok in self.checks},
        }

def _requirements(kind: ExtensionKind, degree: int) -> List[Tuple[str, int, int]]:
    if kind is ExtensionKind.P0:
        return [("D", degree, 1), ("E", degree + 1, 0)]
    reqs = []
    for q in range(1, degree + 1):
        reqs += [("B", 1, q), ("E", q, 0), ("D", q, 1)]
    return reqs

def hypothesis_report(model, kind: ExtensionKind, degree: int) -> HypothesisReport:
    """Classes needed to extend (p,0)-forms (``kind=P0``) or (0,q)-forms (``kind=ZERO_Q``)."""
    checks = []
    cache: Dict[Tuple[int, int], Any] = {}
    for letter, p, q in _requirements(kind, degree):
        if (p, q) not in cache:
            cache[(p, q)] = classify_EDB(model, p, q)
        checks.append((class_name(letter, p, q), cache[(p, q)].holds(letter)))
    return HypothesisReport(kind, degree, checks)

@dataclass
class OrderStep:
    """Obstruction values logged at one order."""
    order: int
    direct: Form
    telescoped: Form

    @property
    def vanishes(self) -> bool:
        return not self.direct and not self.telescoped

@dataclass
class ExtensionRun:
    """Result of an extension run.

    ``sigma`` holds ``sigma_0..sigma_N``. For (0,q) runs ``eta`` and the
    logged obstructions belong to the conjugate system the iteration solves.
    """
    kind: ExtensionKind
    degree: int
    order: int
    sigma: List[Form]
    eta: List[Form] = field(default_factory=list)
    steps: List[OrderStep] = field(default_factory=list)
    residual: List[Form] = field(default_factory=list)
    direct_residual: Optional[Form] = None
    hypotheses: Optional[HypothesisReport] = None
    warnings: List[str] = field(default_factory=list)

    @property
    def succeeded(self) -> bool:
        return (
            all(s.vanishes for s in self.steps)
            and not any(self.residual)
            and not self.direct_residual
        )

    def _power(self, ring, k: int):
        exponent = (k, 0) if self.kind is ExtensionKind.P0 else (0, k)
        return ring.from_terms({exponent: 1})

    def series(self, ring=None) -> Form:
        """``sigma_t`` over a deformation-parameter ring."""
        ring = ring or series_ring(self.order)
        total = self.sigma[0].to_ring(ring)
        for k, s in enumerate(self.sigma[1:], start=1):
            if s:
                total = total + s.to_ring(ring).scale(self._power(ring, k))
        return total

    def at(self, t0: ScalarLike) -> Form:
        """Truncated ``sigma_t`` at an exact parameter value."""
        t0 = parse_scalar(t0)
        base = t0 if self.kind is ExtensionKind.P0 else conj(t0)
        total = self.sigma[0]
        for k, s in enumerate(self.sigma[1:], start=1):
            if s:
                total = total + s.scale(base ** k)
        return total

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "degree": self.degree,
            "order": self.order,
            "succeeded": self.succeeded,
            "sigma": [form_to_config(s) for s in self.sigma],
            "eta": [form_to_config(e) for e in self.eta],
            "obstructions": [
                {"order": s.order, "direct": form_to_config(s.direct), "telescoped": form_to_config(s.telescoped)}
                for s in self.steps
            ],
            "residual": [form_to_config(r) for r in self.residual],
            "direct_residual": form_to_config(self.direct_residual) if self.direct_residual is not None else None,
            "hypotheses": self.hypotheses.to_dict() if self.hypotheses else None,
            "warnings": list(self.warnings),
        }

def _require_invariant(model) -> None:
    if model.backend is not Backend.INVARIANT:
        raise UnsupportedBackendError("Extension runs need an invariant model")

def _solve_step(model, p: int, eta: Form, order: int) -> Form:
    """del-closed solution of ``delbar x = eta`` among (p,0)-forms."""
    if not eta:
        return model.zero()
    source = model.safe_basis((p, 0))
    delbar_cols = model.operator_matrix("delbar", p, 0)
    delta_cols = model.operator_matrix("delta", p, 0)
    rows_delbar = model.dimension(p, 1)
    rows_delta = model.dimension(p + 1, 0)
    columns = [list(a) + list(b) for a, b in zip(delbar_cols, delta_cols)]
    rhs = coordinates(eta, model.safe_basis((p, 1))) + [QQ_I.zero] * rows_delta
    solution = linalg.solve(columns, rows_delbar + rows_delta, rhs)
    if solution is None:
        hyp = class_name("D", p, 1)
        logger.error(f"No del-closed solution at order {order} ({hyp} solve)")
        raise NoSolutionError(
            f"delbar x = eta_{order} has no del-closed (p,0) solution; the {hyp} solve failed",
            shape=(rows_delbar + rows_delta, len(columns))
        )
    return from_coordinates(solution, source, model.n, value_ring())

def _iterate(model, phi: BeltramiSeries, start: Form, p: int, order: int) -> Tuple[List[Form], List[Form], List[OrderStep]]:
    """Solve the (p,0) system up to ``order`` starting from ``start``."""
    terms = {i: phi.term(i) for i in range(1, order + 1)}
    brackets: Dict[Tuple[int, int], VectorForm] = {}

    def delbar_phi(i: int) -> VectorForm:
        total = VectorForm.zero(model.n, value_ring())
        for j in range(1, i):
            key = (j, i - j)
            if key not in brackets:
                brackets[key] = bracket(terms[j], terms[i - j], model)
            total = total + brackets[key]
        return total.scale(HALF)

    sigma = [start]
    eta: List[Form] = []
    steps: List[OrderStep] = []
    for k in range(1, order + 1):
        inner = model.zero()
        for i in range(1, k + 1):
            inner = inner + terms[i].contract(sigma[k - i])
        eta_k = -model.delta(inner)
        direct = model.delbar(eta_k)
        tele_inner = model.zero()
        for i in range(1, k + 1):
            tele_inner = tele_inner + delbar_phi(i).contract(sigma[k - i])
        for i in range(1, k):
            tele_inner = tele_inner + terms[i].contract(eta[k - i - 1])
        telescoped = model.delta(tele_inner)
        step = OrderStep(k, direct, telescoped)
        steps.append(step)
        if not step.vanishes:
            bad = direct if direct else telescoped
            logger.error(f"Obstruction at order {k}: {bad}")
            raise ObstructionError(f"delbar eta_{k} does not vanish at order {k}", order=k, form=bad)
        sigma.append(_solve_step(model, p, eta_k, k))
        eta.append(eta_k)
        logger.debug(f"Order {k}: eta={eta_k}, sigma={sigma[-1]}")
    return sigma, eta, steps

def _warn_hypotheses(report: HypothesisReport) -> List[str]:
    warnings = []
    for name in report.failing():
        message = f"model is not in {name}; the iteration may still succeed on this input"
        logger.warning(message)
        warnings.append(message)
    return warnings

def extend_p0(model, phi: BeltramiSeries, sigma0: Form, order: Optional[int] = None) -> ExtensionRun:
    """Extend a holomorphic (p,0)-form to ``sigma_t`` holomorphic on every X_t mod ``t^{N+1}``.

    Args:
        model: Invariant model
        phi: Integrable Beltrami series
        sigma0: delbar-closed (p,0)-form
        order: Truncation order N, defaults to the series order

    Raises:
        IntegrabilityError: If phi is not integrable to order N
        ObstructionError: If ``del sigma_0`` or some ``delbar eta_k`` is nonzero
        NoSolutionError: If an order has no del-closed solution
    """
    _require_invariant(model)
    order = order or phi.order
    sigma0 = sigma0.to_ring(value_ring())
    bd = sigma0.expect_bidegree(q=0).bidegree
    if bd is None:
        raise ValueError("Cannot extend the zero form")
    p = bd.p
    require_integrable(phi, model, order=order)
    hypotheses = hypothesis_report(model, ExtensionKind.P0, p)
    warnings = _warn_hypotheses(hypotheses)

    if model.delbar(sigma0):
        raise ObstructionError("sigma_0 is not delbar-closed", order=0, form=model.delbar(sigma0))
    d_sigma0 = model.delta(sigma0)
    if d_sigma0:
        name = class_name("E", p + 1, 0)
        hyp = None if classify_EDB(model, p + 1, 0).in_E else name
        logger.error(f"del sigma_0 = {d_sigma0} is nonzero")
        raise ObstructionError(
            "del sigma_0 is nonzero at order 0" + (f"; model is not in {hyp}" if hyp else ""),
            order=0, form=d_sigma0, hypothesis=hyp
        )

    sigma, eta, steps = _iterate(model, phi, sigma0, p, order)
    run = ExtensionRun(ExtensionKind.P0, p, order, sigma, eta, steps, hypotheses=hypotheses, warnings=warnings)

    ring = series_ring(order)
    ctx = TransportContext.series(model, phi, order)
    sigma_t = run.series(ring)
    residual = (
        model.delbar(sigma_t)
        + model.delta(ctx.phi.contract(sigma_t))
        - ctx.phi.contract(model.delta(sigma_t))
    )
    run.residual = [residual.homogeneous(k) for k in range(order + 1)]
    run.direct_residual = transported_differential(ctx, sigma_t).component(p, 1)
    logger.info(f"extend_p0 on {model.name} to order {order}: succeeded={run.succeeded}")
    return run

def extend_0q(model, phi: BeltramiSeries, sigma0: Form, order: Optional[int] = None) -> ExtensionRun:
    """Extend a d-closed (0,q)-form to a delbar_t-closed ``sigma_t = sigma_0 + sum tb^k sigma_k``.

    The iteration runs on ``conj(sigma_0)``, a (q,0)-form, exactly as
    ``extend_p0`` does, and conjugates the result back.

    Raises:
        NotClosedError: If ``d sigma_0`` is nonzero
    """
    _require_invariant(model)
    order = order or phi.order
    sigma0 = sigma0.to_ring(value_ring())
    bd = sigma0.expect_bidegree(p=0).bidegree
    if bd is None:
        raise ValueError("Cannot extend the zero form")
    q = bd.q
    d_sigma0 = model.d(sigma0)
    if d_sigma0:
        logger.error(f"sigma_0 is not d-closed: d sigma_0 = {d_sigma0}")
        raise NotClosedError("sigma_0 must be d-closed", order=0, form=d_sigma0)
    require_integrable(phi, model, order=order)
    hypotheses = hypothesis_report(model, ExtensionKind.ZERO_Q, q)
    warnings = _warn_hypotheses(hypotheses)

    tau, eta, steps = _iterate(model, phi, sigma0.conjugate(), q, order)
    sigma = [t.conjugate() for t in tau]
    run = ExtensionRun(ExtensionKind.ZERO_Q, q, order, sigma, eta, steps, hypotheses=hypotheses, warnings=warnings)

    ring = series_ring(order)
    ctx = TransportContext.series(model, phi, order)
    sigma_t = run.series(ring)
    g = ctx.endos.inv_1_minus_phibar_phi
    dbs = model.delbar(sigma_t)
    inner = model.delta(sigma_t) + model.delbar(ctx.phibar.contract(sigma_t))
    residual = g.contract(dbs) - dbs.scale(q) - ctx.phi.apply_endomorphism(g).contract(inner)
    run.residual = [residual.homogeneous(k) for k in range(order + 1)]
    run.direct_residual = transported_differential(ctx, sigma_t).component(0, q + 1)
    logger.info(f"extend_0q on {model.name} to order {order}: succeeded={run.succeeded}")
    return run

@dataclass
class CorrespondenceSample:
    """Induced map ``H^{0,q}(X_0) -> H^{0,q}(X_t)`` at one exact value."""
    t0: Any
    h0q: int
    closed: List[bool]
    matrix: List[Optional[List[Any]]]
    rank: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t0": format_scalar(self.t0),
            "h0q": self.h0q,
            "closed": self.closed,
            "matrix": [None if col is None else [format_scalar(c) for c in col] for col in self.matrix],
            "rank": self.rank,
        }

@dataclass
class Correspondence:
    """Extended d-closed representatives of a basis of ``H^{0,q}(X_0)``."""
    q: int
    classes: List[Form]
    representatives: List[Form]
    runs: List[ExtensionRun]
    samples: List[CorrespondenceSample]

    @property
    def injective(self) -> bool:
        return all(s.rank == len(self.classes) for s in self.samples)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "q": self.q,
            "classes": [form_to_config(a) for a in self.classes],
            "representatives": [form_to_config(g) for g in self.representatives],
            "runs": [r.to_dict() for r in self.runs],
            "samples": [s.to_dict() for s in self.samples],
            "injective": self.injective,
        }

def _sample(model, phi: BeltramiSeries, q: int, runs: List[ExtensionRun], t0) -> CorrespondenceSample:
    ctx = TransportContext.value(model, phi, t0)
    dim = model.dimension(0, q)
    basis = model.safe_basis((0, q))
    image = delbar_matrix_at(ctx, 0, q - 1) if q > 0 else []
    targets = dolbeault_basis(model, 0, q, ctx)
    target_cols = [coordinates(t, basis) for t in targets]
    closed, matrix, vectors = [], [], []
    for run in runs:
        form = run.at(t0)
        is_closed = not deformed_dolbeault(ctx, form, check=False).delbar_t
        closed.append(is_closed)
        vec = coordinates(form, basis)
        vectors.append(vec)
        if not is_closed:
            matrix.append(None)
            continue
        solution = linalg.solve(list(image) + target_cols, dim, vec)
        matrix.append(None if solution is None else solution[len(image):])
    base = linalg.rank(list(image), dim)
    rank = linalg.rank(list(image) + vectors, dim) - base
    return CorrespondenceSample(t0, len(targets), closed, matrix, rank)

def build_0q_correspondence(model, phi: BeltramiSeries, q: int, order: Optional[int] = None, t_values: Sequence[ScalarLike] = ()) -> Correspondence:
    """Send a basis of ``H^{0,q}(X_0)`` to classes on X_t through d-closed representatives.

    Raises:
        HypothesisError: Naming the first class among B^{1,q'}, E^{q',0},
            D^{q',1} (q' <= q) the model lies outside of
    """
    _require_invariant(model)
    report = hypothesis_report(model, ExtensionKind.ZERO_Q, q)
    if not report.satisfied:
        name = report.failing()[0]
        logger.error(f"Model {model.name} is not in {name}")
        raise HypothesisError(f"Model {model.name} is not in {name}; the (0,{q}) correspondence needs it", name)
    classes = dolbeault_basis(model, 0, q)
    representatives = [d_closed_representative(model, a) for a in classes]
    runs = [extend_0q(model, phi, g, order) for g in representatives]
    samples = [_sample(model, phi, q, runs, parse_scalar(t0)) for t0 in t_values]
    return Correspondence(q, classes, representatives, runs, samples)

@dataclass
class ScanReport:
    """Hodge tables along sampled values with hypothesis-gated row checks."""
    t_values: List[Any]
    tables: List[HodgeTable]
    asserted: Dict[str, List[str]]
    violations: List[str]
    jumps: List[str]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "caveat": SCAN_CAVEAT,
            "t_values": [format_scalar(t) for t in self.t_values],
            "tables": [t.to_dict() for t in self.tables],
            "asserted_rows": self.asserted,
            "violations": self.violations,
            "jumps": self.jumps,
            "ok": self.ok,
        }

def hodge_scan(model, phi: BeltramiSeries, t_values: Sequence[ScalarLike], workers: int = DEFAULT_WORKERS) -> ScanReport:
    """Hodge tables at each value, in input order.

    Rows (p,0) and (0,q) whose theorem hypotheses hold are expected to be
    constant; other rows may jump and are only highlighted.
    """
    _require_invariant(model)
    values = [parse_scalar(t) for t in t_values]

    def table_at(t0):
        return hodge_numbers(model, TransportContext.value(model, phi, t0))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        tables = list(pool.map(table_at, values))

    n = model.n
    asserted: Dict[str, List[str]] = {}
    for p in range(1, n + 1):
        report = hypothesis_report(model, ExtensionKind.P0, p)
        if report.satisfied:
            asserted[f"{p},0"] = [name for name, _ in report.checks]
    for q in range(1, n + 1):
        report = hypothesis_report(model, ExtensionKind.ZERO_Q, q)
        if report.satisfied:
            asserted[f"0,{q}"] = [name for name, _ in report.checks]

    violations, jumps = [], []
    for p in range(n + 1):
        for q in range(n + 1):
            column = [t[(p, q)] for t in tables]
            if len(set(column)) <= 1:
                continue
            key = f"{p},{q}"
            jumps.append(key)
            if key in asserted:
                logger.error(f"h^{{{key}}} changes along the family although {asserted[key]} hold: {column}")
                violations.append(key)
            else:
                logger.info(f"h^{{{key}}} jumps along the family: {column}")
    return ScanReport(values, tables, asserted, violations, jumps)
