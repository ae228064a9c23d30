"""
Identity suite behind ``deformae verify``.

Each check compares two independent computations over exact coefficients
and records the cases that disagree.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

from .algebra import Form, conjugate
from .beltrami import (
    BeltramiSeries, VectorForm, bracket, check_integrability, vector_form_from_matrix
)
from .constants import DEFAULT_SEED, Backend
from .scalars import ScalarLike, format_scalar, parse_scalar, random_scalar, value_ring
from .transport import (
    TransportContext, canonical_map, e_iphi, extension_formula_0q,
    extension_formula_general, extension_formula_p0, extension_residual,
    holomorphicity_criterion, inverse_canonical_map, verify_dvz
)

logger = logging.getLogger(__name__)

DEFAULT_T_VALUES = ("1/10", "1/10+1/7i")
COMMUTATOR_MAX_DEGREE = 4

@dataclass
class IdentityCheck:
    """Outcome of one identity over all its cases."""
    name: str
    cases: int = 0
    failures: List[str] = field(default_factory=list)
    skipped: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.skipped is not None or not self.failures

    def record(self, label: str, ok: bool) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(label)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "cases": self.cases,
            "failures": self.failures,
            "skipped": self.skipped,
        }

@dataclass
class IdentityReport:
    """All identity checks of one verification run."""
    checks: List[IdentityCheck]
    integrability: Optional[Dict[str, Any]] = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "integrability": self.integrability,
            "checks": {c.name: c.to_dict() for c in self.checks},
        }

def basis_forms(model) -> List[Form]:
    """Every basis monomial of every bidegree, as forms over the value ring."""
    ring = value_ring()
    out = []
    for p in range(model.n + 1):
        for q in range(model.n + 1):
            out.extend(Form(model.n, ring, {m: ring.one}) for m in model.basis((p, q)))
    return out

def _label(w: Form) -> str:
    return "+".join(m.label() for m, _ in w.items()) or "0"

def random_vector_form(rng: random.Random, n: int, density: float = 0.5) -> VectorForm:
    """Constant (0,1)-form valued in T^{1,0} with random Gaussian rational entries."""
    ring = value_ring()
    matrix = [
        [ring.scalar(random_scalar(rng)) if rng.random() < density else ring.zero for _ in range(n)]
        for _ in range(n)
    ]
    return vector_form_from_matrix(matrix, n, ring)

def random_form(rng: random.Random, model, max_degree: int = COMMUTATOR_MAX_DEGREE) -> Form:
    """Random combination of up to two basis monomials of one random bidegree."""
    ring = value_ring()
    bidegrees = [
        (p, q) for p in range(model.n + 1) for q in range(model.n + 1)
        if 0 < p + q <= max_degree
    ]
    p, q = rng.choice(bidegrees)
    basis = model.basis((p, q))
    chosen = rng.sample(basis, min(2, len(basis)))
    return Form(model.n, ring, {m: ring.scalar(random_scalar(rng)) for m in chosen})

def commutator_check(model, samples: int, seed: int = DEFAULT_SEED) -> IdentityCheck:
    """``[phi,psi].a = -del(psi.phi.a) - psi.phi.del a + phi.del(psi.a) + psi.del(phi.a)`` on random data."""
    check = IdentityCheck("commutator")
    rng = random.Random(seed)
    for k in range(samples):
        phi = random_vector_form(rng, model.n)
        psi = random_vector_form(rng, model.n)
        a = random_form(rng, model)
        lhs = bracket(phi, psi, model).contract(a)
        rhs = (
            -model.delta(psi.contract(phi.contract(a)))
            - psi.contract(phi.contract(model.delta(a)))
            + phi.contract(model.delta(psi.contract(a)))
            + psi.contract(model.delta(phi.contract(a)))
        )
        check.record(f"case {k}: {_label(a)}", lhs == rhs)
    return check

def _context_checks(ctx: TransportContext, forms: Sequence[Form], tag: str, integrable: bool) -> List[IdentityCheck]:
    master = IdentityCheck(f"master[{tag}]")
    p0 = IdentityCheck(f"p0_specialization[{tag}]")
    zero_q = IdentityCheck(f"0q_specialization[{tag}]")
    symmetry = IdentityCheck(f"conjugation_symmetry[{tag}]")
    exp = IdentityCheck(f"e_iphi_methods[{tag}]")
    inverse = IdentityCheck(f"canonical_inverse[{tag}]")
    reality = IdentityCheck(f"canonical_reality[{tag}]")
    for w in forms:
        label = _label(w)
        master.record(label, extension_residual(ctx, w, "general").holds)
        exp.record(label, e_iphi(ctx, w, "substitution") == e_iphi(ctx, w, "series"))
        image = canonical_map(ctx, w)
        inverse.record(label, inverse_canonical_map(ctx, image) == ctx.lift(w))
        reality.record(label, canonical_map(ctx, conjugate(w)) == conjugate(image))
        bd = w.bidegree
        if bd.q == 0 and integrable:
            p0.record(label, extension_formula_p0(ctx, w) == extension_formula_general(ctx, w))
        if bd.p == 0:
            if integrable:
                zero_q.record(label, extension_formula_0q(ctx, w) == extension_formula_general(ctx, w))
            symmetry.record(label, extension_formula_0q(ctx, w) == conjugate(extension_formula_p0(ctx, conjugate(w))))
    if not integrable:
        p0.skipped = zero_q.skipped = "Beltrami data is not integrable"
    return [master, p0, zero_q, symmetry, exp, inverse, reality]

def collapse_check(model, forms: Sequence[Form]) -> IdentityCheck:
    """At phi = 0 every formula returns d w."""
    check = IdentityCheck("zero_collapse")
    ctx = TransportContext.series(model, BeltramiSeries.zero(model.n), 1)
    for w in forms:
        dw = model.d(ctx.lift(w))
        ok = extension_formula_general(ctx, w) == dw
        bd = w.bidegree
        if bd.q == 0:
            ok = ok and extension_formula_p0(ctx, w) == dw
        if bd.p == 0:
            ok = ok and extension_formula_0q(ctx, w) == dw
        check.record(_label(w), ok)
    return check

def invariant_suite(
    model,
    phi: BeltramiSeries,
    order: Optional[int] = None,
    t_values: Sequence[ScalarLike] = DEFAULT_T_VALUES,
    samples: int = 200,
    seed: int = DEFAULT_SEED
) -> IdentityReport:
    """Full identity suite on an invariant model for one Beltrami series."""
    order = order or phi.order
    integrability = check_integrability(phi, model, order=order)
    if not integrability.integrable:
        logger.warning(f"Beltrami series {phi.name} is not integrable; specializations are skipped")
    forms = basis_forms(model)
    checks = [collapse_check(model, forms)]
    checks += _context_checks(TransportContext.series(model, phi, order), forms, f"series N={order}", integrability.integrable)
    for t0 in t_values:
        t0 = parse_scalar(t0)
        ctx = TransportContext.value(model, phi, t0)
        checks += _context_checks(ctx, forms, f"t={format_scalar(t0)}", integrability.integrable)
    checks.append(commutator_check(model, samples, seed))
    report = IdentityReport(checks, integrability.to_dict())
    logger.info(f"Identity suite on {model.name} with {phi.name}: passed={report.passed}")
    return report

def chart_cases(model, seed: int = DEFAULT_SEED) -> Dict[str, VectorForm]:
    """Beltrami forms used on chart models: zero, linear in z^1, random constant."""
    ring = model.ring
    n = model.n
    rng = random.Random(seed)
    zero = [[ring.zero] * n for _ in range(n)]
    linear = [[ring.zero] * n for _ in range(n)]
    linear[0][0] = ring.gen("z1") * ring.scalar("1/2")
    constant = [[ring.scalar(random_scalar(rng) / 7) for _ in range(n)] for _ in range(n)]
    return {
        "zero": vector_form_from_matrix(zero, n, ring),
        "linear": vector_form_from_matrix(linear, n, ring),
        "constant": vector_form_from_matrix(constant, n, ring),
    }

def chart_suite(model, seed: int = DEFAULT_SEED) -> IdentityReport:
    """Local frame formula and holomorphicity criterion on a chart model."""
    dvz = IdentityCheck("dvz")
    holo = IdentityCheck("holomorphicity")
    ring = model.ring
    for name, phi in chart_cases(model, seed).items():
        ctx = TransportContext.from_vector_form(model, phi)
        dvz.record(name, verify_dvz(ctx).holds)
    c = ring.scalar("1/3+1/2i")
    phi = [[ring.zero] * model.n for _ in range(model.n)]
    phi[0][0] = c
    ctx = TransportContext.from_vector_form(model, vector_form_from_matrix(phi, model.n, ring))
    f = model.coordinate(1) + model.conj_coordinate(1).scale(c)
    result = holomorphicity_criterion(ctx, f)
    holo.record("z1 + c zb1", result.holomorphic and result.decomposition_holds)
    antiholomorphic = holomorphicity_criterion(TransportContext.from_vector_form(model, chart_cases(model, seed)["zero"]), model.conj_coordinate(1))
    holo.record("zb1 at phi=0", not antiholomorphic.holomorphic and antiholomorphic.decomposition_holds)
    return IdentityReport([dvz, holo])

def identity_suite(model, phi: Optional[BeltramiSeries] = None, **kwargs) -> IdentityReport:
    """Dispatch on the model backend."""
    if model.backend is Backend.CHART:
        return chart_suite(model, kwargs.get("seed", DEFAULT_SEED))
    if phi is None:
        raise ValueError("Invariant models need a Beltrami series to verify")
    return invariant_suite(model, phi, **kwargs)
