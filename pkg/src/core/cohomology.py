"""
Finite linear algebra on invariant models.

Every space is spanned by the lexicographic monomial basis of its bidegree
and every operator is a matrix of columns over QQ_I. Subspace questions
(kernels, images, inclusions) are decided by exact ranks.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .algebra import Form
from .constants import (
    INVARIANT_CAVEAT, INVARIANT_CLASS_CAVEAT, Backend, ContextMode
)
from .exceptions import (
    BidegreeError, HypothesisError, IntegrabilityError, NoSolutionError,
    UnsupportedBackendError
)
from .models import coordinates, from_coordinates
from .scalars import format_scalar, value_ring
from .transport import deformed_dolbeault
from ..utils import linalg
from ..utils.codec import form_to_config

logger = logging.getLogger(__name__)

def _require_invariant(model) -> None:
    if model.backend is not Backend.INVARIANT:
        raise UnsupportedBackendError(f"Cohomology needs an invariant model, got {model.backend.name}")

def _cols(model, op: str, p: int, q: int) -> list:
    """Operator columns, empty for out-of-range sources."""
    if not (0 <= p <= model.n and 0 <= q <= model.n):
        return []
    return model.operator_matrix(op, p, q)

def _compose(outer: list, outer_rows: int, inner: list) -> list:
    return [linalg.apply(outer, outer_rows, col) for col in inner]

def _vectors(kernel: list, columns: list, nrows: int) -> list:
    return [linalg.apply(columns, nrows, v) for v in kernel]

def class_name(letter: str, p: int, q: int) -> str:
    return f"{letter}^{{{p},{q}}}"

@dataclass
class HodgeTable:
    """Hodge numbers ``h^{p,q}`` of the central fibre or of a deformed fibre."""
    n: int
    h: Dict[Tuple[int, int], int]
    at: str = "central"

    def __getitem__(self, key: Tuple[int, int]) -> int:
        return self.h[key]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "at": self.at,
            "caveat": INVARIANT_CAVEAT,
            "h": {f"{p},{q}": v for (p, q), v in sorted(self.h.items())},
        }

@dataclass
class ClassMembership:
    """Membership of a model in E^{p,q}, D^{p,q} and B^{p,q}."""
    p: int
    q: int
    in_E: bool
    in_D: bool
    in_B: bool
    vacuous: bool = False
    witnesses: Dict[str, Form] = field(default_factory=dict)

    @property
    def chain_holds(self) -> bool:
        return (not self.in_B or self.in_D) and (not self.in_D or self.in_E)

    def holds(self, letter: str) -> bool:
        return {"E": self.in_E, "D": self.in_D, "B": self.in_B}[letter]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bidegree": [self.p, self.q],
            "E": self.in_E,
            "D": self.in_D,
            "B": self.in_B,
            "vacuous": self.vacuous,
            "caveat": INVARIANT_CLASS_CAVEAT,
            "witnesses": {k: form_to_config(v) for k, v in sorted(self.witnesses.items())},
        }

def delbar_matrix_at(ctx, p: int, q: int) -> list:
    model = ctx.model
    src = model.safe_basis((p, q))
    tgt = model.safe_basis((p, q + 1))
    columns = []
    for m in src:
        w = Form(model.n, ctx.ring, {m: ctx.ring.one})
        image = deformed_dolbeault(ctx, w, check=False).delbar_t
        columns.append(coordinates(image.to_ring(value_ring()), tgt))
    return columns

def delbar_matrices(model, ctx=None) -> Dict[Tuple[int, int], list]:
    """Columns of delbar (or delbar_t at the context value) on every bidegree."""
    _require_invariant(model)
    if ctx is not None and ctx.mode is not ContextMode.VALUE:
        raise ValueError("Deformed Hodge numbers need a value-mode context")
    n = model.n
    matrices = {}
    for p in range(n + 1):
        for q in range(n + 1):
            matrices[(p, q)] = _cols(model, "delbar", p, q) if ctx is None else delbar_matrix_at(ctx, p, q)
    if ctx is not None:
        for p in range(n + 1):
            for q in range(n):
                composite = _compose(matrices[(p, q + 1)], model.dimension(p, q + 2), matrices[(p, q)])
                if any(any(col) for col in composite):
                    raise IntegrabilityError(f"Deformed delbar does not square to zero on ({p},{q})")
    return matrices

def hodge_numbers(model, ctx=None) -> HodgeTable:
    """``h^{p,q} = dim ker delbar - dim im delbar`` on the invariant forms.

    Args:
        model: Invariant model
        ctx: Optional value-mode transport context for the deformed fibre
    """
    matrices = delbar_matrices(model, ctx)
    n = model.n
    h = {}
    for p in range(n + 1):
        for q in range(n + 1):
            dim = model.dimension(p, q)
            rank_out = linalg.rank(matrices[(p, q)], model.dimension(p, q + 1))
            rank_in = linalg.rank(matrices[(p, q - 1)], dim) if q > 0 else 0
            h[(p, q)] = dim - rank_out - rank_in
    at = "central" if ctx is None else f"t={format_scalar(ctx.t0)}"
    logger.info(f"Hodge numbers of {model.name} at {at}: {h}")
    return HodgeTable(n, h, at)

def dolbeault_basis(model, p: int, q: int, ctx=None) -> List[Form]:
    """Representatives of a basis of H^{p,q}, chosen greedily from the kernel basis."""
    _require_invariant(model)
    if not (0 <= p <= model.n and 0 <= q <= model.n):
        raise BidegreeError(f"Bidegree ({p},{q}) out of range for n={model.n}")
    if ctx is None:
        out_cols = _cols(model, "delbar", p, q)
        in_cols = _cols(model, "delbar", p, q - 1) if q > 0 else []
    else:
        out_cols = delbar_matrix_at(ctx, p, q)
        in_cols = delbar_matrix_at(ctx, p, q - 1) if q > 0 else []
    dim = model.dimension(p, q)
    kernel = linalg.nullspace(out_cols, model.dimension(p, q + 1))
    span = list(in_cols)
    base = linalg.rank(span, dim)
    reps = []
    for v in kernel:
        if linalg.rank(span + [v], dim) > base:
            span.append(v)
            base += 1
            reps.append(from_coordinates(v, model.safe_basis((p, q)), model.n, value_ring()))
    return reps

def classify_EDB(model, p: int, q: int) -> ClassMembership:
    """Decide invariant-E/D/B membership at (p, q).

    With ``S = {del g : g in A^{p-1,q}, delbar del g = 0}``, the model is in
    E, D or B when ``S`` lies in ``delbar A^{p,q-1}``,
    ``delbar(ker del on A^{p,q-1})`` or ``delbar del A^{p-1,q-1}``.
    ``p = 0`` and bidegrees above ``n`` are vacuous.
    """
    _require_invariant(model)
    if p < 0 or q < 0:
        raise BidegreeError(f"Negative bidegree ({p},{q})")
    n = model.n
    if p == 0 or p > n or q > n:
        return ClassMembership(p, q, True, True, True, vacuous=True)
    dim = model.dimension(p, q)
    basis = model.safe_basis((p, q))
    del_in = _cols(model, "delta", p - 1, q)
    delbar_out = _cols(model, "delbar", p, q)
    closed = linalg.nullspace(_compose(delbar_out, model.dimension(p, q + 1), del_in), model.dimension(p, q + 1))
    s_vectors = _vectors(closed, del_in, dim)

    delbar_in = _cols(model, "delbar", p, q - 1)
    t_e = delbar_in
    del_ker = linalg.nullspace(_cols(model, "delta", p, q - 1), model.dimension(p + 1, q - 1))
    t_d = _vectors(del_ker, delbar_in, dim)
    t_b = _compose(delbar_in, dim, _cols(model, "delta", p - 1, q - 1))

    witnesses = {}
    results = {}
    for letter, span in (("E", t_e), ("D", t_d), ("B", t_b)):
        ok, idx = linalg.contains(span, s_vectors, dim)
        results[letter] = ok
        if not ok:
            witnesses[letter] = from_coordinates(s_vectors[idx], basis, n, value_ring())
    membership = ClassMembership(p, q, results["E"], results["D"], results["B"], witnesses=witnesses)
    if not membership.chain_holds:
        raise AssertionError(f"B in D in E violated at ({p},{q}) on {model.name}")
    logger.debug(f"Classes of {model.name} at ({p},{q}): E={membership.in_E} D={membership.in_D} B={membership.in_B}")
    return membership

@dataclass
class DdbarReport:
    """Both one-sided ddbar conditions at every bidegree."""
    conditions: Dict[Tuple[int, int], Dict[str, bool]]
    consistent: bool = True

    @property
    def passes(self) -> bool:
        return all(all(c.values()) for c in self.conditions.values())

    def failing(self) -> List[Tuple[int, int]]:
        return sorted(bd for bd, c in self.conditions.items() if not all(c.values()))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passes": self.passes,
            "consistent_with_B": self.consistent,
            "failing": [list(bd) for bd in self.failing()],
            "conditions": {f"{p},{q}": c for (p, q), c in sorted(self.conditions.items())},
        }

def ddbar_lemma_check(model) -> DdbarReport:
    """Check ``im del & ker delbar`` and ``im delbar & ker del`` lie in ``im del.delbar``."""
    _require_invariant(model)
    n = model.n
    conditions = {}
    for p in range(n + 1):
        for q in range(n + 1):
            dim = model.dimension(p, q)
            t_b = _compose(_cols(model, "delbar", p, q - 1), dim, _cols(model, "delta", p - 1, q - 1))
            del_in = _cols(model, "delta", p - 1, q)
            del_exact = _vectors(
                linalg.nullspace(_compose(_cols(model, "delbar", p, q), model.dimension(p, q + 1), del_in), model.dimension(p, q + 1)),
                del_in, dim
            )
            delbar_in = _cols(model, "delbar", p, q - 1)
            delbar_exact = _vectors(
                linalg.nullspace(_compose(_cols(model, "delta", p, q), model.dimension(p + 1, q), delbar_in), model.dimension(p + 1, q)),
                delbar_in, dim
            )
            conditions[(p, q)] = {
                "del_exact": linalg.contains(t_b, del_exact, dim)[0],
                "delbar_exact": linalg.contains(t_b, delbar_exact, dim)[0],
            }
    report = DdbarReport(conditions)
    if report.passes:
        report.consistent = all(
            classify_EDB(model, p, q).in_B for p in range(1, n + 1) for q in range(n + 1)
        )
        if not report.consistent:
            raise AssertionError(f"ddbar lemma holds on {model.name} but some B^{{p,q}} fails")
    return report

def _solve_representative(model, alpha: Form, d_alpha: Form, pivot_order: Optional[Sequence[int]], reverse: bool = False) -> Form:
    p, q = alpha.bidegree
    target = (p + 1, q)
    nrows = model.dimension(*target)
    columns = _compose(_cols(model, "delbar", p + 1, q - 1), nrows, _cols(model, "delta", p, q - 1))
    order = list(pivot_order) if pivot_order is not None else list(range(len(columns)))
    if reverse:
        order.reverse()
    rhs = coordinates(d_alpha, model.safe_basis(target))
    solution = linalg.solve(columns, nrows, rhs, order)
    if solution is None:
        raise NoSolutionError(
            f"delbar del beta = del alpha has no solution on {model.name}",
            shape=(nrows, len(columns))
        )
    beta = from_coordinates(solution, model.safe_basis((p, q - 1)), model.n, value_ring())
    gamma = alpha + model.delbar(beta)
    if model.d(gamma):
        raise NoSolutionError("Representative is not d-closed", shape=(nrows, len(columns)))
    return gamma

def d_closed_representative(model, alpha: Form, pivot_order: Optional[Sequence[int]] = None, check_hypothesis: bool = True) -> Form:
    """d-closed representative ``alpha + delbar beta`` of a Dolbeault class.

    ``beta`` solves ``delbar del beta = del alpha``, which B^{p+1,q} makes
    solvable. The canonical solution sets free unknowns to zero;
    ``pivot_order`` changes which unknowns are eliminated first. For a
    (0,q)-form on a model in E^{q,0} and B^{1,q} the representative does not
    depend on that choice; the system is then solved a second time with the
    reversed order and the two results are compared.

    Raises:
        HypothesisError: If the model is not in B^{p+1,q}
        NoSolutionError: If the system has no solution anyway, or the two
            solves disagree
    """
    _require_invariant(model)
    alpha = alpha.to_ring(value_ring())
    bd = alpha.bidegree
    if bd is None:
        return alpha
    p, q = bd
    if model.delbar(alpha):
        raise ValueError("Representative requested for a form that is not delbar-closed")
    d_alpha = model.delta(alpha)
    if check_hypothesis:
        membership = classify_EDB(model, p + 1, q)
        if not membership.in_B:
            name = class_name("B", p + 1, q)
            logger.error(f"Model {model.name} is not in {name}")
            raise HypothesisError(f"Model {model.name} is not in {name}; d-closed representatives need it", name)
    if not d_alpha:
        return alpha
    gamma = _solve_representative(model, alpha, d_alpha, pivot_order)
    if p == 0 and classify_EDB(model, q, 0).in_E and classify_EDB(model, 1, q).in_B:
        other = _solve_representative(model, alpha, d_alpha, pivot_order, reverse=True)
        if other != gamma:
            logger.error(f"Representative of {alpha} on {model.name} depends on the pivot order")
            raise NoSolutionError(
                f"Representative on {model.name} depends on the pivot order: {gamma} vs {other}",
                shape=(model.dimension(1, q), model.dimension(0, q - 1))
            )
    return gamma

def _degree_basis(model, k: int) -> list:
    return [m for p in range(k + 1) for m in model.safe_basis((p, k - p))]

def de_rham_numbers(model) -> Dict[int, int]:
    """Betti-type numbers of the invariant de Rham complex."""
    _require_invariant(model)
    ring = value_ring()
    dims, ranks = {}, {}
    for k in range(2 * model.n + 1):
        basis = _degree_basis(model, k)
        target = _degree_basis(model, k + 1)
        columns = [coordinates(model.d(Form(model.n, ring, {m: ring.one})), target) for m in basis]
        dims[k] = len(basis)
        ranks[k] = linalg.rank(columns, len(target))
    return {k: dims[k] - ranks[k] - ranks.get(k - 1, 0) for k in dims}

def frolicher_check(model, table: Optional[HodgeTable] = None) -> Dict[str, Any]:
    """Sanity check ``sum_{p+q=k} h^{p,q} >= b_k``."""
    table = table or hodge_numbers(model)
    betti = de_rham_numbers(model)
    per_degree = {}
    for k, b in betti.items():
        total = sum(v for (p, q), v in table.h.items() if p + q == k)
        per_degree[str(k)] = {"hodge_sum": total, "betti": b, "ok": total >= b}
    return {"holds": all(v["ok"] for v in per_degree.values()), "degrees": per_degree}
