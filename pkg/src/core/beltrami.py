"""
Beltrami differentials and frame endomorphisms.

A vector form is stored through its contractions with the coframe of one
sector: row ``i`` of a T^{1,0}-valued form is its contraction with ``w^i``.
``phi`` is a T^{1,0}-valued (0,1)-form, ``phibar`` a T^{0,1}-valued
(1,0)-form, and frame endomorphisms are vector forms whose rows are 1-forms
of their own sector.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from .algebra import Form, FrameValuedForm, Monomial, conjugate, substitute
from .constants import DEFAULT_ORDER, Sector
from .exceptions import (
    BidegreeError, DegenerateDeformationError, IntegrabilityError,
    ModelMismatchError, NotInvertibleError, ParseError
)
from .scalars import (
    ZERO, CoefficientRing, Scalar, ScalarLike, Series, format_scalar,
    make_scalar, parse_scalar, series_ring, value_ring
)
from ..utils import linalg
from ..utils.codec import beltrami_to_config, form_to_config, parse_beltrami_config

logger = logging.getLogger(__name__)

HALF = make_scalar(QQ(1, 2))

Matrix = List[List[Series]]

class VectorForm(FrameValuedForm):
    """Frame-valued form of any row degree."""

    @classmethod
    def zero(cls, n: int, ring: CoefficientRing, sector: Sector = Sector.HOL) -> "VectorForm":
        return cls(sector, [Form.zero(n, ring)] * n)

    @property
    def row_degree(self) -> Optional[int]:
        """Common degree of the nonzero rows, None for zero."""
        degrees = {m.degree for row in self.rows for m in row.terms}
        if len(degrees) > 1:
            raise BidegreeError(f"Rows of mixed degree {sorted(degrees)}")
        return degrees.pop() if degrees else None

    def _like(self, rows: Sequence[Form]) -> "VectorForm":
        return VectorForm(self.sector, rows)

    def __add__(self, other: "VectorForm") -> "VectorForm":
        if self.sector is not other.sector:
            raise ModelMismatchError("Vector forms of different sectors")
        return self._like([a + b for a, b in zip(self.rows, other.rows)])

    def __sub__(self, other: "VectorForm") -> "VectorForm":
        return self + other.scale(-1)

    def scale(self, factor) -> "VectorForm":
        return self._like([row.scale(factor) for row in self.rows])

    def map_rows(self, fn) -> "VectorForm":
        return self._like([fn(row) for row in self.rows])

    def conjugate(self) -> "VectorForm":
        """Vector form of the opposite sector with conjugated rows."""
        return VectorForm(self.sector.opposite, [conjugate(row) for row in self.rows])

    def homogeneous(self, degree: int) -> "VectorForm":
        return self.map_rows(lambda row: row.homogeneous(degree))

    def truncate(self, degree: int) -> "VectorForm":
        return self.map_rows(lambda row: row.truncate(degree))

    def evaluate(self, t0: ScalarLike, ring: CoefficientRing) -> "VectorForm":
        return VectorForm(self.sector, [row.evaluate(t0, ring) for row in self.rows])

    def to_ring(self, ring: CoefficientRing) -> "VectorForm":
        return VectorForm(self.sector, [row.to_ring(ring) for row in self.rows])

    def apply_endomorphism(self, endo: "FrameEndomorphism") -> "VectorForm":
        """Let ``endo`` act on the form part of every row."""
        return VectorForm(self.sector, [endo.contract(row) for row in self.rows])

class VectorForm02(VectorForm):
    """T^{1,0}-valued (0,2)-form such as a bracket or a Maurer-Cartan residual."""

    def __init__(self, sector: Sector, rows: Sequence[Form]):
        super().__init__(sector, rows)
        for row in self.rows:
            row.expect_bidegree(0, 2)

    def _like(self, rows: Sequence[Form]) -> "VectorForm":
        return VectorForm02(self.sector, rows)

class FrameEndomorphism(VectorForm):
    """Endomorphism of one coframe sector: ``e^i -> sum_k entries[i][k] e^k``."""

    def __init__(self, sector: Sector, entries: Sequence[Sequence[Series]], n: int, ring: CoefficientRing):
        self.entries: Matrix = [list(r) for r in entries]
        if len(self.entries) != n or any(len(r) != n for r in self.entries):
            raise ValueError(f"Endomorphism entries must be {n}x{n}")
        rows = []
        for i in range(n):
            row = Form.zero(n, ring)
            for k in range(n):
                if self.entries[i][k]:
                    row = row + Form.frame(n, ring, k + 1, sector).scale(self.entries[i][k])
            rows.append(row)
        super().__init__(sector, rows)

    @classmethod
    def identity(cls, n: int, ring: CoefficientRing, sector: Sector) -> "FrameEndomorphism":
        return cls(sector, identity_matrix(n, ring), n, ring)

    def inverse(self, name: str = "endomorphism") -> "FrameEndomorphism":
        return FrameEndomorphism(self.sector, invert_matrix(self.entries, self.ring, name), self.n, self.ring)

    def matmul(self, other: "FrameEndomorphism") -> "FrameEndomorphism":
        return FrameEndomorphism(self.sector, matrix_product(self.entries, other.entries), self.n, self.ring)

    def constant_entries(self) -> List[List[Scalar]]:
        return [[c.constant() for c in row] for row in self.entries]

def identity_matrix(n: int, ring: CoefficientRing) -> Matrix:
    return [[ring.one if i == k else ring.zero for k in range(n)] for i in range(n)]

def matrix_product(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    ring = a[0][0].ring
    out = []
    for i in range(n):
        row = []
        for k in range(n):
            acc = ring.zero
            for j in range(n):
                if a[i][j] and b[j][k]:
                    acc = acc + a[i][j] * b[j][k]
            row.append(acc)
        out.append(row)
    return out

def invert_matrix(entries: Matrix, ring: CoefficientRing, name: str = "matrix") -> Matrix:
    """Inverse of a square matrix of series.

    The constant part ``C`` is inverted exactly; the rest ``P`` enters through
    ``sum_k (-C^-1 P)^k C^-1`` up to the truncation order.

    Raises:
        NotInvertibleError: If ``C`` is singular, or ``P`` is nonzero in an
            untruncated ring
    """
    n = len(entries)
    if n == 0:
        return []
    constant = [[c.constant() for c in row] for row in entries]
    c_inv = [[ring.scalar(v) for v in row] for row in linalg.invert(constant, name)]
    rest = [[entries[i][k] - ring.scalar(constant[i][k]) for k in range(n)] for i in range(n)]
    if not any(c for row in rest for c in row):
        return c_inv
    if ring.order is None:
        raise NotInvertibleError(f"{name} has non-constant entries and no truncation order")
    step = [[-c for c in row] for row in matrix_product(c_inv, rest)]
    result = c_inv
    power = identity_matrix(n, ring)
    for _ in range(ring.order):
        power = matrix_product(power, step)
        if not any(c for row in power for c in row):
            break
        result = [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(result, matrix_product(power, c_inv))]
    return result

def beltrami_matrix(phi: VectorForm) -> Matrix:
    """Entries ``Phi[i][j]`` with ``phi^i = sum_j Phi[i][j] wb^j``."""
    if phi.sector is not Sector.HOL:
        raise ValueError("Beltrami matrix needs a T^{1,0}-valued form")
    matrix = []
    for row in phi.rows:
        row.expect_bidegree(0, 1)
        matrix.append([row.coefficient(_antihol_monomial(j)) for j in range(1, phi.n + 1)])
    return matrix

def _antihol_monomial(j: int):
    return Monomial((), (j,))

def vector_form_from_matrix(matrix: Matrix, n: int, ring: CoefficientRing) -> VectorForm:
    rows = []
    for i in range(n):
        row = Form.zero(n, ring)
        for j in range(n):
            if matrix[i][j]:
                row = row + Form.frame(n, ring, j + 1, Sector.ANTIHOL).scale(matrix[i][j])
        rows.append(row)
    return VectorForm(Sector.HOL, rows)

class BeltramiSeries:
    """Power series ``phi(t) = sum_{k>=1} t^k phi_k`` with constant coefficients."""

    def __init__(self, n: int, terms: Dict[int, List[List[Scalar]]], order: int = DEFAULT_ORDER, name: str = "phi"):
        """Initialize Beltrami series.

        Args:
            n: Complex dimension
            terms: Map k -> n x n matrix of phi_k (row i, column of wb^j)
            order: Truncation order N
            name: Label used in reports
        """
        if order < 1:
            raise ValueError("Beltrami order must be at least 1")
        for k, matrix in terms.items():
            if k < 1:
                raise ValueError("Beltrami series start at t^1")
            if len(matrix) != n or any(len(r) != n for r in matrix):
                raise ValueError(f"Term {k} must be an {n}x{n} matrix")
        self.n = n
        self.order = order
        self.name = name
        self.terms = {k: [list(r) for r in m] for k, m in sorted(terms.items()) if any(any(r) for r in m)}

    @classmethod
    def from_entries(cls, n: int, entries: Dict[int, List[Tuple[int, int, ScalarLike]]], order: int = DEFAULT_ORDER, name: str = "phi") -> "BeltramiSeries":
        """Build from ``k -> [(row, conj_index, coeff)]`` with 1-based indices."""
        terms = {}
        for k, items in entries.items():
            matrix = [[ZERO] * n for _ in range(n)]
            for row, col, coeff in items:
                if not (1 <= row <= n and 1 <= col <= n):
                    raise ParseError(f"Beltrami entry ({row},{col}) out of range 1..{n}")
                matrix[row - 1][col - 1] += parse_scalar(coeff)
            terms[k] = matrix
        return cls(n, terms, order, name)

    @classmethod
    def from_config(cls, data: Dict[str, Any], n: int) -> "BeltramiSeries":
        order, entries = parse_beltrami_config(data)
        return cls.from_entries(n, entries, order, data.get("name", "phi"))

    @classmethod
    def zero(cls, n: int, order: int = DEFAULT_ORDER) -> "BeltramiSeries":
        return cls(n, {}, order, "zero")

    def to_config(self) -> Dict[str, Any]:
        entries = {
            k: [(i + 1, j + 1, c) for i, row in enumerate(m) for j, c in enumerate(row) if c]
            for k, m in self.terms.items()
        }
        config = beltrami_to_config(self.order, entries)
        config["name"] = self.name
        return config

    def with_order(self, order: int) -> "BeltramiSeries":
        return BeltramiSeries(self.n, self.terms, order, self.name)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def term(self, k: int, ring: Optional[CoefficientRing] = None) -> VectorForm:
        """``phi_k`` as a vector form with constant coefficients."""
        ring = ring or value_ring()
        matrix = self.terms.get(k)
        if matrix is None:
            return VectorForm.zero(self.n, ring)
        return vector_form_from_matrix([[ring.scalar(c) for c in row] for row in matrix], self.n, ring)

    def matrix(self, ring: CoefficientRing) -> Matrix:
        """Series entries of ``phi(t)`` in a deformation-parameter ring."""
        bound = ring.order if ring.order is not None else self.order
        out = [[ring.zero] * self.n for _ in range(self.n)]
        for k, m in self.terms.items():
            if k > bound:
                continue
            for i in range(self.n):
                for j in range(self.n):
                    if m[i][j]:
                        out[i][j] = out[i][j] + ring.from_terms({(k, 0): m[i][j]})
        return out

    def in_ring(self, ring: Optional[CoefficientRing] = None) -> VectorForm:
        """``phi(t)`` over a series ring, truncated at its order."""
        ring = ring or series_ring(self.order)
        return vector_form_from_matrix(self.matrix(ring), self.n, ring)

    def at(self, t0: ScalarLike) -> VectorForm:
        """``phi(t0)`` summed exactly over the stored terms."""
        t0 = parse_scalar(t0)
        ring = value_ring()
        out = [[ZERO] * self.n for _ in range(self.n)]
        for k, m in self.terms.items():
            if k > self.order:
                continue
            power = t0 ** k
            for i in range(self.n):
                for j in range(self.n):
                    out[i][j] += m[i][j] * power
        return vector_form_from_matrix([[ring.scalar(c) for c in row] for row in out], self.n, ring)

    def conjugate(self, ring: Optional[CoefficientRing] = None) -> VectorForm:
        """T^{0,1}-valued ``phibar(t)``."""
        return self.in_ring(ring).conjugate()

    def __repr__(self) -> str:
        return f"BeltramiSeries({self.name}, n={self.n}, order={self.order}, terms={sorted(self.terms)})"

def _coframe(model, ring: CoefficientRing, sector: Sector = Sector.HOL) -> List[Form]:
    return [Form.frame(model.n, ring, i, sector) for i in range(1, model.n + 1)]

def bracket(phi: VectorForm, psi: VectorForm, model) -> VectorForm02:
    """``[phi, psi]`` through its contractions with the holomorphic coframe.

    Row ``i`` is
    ``-del(psi.phi.w^i) - psi.phi.del(w^i) + phi.del(psi.w^i) + psi.del(phi.w^i)``.
    """
    if phi.ring != psi.ring or phi.n != psi.n:
        raise ModelMismatchError("Bracket of vector forms over different rings")
    rows = []
    for w in _coframe(model, phi.ring):
        row = (
            -model.delta(psi.contract(phi.contract(w)))
            - psi.contract(phi.contract(model.delta(w)))
            + phi.contract(model.delta(psi.contract(w)))
            + psi.contract(model.delta(phi.contract(w)))
        )
        rows.append(row)
    return VectorForm02(Sector.HOL, rows)

def differentiate_vector_form(vf: VectorForm, op: str, model) -> VectorForm:
    """Apply ``delta`` or ``delbar`` to a vector form of any row degree.

    ``(DV)_i = D(V_i) - (-1)^{|V|} V.D(e^i)`` with ``|V|`` the row degree
    minus one and ``e^i`` the coframe of the vector form's sector.
    """
    fn = {"delta": model.delta, "delbar": model.delbar, "d": model.d}.get(op)
    if fn is None:
        raise ValueError(f"Unknown operator {op!r}")
    degree = vf.row_degree
    if degree is None:
        return VectorForm(vf.sector, [fn(row) for row in vf.rows])
    sign = 1 if (degree - 1) % 2 == 0 else -1
    rows = []
    for row, e in zip(vf.rows, _coframe(model, vf.ring, vf.sector)):
        correction = vf.contract(fn(e))
        rows.append(fn(row) - correction if sign > 0 else fn(row) + correction)
    return VectorForm(vf.sector, rows)

def delbar_vector_form(phi: VectorForm, model) -> VectorForm02:
    """``delbar phi``, fixed by ``delbar(phi.a) = (delbar phi).a + phi.delbar(a)``."""
    return VectorForm02(Sector.HOL, differentiate_vector_form(phi, "delbar", model).rows)

def maurer_cartan_residual(phi: VectorForm, model) -> VectorForm02:
    """``delbar phi - 1/2 [phi, phi]``."""
    mc = delbar_vector_form(phi, model)
    half = bracket(phi, phi, model).scale(HALF)
    return VectorForm02(Sector.HOL, [a - b for a, b in zip(mc.rows, half.rows)])

def frame_residual(phi: VectorForm, model) -> List[Form]:
    """(0,2) block of ``d(w^i + phi^i)`` modulo the deformed (1,0) coframe.

    Reducing modulo the ideal of ``theta^k = w^k + phi^k`` amounts to the
    substitution ``w^k -> -phi^k``.
    """
    images = [-row for row in phi.rows]
    out = []
    for w, row in zip(_coframe(model, phi.ring), phi.rows):
        out.append(substitute(model.d(w + row), images, None))
    return out

@dataclass
class OrderCheck:
    """Integrability status at one order (or at one value)."""
    order: Optional[int]
    maurer_cartan: bool
    frame: bool
    mc_residual: List[Form] = field(default_factory=list)
    frame_residual: List[Form] = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return self.maurer_cartan == self.frame

    def to_dict(self) -> Dict[str, Any]:
        return {
            "order": self.order,
            "maurer_cartan": self.maurer_cartan,
            "frame": self.frame,
            "agree": self.agree,
            "mc_residual": {str(i + 1): form_to_config(r) for i, r in enumerate(self.mc_residual) if r},
            "frame_residual": {str(i + 1): form_to_config(r) for i, r in enumerate(self.frame_residual) if r},
        }

@dataclass
class IntegrabilityReport:
    """Both integrability checks, per order or at one value."""
    mode: str
    checks: List[OrderCheck]
    t0: Optional[Scalar] = None

    @property
    def integrable(self) -> bool:
        return all(c.maurer_cartan and c.frame for c in self.checks)

    @property
    def agree(self) -> bool:
        return all(c.agree for c in self.checks)

    def _first(self, attr: str) -> Optional[int]:
        for c in self.checks:
            if not getattr(c, attr):
                return c.order if c.order is not None else 0
        return None

    @property
    def first_failure(self) -> Optional[int]:
        failures = [x for x in (self._first("maurer_cartan"), self._first("frame")) if x is not None]
        return min(failures) if failures else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode,
            "t0": format_scalar(self.t0) if self.t0 is not None else None,
            "integrable": self.integrable,
            "agree": self.agree,
            "first_failure": self.first_failure,
            "first_failure_maurer_cartan": self._first("maurer_cartan"),
            "first_failure_frame": self._first("frame"),
            "checks": [c.to_dict() for c in self.checks],
        }

def check_integrability(
    phi: BeltramiSeries,
    model,
    order: Optional[int] = None,
    t0: Optional[ScalarLike] = None
) -> IntegrabilityReport:
    """Maurer-Cartan and frame-ideal checks.

    In series mode the residuals are split by t-order 1..N. With ``t0`` the
    exact value ``phi(t0)`` is checked once.

    Raises:
        DegenerateDeformationError: If the deformed coframe degenerates at t0
    """
    if t0 is not None:
        t0 = parse_scalar(t0)
        value = phi.at(t0)
        endomorphisms_at(value)
        mc = maurer_cartan_residual(value, model).rows
        fr = frame_residual(value, model)
        check = OrderCheck(None, not any(mc), not any(fr), list(mc), fr)
        report = IntegrabilityReport("value", [check], t0)
    else:
        n_order = order or phi.order
        ring = series_ring(n_order)
        series = phi.in_ring(ring)
        mc_all = maurer_cartan_residual(series, model).rows
        fr_all = frame_residual(series, model)
        checks = []
        for k in range(1, n_order + 1):
            mc = [r.homogeneous(k) for r in mc_all]
            fr = [r.homogeneous(k) for r in fr_all]
            checks.append(OrderCheck(k, not any(mc), not any(fr), mc, fr))
        report = IntegrabilityReport("series", checks)
    logger.debug(f"Integrability of {phi.name}: integrable={report.integrable}, first_failure={report.first_failure}")
    return report

def require_integrable(phi: BeltramiSeries, model, order: Optional[int] = None, t0: Optional[ScalarLike] = None) -> IntegrabilityReport:
    """Raise ``IntegrabilityError`` unless both checks pass."""
    report = check_integrability(phi, model, order=order, t0=t0)
    if not report.integrable:
        logger.error(f"Beltrami series {phi.name} is not integrable (first failure at order {report.first_failure})")
        raise IntegrabilityError(
            f"Beltrami series {phi.name} is not integrable on model {model.name}: "
            f"first failure at order {report.first_failure}"
        )
    return report

@dataclass
class Endomorphisms:
    """``phibar.phi``, ``phi.phibar`` and the inverses of ``1 - ...``."""
    phibar_phi: FrameEndomorphism
    phi_phibar: FrameEndomorphism
    inv_1_minus_phibar_phi: FrameEndomorphism
    inv_1_minus_phi_phibar: FrameEndomorphism

def endomorphisms_of(phi: VectorForm) -> Endomorphisms:
    """Endomorphisms of a fixed vector form over its own ring.

    Raises:
        NotInvertibleError: Naming the singular matrix
    """
    n, ring = phi.n, phi.ring
    big_phi = beltrami_matrix(phi)
    big_phibar = [[c.conjugate() for c in row] for row in big_phi]
    antihol = matrix_product(big_phibar, big_phi)
    hol = matrix_product(big_phi, big_phibar)
    ident = identity_matrix(n, ring)
    one_minus_antihol = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(ident, antihol)]
    one_minus_hol = [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(ident, hol)]
    inv_antihol = invert_matrix(one_minus_antihol, ring, "1 - phibar.phi")
    inv_hol = invert_matrix(one_minus_hol, ring, "1 - phi.phibar")
    for name, m, inv in (("1 - phibar.phi", one_minus_antihol, inv_antihol), ("1 - phi.phibar", one_minus_hol, inv_hol)):
        if matrix_product(m, inv) != ident:
            raise NotInvertibleError(f"Inverse of {name} failed verification")
    return Endomorphisms(
        FrameEndomorphism(Sector.ANTIHOL, antihol, n, ring),
        FrameEndomorphism(Sector.HOL, hol, n, ring),
        FrameEndomorphism(Sector.ANTIHOL, inv_antihol, n, ring),
        FrameEndomorphism(Sector.HOL, inv_hol, n, ring),
    )

def endomorphisms_at(phi: VectorForm) -> Endomorphisms:
    """Value-mode endomorphisms; singular frames are a degenerate deformation."""
    try:
        return endomorphisms_of(phi)
    except NotInvertibleError as e:
        logger.error(f"Deformed coframe degenerates: {e}")
        raise DegenerateDeformationError(str(e)) from e

def build_endomorphisms(phi, order: Optional[int] = None, t0: Optional[ScalarLike] = None) -> Endomorphisms:
    """Endomorphisms of a Beltrami series in series mode or at ``t0``.

    A plain ``VectorForm`` is used over its own ring.
    """
    if isinstance(phi, VectorForm):
        return endomorphisms_of(phi)
    if t0 is not None:
        return endomorphisms_of(phi.at(t0))
    return endomorphisms_of(phi.in_ring(series_ring(order or phi.order)))
