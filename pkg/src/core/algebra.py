"""
Bigraded exterior algebra over a complexified coframe.

A ``Form`` is a sparse map from canonical monomials to ``Series``
coefficients. Monomials keep holomorphic factors before antiholomorphic ones,
each block strictly increasing; all reordering signs are absorbed into the
coefficients at normalization time. A form may carry several bidegrees
(a mixed form); ``component`` projects onto one of them.
"""
import logging
from typing import Callable, Dict, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .constants import Sector
from .exceptions import BidegreeError, ModelMismatchError
from .scalars import CoefficientRing, Scalar, ScalarLike, Series, parse_scalar

logger = logging.getLogger(__name__)

# Factor key: (0, i) is omega^i, (1, j) is conj(omega)^j
Factor = Tuple[int, int]

class Bidegree(NamedTuple):
    """Form type (p, q)."""
    p: int
    q: int

    def check(self, n: int) -> "Bidegree":
        if not (0 <= self.p <= n and 0 <= self.q <= n):
            raise BidegreeError(f"Bidegree ({self.p},{self.q}) out of range for n={n}")
        return self

class Monomial(NamedTuple):
    """Canonical coframe monomial."""
    hol: Tuple[int, ...]
    antihol: Tuple[int, ...]

    @property
    def bidegree(self) -> Bidegree:
        return Bidegree(len(self.hol), len(self.antihol))

    @property
    def degree(self) -> int:
        return len(self.hol) + len(self.antihol)

    def factors(self) -> List[Factor]:
        return [(0, i) for i in self.hol] + [(1, j) for j in self.antihol]

    def label(self) -> str:
        parts = [f"w{i}" for i in self.hol] + [f"wb{j}" for j in self.antihol]
        return "^".join(parts) if parts else "1"

UNIT = Monomial((), ())

def normalize(factors: Sequence[Factor]) -> Tuple[int, Optional[Monomial]]:
    """Sort factors into canonical order.

    Returns:
        (sign, monomial), or (0, None) when a factor repeats
    """
    items = list(factors)
    sign = 1
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j - 1] >= items[j]:
            if items[j - 1] == items[j]:
                return 0, None
            items[j - 1], items[j] = items[j], items[j - 1]
            sign = -sign
            j -= 1
    hol = tuple(i for s, i in items if s == 0)
    antihol = tuple(i for s, i in items if s == 1)
    return sign, Monomial(hol, antihol)

class Form:
    """Element of the exterior algebra with coefficients in a ``CoefficientRing``."""

    __slots__ = ("n", "ring", "terms")

    def __init__(self, n: int, ring: CoefficientRing, terms: Optional[Dict[Monomial, Series]] = None):
        self.n = n
        self.ring = ring
        self.terms: Dict[Monomial, Series] = {m: c for m, c in (terms or {}).items() if c}

    # Construction

    @classmethod
    def zero(cls, n: int, ring: CoefficientRing) -> "Form":
        return cls(n, ring)

    @classmethod
    def constant(cls, n: int, ring: CoefficientRing, value: Union[ScalarLike, Series] = 1) -> "Form":
        coeff = value if isinstance(value, Series) else ring.scalar(value)
        return cls(n, ring, {UNIT: coeff})

    @classmethod
    def monomial(
        cls,
        n: int,
        ring: CoefficientRing,
        hol: Iterable[int] = (),
        antihol: Iterable[int] = (),
        coeff: Union[ScalarLike, Series] = 1
    ) -> "Form":
        """Form ``coeff * w^hol ^ wb^antihol``; factors in the order given."""
        factors = [(0, i) for i in hol] + [(1, j) for j in antihol]
        return cls.from_factors(n, ring, factors, coeff)

    @classmethod
    def from_factors(
        cls,
        n: int,
        ring: CoefficientRing,
        factors: Sequence[Factor],
        coeff: Union[ScalarLike, Series] = 1
    ) -> "Form":
        for _, i in factors:
            if not 1 <= i <= n:
                raise BidegreeError(f"Frame index {i} out of range 1..{n}")
        sign, mono = normalize(factors)
        if mono is None:
            return cls(n, ring)
        value = coeff if isinstance(coeff, Series) else ring.scalar(coeff)
        return cls(n, ring, {mono: value * sign})

    @classmethod
    def frame(cls, n: int, ring: CoefficientRing, i: int, sector: Sector = Sector.HOL) -> "Form":
        """Coframe element ``w^i`` or ``wb^i``."""
        if sector is Sector.HOL:
            return cls.monomial(n, ring, hol=[i])
        return cls.monomial(n, ring, antihol=[i])

    # Arithmetic

    def _check(self, other: "Form") -> None:
        if not isinstance(other, Form):
            raise TypeError(f"Expected Form, got {type(other).__name__}")
        if other.n != self.n or other.ring != self.ring:
            raise ModelMismatchError(
                f"Forms over different models: n={self.n}/{other.n}, {self.ring}/{other.ring}"
            )

    def __add__(self, other: "Form") -> "Form":
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return Form(self.n, self.ring, terms)

    def __sub__(self, other: "Form") -> "Form":
        return self + (-other)

    def __neg__(self) -> "Form":
        return Form(self.n, self.ring, {m: -c for m, c in self.terms.items()})

    def scale(self, factor: Union[ScalarLike, Series]) -> "Form":
        """Multiply every coefficient by a scalar or series."""
        if not isinstance(factor, Series):
            factor = parse_scalar(factor)
        return Form(self.n, self.ring, {m: c * factor for m, c in self.terms.items()})

    __mul__ = scale
    __rmul__ = scale

    def __eq__(self, other) -> bool:
        if not isinstance(other, Form):
            return NotImplemented
        return self.n == other.n and self.ring == other.ring and self.terms == other.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "Form(0)"
        body = " + ".join(f"({c.poly.as_expr()})*{m.label()}" for m, c in sorted(self.terms.items()))
        return f"Form({body})"

    # Structure

    def items(self) -> Iterator[Tuple[Monomial, Series]]:
        return iter(sorted(self.terms.items()))

    def bidegrees(self) -> List[Bidegree]:
        return sorted({m.bidegree for m in self.terms})

    @property
    def is_pure(self) -> bool:
        return len(self.bidegrees()) <= 1

    @property
    def bidegree(self) -> Optional[Bidegree]:
        """Bidegree of a pure form, None for zero."""
        degrees = self.bidegrees()
        if len(degrees) > 1:
            raise BidegreeError(f"Mixed form has bidegrees {degrees}")
        return degrees[0] if degrees else None

    def component(self, p: int, q: int) -> "Form":
        """Projection onto bidegree (p, q)."""
        return Form(self.n, self.ring, {m: c for m, c in self.terms.items() if m.bidegree == (p, q)})

    def expect_bidegree(self, p: Optional[int] = None, q: Optional[int] = None) -> "Form":
        """Raise unless every term has the given p and/or q."""
        for m in self.terms:
            bd = m.bidegree
            if (p is not None and bd.p != p) or (q is not None and bd.q != q):
                raise BidegreeError(f"Expected bidegree ({p},{q}), found {tuple(bd)}")
        return self

    def coefficient(self, mono: Monomial) -> Series:
        return self.terms.get(mono, self.ring.zero)

    def map_coefficients(self, fn: Callable[[Series], Series], ring: Optional[CoefficientRing] = None) -> "Form":
        return Form(self.n, ring or self.ring, {m: fn(c) for m, c in self.terms.items()})

    def to_ring(self, ring: CoefficientRing) -> "Form":
        """Move coefficients to a ring with the same generators."""
        if ring == self.ring:
            return self
        return self.map_coefficients(lambda c: c.to_ring(ring), ring)

    def truncate(self, degree: int) -> "Form":
        """Drop coefficient terms of total degree above ``degree``."""
        return self.map_coefficients(lambda c: c.truncate(degree))

    def homogeneous(self, degree: int) -> "Form":
        """Coefficient part of exact total degree ``degree``."""
        return self.map_coefficients(lambda c: c.homogeneous(degree))

    def evaluate(self, t0: ScalarLike, ring: CoefficientRing) -> "Form":
        """Substitute ``t = t0`` in every coefficient, landing in ``ring``."""
        return Form(self.n, ring, {m: ring.scalar(c.evaluate(t0)) for m, c in self.terms.items()})

    def conjugate(self) -> "Form":
        return conjugate(self)

def wedge(a: Form, b: Form) -> Form:
    """Exterior product."""
    a._check(b)
    terms: Dict[Monomial, Series] = {}
    for ma, ca in a.terms.items():
        fa = ma.factors()
        for mb, cb in b.terms.items():
            sign, mono = normalize(fa + mb.factors())
            if mono is None:
                continue
            value = ca * cb
            if sign < 0:
                value = -value
            terms[mono] = terms[mono] + value if mono in terms else value
    return Form(a.n, a.ring, terms)

def conjugate(a: Form) -> Form:
    """Complex conjugation: swaps frame sectors and conjugates coefficients."""
    terms: Dict[Monomial, Series] = {}
    for m, c in a.terms.items():
        factors = [(1, i) for i in m.hol] + [(0, j) for j in m.antihol]
        sign, mono = normalize(factors)
        value = c.conjugate()
        terms[mono] = -value if sign < 0 else value
    return Form(a.n, a.ring, terms)

def interior(sector: Sector, rows: Sequence[Form], a: Form) -> Form:
    """Interior derivation ``sum_i rows[i] ^ iota_i(a)``.

    ``iota_i`` removes the factor ``w^i`` (``wb^i`` for the antiholomorphic
    sector) with the Koszul sign of its position. For 1-form rows this is
    the substitution derivation, for 2-form rows the odd derivation.
    """
    flag = 0 if sector is Sector.HOL else 1
    result = Form(a.n, a.ring)
    for m, c in a.terms.items():
        factors = m.factors()
        for pos, (s, i) in enumerate(factors):
            if s != flag:
                continue
            row = rows[i - 1]
            if not row:
                continue
            _, rest = normalize(factors[:pos] + factors[pos + 1:])
            piece = wedge(row, Form(a.n, a.ring, {rest: c}))
            result = result - piece if pos % 2 else result + piece
    return result

def substitute(a: Form, hol_images: Optional[Sequence[Form]] = None, antihol_images: Optional[Sequence[Form]] = None) -> Form:
    """Algebra homomorphism sending frame generators to the given 1-forms.

    ``None`` keeps a sector unchanged.
    """
    result = Form(a.n, a.ring)
    for m, c in a.terms.items():
        piece = Form(a.n, a.ring, {UNIT: c})
        for s, i in m.factors():
            images = hol_images if s == 0 else antihol_images
            image = images[i - 1] if images is not None else Form.frame(
                a.n, a.ring, i, Sector.HOL if s == 0 else Sector.ANTIHOL)
            piece = wedge(piece, image)
            if not piece:
                break
        result = result + piece
    return result

class FrameValuedForm:
    """Form with values in one coframe sector's dual frame.

    Row ``i`` is the form obtained by contracting into the frame element
    ``w^i`` (or ``wb^i``). Contraction acts as the interior derivation.
    """

    def __init__(self, sector: Sector, rows: Sequence[Form]):
        if not rows:
            raise ValueError("Frame-valued form needs at least one row")
        self.sector = sector
        self.rows: Tuple[Form, ...] = tuple(rows)
        self.n = rows[0].n
        self.ring = rows[0].ring
        for row in rows:
            if row.n != self.n or row.ring != self.ring:
                raise ModelMismatchError("Rows of a frame-valued form must share a model")
        if len(self.rows) != self.n:
            raise ValueError(f"Expected {self.n} rows, got {len(self.rows)}")

    def contract(self, a: Form) -> Form:
        if a.n != self.n or a.ring != self.ring:
            raise ModelMismatchError("Contraction of forms over different models")
        return interior(self.sector, self.rows, a)

    def __bool__(self) -> bool:
        return any(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FrameValuedForm):
            return NotImplemented
        return self.sector == other.sector and self.rows == other.rows

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.sector.value}, {list(self.rows)})"

def contract_vector_form(phi: FrameValuedForm, a: Form) -> Form:
    """``phi`` contracted into ``a``."""
    return phi.contract(a)

def contract_endomorphism(m: FrameValuedForm, a: Form) -> Form:
    """Frame endomorphism acting as a degree (0,0) derivation."""
    return m.contract(a)
