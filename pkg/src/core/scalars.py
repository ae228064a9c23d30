"""
Exact base arithmetic: Gaussian rationals and truncated power series.

Scalars are elements of ``QQ_I``. Coefficients of forms are ``Series``,
elements of a ``CoefficientRing``: a sparse polynomial ring over ``QQ_I``
whose generators come in conjugate pairs and whose products are truncated
at a fixed total degree.
"""
import logging
import random
import re
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ, QQ_I
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from .constants import DEFAULT_ORDER, T_NAME, TBAR_NAME
from .exceptions import NotInvertibleError, OrderMismatchError, ParseError

logger = logging.getLogger(__name__)

Scalar = type(QQ_I.one)
ScalarLike = Union[int, str, "Scalar"]

ZERO = QQ_I.zero
ONE = QQ_I.one
I_UNIT = QQ_I(0, 1)

_RATIONAL = re.compile(r"[+-]?\d+(?:/\d+)?")

def make_scalar(re_part, im_part=0) -> Scalar:
    """Build a Gaussian rational from rational real and imaginary parts."""
    return QQ_I(QQ.convert(re_part), QQ.convert(im_part))

def conj(a: Scalar) -> Scalar:
    """Complex conjugate of a Gaussian rational."""
    return QQ_I(a.x, -a.y)

def _parse_rational(text: str, source: str):
    if not _RATIONAL.fullmatch(text):
        raise ParseError(f"Invalid rational {text!r} in scalar {source!r}")
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ParseError(f"Zero denominator in scalar {source!r}")
        return QQ(int(num), int(den))
    return QQ(int(text))

def parse_scalar(text: Union[str, int]) -> Scalar:
    """Parse an exact scalar such as ``"1/10"``, ``"1/10+1/7i"`` or ``"-i"``.

    Args:
        text: Scalar literal or integer

    Returns:
        Gaussian rational

    Raises:
        ParseError: On malformed input or floating point literals
    """
    if isinstance(text, int):
        return make_scalar(text)
    if isinstance(text, Scalar):
        return text
    if not isinstance(text, str):
        raise ParseError(f"Unsupported scalar literal {text!r}")
    source = text
    s = text.replace(" ", "")
    if not s:
        raise ParseError("Empty scalar literal")
    if "." in s or re.search(r"\d[eE]", s):
        raise ParseError(
            f"Floating point literal {source!r} rejected: only exact rationals "
            "and Gaussian rationals such as '1/10' or '1/10+1/7i' are accepted"
        )
    if not s.endswith("i"):
        return QQ_I(_parse_rational(s, source), QQ.zero)
    body = s[:-1]
    split = max(body.rfind("+"), body.rfind("-"))
    if split > 0:
        real_text, imag_text = body[:split], body[split:]
    else:
        real_text, imag_text = "", body
    if imag_text in ("", "+"):
        imag = QQ.one
    elif imag_text == "-":
        imag = -QQ.one
    else:
        imag = _parse_rational(imag_text, source)
    real = _parse_rational(real_text, source) if real_text else QQ.zero
    return QQ_I(real, imag)

def format_scalar(a: Scalar) -> str:
    """Canonical text of a Gaussian rational, inverse to ``parse_scalar``."""
    x, y = a.x, a.y
    if not y:
        return str(x)
    if y == QQ.one:
        imag = "i"
    elif y == -QQ.one:
        imag = "-i"
    else:
        imag = f"{y}i"
    if not x:
        return imag
    if imag.startswith("-"):
        return f"{x}{imag}"
    return f"{x}+{imag}"

def random_scalar(rng: random.Random, bound: int = 3) -> Scalar:
    """Small random Gaussian rational for randomized checks."""
    den = rng.randint(1, bound)
    return make_scalar(QQ(rng.randint(-bound, bound), den), QQ(rng.randint(-bound, bound), den))

class CoefficientRing:
    """Truncated polynomial ring over ``QQ_I`` with conjugate generator pairs.

    Generators are laid out as ``a_1..a_m, b_1..b_m`` for the pairs
    ``(a_k, b_k)``; conjugation swaps ``a_k`` and ``b_k``. Terms of total
    degree above ``order`` are dropped after every product. ``order=None``
    disables truncation.
    """

    def __init__(self, pairs: Sequence[Tuple[str, str]], order: Optional[int]):
        if order is not None and order < 0:
            raise ValueError("Truncation order must be non-negative")
        self.pairs = tuple(tuple(p) for p in pairs)
        self.order = order
        self.names = tuple(a for a, _ in self.pairs) + tuple(b for _, b in self.pairs)
        self.poly_ring = PolyRing(",".join(self.names), QQ_I, lex)
        self._half = len(self.pairs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoefficientRing):
            return NotImplemented
        return self.pairs == other.pairs and self.order == other.order

    def __hash__(self) -> int:
        return hash((self.pairs, self.order))

    def __repr__(self) -> str:
        return f"CoefficientRing({self.names}, order={self.order})"

    @property
    def zero(self) -> "Series":
        return Series(self, self.poly_ring.zero)

    @property
    def one(self) -> "Series":
        return Series(self, self.poly_ring.one)

    def scalar(self, value: ScalarLike) -> "Series":
        """Embed a scalar as a constant series."""
        return Series(self, self.poly_ring.ground_new(parse_scalar(value)))

    def gen(self, name: str) -> "Series":
        """Generator by name."""
        return Series(self, self.poly_ring.gens[self.names.index(name)])

    def from_terms(self, terms: Dict[Tuple[int, ...], ScalarLike]) -> "Series":
        """Series from a map of exponent tuples to scalars."""
        data = {m: parse_scalar(c) for m, c in terms.items()}
        return Series(self, self.truncate_poly(self.poly_ring.from_dict(data)))

    def truncate_poly(self, poly: PolyElement, degree: Optional[int] = None) -> PolyElement:
        bound = self.order if degree is None else degree
        if bound is None:
            return poly
        if all(sum(m) <= bound for m in poly.itermonoms()):
            return poly
        return self.poly_ring.from_dict({m: c for m, c in poly.items() if sum(m) <= bound})

    def conj_monom(self, monom: Tuple[int, ...]) -> Tuple[int, ...]:
        return monom[self._half:] + monom[:self._half]

@lru_cache(maxsize=None)
def series_ring(order: Optional[int] = DEFAULT_ORDER) -> CoefficientRing:
    """Ring of bivariate series in ``t, tb`` truncated at total order N."""
    return CoefficientRing([(T_NAME, TBAR_NAME)], order)

def value_ring() -> CoefficientRing:
    """Untruncated ring used for exact values at a fixed parameter."""
    return series_ring(None)

@lru_cache(maxsize=None)
def chart_ring(n: int, degree: int) -> CoefficientRing:
    """Polynomials in ``z_i, zb_i`` truncated at total degree D."""
    return CoefficientRing([(f"z{i}", f"zb{i}") for i in range(1, n + 1)], degree)

class Series:
    """Immutable element of a ``CoefficientRing``."""

    __slots__ = ("ring", "poly")

    def __init__(self, ring: CoefficientRing, poly: PolyElement):
        self.ring = ring
        self.poly = poly

    def _coerce(self, other) -> Optional["Series"]:
        if isinstance(other, Series):
            if other.ring.order != self.ring.order:
                raise OrderMismatchError(
                    f"Truncation orders differ: {self.ring.order} vs {other.ring.order}"
                )
            if other.ring.pairs != self.ring.pairs:
                raise OrderMismatchError("Series over different generator sets")
            return other
        if isinstance(other, (int, Scalar)):
            return self.ring.scalar(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Series(self.ring, self.poly + other.poly)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Series(self.ring, self.poly - other.poly)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Series(self.ring, other.poly - self.poly)

    def __neg__(self):
        return Series(self.ring, -self.poly)

    def __mul__(self, other):
        if isinstance(other, (int, Scalar)):
            return Series(self.ring, self.poly.mul_ground(parse_scalar(other)))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return Series(self.ring, self.ring.truncate_poly(self.poly * other.poly))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Scalar)):
            return self.poly == self.ring.poly_ring.ground_new(parse_scalar(other))
        if not isinstance(other, Series):
            return NotImplemented
        return self.ring == other.ring and self.poly == other.poly

    def __hash__(self) -> int:
        return hash((self.ring, tuple(sorted(self.poly.items(), key=lambda kv: kv[0]))))

    def __bool__(self) -> bool:
        return bool(self.poly)

    def __repr__(self) -> str:
        return f"Series({self.poly.as_expr()}, order={self.ring.order})"

    def terms(self) -> Dict[Tuple[int, ...], Scalar]:
        return dict(self.poly.items())

    def constant(self) -> Scalar:
        """Constant term."""
        return self.poly.get(self.ring.poly_ring.zero_monom, ZERO)

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.poly.itermonoms())

    def coefficient(self, *exponents: int) -> Scalar:
        """Coefficient of the monomial with the given exponent tuple."""
        return self.poly.get(tuple(exponents), ZERO)

    def degree(self) -> int:
        """Total degree, -1 for zero."""
        return max((sum(m) for m in self.poly.itermonoms()), default=-1)

    def low_degree(self) -> int:
        """Smallest total degree of a nonzero term, -1 for zero."""
        return min((sum(m) for m in self.poly.itermonoms()), default=-1)

    def conjugate(self) -> "Series":
        """Swap paired generators and conjugate coefficients."""
        data = {self.ring.conj_monom(m): conj(c) for m, c in self.poly.items()}
        return Series(self.ring, self.ring.poly_ring.from_dict(data))

    def truncate(self, degree: int) -> "Series":
        """Drop terms of total degree above ``degree``."""
        return Series(self.ring, self.ring.truncate_poly(self.poly, degree))

    def homogeneous(self, degree: int) -> "Series":
        """Part of exact total degree ``degree``."""
        data = {m: c for m, c in self.poly.items() if sum(m) == degree}
        return Series(self.ring, self.ring.poly_ring.from_dict(data))

    def diff(self, name: str) -> "Series":
        """Formal partial derivative by a generator."""
        gen = self.ring.poly_ring.gens[self.ring.names.index(name)]
        return Series(self.ring, self.poly.diff(gen))

    def evaluate(self, t0: ScalarLike) -> Scalar:
        """Substitute ``t = t0`` and ``tb = conj(t0)`` in a series-ring element."""
        if self.ring.pairs != ((T_NAME, TBAR_NAME),):
            raise ValueError("Only deformation-parameter series can be evaluated at t0")
        t0 = parse_scalar(t0)
        t0bar = conj(t0)
        total = ZERO
        for (j, k), c in self.poly.items():
            total += c * t0 ** j * t0bar ** k
        return total

    def to_ring(self, ring: CoefficientRing) -> "Series":
        """Reinterpret over another ring with the same generators."""
        if ring.pairs != self.ring.pairs:
            raise OrderMismatchError("Cannot move series between different generator sets")
        return Series(ring, ring.truncate_poly(ring.poly_ring.from_dict(dict(self.poly.items()))))

    def invert(self) -> "Series":
        """Multiplicative inverse up to the truncation order."""
        c = self.constant()
        if not c:
            raise NotInvertibleError(f"Series {self!r} has zero constant term")
        c_inv = ONE / c
        rest = self - self.ring.scalar(c)
        if not rest:
            return self.ring.scalar(c_inv)
        if self.ring.order is None:
            raise NotInvertibleError("Non-constant series cannot be inverted without truncation")
        x = -(rest * c_inv)
        result = self.ring.one
        power = self.ring.one
        for _ in range(self.ring.order):
            power = power * x
            if not power:
                break
            result = result + power
        return result * c_inv

def series_mul(a: Series, b: Series) -> Series:
    """Truncated product; orders must match."""
    if a.ring.order != b.ring.order:
        raise OrderMismatchError(f"Truncation orders differ: {a.ring.order} vs {b.ring.order}")
    return a * b

def series_invert(a: Series) -> Series:
    """Inverse of a series with nonzero constant term."""
    return a.invert()

def t_series(order: int = DEFAULT_ORDER, terms: Optional[Iterable[Tuple[int, int, ScalarLike]]] = None) -> Series:
    """Series ``sum c t^j tb^k`` from ``(j, k, c)`` triples."""
    ring = series_ring(order)
    return ring.from_terms({(j, k): c for j, k, c in (terms or [])})
