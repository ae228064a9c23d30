"""
Differential model backends.

An invariant model is given by structure constants ``d(w^i)``; ``d(wb^i)``
is forced by conjugation and ``d`` extends as an odd derivation. A chart
model has polynomial coefficients in ``z, zb`` and closed coordinate
differentials. Both expose ``d``, ``delta`` (the (1,0) part) and ``delbar``
(the (0,1) part) on forms over any coefficient ring they support.
"""
import logging
import threading
from abc import ABC, abstractmethod
from itertools import combinations
from typing import Any, Dict, List, Optional, Tuple

from sympy.polys.domains import QQ_I

from .algebra import Bidegree, Form, Monomial, conjugate, interior, wedge
from .beltrami import BeltramiSeries
from .constants import DEFAULT_CHART_DEGREE, Backend, Sector
from .exceptions import ParseError, UnsupportedBackendError, ValidationError
from .scalars import CoefficientRing, Scalar, chart_ring, format_scalar, value_ring
from ..utils.codec import factors_to_keys, parse_model_config

logger = logging.getLogger(__name__)

class DifferentialModel(ABC):
    """Abstract base class for differential model backends."""

    backend: Backend
    name: str
    n: int

    @abstractmethod
    def d(self, a: Form) -> Form:
        """Exterior derivative."""
        pass

    @abstractmethod
    def default_ring(self) -> CoefficientRing:
        """Coefficient ring forms on this model use by default."""
        pass

    def delta(self, a: Form) -> Form:
        """The (+1,0) part of d, bidegree by bidegree."""
        result = Form.zero(a.n, a.ring)
        for p, q in a.bidegrees():
            result = result + self.d(a.component(p, q)).component(p + 1, q)
        return result

    def delbar(self, a: Form) -> Form:
        """The (0,+1) part of d, bidegree by bidegree."""
        result = Form.zero(a.n, a.ring)
        for p, q in a.bidegrees():
            result = result + self.d(a.component(p, q)).component(p, q + 1)
        return result

    def basis(self, bd: Tuple[int, int]) -> List[Monomial]:
        """Canonical monomials of a bidegree in lexicographic (hol, antihol) order."""
        p, q = Bidegree(*bd).check(self.n)
        return [
            Monomial(h, a)
            for h in combinations(range(1, self.n + 1), p)
            for a in combinations(range(1, self.n + 1), q)
        ]

    def frame(self, i: int, sector: Sector = Sector.HOL, ring: Optional[CoefficientRing] = None) -> Form:
        return Form.frame(self.n, ring or self.default_ring(), i, sector)

    def zero(self, ring: Optional[CoefficientRing] = None) -> Form:
        return Form.zero(self.n, ring or self.default_ring())

    def generators(self, ring: Optional[CoefficientRing] = None) -> List[Tuple[str, Form]]:
        """All frame generators with printable names."""
        ring = ring or self.default_ring()
        gens = [(f"w{i}", Form.frame(self.n, ring, i, Sector.HOL)) for i in range(1, self.n + 1)]
        gens += [(f"wb{i}", Form.frame(self.n, ring, i, Sector.ANTIHOL)) for i in range(1, self.n + 1)]
        return gens

    def validate(self) -> None:
        """Check d o d = 0 and reality of d on every frame generator.

        Raises:
            ValidationError: With the offending generator and residual
        """
        for label, g in self.generators():
            dd = self.d(self.d(g))
            if dd:
                raise ValidationError(
                    f"d^2 != 0 on {label} in model {self.name}: residual {dd}",
                    generator=label,
                    residual=dd
                )
            if self.d(conjugate(g)) != conjugate(self.d(g)):
                raise ValidationError(
                    f"d does not commute with conjugation on {label} in model {self.name}",
                    generator=label
                )

class InvariantModel(DifferentialModel):
    """Invariant forms of a Lie algebra given by complex structure constants."""

    backend = Backend.INVARIANT

    def __init__(
        self,
        name: str,
        n: int,
        structure: Dict[int, List[Tuple[Scalar, Tuple[int, ...]]]],
        families: Optional[Dict[str, Dict[str, Any]]] = None
    ):
        """Initialize invariant model.

        Args:
            name: Model name
            n: Complex dimension
            structure: Map i -> list of (coeff, signed factor pair) giving d(w^i)
            families: Optional named Beltrami documents shipped with the model
        """
        self.name = name
        self.families = dict(families or {})
        self.n = n
        self.structure = {i: list(terms) for i, terms in structure.items()}
        ring = value_ring()
        images = []
        for i in range(1, n + 1):
            image = Form.zero(n, ring)
            for coeff, factors in self.structure.get(i, []):
                image = image + Form.from_factors(n, ring, factors_to_keys(factors), coeff)
            images.append(image)
        self._structure_forms = tuple(images)
        self._lifted: Dict[CoefficientRing, Tuple[Tuple[Form, ...], Tuple[Form, ...]]] = {}
        self._matrices: Dict[Tuple[str, int, int], list] = {}
        self._lock = threading.Lock()

    def default_ring(self) -> CoefficientRing:
        return value_ring()

    def structure_form(self, i: int, sector: Sector = Sector.HOL) -> Form:
        """d(w^i) or d(wb^i) over the value ring."""
        image = self._structure_forms[i - 1]
        return image if sector is Sector.HOL else conjugate(image)

    def family(self, name: str, order: Optional[int] = None):
        """Named Beltrami series shipped with the model."""
        if name not in self.families:
            raise ParseError(f"Model {self.name} has no Beltrami family {name!r}; known: {sorted(self.families)}")
        series = BeltramiSeries.from_config(dict(self.families[name], name=name), self.n)
        return series.with_order(order) if order else series

    def _images(self, ring: CoefficientRing) -> Tuple[Tuple[Form, ...], Tuple[Form, ...]]:
        cached = self._lifted.get(ring)
        if cached is not None:
            return cached
        hol = tuple(f.map_coefficients(lambda c: ring.scalar(c.constant()), ring) for f in self._structure_forms)
        antihol = tuple(conjugate(f) for f in hol)
        with self._lock:
            self._lifted.setdefault(ring, (hol, antihol))
        return self._lifted[ring]

    def d(self, a: Form) -> Form:
        if a.n != self.n:
            raise ValidationError(f"Form of dimension {a.n} on model {self.name} of dimension {self.n}")
        hol, antihol = self._images(a.ring)
        return interior(Sector.HOL, hol, a) + interior(Sector.ANTIHOL, antihol, a)

    def validate(self) -> None:
        super().validate()
        for i, image in enumerate(self._structure_forms, start=1):
            residue = image.component(0, 2)
            if residue:
                raise ValidationError(
                    f"d(w{i}) has a (0,2) part {residue}: the complex structure of "
                    f"model {self.name} is not integrable",
                    generator=f"w{i}",
                    residual=residue
                )

    def operator_matrix(self, op: str, p: int, q: int) -> list:
        """Columns of ``d``, ``delta`` or ``delbar`` on the (p, q) basis.

        The target basis is the one of the operator's output bidegree.
        Results are cached; the first computation wins.
        """
        key = (op, p, q)
        cached = self._matrices.get(key)
        if cached is not None:
            return cached
        fn = {"delta": self.delta, "delbar": self.delbar}[op]
        target = (p + 1, q) if op == "delta" else (p, q + 1)
        ring = value_ring()
        columns = [
            coordinates(fn(Form(self.n, ring, {m: ring.one})), self.safe_basis(target))
            for m in self.safe_basis((p, q))
        ]
        with self._lock:
            self._matrices.setdefault(key, columns)
        return self._matrices[key]

    def safe_basis(self, bd: Tuple[int, int]) -> List[Monomial]:
        """Basis, empty outside the valid range."""
        p, q = bd
        if not (0 <= p <= self.n and 0 <= q <= self.n):
            return []
        return self.basis(bd)

    def dimension(self, p: int, q: int) -> int:
        return len(self.safe_basis((p, q)))

    def to_config(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "dim": self.n,
            "structure": {
                str(i): [{"coeff": format_scalar(c), "factors": list(f)} for c, f in terms]
                for i, terms in sorted(self.structure.items())
            },
            "families": self.families,
        }

class ChartModel(DifferentialModel):
    """Local chart with polynomial coefficients in z, zb truncated at degree D."""

    backend = Backend.CHART

    def __init__(self, n: int, maxdeg: int, name: str = "chart"):
        if maxdeg < 1:
            raise ValueError("Chart truncation degree must be at least 1")
        self.name = name
        self.n = n
        self.maxdeg = maxdeg
        self.ring = chart_ring(n, maxdeg)

    def default_ring(self) -> CoefficientRing:
        return self.ring

    def coordinate(self, i: int) -> Form:
        """The function z^i as a 0-form."""
        return Form.constant(self.n, self.ring, self.ring.gen(f"z{i}"))

    def conj_coordinate(self, i: int) -> Form:
        """The function zb^i as a 0-form."""
        return Form.constant(self.n, self.ring, self.ring.gen(f"zb{i}"))

    def function(self, terms: Dict[Tuple[int, ...], Any]) -> Form:
        """0-form from exponent tuples over (z1..zn, zb1..zbn)."""
        return Form.constant(self.n, self.ring, self.ring.from_terms(terms))

    def d(self, a: Form) -> Form:
        if a.ring != self.ring:
            raise UnsupportedBackendError("Chart model forms must use the chart coefficient ring")
        result = Form.zero(self.n, self.ring)
        for mono, coeff in a.terms.items():
            rest = Form(self.n, self.ring, {mono: self.ring.one})
            for i in range(1, self.n + 1):
                for sector, name in ((Sector.HOL, f"z{i}"), (Sector.ANTIHOL, f"zb{i}")):
                    partial = coeff.diff(name)
                    if partial:
                        result = result + wedge(Form.frame(self.n, self.ring, i, sector), rest).scale(partial)
        return result

    def truncation_safe(self, a: Form, lost: int = 1) -> Form:
        """Part of a form that is exact despite ``lost`` derivative orders."""
        return a.truncate(self.maxdeg - 1 - lost)

def coordinates(form: Form, basis: List[Monomial]) -> List[Scalar]:
    """Coordinate vector of a constant-coefficient form in a basis."""
    index = {m: k for k, m in enumerate(basis)}
    vec = [QQ_I.zero] * len(basis)
    for m, c in form.terms.items():
        if m not in index:
            raise ValidationError(f"Monomial {m.label()} outside the target basis")
        if not c.is_constant():
            raise ValidationError("Coordinates need constant coefficients")
        vec[index[m]] = c.constant()
    return vec

def from_coordinates(vector, basis: List[Monomial], n: int, ring: CoefficientRing) -> Form:
    return Form(n, ring, {m: ring.scalar(c) for m, c in zip(basis, vector) if c})

def model_from_config(data: Dict[str, Any], validate: bool = True,
                      chart_degree: int = DEFAULT_CHART_DEGREE) -> DifferentialModel:
    """Build a model from a model document.

    Chart documents without ``maxdeg`` are truncated at ``chart_degree``.

    Raises:
        ParseError: On schema violations
        ValidationError: If d^2 != 0 or the structure is not integrable
    """
    parsed = parse_model_config(data)
    if parsed["backend"] == "chart":
        maxdeg = chart_degree if parsed["maxdeg"] is None else parsed["maxdeg"]
        model: DifferentialModel = ChartModel(parsed["dim"], maxdeg, parsed["name"])
    else:
        model = InvariantModel(parsed["name"], parsed["dim"], parsed["structure"], data.get("families"))
    if validate:
        model.validate()
    logger.info(f"Loaded model {model.name} (n={model.n}, backend={model.backend.name})")
    return model

