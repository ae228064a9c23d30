"""
JSON codec for model, Beltrami and form documents.

The codec only turns documents into plain typed tuples (and back); the
engine modules build their own objects from them.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from ..core.algebra import Form
from ..core.exceptions import ParseError
from ..core.scalars import CoefficientRing, Scalar, format_scalar, parse_scalar

logger = logging.getLogger(__name__)

StructureTerm = Tuple[Scalar, Tuple[int, ...]]
BeltramiEntry = Tuple[int, int, Scalar]

def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a UTF-8 JSON document.

    Raises:
        ParseError: If the file is missing or not valid JSON
    """
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError as e:
        raise ParseError(f"File not found: {path}") from e
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ParseError(f"Malformed JSON in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ParseError(f"Expected a JSON object in {path}")
    return data

def file_digest(path: Union[str, Path]) -> str:
    """SHA-256 hex digest of a file's bytes."""
    with open(path, "rb") as f:
        return hashlib.sha256(f.read()).hexdigest()

def _require(data: Dict[str, Any], key: str, kind, where: str):
    if key not in data:
        raise ParseError(f"Missing key {key!r} in {where}")
    value = data[key]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f"Key {key!r} in {where} must be {kind.__name__}")
    return value

def parse_model_config(data: Dict[str, Any]) -> Dict[str, Any]:
    """Check a model document and convert its structure constants.

    Returns:
        Dictionary with name, dim, backend, maxdeg (None when a chart model
        leaves it to the caller) and structure, where
        structure maps i to a list of (coeff, factors) pairs; positive
        factor j is w^j, negative is wb^-j
    """
    backend = data.get("backend", "invariant")
    if backend not in ("invariant", "chart"):
        raise ParseError(f"Unknown backend {backend!r}")
    dim = _require(data, "dim", int, "model")
    if dim < 1:
        raise ParseError("Model dimension must be positive")
    name = data.get("name", backend)
    if not isinstance(name, str):
        raise ParseError("Model name must be a string")
    result: Dict[str, Any] = {"name": name, "dim": dim, "backend": backend, "structure": {}}
    if backend == "chart":
        result["maxdeg"] = _require(data, "maxdeg", int, "chart model") if "maxdeg" in data else None
        return result
    structure = data.get("structure", {})
    if not isinstance(structure, dict):
        raise ParseError("Model structure must be an object")
    for key, terms in structure.items():
        try:
            i = int(key)
        except ValueError as e:
            raise ParseError(f"Structure key {key!r} is not an integer") from e
        if not 1 <= i <= dim:
            raise ParseError(f"Structure key {i} out of range 1..{dim}")
        if not isinstance(terms, list):
            raise ParseError(f"Structure of w^{i} must be a list")
        parsed: List[StructureTerm] = []
        for term in terms:
            if not isinstance(term, dict):
                raise ParseError(f"Structure term of w^{i} must be an object")
            coeff = parse_scalar(str(term.get("coeff", "1")))
            factors = term.get("factors")
            if not isinstance(factors, list) or len(factors) != 2:
                raise ParseError(f"Structure term of w^{i} needs exactly two factors")
            for j in factors:
                if not isinstance(j, int) or j == 0 or abs(j) > dim:
                    raise ParseError(f"Bad factor index {j!r} in structure of w^{i}")
            parsed.append((coeff, tuple(factors)))
        result["structure"][i] = parsed
    return result

def factors_to_keys(factors: Tuple[int, ...]) -> List[Tuple[int, int]]:
    """Signed factor indices to frame factor keys."""
    return [(0, j) if j > 0 else (1, -j) for j in factors]

def parse_beltrami_config(data: Dict[str, Any]) -> Tuple[int, Dict[int, List[BeltramiEntry]]]:
    """Check a Beltrami document.

    Returns:
        (order, terms) with terms mapping k to (row, conj_index, coeff)
    """
    order = _require(data, "order", int, "beltrami")
    if order < 1:
        raise ParseError("Beltrami order must be at least 1")
    raw = data.get("terms", {})
    if not isinstance(raw, dict):
        raise ParseError("Beltrami terms must be an object")
    terms: Dict[int, List[BeltramiEntry]] = {}
    for key, entries in raw.items():
        try:
            k = int(key)
        except ValueError as e:
            raise ParseError(f"Beltrami order key {key!r} is not an integer") from e
        if k < 1:
            raise ParseError("Beltrami terms start at t^1")
        if not isinstance(entries, list):
            raise ParseError(f"Beltrami term {k} must be a list")
        parsed = []
        for entry in entries:
            if not isinstance(entry, dict):
                raise ParseError(f"Beltrami entry of term {k} must be an object")
            row = _require(entry, "row", int, f"beltrami term {k}")
            col = _require(entry, "conj_index", int, f"beltrami term {k}")
            parsed.append((row, col, parse_scalar(str(entry.get("coeff", "1")))))
        terms[k] = parsed
    return order, terms

def beltrami_to_config(order: int, terms: Dict[int, List[BeltramiEntry]]) -> Dict[str, Any]:
    return {
        "order": order,
        "terms": {
            str(k): [
                {"row": row, "conj_index": col, "coeff": format_scalar(c)}
                for row, col, c in entries
            ]
            for k, entries in sorted(terms.items())
        }
    }

def parse_form(data: Dict[str, Any], n: int, ring: CoefficientRing) -> Form:
    """Build a constant-coefficient form from a form document."""
    bidegree = data.get("bidegree")
    if not isinstance(bidegree, list) or len(bidegree) != 2:
        raise ParseError("Form needs a bidegree [p, q]")
    p, q = bidegree
    terms = data.get("terms", [])
    if not isinstance(terms, list):
        raise ParseError("Form terms must be a list")
    form = Form.zero(n, ring)
    for term in terms:
        hol = term.get("hol", [])
        antihol = term.get("antihol", [])
        if len(hol) != p or len(antihol) != q:
            raise ParseError(f"Form term {term} does not match bidegree ({p},{q})")
        for j in list(hol) + list(antihol):
            if not isinstance(j, int) or not 1 <= j <= n:
                raise ParseError(f"Form index {j!r} out of range 1..{n}")
        coeff = parse_scalar(str(term.get("coeff", "1")))
        form = form + Form.monomial(n, ring, hol, antihol, coeff)
    return form

def form_to_config(form: Form) -> Dict[str, Any]:
    """Serialise a form; series coefficients are written term by term."""
    bidegrees = form.bidegrees()
    terms = []
    for mono, coeff in form.items():
        entry: Dict[str, Any] = {"hol": list(mono.hol), "antihol": list(mono.antihol)}
        if coeff.is_constant():
            entry["coeff"] = format_scalar(coeff.constant())
        else:
            entry["series"] = series_to_config(coeff)
        terms.append(entry)
    result: Dict[str, Any] = {"terms": terms}
    if len(bidegrees) == 1:
        result["bidegree"] = list(bidegrees[0])
    else:
        result["bidegrees"] = [list(bd) for bd in bidegrees]
    return result

def series_to_config(coeff) -> List[Dict[str, Any]]:
    return [
        {"exponents": list(m), "coeff": format_scalar(c)}
        for m, c in sorted(coeff.terms().items())
    ]

def parse_form_label(text: str, n: int, ring: CoefficientRing) -> Form:
    """Monomial from a label such as ``w3`` or ``w1^wb2``."""
    factors = []
    for token in text.replace(" ", "").split("^"):
        if token.startswith("wb") and token[2:].isdigit():
            factors.append(-int(token[2:]))
        elif token.startswith("w") and token[1:].isdigit():
            factors.append(int(token[1:]))
        else:
            raise ParseError(f"Bad form label {text!r}; expected e.g. 'w1' or 'w1^wb2'")
    for j in factors:
        if not 1 <= abs(j) <= n:
            raise ParseError(f"Form index {abs(j)} out of range 1..{n}")
    form = Form.from_factors(n, ring, factors_to_keys(tuple(factors)))
    if not form:
        raise ParseError(f"Form label {text!r} repeats a factor")
    return form
