"""
Core engine: exact scalars, forms, models, transport and cohomology.

Only the dependency-free layers are re-exported here; import the engine
modules (``models``, ``beltrami``, ``transport``, ``cohomology``,
``extension``) directly.
"""

from .constants import *
from .exceptions import (
    BidegreeError, DeformaeError, DegenerateDeformationError, HypothesisError,
    IntegrabilityError, ModelMismatchError, NoSolutionError, NotClosedError,
    NotInvertibleError, ObstructionError, OrderMismatchError, ParseError,
    UnsupportedBackendError, ValidationError
)
from .scalars import CoefficientRing, Series, format_scalar, parse_scalar, series_ring, value_ring
from .algebra import Bidegree, Form, Monomial, conjugate, wedge

__all__ = [
    'BidegreeError',
    'DeformaeError',
    'DegenerateDeformationError',
    'HypothesisError',
    'IntegrabilityError',
    'ModelMismatchError',
    'NoSolutionError',
    'NotClosedError',
    'NotInvertibleError',
    'ObstructionError',
    'OrderMismatchError',
    'ParseError',
    'UnsupportedBackendError',
    'ValidationError',
    'CoefficientRing',
    'Series',
    'format_scalar',
    'parse_scalar',
    'series_ring',
    'value_ring',
    'Bidegree',
    'Form',
    'Monomial',
    'conjugate',
    'wedge'
]
