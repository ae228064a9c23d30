"""
Exception hierarchy of the deformation engine.

Every error carries the process exit code the command line reports for it.
"""
from typing import Any, Optional

from .constants import ExitCode

class DeformaeError(Exception):
    """Base class for all engine errors."""

    exit_code: ExitCode = ExitCode.PARSE

class ParseError(DeformaeError):
    """Malformed model, Beltrami, form or scalar input."""

class ValidationError(DeformaeError):
    """A model failed its structural checks."""

    exit_code = ExitCode.VALIDATION

    def __init__(self, message: str, generator: Optional[str] = None, residual: Any = None):
        super().__init__(message)
        self.generator = generator
        self.residual = residual

class OrderMismatchError(DeformaeError, ValueError):
    """Series with different truncation orders were combined."""

class ModelMismatchError(DeformaeError, ValueError):
    """Forms over different models or coefficient rings were combined."""

class BidegreeError(DeformaeError, ValueError):
    """An operation got a form of the wrong or an out-of-range bidegree."""

class UnsupportedBackendError(DeformaeError):
    """The operation is not available on this model backend."""

class NotInvertibleError(DeformaeError):
    """A series or matrix that must be inverted is singular."""

    exit_code = ExitCode.OBSTRUCTION

class DegenerateDeformationError(NotInvertibleError):
    """The deformed coframe is not a basis at the requested value."""

class IntegrabilityError(DeformaeError):
    """The Beltrami data is not integrable where integrability is required."""

    exit_code = ExitCode.OBSTRUCTION

class ObstructionError(DeformaeError):
    """An order-by-order extension met a nonzero obstruction."""

    exit_code = ExitCode.OBSTRUCTION

    def __init__(self, message: str, order: int, form: Any = None, hypothesis: Optional[str] = None):
        super().__init__(message)
        self.order = order
        self.form = form
        self.hypothesis = hypothesis

class NoSolutionError(DeformaeError):
    """A linear system that should be solvable has no admissible solution."""

    exit_code = ExitCode.OBSTRUCTION

    def __init__(self, message: str, shape: Optional[tuple] = None):
        super().__init__(message)
        self.shape = shape

class HypothesisError(DeformaeError):
    """A model lies outside the E/D/B classes an operation requires."""

    exit_code = ExitCode.HYPOTHESIS

    def __init__(self, message: str, hypothesis: str):
        super().__init__(message)
        self.hypothesis = hypothesis

class NotClosedError(ObstructionError):
    """A (0,q)-form handed to the extension solver is not d-closed."""
