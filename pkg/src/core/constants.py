"""
Global constants for the deformation engine.
"""
from enum import Enum, IntEnum, auto
from typing import Final

class Sector(Enum):
    """Coframe sector a frame-valued form acts on."""
    HOL = "hol"
    ANTIHOL = "antihol"

    @property
    def opposite(self) -> "Sector":
        return Sector.ANTIHOL if self is Sector.HOL else Sector.HOL

class Backend(Enum):
    """Differential model backend."""
    INVARIANT = auto()
    CHART = auto()

class ExtensionKind(Enum):
    """Kind of order-by-order extension run."""
    P0 = "p0"
    ZERO_Q = "0q"

class ContextMode(Enum):
    """Evaluation mode of a transport context."""
    SERIES = "series"
    VALUE = "value"

class ExitCode(IntEnum):
    """Process exit codes of the command line interface."""
    SUCCESS = 0
    PARSE = 1
    VALIDATION = 2
    OBSTRUCTION = 3
    HYPOTHESIS = 4

# Default values
DEFAULT_ORDER: Final[int] = 6
DEFAULT_CHART_DEGREE: Final[int] = 6
DEFAULT_SEED: Final[int] = 0
DEFAULT_WORKERS: Final[int] = 1
DEFAULT_LOG_LEVEL: Final[str] = "WARNING"

# Generator names of the deformation parameter ring
T_NAME: Final[str] = "t"
TBAR_NAME: Final[str] = "tb"

INVARIANT_CAVEAT: Final[str] = (
    "invariant Hodge numbers: computed on the finite-dimensional invariant "
    "model; equality with manifold Hodge numbers is quoted background, "
    "not verified"
)

INVARIANT_CLASS_CAVEAT: Final[str] = (
    "invariant-E/D/B: classes decided on the invariant forms of the model only"
)

SCAN_CAVEAT: Final[str] = (
    "constancy is asserted at the sampled exact values only; invariance for "
    "all t is not certified"
)
