"""
Model and Beltrami loading from files or bundled names.
"""
import logging
from pathlib import Path
from typing import Optional, Union

from .beltrami import BeltramiSeries
from .constants import DEFAULT_CHART_DEGREE
from .exceptions import ParseError
from .models import DifferentialModel, InvariantModel, model_from_config
from ..plugins import bundled_model
from ..utils.codec import read_json

logger = logging.getLogger(__name__)

def load_model(path: Union[str, Path], chart_degree: int = DEFAULT_CHART_DEGREE) -> DifferentialModel:
    """Load and validate a model file, or a bundled model by name.

    Args:
        path: Model file, or the name of a bundled model
        chart_degree: Truncation degree for chart files without ``maxdeg``

    Raises:
        ParseError: If neither a file nor a bundled model matches
    """
    candidate = Path(path)
    if candidate.exists():
        return model_from_config(read_json(candidate), chart_degree=chart_degree)
    model = bundled_model(str(path))
    if model is None:
        raise ParseError(f"No model file or bundled model named {path}")
    return model

def load_beltrami(path: Union[str, Path], model: DifferentialModel,
                  order: Optional[int] = None) -> BeltramiSeries:
    """Load a Beltrami file for a model, or one of the model's named families."""
    candidate = Path(path)
    if candidate.exists():
        series = BeltramiSeries.from_config(read_json(candidate), model.n)
    elif isinstance(model, InvariantModel):
        series = model.family(str(path))
    else:
        raise ParseError(f"No Beltrami file named {path}")
    logger.info(f"Loaded Beltrami series {series.name} (order {series.order})")
    return series.with_order(order) if order else series
