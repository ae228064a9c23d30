"""
Bundled models.
"""
import logging
from typing import Any, Callable, Dict, Optional

from .affine import AFFINE_CONFIG, AffineModel
from .iwasawa import IWASAWA_CONFIG, IwasawaModel
from .kodaira_thurston import KODAIRA_THURSTON_CONFIG, KodairaThurstonModel
from .torus import TORUS_CONFIGS, TorusModel

logger = logging.getLogger(__name__)

BUNDLED_CONFIGS: Dict[str, Dict[str, Any]] = {
    "torus1": TORUS_CONFIGS[1],
    "torus2": TORUS_CONFIGS[2],
    "torus3": TORUS_CONFIGS[3],
    "iwasawa": IWASAWA_CONFIG,
    "kodaira_thurston": KODAIRA_THURSTON_CONFIG,
    "affine2": AFFINE_CONFIG,
}

_FACTORIES: Dict[str, Callable[[], Any]] = {
    "torus1": lambda: TorusModel(1),
    "torus2": lambda: TorusModel(2),
    "torus3": lambda: TorusModel(3),
    "iwasawa": IwasawaModel,
    "kodaira_thurston": KodairaThurstonModel,
    "affine2": AffineModel,
}

def bundled_model_config(name: str) -> Optional[Dict[str, Any]]:
    """Model document of a bundled model, or None."""
    return BUNDLED_CONFIGS.get(name)

def bundled_model(name: str):
    """Validated bundled model by name, or None."""
    factory = _FACTORIES.get(name)
    if factory is None:
        return None
    model = factory()
    model.validate()
    logger.info(f"Loaded bundled model {name}")
    return model

__all__ = [
    'AffineModel',
    'IwasawaModel',
    'KodairaThurstonModel',
    'TorusModel',
    'BUNDLED_CONFIGS',
    'bundled_model',
    'bundled_model_config'
]
