"""
Kodaira-Thurston surface: ``d w^1 = 0``, ``d w^2 = w^1 ^ wb^1``.
"""
from ..core.constants import DEFAULT_ORDER
from ..core.models import InvariantModel
from ..utils.codec import parse_model_config

# Kodaira-Thurston surface configuration
KODAIRA_THURSTON_CONFIG = {
    "name": "kodaira_thurston",
    "dim": 2,
    "structure": {
        "2": [{"coeff": "1", "factors": [1, -1]}],
    },
    "families": {
        "integrable": {
            "order": DEFAULT_ORDER,
            "terms": {"1": [{"row": 1, "conj_index": 1, "coeff": "1"}]},
        },
        "fibre": {
            "order": DEFAULT_ORDER,
            "terms": {"1": [{"row": 2, "conj_index": 2, "coeff": "1"}]},
        },
        "nonintegrable": {
            "order": DEFAULT_ORDER,
            "terms": {"1": [{"row": 1, "conj_index": 2, "coeff": "1"}]},
        },
    },
}

class KodairaThurstonModel(InvariantModel):
    """Kodaira-Thurston surface, in E^{1,1} and D^{1,1} but not B^{1,1}."""

    def __init__(self):
        parsed = parse_model_config(KODAIRA_THURSTON_CONFIG)
        super().__init__(
            parsed["name"], parsed["dim"], parsed["structure"], KODAIRA_THURSTON_CONFIG["families"]
        )
