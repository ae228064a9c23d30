"""
Iwasawa manifold: quotient of the complex Heisenberg group.

Structure equations ``d w^1 = d w^2 = 0`` and ``d w^3 = -w^1 ^ w^2``.
"""
from ..core.constants import DEFAULT_ORDER
from ..core.models import InvariantModel
from ..utils.codec import parse_model_config

# Iwasawa manifold configuration
IWASAWA_CONFIG = {
    "name": "iwasawa",
    "dim": 3,
    "structure": {
        "3": [{"coeff": "-1", "factors": [1, 2]}],
    },
    "families": {
        "integrable": {
            "order": DEFAULT_ORDER,
            "terms": {"1": [{"row": 1, "conj_index": 1, "coeff": "1"}]},
        },
        "nakamura": {
            "order": DEFAULT_ORDER,
            "terms": {
                "1": [
                    {"row": 1, "conj_index": 1, "coeff": "1"},
                    {"row": 2, "conj_index": 2, "coeff": "1"},
                ],
                "2": [{"row": 3, "conj_index": 3, "coeff": "-1"}],
            },
        },
        "nonintegrable": {
            "order": DEFAULT_ORDER,
            "terms": {
                "1": [
                    {"row": 1, "conj_index": 1, "coeff": "1"},
                    {"row": 2, "conj_index": 2, "coeff": "1"},
                ],
            },
        },
    },
}

class IwasawaModel(InvariantModel):
    """Iwasawa manifold, complex parallelizable and not in E^{2,0}."""

    def __init__(self):
        parsed = parse_model_config(IWASAWA_CONFIG)
        super().__init__(parsed["name"], parsed["dim"], parsed["structure"], IWASAWA_CONFIG["families"])

    def nakamura(self, order: int = DEFAULT_ORDER):
        """Integrable family along which h^{1,0} drops from 3 to 2."""
        return self.family("nakamura", order)
