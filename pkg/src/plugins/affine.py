"""
Complex-parallelizable solvable surface: ``d w^1 = 0``, ``d w^2 = w^1 ^ w^2``.

The invariant model lies in B^{1,1}, so the (0,1) correspondence applies,
while E^{2,0} fails and h^{1,0} may drop.
"""
from ..core.constants import DEFAULT_ORDER
from ..core.models import InvariantModel
from ..utils.codec import parse_model_config

# Solvable surface configuration
AFFINE_CONFIG = {
    "name": "affine2",
    "dim": 2,
    "structure": {
        "2": [{"coeff": "1", "factors": [1, 2]}],
    },
    "families": {
        "integrable": {
            "order": DEFAULT_ORDER,
            "terms": {"1": [{"row": 1, "conj_index": 1, "coeff": "1"}]},
        },
        "nonintegrable": {
            "order": DEFAULT_ORDER,
            "terms": {"1": [{"row": 2, "conj_index": 2, "coeff": "1"}]},
        },
    },
}

class AffineModel(InvariantModel):
    """Solvable surface with B-class invariant cohomology."""

    def __init__(self):
        parsed = parse_model_config(AFFINE_CONFIG)
        super().__init__(parsed["name"], parsed["dim"], parsed["structure"], AFFINE_CONFIG["families"])
