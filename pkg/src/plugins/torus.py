"""
Complex tori: abelian Lie algebras, d identically zero.
"""
from math import comb
from typing import Any, Dict

from ..core.constants import DEFAULT_ORDER
from ..core.models import InvariantModel
from ..utils.codec import parse_model_config

def _families(n: int) -> Dict[str, Any]:
    families = {
        "constant": {
            "order": DEFAULT_ORDER,
            "terms": {"1": [{"row": 1, "conj_index": 1, "coeff": "1/2"}]},
        },
    }
    if n > 1:
        families["mixed"] = {
            "order": DEFAULT_ORDER,
            "terms": {
                "1": [
                    {"row": 1, "conj_index": 1, "coeff": "1"},
                    {"row": 2, "conj_index": 1, "coeff": "1/3+i"},
                ],
                "2": [{"row": n, "conj_index": n, "coeff": "-2/5"}],
            },
        }
    return families

# Torus configurations by complex dimension
TORUS_CONFIGS = {
    n: {
        "name": f"torus{n}",
        "dim": n,
        "structure": {},
        "families": _families(n),
    }
    for n in (1, 2, 3)
}

class TorusModel(InvariantModel):
    """Flat complex torus of dimension 1, 2 or 3."""

    def __init__(self, n: int = 3):
        """Initialize torus model.

        Args:
            n: Complex dimension (1-3)
        """
        if n not in TORUS_CONFIGS:
            raise ValueError("Bundled tori have dimension 1, 2 or 3")
        config = TORUS_CONFIGS[n]
        parsed = parse_model_config(config)
        super().__init__(parsed["name"], parsed["dim"], parsed["structure"], config["families"])

    def expected_hodge_number(self, p: int, q: int) -> int:
        """``C(n,p) C(n,q)``."""
        return comb(self.n, p) * comb(self.n, q)
