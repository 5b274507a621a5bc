"""Shared estimator output type."""

import math
from dataclasses import dataclass, field

from ..errors import NonFinite


@dataclass(frozen=True)
class MIEstimate:
    """One estimator's output in nats, with audit diagnostics."""

    value: float
    estimator: str  # "histogram_mm" | "ksg" | "mine" | "infonce"
    diagnostics: dict = field(default_factory=dict)
    seed: int = None

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise NonFinite(f"{self.estimator} produced non-finite value {self.value}")
