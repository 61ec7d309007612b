"""
Measure models - finitely supported probability measures on the line and
optimal couplings between them.
"""
import math
from typing import List

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator

from minimaxkit.models.procedure import distribution_error


class DiscreteMeasure(BaseModel):
    """Weights on distinct real support points."""

    model_config = ConfigDict(frozen=True)

    support: List[float]
    weights: List[float]

    @model_validator(mode="after")
    def check_measure(self) -> "DiscreteMeasure":
        if len(self.support) != len(self.weights):
            raise ValueError(
                f"{len(self.support)} support points but {len(self.weights)} weights"
            )
        if not all(math.isfinite(x) for x in self.support):
            raise ValueError("Support points must be finite")
        if len(set(self.support)) != len(self.support):
            raise ValueError("Support contains a repeated point")
        error = distribution_error(self.weights)
        if error:
            raise ValueError(f"Weights {error}")
        return self

    @classmethod
    def dirac(cls, point: float) -> "DiscreteMeasure":
        return cls(support=[point], weights=[1.0])

    @property
    def size(self) -> int:
        return len(self.support)

    def points(self) -> np.ndarray:
        return np.asarray(self.support, dtype=float)

    def masses(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)


class TransportPlan(BaseModel):
    """Optimal coupling with its cost and dual potentials (u_i + v_j ≤ d(x_i, y_j))."""

    cost: float
    coupling: List[List[float]]
    source_potentials: List[float]
    target_potentials: List[float]
    certified: bool
