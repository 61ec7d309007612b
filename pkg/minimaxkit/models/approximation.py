"""
Approximation models - results of solving ε-net discretizations.
"""
from typing import Any, List, Tuple

from pydantic import BaseModel, ConfigDict, field_serializer, model_validator

from minimaxkit.models.labels import Label, label_to_json
from minimaxkit.models.procedure import FinitePrior, RandomizedProcedure


class ApproximationResult(BaseModel):
    """
    Discrete minimax solution at one mesh and the interval it certifies.

    With spacings h_Θ ≤ ε and h_A ≤ ε_A, the continuous value lies in
    [V_ε − k·ε_A/2, V_ε + k·ε/2]; for equal meshes the width is k·ε.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mesh: float
    action_mesh: float
    lipschitz_k: float
    discrete_value: float
    maximin_value: float
    value_interval: Tuple[float, float]
    theta_points: List[Label]
    action_points: List[Label]
    prior: FinitePrior
    procedure: RandomizedProcedure

    @model_validator(mode="after")
    def check_shapes(self) -> "ApproximationResult":
        if self.prior.size != len(self.theta_points):
            raise ValueError(
                f"Prior has {self.prior.size} weights for {len(self.theta_points)} net points"
            )
        if self.procedure.n_actions != len(self.action_points):
            raise ValueError("Procedure columns do not match the action net")
        lo, hi = self.value_interval
        if lo > hi:
            raise ValueError(f"Empty value interval [{lo}, {hi}]")
        return self

    @field_serializer("theta_points", "action_points")
    def serialize_points(self, points: List[Label]) -> List[Any]:
        return [label_to_json(p) for p in points]

    @property
    def width(self) -> float:
        return self.value_interval[1] - self.value_interval[0]

    def contains(self, value: float, slack: float = 0.0) -> bool:
        lo, hi = self.value_interval
        return lo - slack <= value <= hi + slack

    def prior_support(self) -> List[Tuple[Label, float]]:
        return [
            (point, w)
            for point, w in zip(self.theta_points, self.prior.weights)
            if w > 0
        ]


class LipschitzReport(BaseModel):
    """Random-pair spot test of a declared Lipschitz modulus."""

    passed: bool
    lipschitz_k: float
    samples: int
    worst_ratio: float
    violations: List[str] = []
