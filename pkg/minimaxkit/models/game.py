"""
Game models - solutions, separation queries and certificates for finite
statistical games.
"""
import math
from typing import List

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from minimaxkit.models.procedure import FinitePrior, RandomizedProcedure


class GameSolution(BaseModel):
    """
    Minimax procedure δ₀, least favorable prior π₀ and the game value.

    ``duality_gap`` is worst_case_risk(δ₀) minus the best Bayes risk
    against π₀, so it bounds how far either strategy is from optimal.
    """

    model_config = ConfigDict(frozen=True)

    value: float
    minimax_procedure: RandomizedProcedure
    least_favorable_prior: FinitePrior
    duality_gap: float

    @field_validator("duality_gap")
    @classmethod
    def check_gap(cls, v: float) -> float:
        if v < -1e-9:
            raise ValueError(f"Duality gap {v!r} is negative")
        return v


class SeparationQuery(BaseModel):
    """Subgame on Θ₀ ⊆ Θ and the convex hull of a finite procedure set D, at level v."""

    model_config = ConfigDict(frozen=True)

    theta_subset: List[int]
    procedure_set: List[RandomizedProcedure]
    level: float

    @model_validator(mode="after")
    def check_query(self) -> "SeparationQuery":
        if not self.theta_subset:
            raise ValueError("Parameter subset must not be empty")
        if len(set(self.theta_subset)) != len(self.theta_subset):
            raise ValueError("Parameter subset contains a repeated index")
        if any(i < 0 for i in self.theta_subset):
            raise ValueError("Parameter indices must be nonnegative")
        if not self.procedure_set:
            raise ValueError("Procedure set must not be empty")
        if not math.isfinite(self.level):
            raise ValueError("Level must be finite")
        return self


class FictitiousPlayResult(BaseModel):
    """Bracket on the game value from fictitious play, with the strategies attaining it."""

    lower_bound: float
    upper_bound: float
    empirical_prior: FinitePrior
    empirical_procedure: RandomizedProcedure
    iterations: int

    @property
    def width(self) -> float:
        return self.upper_bound - self.lower_bound


class SaddleCertificate(BaseModel):
    """Outcome of checking a claimed saddle point against the claimed value."""

    passed: bool
    tolerance: float
    value: float
    worst_case_risk: float
    bayes_lower_bound: float
    failures: List[str] = []
