"""
Metric family models - decision problems on bounded intervals with a declared
Lipschitz modulus for the risk.
"""
import math
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator


class FamilyId(str, Enum):
    """Built-in families."""
    LOCATION = "location"
    BERNOULLI = "bernoulli"
    CLAMP = "clamp"


class MetricFamily(BaseModel):
    """
    A decision problem with Θ and A bounded real intervals.

    Subclasses supply the oracle: ``loss(θ, a)`` and ``kernel_row(θ)`` (the
    probabilities of ``obs_labels``). ``lipschitz_k`` must bound the change of
    r(θ, δ) per unit change of θ and of ℓ(θ, a) per unit change of a.
    """

    model_config = ConfigDict(frozen=True)

    family_id: FamilyId
    lipschitz_k: float
    theta_interval: Tuple[float, float]
    action_interval: Tuple[float, float]
    obs_labels: List[int] = [0]
    parameters: Dict[str, float] = {}
    known_value: Optional[float] = None

    @field_validator("lipschitz_k")
    @classmethod
    def check_modulus(cls, v: float) -> float:
        if not (math.isfinite(v) and v > 0):
            raise ValueError(f"Lipschitz constant must be positive and finite, got {v!r}")
        return v

    @model_validator(mode="after")
    def check_intervals(self) -> "MetricFamily":
        for name, (lo, hi) in (
            ("theta_interval", self.theta_interval),
            ("action_interval", self.action_interval),
        ):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError(f"{name} must be bounded, got [{lo}, {hi}]")
            if lo > hi:
                raise ValueError(f"{name} is empty: [{lo}, {hi}]")
        if not self.obs_labels:
            raise ValueError("Family needs at least one observation")
        return self

    def loss(self, theta: float, action: float) -> float:
        raise NotImplementedError

    def kernel_row(self, theta: float) -> List[float]:
        """P_θ over ``obs_labels``; a single certain observation by default."""
        return [1.0]


class LocationFamily(MetricFamily):
    """Θ = A = [lo, hi], no data, ℓ(θ, a) = |θ − a|."""

    family_id: FamilyId = FamilyId.LOCATION
    lipschitz_k: float = 1.0
    theta_interval: Tuple[float, float] = (0.0, 1.0)
    action_interval: Tuple[float, float] = (0.0, 1.0)

    def loss(self, theta: float, action: float) -> float:
        return abs(theta - action)


class BernoulliFamily(MetricFamily):
    """
    One coin flip with P_θ(1) = θ, squared-error loss on [0, 1].

    The rule d(x) = (x + 1/2)/2 has constant risk 1/16, so 1/16 is the value.
    """

    family_id: FamilyId = FamilyId.BERNOULLI
    lipschitz_k: float = 3.0
    theta_interval: Tuple[float, float] = (0.0, 1.0)
    action_interval: Tuple[float, float] = (0.0, 1.0)
    obs_labels: List[int] = [0, 1]
    known_value: Optional[float] = 1.0 / 16.0

    def loss(self, theta: float, action: float) -> float:
        return (theta - action) ** 2

    def kernel_row(self, theta: float) -> List[float]:
        return [1.0 - theta, theta]


class ClampFamily(MetricFamily):
    """Θ = A = [0, L], no data, ℓ(θ, a) = clamp(θ − a, −1, 1); value 0 by skew-symmetry."""

    family_id: FamilyId = FamilyId.CLAMP
    lipschitz_k: float = 1.0
    known_value: Optional[float] = 0.0

    def loss(self, theta: float, action: float) -> float:
        return min(1.0, max(-1.0, theta - action))
