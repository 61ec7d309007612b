"""
Procedure and prior models - randomized decision procedures, finitely
supported priors and risk profiles.
"""
import math
from typing import Any, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from minimaxkit.config import get_settings
from minimaxkit.exceptions import InputError
from minimaxkit.models.labels import (
    Label,
    find_duplicates,
    label_to_json,
    normalize_labels,
)


def distribution_error(values: Sequence[float], tolerance: Optional[float] = None) -> Optional[str]:
    """
    Describe why ``values`` is not a probability vector, or return None.

    Entries must be finite and nonnegative and sum to 1 within the
    row-sum tolerance.
    """
    tol = get_settings().ROW_SUM_TOLERANCE if tolerance is None else tolerance
    if len(values) == 0:
        return "must not be empty"
    for j, v in enumerate(values):
        if not math.isfinite(v):
            return f"entry {j} is not finite"
        if v < 0:
            return f"entry {j} is negative ({v!r})"
    total = math.fsum(values)
    if abs(total - 1.0) > tol:
        return f"sums to {total!r}, expected 1"
    return None


class RandomizedProcedure(BaseModel):
    """
    Row-stochastic kernel δ(x, ·) from observations to actions.

    Non-randomized procedures are the special case of 0/1 rows.
    """

    model_config = ConfigDict(frozen=True)

    matrix: List[List[float]]

    @model_validator(mode="after")
    def check_rows(self) -> "RandomizedProcedure":
        if not self.matrix:
            raise ValueError("Procedure needs at least one observation row")
        width = len(self.matrix[0])
        for x, row in enumerate(self.matrix):
            if len(row) != width:
                raise ValueError(f"Procedure row {x} has {len(row)} entries, expected {width}")
            error = distribution_error(row)
            if error:
                raise ValueError(f"Procedure row {x} {error}")
        return self

    @classmethod
    def point_mass(cls, n_obs: int, n_actions: int, action_index: int) -> "RandomizedProcedure":
        """Take the same action whatever is observed."""
        return cls.from_rule([action_index] * n_obs, n_actions)

    @classmethod
    def from_rule(cls, rule: Sequence[int], n_actions: int) -> "RandomizedProcedure":
        """Non-randomized procedure d(x) = rule[x]."""
        matrix = np.zeros((len(rule), n_actions))
        for x, a in enumerate(rule):
            if not 0 <= a < n_actions:
                raise InputError(f"Action index {a} out of range for {n_actions} actions")
            matrix[x, a] = 1.0
        return cls(matrix=matrix.tolist())

    @classmethod
    def uniform(cls, n_obs: int, n_actions: int) -> "RandomizedProcedure":
        return cls(matrix=[[1.0 / n_actions] * n_actions for _ in range(n_obs)])

    @property
    def n_obs(self) -> int:
        return len(self.matrix)

    @property
    def n_actions(self) -> int:
        return len(self.matrix[0])

    def as_array(self) -> np.ndarray:
        return np.asarray(self.matrix, dtype=float)


class FinitePrior(BaseModel):
    """Probability weights π over the (finite) parameter list."""

    model_config = ConfigDict(frozen=True)

    weights: List[float]

    @field_validator("weights")
    @classmethod
    def check_weights(cls, v: List[float]) -> List[float]:
        error = distribution_error(v)
        if error:
            raise ValueError(f"Prior weights {error}")
        return v

    @classmethod
    def point_mass(cls, size: int, index: int) -> "FinitePrior":
        if not 0 <= index < size:
            raise InputError(f"Index {index} out of range for {size} parameters")
        weights = [0.0] * size
        weights[index] = 1.0
        return cls(weights=weights)

    @classmethod
    def uniform(cls, size: int) -> "FinitePrior":
        return cls(weights=[1.0 / size] * size)

    @property
    def size(self) -> int:
        return len(self.weights)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.weights, dtype=float)

    def support(self, tolerance: float = 0.0) -> List[int]:
        return [i for i, w in enumerate(self.weights) if w > tolerance]


class RiskProfile(BaseModel):
    """The risk function r(·, δ) on a finite parameter list."""

    model_config = ConfigDict(frozen=True)

    values: List[float]

    @field_validator("values")
    @classmethod
    def check_finite(cls, v: List[float]) -> List[float]:
        if not all(math.isfinite(x) for x in v):
            raise ValueError("Risk values must be finite")
        return v

    def maximum(self) -> float:
        return max(self.values)

    def argmax(self) -> int:
        return int(np.argmax(self.values))


class LabeledDistribution(BaseModel):
    """
    Finitely supported probability weights on named points.

    Used for procedures over a trivial sample space whose actions come from an
    infinite set, and for priors on a finite subset of an infinite Θ.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    labels: List[Label]
    weights: List[float]

    @field_validator("labels", mode="before")
    @classmethod
    def canonical_labels(cls, v: Any) -> Any:
        if isinstance(v, (list, tuple)):
            return normalize_labels(v)
        return v

    @model_validator(mode="after")
    def check_distribution(self) -> "LabeledDistribution":
        if len(self.labels) != len(self.weights):
            raise ValueError(
                f"{len(self.labels)} labels but {len(self.weights)} weights"
            )
        duplicates = find_duplicates(self.labels)
        if duplicates:
            raise ValueError(f"Duplicate label {label_to_json(duplicates[0])!r}")
        error = distribution_error(self.weights)
        if error:
            raise ValueError(f"Weights {error}")
        return self

    @field_serializer("labels")
    def serialize_labels(self, labels: List[Label]) -> List[Any]:
        return [label_to_json(label) for label in labels]

    def support(self) -> List[Label]:
        return [label for label, w in zip(self.labels, self.weights) if w > 0]

    def aligned_weights(self, labels: Sequence[Label]) -> np.ndarray:
        """
        Weights re-indexed onto ``labels``.

        Raises:
            InputError: If a supported point is missing from ``labels``.
        """
        position = {label: i for i, label in enumerate(labels)}
        out = np.zeros(len(labels))
        for label, w in zip(self.labels, self.weights):
            if w == 0:
                continue
            if label not in position:
                raise InputError(f"Point {label_to_json(label)!r} is not in the target list")
            out[position[label]] += w
        return out
