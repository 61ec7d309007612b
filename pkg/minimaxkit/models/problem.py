"""
Finite decision problem model - parameters, actions, observations, loss and
sampling kernel.
"""
import math
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_serializer, field_validator, model_validator

from minimaxkit.config import get_settings
from minimaxkit.models.labels import (
    Label,
    find_duplicates,
    label_to_json,
    normalize_labels,
)


class Violation(BaseModel):
    """A single broken invariant of a decision problem."""

    field: str
    location: Optional[List[int]] = None
    message: str


class ValidationReport(BaseModel):
    """Every violated invariant; empty iff the problem is valid."""

    violations: List[Violation] = []

    @property
    def is_valid(self) -> bool:
        return not self.violations


def _as_float(value: Any) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        return math.nan


def _check_matrix_shape(
    name: str, matrix: Any, n_rows: int, n_cols: int
) -> List[Violation]:
    if not isinstance(matrix, (list, tuple)) or len(matrix) != n_rows:
        found = len(matrix) if isinstance(matrix, (list, tuple)) else "no"
        return [
            Violation(field=name, message=f"{name} must have {n_rows} rows, found {found}")
        ]
    violations = []
    for i, row in enumerate(matrix):
        if not isinstance(row, (list, tuple)) or len(row) != n_cols:
            violations.append(
                Violation(
                    field=name,
                    location=[i],
                    message=f"{name} row {i} must have {n_cols} entries",
                )
            )
    return violations


def collect_violations(
    theta_labels: Sequence[Label],
    action_labels: Sequence[Label],
    obs_labels: Sequence[Label],
    loss: Any,
    kernel: Any,
    tolerance: Optional[float] = None,
) -> List[Violation]:
    """
    Check every invariant of a finite decision problem.

    Args:
        theta_labels: Parameter labels
        action_labels: Action labels
        obs_labels: Observation labels
        loss: |Θ|×|A| loss rows
        kernel: |Θ|×|X| sampling rows
        tolerance: Row-sum tolerance for the kernel (settings default)

    Returns:
        List of violations, in field order
    """
    tol = get_settings().ROW_SUM_TOLERANCE if tolerance is None else tolerance
    violations: List[Violation] = []

    for name, labels in (
        ("theta_labels", theta_labels),
        ("action_labels", action_labels),
        ("obs_labels", obs_labels),
    ):
        if not labels:
            violations.append(Violation(field=name, message=f"{name} must not be empty"))
        for duplicate in find_duplicates(labels):
            violations.append(
                Violation(
                    field=name,
                    message=f"{name} contains duplicate label {label_to_json(duplicate)!r}",
                )
            )

    n_theta, n_actions, n_obs = len(theta_labels), len(action_labels), len(obs_labels)

    shape_violations = _check_matrix_shape("loss", loss, n_theta, n_actions)
    violations.extend(shape_violations)
    if not shape_violations:
        for i, row in enumerate(loss):
            for j, value in enumerate(row):
                if not math.isfinite(_as_float(value)):
                    violations.append(
                        Violation(
                            field="loss",
                            location=[i, j],
                            message=f"loss[{i}][{j}] is not a finite number: {value!r}",
                        )
                    )

    shape_violations = _check_matrix_shape("kernel", kernel, n_theta, n_obs)
    violations.extend(shape_violations)
    if not shape_violations:
        for i, row in enumerate(kernel):
            values = [_as_float(v) for v in row]
            bad = [j for j, v in enumerate(values) if not math.isfinite(v) or v < 0]
            for j in bad:
                violations.append(
                    Violation(
                        field="kernel",
                        location=[i, j],
                        message=f"kernel[{i}][{j}] must be a nonnegative number: {row[j]!r}",
                    )
                )
            if not bad:
                total = math.fsum(values)
                if abs(total - 1.0) > tol:
                    violations.append(
                        Violation(
                            field="kernel",
                            location=[i],
                            message=f"kernel row {i} sums to {total!r}, expected 1",
                        )
                    )
    return violations


class FiniteDecisionProblem(BaseModel):
    """
    A statistical decision problem with finite Θ, A and X.

    ``loss[i][j]`` is ℓ(θ_i, a_j) and ``kernel[i][x]`` is P_θi(x). Losses may
    be negative. Instances are immutable; invalid data is rejected, never
    renormalized.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    theta_labels: List[Label]
    action_labels: List[Label]
    obs_labels: List[Label]
    loss: List[List[float]]
    kernel: List[List[float]]

    @model_validator(mode="before")
    @classmethod
    def default_trivial_kernel(cls, data: Any) -> Any:
        """An omitted kernel with a single observation means "no data"."""
        if isinstance(data, dict) and data.get("kernel") is None:
            obs = data.get("obs_labels")
            if obs is not None and len(obs) == 1:
                data = dict(data)
                data["kernel"] = [[1.0] for _ in data.get("theta_labels", [])]
        return data

    @field_validator("theta_labels", "action_labels", "obs_labels", mode="before")
    @classmethod
    def canonical_labels(cls, v: Any) -> Any:
        if isinstance(v, (list, tuple)):
            return normalize_labels(v)
        return v

    @model_validator(mode="after")
    def check_invariants(self) -> "FiniteDecisionProblem":
        violations = collect_violations(
            self.theta_labels, self.action_labels, self.obs_labels, self.loss, self.kernel
        )
        if violations:
            raise ValueError(
                "Invalid decision problem: " + "; ".join(v.message for v in violations)
            )
        return self

    @field_serializer("theta_labels", "action_labels", "obs_labels")
    def serialize_labels(self, labels: List[Label]) -> List[Any]:
        return [label_to_json(label) for label in labels]

    @property
    def n_theta(self) -> int:
        return len(self.theta_labels)

    @property
    def n_actions(self) -> int:
        return len(self.action_labels)

    @property
    def n_obs(self) -> int:
        return len(self.obs_labels)

    def loss_matrix(self) -> np.ndarray:
        matrix = np.asarray(self.loss, dtype=float)
        matrix.setflags(write=False)
        return matrix

    def kernel_matrix(self) -> np.ndarray:
        matrix = np.asarray(self.kernel, dtype=float)
        matrix.setflags(write=False)
        return matrix

    def with_loss(self, loss: np.ndarray) -> "FiniteDecisionProblem":
        """Same labels and kernel, new loss matrix (validated)."""
        return FiniteDecisionProblem(
            theta_labels=self.theta_labels,
            action_labels=self.action_labels,
            obs_labels=self.obs_labels,
            loss=np.asarray(loss, dtype=float).tolist(),
            kernel=self.kernel,
        )

    def summary(self) -> Dict[str, int]:
        return {"theta": self.n_theta, "actions": self.n_actions, "observations": self.n_obs}
