"""
Linear program models - problem data, solutions and certificate reports.
"""
import math
from enum import Enum
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, model_validator


class Relation(str, Enum):
    """Constraint relation of a row."""
    LE = "<="
    EQ = "="
    GE = ">="


class LPStatus(str, Enum):
    """Solve status."""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class LinearProgram(BaseModel):
    """
    Minimize cᵀx subject to row relations and per-variable bounds.

    ``lower_bounds`` defaults to zeros; ``None`` entries mean a free
    direction (−∞ lower or +∞ upper).
    """

    model_config = ConfigDict(frozen=True)

    objective: List[float]
    constraint_matrix: List[List[float]] = []
    relations: List[Relation] = []
    rhs: List[float] = []
    lower_bounds: Optional[List[Optional[float]]] = None
    upper_bounds: Optional[List[Optional[float]]] = None

    @model_validator(mode="after")
    def check_dimensions(self) -> "LinearProgram":
        n = len(self.objective)
        m = len(self.constraint_matrix)
        if n == 0:
            raise ValueError("Linear program needs at least one variable")
        if len(self.relations) != m or len(self.rhs) != m:
            raise ValueError(
                f"{m} constraint rows but {len(self.relations)} relations "
                f"and {len(self.rhs)} right-hand sides"
            )
        for i, row in enumerate(self.constraint_matrix):
            if len(row) != n:
                raise ValueError(f"Constraint row {i} has {len(row)} entries, expected {n}")
            if not all(math.isfinite(v) for v in row):
                raise ValueError(f"Constraint row {i} has a non-finite entry")
        if not all(math.isfinite(v) for v in self.objective):
            raise ValueError("Objective has a non-finite coefficient")
        if not all(math.isfinite(v) for v in self.rhs):
            raise ValueError("Right-hand side has a non-finite entry")
        for name, bounds in (("lower_bounds", self.lower_bounds), ("upper_bounds", self.upper_bounds)):
            if bounds is None:
                continue
            if len(bounds) != n:
                raise ValueError(f"{name} has {len(bounds)} entries, expected {n}")
            if not all(b is None or math.isfinite(b) for b in bounds):
                raise ValueError(f"{name} must be finite or None")
        lower, upper = self.lower_array(), self.upper_array()
        if np.any(lower > upper):
            raise ValueError("A lower bound exceeds its upper bound")
        return self

    @property
    def n_variables(self) -> int:
        return len(self.objective)

    @property
    def n_constraints(self) -> int:
        return len(self.constraint_matrix)

    def matrix(self) -> np.ndarray:
        return np.asarray(self.constraint_matrix, dtype=float).reshape(
            self.n_constraints, self.n_variables
        )

    def lower_array(self) -> np.ndarray:
        """Lower bounds with −inf for free directions."""
        if self.lower_bounds is None:
            return np.zeros(self.n_variables)
        return np.array([-np.inf if b is None else b for b in self.lower_bounds], dtype=float)

    def upper_array(self) -> np.ndarray:
        """Upper bounds with +inf where absent."""
        if self.upper_bounds is None:
            return np.full(self.n_variables, np.inf)
        return np.array([np.inf if b is None else b for b in self.upper_bounds], dtype=float)


class LPSolution(BaseModel):
    """
    Primal and dual solution of a linear program.

    Dual signs follow the minimization convention: ``>=`` rows carry y ≥ 0,
    ``<=`` rows y ≤ 0 and ``=`` rows are free.
    """

    model_config = ConfigDict(frozen=True)

    status: LPStatus
    primal: List[float]
    dual: List[float]
    objective_value: float
    pivots: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == LPStatus.OPTIMAL


class CertificateReport(BaseModel):
    """Recomputed optimality residuals of a claimed LP solution."""

    passed: bool
    tolerance: float
    primal_residual: float
    dual_residual: float
    objective_gap: float
    failures: List[str] = []
