"""
LP Service - Dense two-phase simplex with Bland's rule, dual extraction and
certificate checking.
"""
import itertools
import logging
from typing import List, Optional, Tuple

import numpy as np

from minimaxkit.config import Settings, get_settings
from minimaxkit.exceptions import SolverError
from minimaxkit.models.lp import (
    CertificateReport,
    LinearProgram,
    LPSolution,
    LPStatus,
    Relation,
)

logger = logging.getLogger(__name__)


class _Tableau:
    """
    Simplex tableau B⁻¹[A | b] with an explicit basis list.

    Entering and leaving variables follow Bland's rule: the lowest-index
    improving column enters, and among minimum-ratio rows the one whose basic
    variable has the lowest index leaves.
    """

    def __init__(self, matrix: np.ndarray, rhs: np.ndarray, basis: List[int], tolerance: float):
        self.body = np.hstack([matrix, rhs[:, None]]).astype(float)
        self.basis = list(basis)
        self.tol = tolerance
        self.pivots = 0

    def values(self) -> np.ndarray:
        return self.body[:, -1]

    def pivot(self, row: int, col: int):
        pivot_row = self.body[row] / self.body[row, col]
        column = self.body[:, col].copy()
        self.body -= np.outer(column, pivot_row)
        self.body[row] = pivot_row
        rhs = self.body[:, -1]
        rhs[(rhs < 0) & (rhs > -self.tol)] = 0.0
        self.basis[row] = col
        self.pivots += 1

    def reduced_costs(self, cost: np.ndarray) -> np.ndarray:
        return cost - cost[self.basis] @ self.body[:, :-1]

    def step(self, cost: np.ndarray, allowed: np.ndarray) -> str:
        reduced = self.reduced_costs(cost)
        candidates = np.flatnonzero(allowed & (reduced < -self.tol))
        if candidates.size == 0:
            return "optimal"
        col = int(candidates[0])
        column = self.body[:, col]
        rows = np.flatnonzero(column > self.tol)
        if rows.size == 0:
            return "unbounded"
        ratios = self.body[rows, -1] / column[rows]
        best = ratios.min()
        ties = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        row = int(min(ties, key=lambda r: self.basis[r]))
        self.pivot(row, col)
        return "pivoted"

    def run(self, cost: np.ndarray, allowed: np.ndarray, max_pivots: int) -> str:
        while True:
            outcome = self.step(cost, allowed)
            if outcome != "pivoted":
                return outcome
            if self.pivots > max_pivots:
                raise SolverError(f"Simplex exceeded {max_pivots} pivots")


class _StandardForm:
    """
    Equality form min cᵀx', A x' = b, x' ≥ 0, b ≥ 0 of a LinearProgram.

    Each original variable is x_j = shift_j + Σ sign·x'_k over its columns.
    """

    def __init__(self, lp: LinearProgram):
        matrix = lp.matrix()
        objective = np.asarray(lp.objective, dtype=float)
        lower, upper = lp.lower_array(), lp.upper_array()
        n = lp.n_variables
        m = lp.n_constraints

        self.n_original_rows = m
        self.shift = np.zeros(n)
        self.columns: List[Tuple[int, float]] = []
        bound_rows: List[Tuple[int, float]] = []
        for j in range(n):
            if np.isfinite(lower[j]):
                self.shift[j] = lower[j]
                self.columns.append((j, 1.0))
                if np.isfinite(upper[j]):
                    bound_rows.append((len(self.columns) - 1, upper[j] - lower[j]))
            elif np.isfinite(upper[j]):
                self.shift[j] = upper[j]
                self.columns.append((j, -1.0))
            else:
                self.columns.append((j, 1.0))
                self.columns.append((j, -1.0))

        k = len(self.columns)
        rows = m + len(bound_rows)
        structural = np.zeros((rows, k))
        cost = np.zeros(k)
        for idx, (j, sign) in enumerate(self.columns):
            structural[:m, idx] = sign * matrix[:, j]
            cost[idx] = sign * objective[j]
        rhs = np.concatenate(
            [np.asarray(lp.rhs, dtype=float) - matrix @ self.shift, [b for _, b in bound_rows]]
        )
        for r, (idx, _) in enumerate(bound_rows):
            structural[m + r, idx] = 1.0

        relations = list(lp.relations) + [Relation.LE] * len(bound_rows)
        slack_rows = [i for i, rel in enumerate(relations) if rel != Relation.EQ]
        slacks = np.zeros((rows, len(slack_rows)))
        for s, i in enumerate(slack_rows):
            slacks[i, s] = 1.0 if relations[i] == Relation.LE else -1.0

        self.matrix = np.hstack([structural, slacks])
        self.cost = np.concatenate([cost, np.zeros(len(slack_rows))])
        self.row_signs = np.where(rhs < 0, -1.0, 1.0)
        self.matrix *= self.row_signs[:, None]
        self.rhs = rhs * self.row_signs
        self.n_structural = k

    def recover(self, x_std: np.ndarray) -> np.ndarray:
        x = self.shift.copy()
        for idx, (j, sign) in enumerate(self.columns):
            x[j] += sign * x_std[idx]
        return x


class LPService:
    """Service for solving and certifying small dense linear programs."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def solve_lp(self, lp: LinearProgram) -> LPSolution:
        """
        Solve a linear program with the two-phase simplex method.

        Phase 1 minimizes the sum of one artificial variable per row; phase 2
        keeps the artificial columns in the tableau but never lets them
        enter. Primal values and duals are recomputed from the final basis
        by direct solves.

        Args:
            lp: Linear program (minimization)

        Returns:
            Solution with status, primal, dual and objective value

        Raises:
            SolverError: If the pivot limit is exceeded
        """
        tol = self.settings.LP_FEASIBILITY_TOLERANCE
        form = _StandardForm(lp)
        rows, n_std = form.matrix.shape
        full = np.hstack([form.matrix, np.eye(rows)])
        tableau = _Tableau(full, form.rhs, list(range(n_std, n_std + rows)), tol)

        phase1_cost = np.concatenate([np.zeros(n_std), np.ones(rows)])
        allowed = np.ones(n_std + rows, dtype=bool)
        tableau.run(phase1_cost, allowed, self.settings.LP_MAX_PIVOTS)

        infeasibility = float(phase1_cost[tableau.basis] @ tableau.values()) if rows else 0.0
        scale = max(1.0, float(np.max(np.abs(form.rhs)))) if rows else 1.0
        if infeasibility > tol * scale:
            logger.info(f"LP infeasible (phase-1 residual {infeasibility:.3e})")
            return LPSolution(
                status=LPStatus.INFEASIBLE,
                primal=[0.0] * lp.n_variables,
                dual=[0.0] * lp.n_constraints,
                objective_value=float("inf"),
                pivots=tableau.pivots,
            )

        self._drive_out_artificials(tableau, n_std)

        allowed[n_std:] = False
        phase2_cost = np.concatenate([form.cost, np.zeros(rows)])
        outcome = tableau.run(phase2_cost, allowed, self.settings.LP_MAX_PIVOTS)

        x_std, y_std = self._basic_solution(full, form.rhs, phase2_cost, tableau)
        primal = form.recover(x_std)
        if outcome == "unbounded":
            logger.info("LP unbounded")
            return LPSolution(
                status=LPStatus.UNBOUNDED,
                primal=primal.tolist(),
                dual=[0.0] * lp.n_constraints,
                objective_value=float("-inf"),
                pivots=tableau.pivots,
            )

        dual = form.row_signs[: form.n_original_rows] * y_std[: form.n_original_rows]
        value = float(np.dot(lp.objective, primal))
        logger.debug(
            f"LP solved: {lp.n_variables} vars, {lp.n_constraints} rows, "
            f"{tableau.pivots} pivots, value {value:.12g}"
        )
        return LPSolution(
            status=LPStatus.OPTIMAL,
            primal=primal.tolist(),
            dual=dual.tolist(),
            objective_value=value,
            pivots=tableau.pivots,
        )

    def _drive_out_artificials(self, tableau: _Tableau, n_std: int):
        """Pivot zero-level artificials out of the basis where the row allows it."""
        for row, var in enumerate(list(tableau.basis)):
            if var < n_std:
                continue
            entries = np.abs(tableau.body[row, :n_std])
            if entries.size == 0 or entries.max() <= tableau.tol:
                # redundant row: the artificial stays basic at zero
                continue
            tableau.pivot(row, int(np.argmax(entries)))

    def _basic_solution(
        self, full: np.ndarray, rhs: np.ndarray, cost: np.ndarray, tableau: _Tableau
    ) -> Tuple[np.ndarray, np.ndarray]:
        x = np.zeros(full.shape[1])
        if not tableau.basis:
            return x, np.zeros(0)
        basis_matrix = full[:, tableau.basis]
        try:
            x_basic = np.linalg.solve(basis_matrix, rhs)
            y = np.linalg.solve(basis_matrix.T, cost[tableau.basis])
        except np.linalg.LinAlgError:
            x_basic = tableau.values().copy()
            y = np.linalg.lstsq(basis_matrix.T, cost[tableau.basis], rcond=None)[0]
        x[tableau.basis] = x_basic
        return x, y

    def check_certificate(
        self, lp: LinearProgram, solution: LPSolution, tolerance: Optional[float] = None
    ) -> CertificateReport:
        """
        Recompute primal feasibility, dual feasibility and the objective gap.

        Bound multipliers are implied by the reduced costs z = c − Aᵀy: a
        positive z_j is charged to the lower bound, a negative one to the
        upper bound, and a missing bound turns it into dual infeasibility.

        Returns:
            Report that passes iff all three residuals are ≤ tolerance
        """
        tol = self.settings.LP_FEASIBILITY_TOLERANCE if tolerance is None else tolerance
        if not solution.is_optimal:
            return CertificateReport(
                passed=False,
                tolerance=tol,
                primal_residual=float("inf"),
                dual_residual=float("inf"),
                objective_gap=float("inf"),
                failures=[f"status is {solution.status.value}, not optimal"],
            )

        matrix = lp.matrix()
        b = np.asarray(lp.rhs, dtype=float)
        c = np.asarray(lp.objective, dtype=float)
        x = np.asarray(solution.primal, dtype=float)
        y = np.asarray(solution.dual, dtype=float)
        lower, upper = lp.lower_array(), lp.upper_array()

        activity = matrix @ x
        row_excess = np.zeros(lp.n_constraints)
        le, ge, eq = (
            np.array([rel == kind for rel in lp.relations], dtype=bool)
            for kind in (Relation.LE, Relation.GE, Relation.EQ)
        )
        row_excess[le] = np.maximum(activity[le] - b[le], 0.0)
        row_excess[ge] = np.maximum(b[ge] - activity[ge], 0.0)
        row_excess[eq] = np.abs(activity[eq] - b[eq])
        bound_excess = np.concatenate(
            [
                np.maximum(lower - x, 0.0)[np.isfinite(lower)],
                np.maximum(x - upper, 0.0)[np.isfinite(upper)],
            ]
        )
        primal_residual = float(np.max(np.concatenate([row_excess, bound_excess, [0.0]])))

        reduced = c - matrix.T @ y
        has_lower, has_upper = np.isfinite(lower), np.isfinite(upper)
        dual_violations = np.concatenate(
            [
                np.maximum(y[le], 0.0),
                np.maximum(-y[ge], 0.0),
                np.maximum(reduced, 0.0)[~has_lower],
                np.maximum(-reduced, 0.0)[~has_upper],
                [0.0],
            ]
        )
        dual_residual = float(np.max(dual_violations))

        dual_objective = (
            float(b @ y)
            + float(np.sum(lower[has_lower] * np.maximum(reduced[has_lower], 0.0)))
            - float(np.sum(upper[has_upper] * np.maximum(-reduced[has_upper], 0.0)))
        )
        objective_gap = abs(float(c @ x) - dual_objective)

        failures = [
            f"{name} {value:.3e} exceeds tolerance {tol:.3e}"
            for name, value in (
                ("primal_residual", primal_residual),
                ("dual_residual", dual_residual),
                ("objective_gap", objective_gap),
            )
            if not value <= tol
        ]
        return CertificateReport(
            passed=not failures,
            tolerance=tol,
            primal_residual=primal_residual,
            dual_residual=dual_residual,
            objective_gap=objective_gap,
            failures=failures,
        )

    def vertex_enumeration_value(self, lp: LinearProgram) -> Optional[float]:
        """
        Optimal value by brute force over all basic solutions.

        Only meaningful for bounded LPs whose feasible set has a vertex.

        Returns:
            Minimum objective over feasible vertices, or None when no vertex
            is feasible
        """
        n = lp.n_variables
        matrix = lp.matrix()
        b = np.asarray(lp.rhs, dtype=float)
        lower, upper = lp.lower_array(), lp.upper_array()

        rows, rhs, is_equality = [], [], []
        for a, beta, rel in zip(matrix, b, lp.relations):
            sign = -1.0 if rel == Relation.GE else 1.0
            rows.append(sign * a)
            rhs.append(sign * beta)
            is_equality.append(rel == Relation.EQ)
        eye = np.eye(n)
        for j in range(n):
            if np.isfinite(lower[j]):
                rows.append(-eye[j])
                rhs.append(-lower[j])
                is_equality.append(False)
            if np.isfinite(upper[j]):
                rows.append(eye[j])
                rhs.append(upper[j])
                is_equality.append(False)
        if len(rows) < n:
            return None

        system = np.array(rows)
        bounds = np.array(rhs)
        equality = np.array(is_equality)
        active = np.array(list(itertools.combinations(range(len(rows)), n)))
        square = system[active]
        regular = np.abs(np.linalg.det(square)) > 1e-10
        if not np.any(regular):
            return None
        points = np.linalg.solve(square[regular], bounds[active[regular]][..., None])[..., 0]

        slack = points @ system.T - bounds
        feasible = np.all(slack[:, ~equality] <= 1e-9, axis=1) & np.all(
            np.abs(slack[:, equality]) <= 1e-9, axis=1
        )
        if not np.any(feasible):
            return None
        return float(np.min(points[feasible] @ np.asarray(lp.objective, dtype=float)))
