"""
Risk Service - Exact risk, Bayes risk and worst-case risk of finite problems.
"""
import logging
import math
from typing import Optional, Sequence, Tuple

import numpy as np

from minimaxkit.config import Settings, get_settings
from minimaxkit.exceptions import InputError
from minimaxkit.models.problem import FiniteDecisionProblem, ValidationReport, collect_violations
from minimaxkit.models.procedure import (
    FinitePrior,
    RandomizedProcedure,
    RiskProfile,
    distribution_error,
)

logger = logging.getLogger(__name__)


class RiskService:
    """Service for risk computations on finite decision problems."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def _check_procedure(self, problem: FiniteDecisionProblem, delta: RandomizedProcedure):
        if delta.n_obs != problem.n_obs or delta.n_actions != problem.n_actions:
            raise InputError(
                f"Procedure is {delta.n_obs}×{delta.n_actions} but the problem "
                f"has {problem.n_obs} observations and {problem.n_actions} actions"
            )

    def _check_prior(self, problem: FiniteDecisionProblem, prior: FinitePrior):
        if prior.size != problem.n_theta:
            raise InputError(
                f"Prior has {prior.size} weights but the problem has {problem.n_theta} parameters"
            )

    def risk_profile(
        self, problem: FiniteDecisionProblem, delta: RandomizedProcedure
    ) -> RiskProfile:
        """
        Compute r(θ, δ) = Σ_x P_θ(x) Σ_a δ(x, a) ℓ(θ, a) for every θ.

        Args:
            problem: Finite decision problem
            delta: Randomized procedure on the problem's X and A

        Returns:
            Risk profile indexed like ``problem.theta_labels``

        Raises:
            InputError: If the procedure's shape does not match the problem
        """
        self._check_procedure(problem, delta)
        loss = problem.loss_matrix()
        kernel = problem.kernel_matrix()
        # expected[θ, x] = Σ_a δ(x, a) ℓ(θ, a)
        expected = loss @ delta.as_array().T
        values = np.sum(kernel * expected, axis=1)
        return RiskProfile(values=values.tolist())

    def risk(
        self, problem: FiniteDecisionProblem, theta_index: int, delta: RandomizedProcedure
    ) -> float:
        """Risk of ``delta`` at a single parameter."""
        if not 0 <= theta_index < problem.n_theta:
            raise InputError(
                f"Parameter index {theta_index} out of range for {problem.n_theta} parameters"
            )
        return self.risk_profile(problem, delta).values[theta_index]

    def bayes_risk(
        self, problem: FiniteDecisionProblem, prior: FinitePrior, delta: RandomizedProcedure
    ) -> float:
        """Bayes risk r(π, δ) = Σ_θ π(θ) r(θ, δ)."""
        self._check_prior(problem, prior)
        values = np.asarray(self.risk_profile(problem, delta).values)
        return float(np.dot(prior.as_array(), values))

    def worst_case_risk(self, problem: FiniteDecisionProblem, delta: RandomizedProcedure) -> float:
        """sup over θ of r(θ, δ)."""
        return self.risk_profile(problem, delta).maximum()

    def risk_matrix(
        self, problem: FiniteDecisionProblem, procedures: Sequence[RandomizedProcedure]
    ) -> np.ndarray:
        """Matrix R[θ, i] = r(θ, δ_i)."""
        if not procedures:
            raise InputError("Procedure set must not be empty")
        return np.column_stack(
            [self.risk_profile(problem, d).values for d in procedures]
        )

    def bayes_response(
        self, problem: FiniteDecisionProblem, prior: FinitePrior
    ) -> Tuple[RandomizedProcedure, float]:
        """
        Best non-randomized procedure against a prior.

        The Bayes risk separates over observations, so minimizing the
        posterior expected loss per x gives the infimum over all |A|^|X|
        non-randomized rules. Ties go to the lowest action index.

        Returns:
            (procedure, Bayes risk of that procedure)
        """
        self._check_prior(problem, prior)
        rule, value = bayes_rule(
            problem.loss_matrix(), problem.kernel_matrix(), prior.as_array()
        )
        return RandomizedProcedure.from_rule(rule.tolist(), problem.n_actions), value

    def mix_procedures(
        self, deltas: Sequence[RandomizedProcedure], weights: Sequence[float]
    ) -> RandomizedProcedure:
        """
        Convex combination Σ_i p_i δ_i of procedures.

        Raises:
            InputError: On an empty list, a weight/procedure count mismatch,
                invalid weights or procedures of different shapes
        """
        if not deltas:
            raise InputError("Cannot mix an empty list of procedures")
        if len(deltas) != len(weights):
            raise InputError(f"{len(deltas)} procedures but {len(weights)} weights")
        error = distribution_error(list(weights), self.settings.ROW_SUM_TOLERANCE)
        if error:
            raise InputError(f"Mixture weights {error}")
        shape = (deltas[0].n_obs, deltas[0].n_actions)
        if any((d.n_obs, d.n_actions) != shape for d in deltas):
            raise InputError("Procedures to mix must share the same shape")
        if len(deltas) == 1:
            return deltas[0]
        mixed = sum(w * d.as_array() for w, d in zip(weights, deltas))
        return RandomizedProcedure(matrix=np.asarray(mixed).tolist())

    def validate_problem(self, problem: FiniteDecisionProblem) -> ValidationReport:
        """
        List every violated invariant of ``problem``.

        Accepts instances built with ``model_construct`` (which skip
        validation), so defective data can be inspected without raising.
        """
        violations = collect_violations(
            problem.theta_labels,
            problem.action_labels,
            problem.obs_labels,
            problem.loss,
            problem.kernel,
            self.settings.ROW_SUM_TOLERANCE,
        )
        if violations:
            logger.info(f"Problem validation found {len(violations)} violation(s)")
        return ValidationReport(violations=violations)


def bayes_rule(
    loss: np.ndarray, kernel: np.ndarray, weights: np.ndarray
) -> Tuple[np.ndarray, float]:
    """
    Bayes rule for unnormalized prior ``weights``.

    Returns:
        (rule as action index per observation, Bayes risk / Σ weights)
    """
    # scores[x, a] = Σ_θ w(θ) P_θ(x) ℓ(θ, a)
    scores = (weights[:, None] * kernel).T @ loss
    rule = np.argmin(scores, axis=1)
    total = math.fsum(weights)
    value = float(np.sum(scores[np.arange(scores.shape[0]), rule])) / total
    return rule, value
