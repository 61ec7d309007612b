"""
Game Service - Exact minimax solving of finite statistical games, fictitious
play and separation subgames.
"""
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from minimaxkit.config import Settings, get_settings
from minimaxkit.exceptions import InputError, SolverError
from minimaxkit.models.game import (
    FictitiousPlayResult,
    GameSolution,
    SaddleCertificate,
    SeparationQuery,
)
from minimaxkit.models.lp import LinearProgram, LPSolution, Relation
from minimaxkit.models.problem import FiniteDecisionProblem
from minimaxkit.models.procedure import FinitePrior, RandomizedProcedure
from minimaxkit.services.lp_service import LPService
from minimaxkit.services.risk_service import RiskService

logger = logging.getLogger(__name__)


def _prior_from_duals(duals: np.ndarray) -> np.ndarray:
    """Normalize the (≤ 0) multipliers of the risk rows into a probability vector."""
    weights = np.clip(-duals, 0.0, None)
    total = weights.sum()
    if total <= 0:
        raise SolverError("Risk-row multipliers carry no mass")
    return weights / total


def _bayes_value(loss: np.ndarray, kernel: np.ndarray, weights: np.ndarray) -> float:
    """inf over rules of the Bayes risk: Σ_x min_a Σ_θ π(θ) P_θ(x) ℓ(θ, a)."""
    scores = np.einsum("t,tx,ta->xa", weights, kernel, loss)
    return float(scores.min(axis=1).sum())


def _clean_rows(matrix: np.ndarray) -> np.ndarray:
    cleaned = np.clip(matrix, 0.0, None)
    return cleaned / cleaned.sum(axis=1, keepdims=True)


class GameService:
    """Service for solving finite games between nature and the statistician."""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.risk_service = RiskService(self.settings)
        self.lp_service = LPService(self.settings)

    def _require_valid(self, problem: FiniteDecisionProblem):
        report = self.risk_service.validate_problem(problem)
        if not report.is_valid:
            raise InputError(
                "Invalid decision problem: "
                + "; ".join(v.message for v in report.violations)
            )

    def minimax_lp(self, problem: FiniteDecisionProblem) -> GameSolution:
        """
        Solve the game exactly as a linear program over behavioral procedures.

        Variables are δ(x, a) ≥ 0 and a free t; minimize t subject to
        r(θ, δ) ≤ t for every θ and Σ_a δ(x, a) = 1 for every x. The
        negated multipliers of the risk rows, normalized, are a least
        favorable prior; with PRIOR_SELECTION "central" it is replaced by
        the least favorable prior nearest uniform. Weights at or below
        SUPPORT_TOLERANCE are dropped, and a prior is reported only if its
        Bayes response reaches the value up to PRIOR_ATTAINMENT_TOLERANCE.

        Args:
            problem: Finite decision problem

        Returns:
            Game solution with value, δ₀, π₀ and duality gap

        Raises:
            InputError: If the problem violates an invariant
            SolverError: If the LP does not reach optimality
        """
        self._require_valid(problem)
        loss = problem.loss_matrix()
        kernel = problem.kernel_matrix()
        n_theta, n_actions, n_obs = problem.n_theta, problem.n_actions, problem.n_obs
        n_delta = n_obs * n_actions

        # coefficient of δ(x, a) in r(θ, δ) is P_θ(x) ℓ(θ, a)
        risk_rows = (kernel[:, :, None] * loss[:, None, :]).reshape(n_theta, n_delta)
        risk_block = np.hstack([risk_rows, -np.ones((n_theta, 1))])
        simplex_block = np.zeros((n_obs, n_delta + 1))
        for x in range(n_obs):
            simplex_block[x, x * n_actions : (x + 1) * n_actions] = 1.0

        lp = LinearProgram(
            objective=[0.0] * n_delta + [1.0],
            constraint_matrix=np.vstack([risk_block, simplex_block]).tolist(),
            relations=[Relation.LE] * n_theta + [Relation.EQ] * n_obs,
            rhs=[0.0] * n_theta + [1.0] * n_obs,
            lower_bounds=[0.0] * n_delta + [None],
        )
        solution = self.lp_service.solve_lp(lp)
        if not solution.is_optimal:
            raise SolverError(f"Minimax LP ended {solution.status.value}")

        delta = _clean_rows(np.asarray(solution.primal[:n_delta]).reshape(n_obs, n_actions))
        procedure = RandomizedProcedure(matrix=delta.tolist())
        dual = _prior_from_duals(np.asarray(solution.dual[:n_theta]))
        weights = self._select_prior(loss, kernel, solution.objective_value, dual)
        prior = FinitePrior(weights=weights.tolist())

        worst = self.risk_service.worst_case_risk(problem, procedure)
        _, lower = self.risk_service.bayes_response(problem, prior)
        if worst - lower < -1e-9:
            raise SolverError(f"Bayes response {lower:.12g} beats worst-case risk {worst:.12g}")
        gap = max(worst - lower, 0.0)
        logger.info(
            f"Minimax LP solved: {problem.summary()}, {solution.pivots} pivots, "
            f"value {solution.objective_value:.12g}, gap {gap:.3e}"
        )
        return GameSolution(
            value=solution.objective_value,
            minimax_procedure=procedure,
            least_favorable_prior=prior,
            duality_gap=gap,
        )

    def _attains(
        self, loss: np.ndarray, kernel: np.ndarray, weights: np.ndarray, value: float
    ) -> bool:
        """Bayes response to ``weights`` reaches ``value`` up to PRIOR_ATTAINMENT_TOLERANCE."""
        tolerance = self.settings.PRIOR_ATTAINMENT_TOLERANCE * max(1.0, abs(value))
        return _bayes_value(loss, kernel, weights) >= value - tolerance

    def _trimmed(self, weights: np.ndarray) -> np.ndarray:
        """Drop weights at or below SUPPORT_TOLERANCE and renormalize."""
        kept = np.where(weights > self.settings.SUPPORT_TOLERANCE, weights, 0.0)
        total = kept.sum()
        return kept / total if total > 0 else weights

    def _select_prior(
        self, loss: np.ndarray, kernel: np.ndarray, value: float, dual: np.ndarray
    ) -> np.ndarray:
        """
        Pick the reported least favorable prior.

        Candidates are tried in order (central first when PRIOR_SELECTION is
        "central", then the dual prior), each trimmed of negligible weights.
        The first candidate whose Bayes response reaches ``value`` wins; the
        untrimmed dual prior is the last resort.
        """
        candidates = []
        if self.settings.PRIOR_SELECTION == "central":
            central = self._central_prior(loss, kernel, value)
            if central is not None:
                candidates.append(("central", central))
        candidates.append(("dual", dual))

        for name, weights in candidates:
            trimmed = self._trimmed(weights)
            if self._attains(loss, kernel, trimmed, value):
                return trimmed
            logger.info(
                f"{name.capitalize()} prior reaches only "
                f"{_bayes_value(loss, kernel, trimmed):.15g} of value {value:.15g}"
            )
        return dual

    def _central_prior(
        self, loss: np.ndarray, kernel: np.ndarray, value: float
    ) -> Optional[np.ndarray]:
        """
        Least favorable prior nearest the uniform prior in L1 distance.

        π is least favorable iff some w has w_x ≤ Σ_θ π(θ) P_θ(x) ℓ(θ, a)
        for every (x, a) and Σ_x w_x ≥ V. Minimizing Σ_θ d_θ with
        d_θ ≥ |π(θ) − 1/|Θ|| over that set makes the choice independent of
        the pivoting path. The attainment row is exact; a slack of
        0.1·LP_FEASIBILITY_TOLERANCE is allowed only when the exact row is
        infeasible through rounding in V. Returns None if neither LP
        reaches optimality.
        """
        n_theta, n_actions = loss.shape
        n_obs = kernel.shape[1]
        n_vars = 2 * n_theta + n_obs
        w0 = 2 * n_theta
        rows, relations, rhs = [], [], []

        def add(row: np.ndarray, relation: Relation, bound: float):
            rows.append(row.tolist())
            relations.append(relation)
            rhs.append(bound)

        total = np.zeros(n_vars)
        total[:n_theta] = 1.0
        add(total, Relation.EQ, 1.0)
        for x in range(n_obs):
            for a in range(n_actions):
                row = np.zeros(n_vars)
                row[:n_theta] = -kernel[:, x] * loss[:, a]
                row[w0 + x] = 1.0
                add(row, Relation.LE, 0.0)
        attains = np.zeros(n_vars)
        attains[w0:] = 1.0
        add(attains, Relation.GE, value)
        attain_row = len(rhs) - 1
        for i in range(n_theta):
            for sign in (1.0, -1.0):
                row = np.zeros(n_vars)
                row[i] = sign
                row[n_theta + i] = -1.0
                add(row, Relation.LE, sign / n_theta)

        slack = 0.1 * self.settings.LP_FEASIBILITY_TOLERANCE * max(1.0, abs(value))
        for bound in (value, value - slack):
            rhs[attain_row] = bound
            lp = LinearProgram(
                objective=[0.0] * n_theta + [1.0] * n_theta + [0.0] * n_obs,
                constraint_matrix=rows,
                relations=relations,
                rhs=rhs,
                lower_bounds=[0.0] * w0 + [None] * n_obs,
            )
            solution = self.lp_service.solve_lp(lp)
            if solution.is_optimal:
                weights = np.clip(np.asarray(solution.primal[:n_theta]), 0.0, None)
                return weights / weights.sum()
            logger.debug(f"Central prior LP at bound {bound:.15g} ended {solution.status.value}")

        logger.warning("Central prior LP did not reach optimality; keeping dual prior")
        return None

    def fictitious_play(
        self, problem: FiniteDecisionProblem, iterations: Optional[int] = None
    ) -> FictitiousPlayResult:
        """
        Bracket the game value by fictitious play.

        Nature opens at the first parameter; each round the statistician
        plays the Bayes rule against nature's empirical prior and nature
        plays the parameter of largest cumulative risk (ties to the lowest
        index). The lower bound is the best Bayes value against an empirical
        prior, the upper bound the smallest worst-case risk of an empirical
        procedure, each kept at its best over all rounds.

        Args:
            problem: Finite decision problem
            iterations: Number of rounds (settings default)

        Returns:
            Bounds with the empirical strategies that attain them

        Raises:
            InputError: If iterations < 1
        """
        rounds = self.settings.DEFAULT_FP_ITERATIONS if iterations is None else iterations
        if rounds < 1:
            raise InputError(f"Iterations must be at least 1, got {rounds}")
        self._require_valid(problem)
        loss = problem.loss_matrix()
        kernel = problem.kernel_matrix()
        n_obs = problem.n_obs
        rows = np.arange(n_obs)

        nature_counts = np.zeros(problem.n_theta)
        nature_counts[0] = 1.0
        # cumulative Bayes scores Σ_s P_θs(x) ℓ(θs, a)
        scores = kernel[0][:, None] * loss[0][None, :]
        cum_risk = np.zeros(problem.n_theta)
        rule_counts = np.zeros((n_obs, problem.n_actions))

        best_lower, best_upper = -np.inf, np.inf
        best_prior = nature_counts.copy()
        best_procedure = rule_counts.copy()
        for step in range(1, rounds + 1):
            rule = np.argmin(scores, axis=1)
            lower = float(np.sum(scores[rows, rule])) / float(nature_counts.sum())
            if lower > best_lower:
                best_lower = lower
                best_prior = nature_counts / nature_counts.sum()

            rule_counts[rows, rule] += 1.0
            cum_risk += np.sum(kernel * loss[:, rule], axis=1)
            upper = float(cum_risk.max()) / step
            if upper < best_upper:
                best_upper = upper
                best_procedure = rule_counts / step

            nature = int(np.argmax(cum_risk))
            nature_counts[nature] += 1.0
            scores = scores + kernel[nature][:, None] * loss[nature][None, :]
            if step % 1000 == 0:
                logger.debug(f"Fictitious play round {step}: [{best_lower:.9g}, {best_upper:.9g}]")

        logger.info(
            f"Fictitious play finished {rounds} rounds: [{best_lower:.12g}, {best_upper:.12g}]"
        )
        return FictitiousPlayResult(
            lower_bound=best_lower,
            upper_bound=best_upper,
            empirical_prior=FinitePrior(weights=best_prior.tolist()),
            empirical_procedure=RandomizedProcedure(matrix=best_procedure.tolist()),
            iterations=rounds,
        )

    def weak_duality_gap(
        self, problem: FiniteDecisionProblem, delta: RandomizedProcedure, prior: FinitePrior
    ) -> float:
        """worst_case_risk(δ) − bayes_risk(π, δ); never negative beyond rounding."""
        profile = self.risk_service.risk_profile(problem, delta)
        return profile.maximum() - self.risk_service.bayes_risk(problem, prior, delta)

    def certify_saddle(
        self,
        problem: FiniteDecisionProblem,
        solution: GameSolution,
        tolerance: Optional[float] = None,
    ) -> SaddleCertificate:
        """
        Check a claimed saddle point.

        Bayes risk is linear in δ, so comparing the claimed value with the
        best non-randomized response to π₀ covers every procedure.

        Returns:
            Certificate that passes iff worst_case_risk(δ₀) ≤ value + tol and
            inf_d bayes_risk(π₀, d) ≥ value − tol
        """
        tol = self.settings.CERTIFICATE_TOLERANCE if tolerance is None else tolerance
        worst = self.risk_service.worst_case_risk(problem, solution.minimax_procedure)
        _, lower = self.risk_service.bayes_response(problem, solution.least_favorable_prior)
        failures = []
        if worst > solution.value + tol:
            failures.append(
                f"worst-case risk {worst:.12g} exceeds claimed value {solution.value:.12g}"
            )
        if lower < solution.value - tol:
            failures.append(
                f"Bayes response risk {lower:.12g} is below claimed value {solution.value:.12g}"
            )
        return SaddleCertificate(
            passed=not failures,
            tolerance=tol,
            value=solution.value,
            worst_case_risk=worst,
            bayes_lower_bound=lower,
            failures=failures,
        )

    def _subgame(
        self, problem: FiniteDecisionProblem, query: SeparationQuery
    ) -> Tuple[LPSolution, List[int]]:
        subset = list(query.theta_subset)
        if max(subset) >= problem.n_theta:
            raise InputError(
                f"Parameter index {max(subset)} out of range for {problem.n_theta} parameters"
            )
        risks = self.risk_service.risk_matrix(problem, query.procedure_set)[subset]
        n_theta, n_procs = risks.shape
        simplex_row = np.concatenate([np.ones(n_procs), [0.0]])
        lp = LinearProgram(
            objective=[0.0] * n_procs + [1.0],
            constraint_matrix=np.vstack(
                [np.hstack([risks, -np.ones((n_theta, 1))]), simplex_row]
            ).tolist(),
            relations=[Relation.LE] * n_theta + [Relation.EQ],
            rhs=[0.0] * n_theta + [1.0],
            lower_bounds=[0.0] * n_procs + [None],
        )
        solution = self.lp_service.solve_lp(lp)
        if not solution.is_optimal:
            raise SolverError(f"Subgame LP ended {solution.status.value}")
        return solution, subset

    def subgame_value(self, problem: FiniteDecisionProblem, query: SeparationQuery) -> float:
        """
        min over mixtures μ of D of max over θ ∈ Θ₀ of r(θ, Σ μ_i δ_i).

        The risk set of conv(D) on Θ₀ misses Q_v = {x : x(θ) ≤ v} exactly when
        this value exceeds v.
        """
        solution, _ = self._subgame(problem, query)
        return solution.objective_value

    def separates(self, problem: FiniteDecisionProblem, query: SeparationQuery) -> bool:
        return self.subgame_value(problem, query) > query.level

    def finite_certificate_support(
        self,
        problem: FiniteDecisionProblem,
        procedures: Sequence[RandomizedProcedure],
        level: float,
    ) -> List[int]:
        """
        Finite set of parameters on which conv(D) already stays above ``level``.

        Args:
            problem: Finite decision problem
            procedures: The finite set D
            level: Level v below the full subgame value

        Returns:
            Indices of the support of the optimal subgame dual

        Raises:
            InputError: If the full-parameter subgame value does not exceed level
        """
        query = SeparationQuery(
            theta_subset=list(range(problem.n_theta)),
            procedure_set=list(procedures),
            level=level,
        )
        solution, _ = self._subgame(problem, query)
        if solution.objective_value <= level:
            raise InputError(
                f"Full-parameter subgame value {solution.objective_value:.12g} "
                f"does not exceed level {level:.12g}"
            )
        weights = _prior_from_duals(np.asarray(solution.dual[: problem.n_theta]))
        support = [i for i, w in enumerate(weights) if w > self.settings.SUPPORT_TOLERANCE]

        restricted = self.subgame_value(
            problem,
            SeparationQuery(theta_subset=support, procedure_set=list(procedures), level=level),
        )
        if restricted <= level:
            raise SolverError(
                f"Dual support {support} certifies only {restricted:.12g} ≤ {level:.12g}"
            )
        logger.info(
            f"Certificate support {support} of {problem.n_theta} parameters, value {restricted:.12g}"
        )
        return support
