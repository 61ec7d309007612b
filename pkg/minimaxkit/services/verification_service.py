"""
Verification Service - Property and oracle checks over every solver, grouped
by area and runnable selectively.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, NamedTuple, Optional, Tuple

import numpy as np

from minimaxkit.config import Settings, get_settings
from minimaxkit.exceptions import InputError
from minimaxkit.models.problem import FiniteDecisionProblem
from minimaxkit.models.procedure import LabeledDistribution
from minimaxkit.models.witness import CountableGame
from minimaxkit.schemas import CheckResult, VerificationReport
from minimaxkit.services import benchmarks, instances
from minimaxkit.services.discretization_service import DiscretizationService
from minimaxkit.services.game_service import GameService
from minimaxkit.services.lp_service import LPService
from minimaxkit.services.transport_service import TransportService
from minimaxkit.services.witness_service import WitnessService

logger = logging.getLogger(__name__)

DEFECTS = ("loss-perturbation",)

Outcome = Tuple[bool, str]


class Check(NamedTuple):
    group: str
    name: str
    run: Callable[[], Outcome]


class VerificationService:
    """Service running the verification suite."""

    def __init__(self, settings: Optional[Settings] = None, inject_defect: Optional[str] = None):
        if inject_defect is not None and inject_defect not in DEFECTS:
            raise InputError(f"Unknown defect {inject_defect!r}; choose from {list(DEFECTS)}")
        self.settings = settings or get_settings()
        self.inject_defect = inject_defect
        self.lp_service = LPService(self.settings)
        self.game_service = GameService(self.settings)
        self.discretization_service = DiscretizationService(self.settings)
        self.transport_service = TransportService(self.settings)
        self.witness_service = WitnessService(self.settings)

    def _rng(self, offset: int) -> np.random.Generator:
        return np.random.default_rng(self.settings.VERIFY_SEED + offset)

    def checks(self) -> List[Check]:
        return [
            Check("game", "minimax-equality", self.check_minimax_equality),
            Check("game", "weak-duality", self.check_weak_duality),
            Check("game", "fictitious-play-bracket", self.check_fictitious_play),
            Check("examples", "binary-test", self.check_binary_test),
            Check("examples", "pick-smaller-truncations", self.check_pick_smaller_truncations),
            Check("examples", "pick-smaller-witnesses", self.check_witnesses),
            Check("examples", "clamp-truncations", self.check_clamp_truncations),
            Check("examples", "clamp-escaping-priors", self.check_escaping_priors),
            Check("discretization", "location-intervals", self.check_location_intervals),
            Check("discretization", "bernoulli-convergence", self.check_bernoulli),
            Check("transport", "w1-line-oracle", self.check_w1_oracle),
            Check("transport", "metric-axioms", self.check_metric_axioms),
            Check("transport", "k-homogeneity", self.check_homogeneity),
            Check("lp", "vertex-enumeration", self.check_vertex_enumeration),
        ]

    def run(self, name_filter: Optional[str] = None) -> VerificationReport:
        """
        Run every check whose group or name equals ``name_filter`` (all if None).

        A check that raises is recorded as failed with the exception text.

        Raises:
            InputError: If the filter matches no check
        """
        selected = [
            c for c in self.checks() if name_filter in (None, c.group, c.name)
        ]
        if not selected:
            known = sorted({c.group for c in self.checks()} | {c.name for c in self.checks()})
            raise InputError(f"Filter {name_filter!r} matches no check; choose from {known}")

        results = []
        for check in selected:
            try:
                passed, detail = check.run()
            except Exception as e:
                logger.error(f"Check {check.name} raised: {e}", exc_info=True)
                passed, detail = False, f"{type(e).__name__}: {e}"
            logger.info(f"Check {check.group}/{check.name}: {'pass' if passed else 'FAIL'}")
            results.append(
                CheckResult(name=check.name, group=check.group, passed=passed, detail=detail)
            )
        failed = sum(not r.passed for r in results)
        return VerificationReport(
            passed=failed == 0, total=len(results), failed=failed, checks=results
        )

    # game

    def check_minimax_equality(self) -> Outcome:
        rng = self._rng(1)
        tol = self.settings.CERTIFICATE_TOLERANCE
        worst_gap = 0.0
        for i in range(300):
            problem = instances.random_problem(rng)
            solution = self.game_service.minimax_lp(problem)
            worst_gap = max(worst_gap, solution.duality_gap)
            certificate = self.game_service.certify_saddle(problem, solution, tol)
            if solution.duality_gap > tol or not certificate.passed:
                return False, f"instance {i}: gap {solution.duality_gap:.3e}, {certificate.failures}"
        return True, f"300 problems, largest gap {worst_gap:.3e}"

    def check_weak_duality(self) -> Outcome:
        rng = self._rng(2)
        smallest = math.inf
        for _ in range(50):
            problem = instances.random_problem(rng)
            for _ in range(200):
                gap = self.game_service.weak_duality_gap(
                    problem,
                    instances.random_procedure(rng, problem),
                    instances.random_prior(rng, problem.n_theta),
                )
                smallest = min(smallest, gap)
        return smallest >= -1e-12, f"10000 triples, smallest gap {smallest:.3e}"

    def _fictitious_play_outcome(
        self, problem: FiniteDecisionProblem
    ) -> Tuple[float, float, float, int]:
        value = self.game_service.minimax_lp(problem).value
        result = self.game_service.fictitious_play(problem, 20000)
        return value, result.lower_bound, result.upper_bound, result.iterations

    def check_fictitious_play(self) -> Outcome:
        rng = self._rng(3)
        problems = [instances.random_problem(rng) for _ in range(100)]
        workers = max(1, self.settings.SCHEDULE_WORKERS)
        if workers == 1:
            outcomes = [self._fictitious_play_outcome(p) for p in problems]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(self._fictitious_play_outcome, problems))

        widest = 0.0
        for i, (value, lower, upper, rounds) in enumerate(outcomes):
            if not lower - 1e-9 <= value <= upper + 1e-9:
                return False, (
                    f"instance {i}: value {value:.12g} outside [{lower:.12g}, {upper:.12g}]"
                )
            if upper - lower >= 0.1:
                return False, f"instance {i}: width {upper - lower:.3e} after {rounds} rounds"
            widest = max(widest, upper - lower)
        return True, f"100 brackets at 20000 rounds contain the value; widest {widest:.3e}"

    # examples

    def check_binary_test(self) -> Outcome:
        solution = self.game_service.minimax_lp(benchmarks.binary_test_game())
        prior = solution.least_favorable_prior.weights
        ok = abs(solution.value - 0.25) <= 1e-9 and all(abs(w - 0.5) <= 1e-9 for w in prior)
        return ok, f"value {solution.value:.12g}, prior {prior}"

    def _truncation_values(self, builder: Callable) -> Outcome:
        worst = 0.0
        for n in range(1, 21):
            problem = builder(n)
            if self.inject_defect == "loss-perturbation" and builder is benchmarks.pick_smaller_game:
                loss = problem.loss_matrix().copy()
                loss[0, -1] += 0.5
                problem = problem.with_loss(loss)
            value = self.game_service.minimax_lp(problem).value
            worst = max(worst, abs(value))
            if abs(value) > 1e-9:
                return False, f"n={n}: value {value:.12g}, expected 0"
        return True, f"n=1..20, largest |value| {worst:.3e}"

    def check_pick_smaller_truncations(self) -> Outcome:
        return self._truncation_values(benchmarks.pick_smaller_game)

    def check_clamp_truncations(self) -> Outcome:
        return self._truncation_values(benchmarks.clamp_game)

    def check_witnesses(self) -> Outcome:
        rng = self._rng(4)
        for epsilon in (0.2, 0.05, 0.01):
            for _ in range(50):
                delta = instances.random_game_distribution(rng, CountableGame.PICK_SMALLER)
                report = self.witness_service.nature_witness(delta, epsilon)
                if not report.holds:
                    return False, f"nature witness fails at eps={epsilon}: {report.achieved_value}"
                prior = instances.random_game_distribution(rng, CountableGame.PICK_SMALLER)
                report = self.witness_service.statistician_witness(prior, epsilon)
                if not report.holds:
                    return False, (
                        f"statistician witness fails at eps={epsilon}: {report.achieved_value}"
                    )
        return True, "150 nature and 150 statistician witnesses hold"

    def check_escaping_priors(self) -> Outcome:
        rng = self._rng(5)
        procedures: List[LabeledDistribution] = [
            instances.random_game_distribution(rng, CountableGame.CLAMP) for _ in range(20)
        ]
        top = max(max(d.support()) for d in procedures)
        k_list = [int(top) + j for j in range(1, 8)]
        report = self.witness_service.escaping_prior_report(k_list, procedures)
        for entry in report.entries:
            if entry.flagged:
                continue
            if any(abs(r - 1.0) > 1e-12 for r in entry.bayes_risks):
                return False, f"K={entry.k}: risks {entry.bayes_risks}"
        return True, f"K in {k_list[0]}..{k_list[-1]}: Bayes risk 1 once K exceeds B"

    # discretization

    def check_location_intervals(self) -> Outcome:
        family = benchmarks.location_family()
        results = self.discretization_service.lf_prior_sequence(
            family, [2.0 ** -n for n in range(1, 8)]
        )
        for r in results:
            if not r.contains(0.5) or abs(r.width - r.mesh) > 1e-12 or r.discrete_value > 0.5 + 1e-9:
                return False, f"mesh {r.mesh}: value {r.discrete_value}, interval {r.value_interval}"
        return True, "meshes 2^-1..2^-7 certify intervals of width ε around 0.5"

    def check_bernoulli(self) -> Outcome:
        family = benchmarks.bernoulli_family()
        result = self.discretization_service.approximate_minimax(family, 0.01)
        thetas = np.linspace(0.0, 1.0, 1000)
        risks = self.discretization_service.rule_risk(family, thetas, [0.25, 0.75])
        spread = max(abs(r - 1 / 16) for r in risks)
        ok = abs(result.discrete_value - 1 / 16) <= 5e-3 and spread <= 1e-12
        return ok, f"V_eps {result.discrete_value:.12g}, equalizer spread {spread:.3e}"

    # transport

    def check_w1_oracle(self) -> Outcome:
        rng = self._rng(6)
        worst = 0.0
        for _ in range(200):
            mu, nu = instances.random_measure(rng), instances.random_measure(rng)
            lp_value = self.transport_service.wk_discrete(mu, nu)
            worst = max(worst, abs(lp_value - self.transport_service.w1_1d(mu, nu)))
        return worst <= 1e-9, f"200 pairs, largest difference {worst:.3e}"

    def check_metric_axioms(self) -> Outcome:
        rng = self._rng(7)
        worst_sym, worst_tri = 0.0, 0.0
        for _ in range(50):
            a, b, c = (instances.random_measure(rng) for _ in range(3))
            ab = self.transport_service.wk_discrete(a, b)
            ba = self.transport_service.wk_discrete(b, a)
            bc = self.transport_service.wk_discrete(b, c)
            ac = self.transport_service.wk_discrete(a, c)
            worst_sym = max(worst_sym, abs(ab - ba))
            worst_tri = max(worst_tri, ac - ab - bc)
        ok = worst_sym <= 1e-8 and worst_tri <= 1e-8
        return ok, f"symmetry {worst_sym:.3e}, triangle excess {worst_tri:.3e}"

    def check_homogeneity(self) -> Outcome:
        rng = self._rng(8)
        worst = 0.0
        for _ in range(20):
            mu, nu = instances.random_measure(rng), instances.random_measure(rng)
            base = self.transport_service.wk_discrete(mu, nu)
            for k in (2.0, 3.0, 0.5):
                worst = max(worst, abs(self.transport_service.wk_discrete(mu, nu, k=k) - k * base))
        return worst <= 1e-12, f"largest deviation {worst:.3e}"

    # lp

    def check_vertex_enumeration(self) -> Outcome:
        rng = self._rng(9)
        worst = 0.0
        for i in range(200):
            lp = instances.random_lp(rng)
            solution = self.lp_service.solve_lp(lp)
            expected = self.lp_service.vertex_enumeration_value(lp)
            if expected is None or not solution.is_optimal:
                return False, f"instance {i}: status {solution.status.value}, oracle {expected}"
            worst = max(worst, abs(solution.objective_value - expected))
            certificate = self.lp_service.check_certificate(lp, solution)
            if not certificate.passed:
                return False, f"instance {i}: {certificate.failures}"
        return worst <= 1e-8, f"200 programs, largest difference {worst:.3e}"
