"""
Test exact minimax solving, fictitious play and separation subgames.
"""
import itertools

import numpy as np
import pytest
from scipy.optimize import linprog

from minimaxkit.config import Settings
from minimaxkit.exceptions import InputError
from minimaxkit.models.game import GameSolution, SeparationQuery
from minimaxkit.models.problem import FiniteDecisionProblem
from minimaxkit.models.procedure import FinitePrior, RandomizedProcedure
from minimaxkit.services.benchmarks import matching_pennies, pick_smaller_game
from minimaxkit.services.game_service import GameService
from minimaxkit.services.instances import random_prior, random_problem, random_procedure
from minimaxkit.services.verification_service import VerificationService


def rule_enumeration_value(risk_service, problem: FiniteDecisionProblem) -> float:
    """Value of the game over mixtures of deterministic rules, solved by HiGHS."""
    rules = [
        RandomizedProcedure.from_rule(list(rule), problem.n_actions)
        for rule in itertools.product(range(problem.n_actions), repeat=problem.n_obs)
    ]
    risks = risk_service.risk_matrix(problem, rules)
    n_theta, n_rules = risks.shape
    result = linprog(
        np.concatenate([np.zeros(n_rules), [1.0]]),
        A_ub=np.hstack([risks, -np.ones((n_theta, 1))]),
        b_ub=np.zeros(n_theta),
        A_eq=np.concatenate([np.ones(n_rules), [0.0]])[None, :],
        b_eq=[1.0],
        bounds=[(0, None)] * n_rules + [(None, None)],
        method="highs",
    )
    assert result.status == 0
    return result.fun


def pure_procedures(n_actions: int):
    return [RandomizedProcedure.point_mass(1, n_actions, a) for a in range(n_actions)]


def test_binary_test_value(game_service, risk_service, binary_test):
    """Test the two-point test has value 1/4 with a least favorable prior attaining it."""
    solution = game_service.minimax_lp(binary_test)

    assert solution.value == pytest.approx(0.25, abs=1e-12)
    assert risk_service.worst_case_risk(binary_test, solution.minimax_procedure) == pytest.approx(
        0.25, abs=1e-12
    )
    _, bayes = risk_service.bayes_response(binary_test, solution.least_favorable_prior)
    assert bayes == pytest.approx(0.25, abs=1e-12)
    assert solution.least_favorable_prior.weights == pytest.approx([0.5, 0.5], abs=1e-9)


def test_dual_prior_selection(risk_service, binary_test):
    """Test the raw dual prior is least favorable but need not be uniform."""
    service = GameService(Settings(_env_file=None, PRIOR_SELECTION="dual"))
    solution = service.minimax_lp(binary_test)

    _, bayes = risk_service.bayes_response(binary_test, solution.least_favorable_prior)
    assert bayes == pytest.approx(0.25, abs=1e-12)
    assert 0.25 - 1e-12 <= solution.least_favorable_prior.weights[0] <= 0.75 + 1e-12
    assert service.certify_saddle(binary_test, solution).passed


def test_pick_smaller_truncation_is_fair(game_service):
    """Test the truncated pick-smaller game has value zero."""
    solution = game_service.minimax_lp(pick_smaller_game(5))
    assert solution.value == pytest.approx(0.0, abs=1e-12)
    assert game_service.certify_saddle(pick_smaller_game(5), solution).passed


def test_matching_pennies_strategies(game_service):
    """Test matching pennies has value 0 and unique uniform strategies."""
    solution = game_service.minimax_lp(matching_pennies())

    assert solution.value == pytest.approx(0.0, abs=1e-12)
    assert solution.least_favorable_prior.weights == pytest.approx([0.5, 0.5], abs=1e-12)
    assert solution.minimax_procedure.matrix[0] == pytest.approx([0.5, 0.5], abs=1e-12)


def test_zero_loss_game(game_service):
    """Test an all-zero loss has value 0 and any output is a saddle."""
    problem = FiniteDecisionProblem(
        theta_labels=[1, 2, 3],
        action_labels=["a", "b"],
        obs_labels=[0, 1],
        loss=[[0.0, 0.0]] * 3,
        kernel=[[0.5, 0.5], [1.0, 0.0], [0.0, 1.0]],
    )
    solution = game_service.minimax_lp(problem)
    assert solution.value == pytest.approx(0.0, abs=1e-12)
    assert solution.duality_gap == 0.0


def test_random_problems_close_the_gap(game_service):
    """Test the LP solution is a certified saddle on random problems."""
    rng = np.random.default_rng(7)
    for _ in range(100):
        problem = random_problem(rng)
        solution = game_service.minimax_lp(problem)

        assert 0.0 <= solution.duality_gap <= 2e-9
        assert game_service.certify_saddle(problem, solution).passed


def test_matches_rule_enumeration(game_service, risk_service, rng):
    """Test the behavioral LP value equals the value over mixed deterministic rules."""
    for _ in range(30):
        problem = random_problem(rng, max_dim=3)
        assert game_service.minimax_lp(problem).value == pytest.approx(
            rule_enumeration_value(risk_service, problem), abs=1e-8
        )


def test_invalid_problem_is_input_error(game_service):
    """Test unvalidated data is rejected before solving."""
    problem = FiniteDecisionProblem.model_construct(
        theta_labels=[0, 1],
        action_labels=[0],
        obs_labels=[0],
        loss=[[0.0], [float("inf")]],
        kernel=[[1.0], [1.0]],
    )
    with pytest.raises(InputError, match="Invalid decision problem"):
        game_service.minimax_lp(problem)


def test_skew_symmetric_games_are_fair(game_service, rng):
    """Test a no-data game with ℓ(θ, a) = −ℓ(a, θ) has value 0."""
    for _ in range(20):
        n = int(rng.integers(1, 7))
        m = rng.uniform(-1, 1, size=(n, n))
        problem = FiniteDecisionProblem(
            theta_labels=list(range(n)),
            action_labels=list(range(n)),
            obs_labels=[0],
            loss=(m - m.T).tolist(),
            kernel=[[1.0]] * n,
        )
        assert game_service.minimax_lp(problem).value == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("scale", [2.0, 0.25])
def test_scale_equivariance(game_service, scale):
    """Test scaling the loss scales the value and keeps the strategies."""
    base = matching_pennies()
    scaled = base.with_loss(scale * base.loss_matrix() + 0.0)
    solution = game_service.minimax_lp(scaled)
    assert solution.value == pytest.approx(0.0, abs=1e-12)
    assert solution.least_favorable_prior.weights == pytest.approx([0.5, 0.5], abs=1e-12)

    shifted = base.with_loss(scale * (base.loss_matrix() + 1.0))
    assert game_service.minimax_lp(shifted).value == pytest.approx(scale, abs=1e-12)


def test_scale_equivariance_random(game_service, rng):
    """Test the value of random problems scales with the loss."""
    for _ in range(20):
        problem = random_problem(rng, max_dim=4)
        value = game_service.minimax_lp(problem).value
        doubled = problem.with_loss(2.0 * problem.loss_matrix())
        assert game_service.minimax_lp(doubled).value == pytest.approx(2.0 * value, abs=1e-9)


def test_weak_duality(game_service, rng):
    """Test worst-case risk never falls below a Bayes risk."""
    for _ in range(50):
        problem = random_problem(rng)
        for _ in range(20):
            delta = random_procedure(rng, problem)
            prior = random_prior(rng, problem.n_theta)
            assert game_service.weak_duality_gap(problem, delta, prior) >= -1e-12


def test_perturbed_prior_fails_certificate(game_service):
    """Test a non-least-favorable prior is caught by the saddle check."""
    problem = matching_pennies()
    solution = game_service.minimax_lp(problem)
    bad = GameSolution(
        value=solution.value,
        minimax_procedure=solution.minimax_procedure,
        least_favorable_prior=FinitePrior(weights=[0.9, 0.1]),
        duality_gap=0.0,
    )
    certificate = game_service.certify_saddle(problem, bad)

    assert not certificate.passed
    assert certificate.bayes_lower_bound == pytest.approx(-0.8)
    assert "Bayes response risk" in certificate.failures[0]


def test_perturbed_binary_test_prior_fails_certificate(game_service, binary_test):
    """Test the two-point test rejects the prior (0.9, 0.1)."""
    solution = game_service.minimax_lp(binary_test)
    bad = solution.model_copy(
        update={"least_favorable_prior": FinitePrior(weights=[0.9, 0.1])}
    )
    certificate = game_service.certify_saddle(binary_test, bad, tolerance=1e-8)

    assert not certificate.passed
    assert certificate.worst_case_risk == pytest.approx(0.25, abs=1e-12)
    assert certificate.bayes_lower_bound == pytest.approx(0.1, abs=1e-12)
    assert len(certificate.failures) == 1


def test_point_mass_prior_on_constant_rows(game_service):
    """Test a prior on a parameter with constant loss is least favorable."""
    problem = FiniteDecisionProblem(
        theta_labels=[0, 1],
        action_labels=[0, 1],
        obs_labels=[0],
        loss=[[1.0, 1.0], [0.0, 0.5]],
        kernel=[[1.0], [1.0]],
    )
    solution = game_service.minimax_lp(problem)
    assert solution.value == pytest.approx(1.0, abs=1e-12)
    assert solution.least_favorable_prior.weights == pytest.approx([1.0, 0.0], abs=1e-12)


def test_reported_prior_attains_value_on_constant_rows(game_service, risk_service):
    """Test the reported prior keeps no residual mass off the least favorable point."""
    problem = FiniteDecisionProblem(
        theta_labels=[0, 1],
        action_labels=[0, 1],
        obs_labels=[0],
        loss=[[1.0, 1.0], [0.0, 0.5]],
        kernel=[[1.0], [1.0]],
    )
    solution = game_service.minimax_lp(problem)
    _, maximin = risk_service.bayes_response(problem, solution.least_favorable_prior)

    assert solution.value - maximin <= 1e-12
    assert solution.least_favorable_prior.weights == [1.0, 0.0]


@pytest.mark.parametrize("selection", ["central", "dual"])
def test_reported_prior_attains_value_on_random_problems(risk_service, rng, selection):
    """Test every reported prior reaches the value and carries no negligible weights."""
    settings = Settings(_env_file=None, PRIOR_SELECTION=selection)
    service = GameService(settings)
    for _ in range(50):
        problem = random_problem(rng)
        solution = service.minimax_lp(problem)
        _, maximin = risk_service.bayes_response(problem, solution.least_favorable_prior)

        assert solution.value - maximin <= 1e-11
        assert all(
            w == 0.0 or w > settings.SUPPORT_TOLERANCE
            for w in solution.least_favorable_prior.weights
        )


def test_fictitious_play_brackets_value(game_service):
    """Test fictitious play brackets the pick-smaller value."""
    result = game_service.fictitious_play(pick_smaller_game(4), iterations=10_000)

    assert result.lower_bound <= 1e-12
    assert result.upper_bound >= -1e-12
    assert result.iterations == 10_000


def test_fictitious_play_converges_on_binary_test(game_service, risk_service, binary_test):
    """Test the bracket narrows and its strategies attain the bounds."""
    result = game_service.fictitious_play(binary_test, iterations=20_000)

    assert result.lower_bound <= 0.25 + 1e-12 <= result.upper_bound + 2e-12
    assert result.width < 0.05
    assert risk_service.worst_case_risk(binary_test, result.empirical_procedure) == pytest.approx(
        result.upper_bound, abs=1e-12
    )
    _, bayes = risk_service.bayes_response(binary_test, result.empirical_prior)
    assert bayes == pytest.approx(result.lower_bound, abs=1e-12)


def test_fictitious_play_single_cell(game_service):
    """Test a 1×1 game is closed after one round."""
    problem = FiniteDecisionProblem(
        theta_labels=[0], action_labels=[0], obs_labels=[0], loss=[[0.3]], kernel=[[1.0]]
    )
    result = game_service.fictitious_play(problem, iterations=1)
    assert result.lower_bound == result.upper_bound == pytest.approx(0.3)


def test_fictitious_play_requires_rounds(game_service, binary_test):
    with pytest.raises(InputError, match="at least 1"):
        game_service.fictitious_play(binary_test, iterations=0)


def test_fictitious_play_bracket_is_monotone(game_service, rng):
    """Test more rounds never loosen the bracket."""
    problem = random_problem(rng)
    value = game_service.minimax_lp(problem).value
    previous = None
    for rounds in (10, 100, 1000):
        result = game_service.fictitious_play(problem, iterations=rounds)
        assert result.lower_bound <= value + 1e-9 <= result.upper_bound + 2e-9
        if previous is not None:
            assert result.lower_bound >= previous.lower_bound
            assert result.upper_bound <= previous.upper_bound
        previous = result


def test_subgame_value_and_separation(game_service):
    """Test restricting the parameter set lowers the subgame value."""
    problem = matching_pennies()
    procedures = pure_procedures(2)

    full = SeparationQuery(theta_subset=[0, 1], procedure_set=procedures, level=-0.5)
    single = SeparationQuery(theta_subset=[0], procedure_set=procedures, level=-0.5)

    assert game_service.subgame_value(problem, full) == pytest.approx(0.0, abs=1e-12)
    assert game_service.subgame_value(problem, single) == pytest.approx(-1.0, abs=1e-12)
    assert game_service.separates(problem, full)
    assert not game_service.separates(problem, single)


def test_subgame_index_out_of_range(game_service):
    query = SeparationQuery(theta_subset=[0, 5], procedure_set=pure_procedures(2), level=0.0)
    with pytest.raises(InputError, match="out of range"):
        game_service.subgame_value(matching_pennies(), query)


def test_separation_query_validation():
    """Test malformed subgame queries are rejected."""
    procedures = pure_procedures(2)
    with pytest.raises(ValueError, match="must not be empty"):
        SeparationQuery(theta_subset=[], procedure_set=procedures, level=0.0)
    with pytest.raises(ValueError, match="repeated index"):
        SeparationQuery(theta_subset=[1, 1], procedure_set=procedures, level=0.0)
    with pytest.raises(ValueError, match="Procedure set"):
        SeparationQuery(theta_subset=[0], procedure_set=[], level=0.0)
    with pytest.raises(ValueError, match="finite"):
        SeparationQuery(theta_subset=[0], procedure_set=procedures, level=float("nan"))


def test_certificate_support(game_service):
    """Test the dual support is a finite set that still separates."""
    problem = FiniteDecisionProblem(
        theta_labels=[0, 1],
        action_labels=[0, 1],
        obs_labels=[0],
        loss=[[1.0, 1.0], [0.0, 0.0]],
        kernel=[[1.0], [1.0]],
    )
    assert game_service.finite_certificate_support(problem, pure_procedures(2), 0.5) == [0]
    assert game_service.finite_certificate_support(
        matching_pennies(), pure_procedures(2), -0.5
    ) == [0, 1]


def test_certificate_support_requires_separation(game_service):
    with pytest.raises(InputError, match="does not exceed level"):
        game_service.finite_certificate_support(matching_pennies(), pure_procedures(2), 0.1)


def test_certificate_support_on_binary_test(game_service, binary_test):
    """Test a single minimax procedure is certified above 0.2 on a finite subset."""
    delta0 = game_service.minimax_lp(binary_test).minimax_procedure
    support = game_service.finite_certificate_support(binary_test, [delta0], 0.2)

    assert support
    query = SeparationQuery(theta_subset=support, procedure_set=[delta0], level=0.2)
    assert game_service.subgame_value(binary_test, query) == pytest.approx(0.25, abs=1e-9)


def test_fictitious_play_width_on_random_problems(game_service, rng):
    """Test 20000 rounds bracket the value within 0.1 on sampled random problems."""
    for _ in range(10):
        problem = random_problem(rng)
        value = game_service.minimax_lp(problem).value
        result = game_service.fictitious_play(problem, iterations=20_000)

        assert result.lower_bound - 1e-9 <= value <= result.upper_bound + 1e-9
        assert result.width < 0.1


def test_fictitious_play_acceptance_check():
    """Test the suite's fictitious play check runs all 100 problems at 20000 rounds."""
    service = VerificationService(Settings(_env_file=None, SCHEDULE_WORKERS=4))
    report = service.run("fictitious-play-bracket")

    assert report.passed, report.checks[0].detail
    assert report.checks[0].detail.startswith("100 brackets at 20000 rounds")
