"""
Test the simplex LP service and certificate checking.
"""
import numpy as np
import pytest
from scipy.optimize import linprog

from minimaxkit.config import Settings
from minimaxkit.exceptions import SolverError
from minimaxkit.models.lp import LinearProgram, LPStatus, Relation
from minimaxkit.services.instances import random_lp
from minimaxkit.services.lp_service import LPService


def scipy_value(lp: LinearProgram) -> float:
    """Independent optimum from HiGHS."""
    a_ub, b_ub, a_eq, b_eq = [], [], [], []
    for row, rel, b in zip(lp.constraint_matrix, lp.relations, lp.rhs):
        if rel == Relation.LE:
            a_ub.append(row)
            b_ub.append(b)
        elif rel == Relation.GE:
            a_ub.append([-v for v in row])
            b_ub.append(-b)
        else:
            a_eq.append(row)
            b_eq.append(b)
    result = linprog(
        lp.objective,
        A_ub=a_ub or None,
        b_ub=b_ub or None,
        A_eq=a_eq or None,
        b_eq=b_eq or None,
        bounds=list(zip(lp.lower_array().tolist(), lp.upper_array().tolist())),
        method="highs",
    )
    assert result.status == 0
    return result.fun


def test_small_lp(lp_service):
    """Test a two-variable LP with an upper bound."""
    lp = LinearProgram(
        objective=[-1.0, -2.0],
        constraint_matrix=[[1.0, 1.0]],
        relations=[Relation.LE],
        rhs=[4.0],
        upper_bounds=[None, 3.0],
    )
    solution = lp_service.solve_lp(lp)

    assert solution.status == LPStatus.OPTIMAL
    assert solution.objective_value == pytest.approx(-7.0)
    assert solution.primal == pytest.approx([1.0, 3.0])
    assert solution.dual[0] <= 1e-12
    assert lp_service.check_certificate(lp, solution).passed


def test_random_lps_match_vertex_enumeration(lp_service, rng):
    """Test solve_lp agrees with brute-force vertex enumeration."""
    for _ in range(200):
        lp = random_lp(rng)
        solution = lp_service.solve_lp(lp)
        expected = lp_service.vertex_enumeration_value(lp)

        assert solution.is_optimal
        assert expected is not None
        assert solution.objective_value == pytest.approx(expected, abs=1e-8)
        assert lp_service.check_certificate(lp, solution).passed


def test_random_lps_match_highs(lp_service, rng):
    """Test solve_lp agrees with scipy's HiGHS solver."""
    for _ in range(50):
        lp = random_lp(rng)
        assert lp_service.solve_lp(lp).objective_value == pytest.approx(scipy_value(lp), abs=1e-8)


def test_beale_cycling_example(lp_service):
    """Test Bland's rule terminates on a classic cycling example."""
    lp = LinearProgram(
        objective=[-0.75, 20.0, -0.5, 6.0],
        constraint_matrix=[
            [0.25, -8.0, -1.0, 9.0],
            [0.5, -12.0, -0.5, 3.0],
            [0.0, 0.0, 1.0, 0.0],
        ],
        relations=[Relation.LE, Relation.LE, Relation.LE],
        rhs=[0.0, 0.0, 1.0],
    )
    solution = lp_service.solve_lp(lp)

    assert solution.is_optimal
    assert solution.objective_value == pytest.approx(scipy_value(lp), abs=1e-9)
    assert solution.objective_value == pytest.approx(
        lp_service.vertex_enumeration_value(lp), abs=1e-9
    )
    assert lp_service.check_certificate(lp, solution).passed


def test_infeasible_lp(lp_service):
    """Test an infeasible LP reports +inf."""
    lp = LinearProgram(
        objective=[1.0],
        constraint_matrix=[[1.0]],
        relations=[Relation.GE],
        rhs=[5.0],
        upper_bounds=[3.0],
    )
    solution = lp_service.solve_lp(lp)

    assert solution.status == LPStatus.INFEASIBLE
    assert solution.objective_value == float("inf")
    report = lp_service.check_certificate(lp, solution)
    assert not report.passed
    assert "infeasible" in report.failures[0]


def test_unbounded_lp(lp_service):
    """Test an unbounded LP reports -inf."""
    lp = LinearProgram(objective=[-1.0, 0.0], constraint_matrix=[[0.0, 1.0]], relations=[Relation.LE], rhs=[1.0])
    solution = lp_service.solve_lp(lp)

    assert solution.status == LPStatus.UNBOUNDED
    assert solution.objective_value == float("-inf")


def test_free_variable_and_dual_sign(lp_service):
    """Test a free variable pushed against a >= row carries a nonnegative dual."""
    lp = LinearProgram(
        objective=[1.0],
        constraint_matrix=[[1.0]],
        relations=[Relation.GE],
        rhs=[-2.0],
        lower_bounds=[None],
    )
    solution = lp_service.solve_lp(lp)

    assert solution.primal == pytest.approx([-2.0])
    assert solution.dual == pytest.approx([1.0])
    assert lp_service.check_certificate(lp, solution).passed


def test_upper_bounded_only_variable(lp_service):
    """Test a variable with only an upper bound."""
    lp = LinearProgram(objective=[-1.0], lower_bounds=[None], upper_bounds=[5.0])
    solution = lp_service.solve_lp(lp)

    assert solution.objective_value == pytest.approx(-5.0)
    assert lp_service.check_certificate(lp, solution).passed


def test_redundant_equality_rows(lp_service):
    """Test a repeated equality row leaves a zero artificial behind harmlessly."""
    lp = LinearProgram(
        objective=[1.0, 0.0],
        constraint_matrix=[[1.0, 1.0], [2.0, 2.0]],
        relations=[Relation.EQ, Relation.EQ],
        rhs=[2.0, 4.0],
    )
    solution = lp_service.solve_lp(lp)

    assert solution.objective_value == pytest.approx(0.0, abs=1e-12)
    assert solution.primal == pytest.approx([0.0, 2.0])
    assert lp_service.check_certificate(lp, solution).passed


def test_certificate_catches_tampering(lp_service):
    """Test perturbed primal or dual values are reported by name."""
    lp = LinearProgram(
        objective=[-1.0, -2.0],
        constraint_matrix=[[1.0, 1.0]],
        relations=[Relation.LE],
        rhs=[4.0],
        upper_bounds=[None, 3.0],
    )
    solution = lp_service.solve_lp(lp)

    bad_primal = solution.model_copy(update={"primal": [2.0, 3.0]})
    report = lp_service.check_certificate(lp, bad_primal)
    assert not report.passed
    assert any(f.startswith("primal_residual") for f in report.failures)

    bad_dual = solution.model_copy(update={"dual": [0.5]})
    report = lp_service.check_certificate(lp, bad_dual)
    assert not report.passed
    assert any(f.startswith("dual_residual") for f in report.failures)

    assert lp_service.check_certificate(lp, bad_dual, tolerance=float("inf")).passed


def test_pivot_limit():
    """Test the pivot limit raises a solver error."""
    service = LPService(Settings(_env_file=None, LP_MAX_PIVOTS=0))
    lp = LinearProgram(
        objective=[-1.0],
        constraint_matrix=[[1.0]],
        relations=[Relation.LE],
        rhs=[1.0],
    )
    with pytest.raises(SolverError, match="pivots"):
        service.solve_lp(lp)


def test_linear_program_validation():
    """Test dimension checks on linear programs."""
    with pytest.raises(ValueError, match="1 constraint rows but 0 relations"):
        LinearProgram(objective=[1.0], constraint_matrix=[[1.0]], relations=[], rhs=[1.0])
    with pytest.raises(ValueError, match="lower bound exceeds"):
        LinearProgram(objective=[1.0], lower_bounds=[2.0], upper_bounds=[1.0])


def test_vertex_enumeration_infeasible(lp_service):
    """Test vertex enumeration returns None without a feasible vertex."""
    lp = LinearProgram(
        objective=[1.0],
        constraint_matrix=[[1.0]],
        relations=[Relation.GE],
        rhs=[5.0],
        upper_bounds=[3.0],
    )
    assert lp_service.vertex_enumeration_value(lp) is None
    assert np.isinf(lp_service.solve_lp(lp).objective_value)
