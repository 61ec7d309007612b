"""
Problem I/O - reading and writing problem and measure documents.
"""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from pydantic import ValidationError

from minimaxkit.exceptions import InputError
from minimaxkit.models.labels import label_to_json, normalize_labels
from minimaxkit.models.measure import DiscreteMeasure
from minimaxkit.models.problem import FiniteDecisionProblem, collect_violations
from minimaxkit.schemas import MeasureDocument, ProblemDocument

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def _read_json(path: PathLike) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"Cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno}, column {e.colno}: {e.msg}") from None


def _schema_errors(path: PathLike, error: ValidationError) -> InputError:
    parts = []
    for item in error.errors():
        where = ".".join(str(p) for p in item["loc"]) or "document"
        parts.append(f"{where}: {item['msg']}")
    return InputError(f"{path}: " + "; ".join(parts))


def problem_from_document(data: Any, source: str = "document") -> FiniteDecisionProblem:
    """
    Build a problem from its JSON form.

    Raises:
        InputError: Naming the offending key, row or cell
    """
    try:
        doc = ProblemDocument.model_validate(data)
    except ValidationError as e:
        raise _schema_errors(source, e) from None
    try:
        theta = normalize_labels(doc.theta)
        actions = normalize_labels(doc.actions)
        observations = normalize_labels(doc.observations)
    except ValueError as e:
        raise InputError(f"{source}: {e}") from None

    kernel = doc.kernel
    if kernel is None:
        if len(observations) != 1:
            raise InputError(
                f"{source}: kernel may be omitted only with a single observation, "
                f"found {len(observations)}"
            )
        kernel = [[1.0] for _ in theta]

    violations = collect_violations(theta, actions, observations, doc.loss, kernel)
    if violations:
        raise InputError(f"{source}: " + "; ".join(v.message for v in violations))
    return FiniteDecisionProblem(
        theta_labels=theta,
        action_labels=actions,
        obs_labels=observations,
        loss=[[float(v) for v in row] for row in doc.loss],
        kernel=[[float(v) for v in row] for row in kernel],
    )


def load_problem(path: PathLike) -> FiniteDecisionProblem:
    """Read and validate a problem file."""
    problem = problem_from_document(_read_json(path), str(path))
    logger.debug(f"Loaded problem from {path}: {problem.summary()}")
    return problem


def problem_to_document(problem: FiniteDecisionProblem) -> Dict[str, Any]:
    return {
        "theta": [label_to_json(t) for t in problem.theta_labels],
        "actions": [label_to_json(a) for a in problem.action_labels],
        "observations": [label_to_json(x) for x in problem.obs_labels],
        "loss": problem.loss,
        "kernel": problem.kernel,
    }


def save_problem(problem: FiniteDecisionProblem, path: PathLike):
    Path(path).write_text(json.dumps(problem_to_document(problem), indent=2) + "\n")


def load_measure(path: PathLike) -> DiscreteMeasure:
    """Read a measure file {"support": [...], "weights": [...]}."""
    data = _read_json(path)
    try:
        doc = MeasureDocument.model_validate(data)
        return DiscreteMeasure(support=doc.support, weights=doc.weights)
    except ValidationError as e:
        raise _schema_errors(path, e) from None


def save_measure(measure: DiscreteMeasure, path: PathLike):
    Path(path).write_text(json.dumps(measure.model_dump(), indent=2) + "\n")
