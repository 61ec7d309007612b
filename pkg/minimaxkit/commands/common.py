"""
Shared command helpers - report options, number formatting and output.
"""
import json
import math
from datetime import datetime, timezone
from typing import Any, Callable, Dict, List, Optional, Tuple

import click
from pydantic import BaseModel

from minimaxkit.config import get_settings
from minimaxkit.exceptions import InputError
from minimaxkit.models.problem import FiniteDecisionProblem
from minimaxkit.schemas import RunConfig
from minimaxkit.services.benchmarks import GAME_BUILDERS, build_game
from minimaxkit.services.problem_io import load_problem


def report_options(command: Callable) -> Callable:
    """--output, --pretty and --deterministic, shared by every command."""
    command = click.option(
        "--deterministic", is_flag=True, help="Omit the timestamp so reruns are byte-identical."
    )(command)
    command = click.option("--pretty", is_flag=True, help="Human-readable table instead of JSON.")(
        command
    )
    command = click.option(
        "--output", type=click.Path(dir_okay=False, writable=True), help="Write the report here."
    )(command)
    return command


def problem_options(command: Callable) -> Callable:
    """--input FILE or --game NAME --size N."""
    command = click.option("--size", type=int, default=1, show_default=True)(command)
    command = click.option("--game", type=click.Choice(sorted(GAME_BUILDERS)))(command)
    command = click.option(
        "--input", "input_path", type=click.Path(exists=True, dir_okay=False)
    )(command)
    return command


def resolve_problem(config: RunConfig) -> FiniteDecisionProblem:
    if config.input:
        return load_problem(config.input[0])
    return build_game(config.game, config.size)


def round_significant(value: Any, digits: int) -> Any:
    """Round every float inside ``value`` to ``digits`` significant digits."""
    if isinstance(value, float):
        if not math.isfinite(value):
            return value
        return float(f"{value:.{digits}g}") + 0.0
    if isinstance(value, dict):
        return {k: round_significant(v, digits) for k, v in value.items()}
    if isinstance(value, list):
        return [round_significant(v, digits) for v in value]
    return value


def parse_mesh(text: str) -> List[float]:
    """Comma-separated mesh schedule; blank entries are ignored."""
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise InputError(f"Mesh schedule must be comma-separated numbers, got {text!r}") from None


def parse_params(pairs: Tuple[str, ...]) -> Dict[str, float]:
    params = {}
    for pair in pairs:
        key, sep, raw = pair.partition("=")
        if not sep or not key.strip():
            raise InputError(f"Parameter must look like key=value, got {pair!r}")
        try:
            params[key.strip()] = float(raw)
        except ValueError:
            raise InputError(f"Parameter {key.strip()!r} is not a number: {raw!r}") from None
    return params


def _cell(value: Any) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_cell(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_cell(v)}" for k, v in value.items()) + "}"
    return str(value)


def render_pretty(data: Dict[str, Any]) -> str:
    """Scalars as "key: value" lines, lists of records as aligned tables."""
    lines = []
    for key, value in data.items():
        if isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
            columns = list(value[0].keys())
            rows = [[_cell(item.get(c)) for c in columns] for item in value]
            widths = [max(len(c), *(len(r[i]) for r in rows)) for i, c in enumerate(columns)]
            lines.append(f"{key}:")
            lines.append("  " + "  ".join(c.ljust(w) for c, w in zip(columns, widths)))
            for row in rows:
                lines.append("  " + "  ".join(cell.ljust(w) for cell, w in zip(row, widths)))
        else:
            lines.append(f"{key}: {_cell(value)}")
    return "\n".join(lines)


def emit(report: BaseModel, config: RunConfig):
    """Stamp, round and print (or write) a report."""
    if not config.deterministic:
        report = report.model_copy(update={"timestamp": datetime.now(timezone.utc)})
    data = report.model_dump(mode="json")
    if config.deterministic:
        data.pop("timestamp", None)
    data = round_significant(data, get_settings().SIGNIFICANT_DIGITS)
    text = render_pretty(data) if config.pretty else json.dumps(data, indent=2)
    if config.output:
        config.output.write_text(text + "\n")
    else:
        click.echo(text)


def build_config(**options: Optional[Any]) -> RunConfig:
    return RunConfig(**{k: v for k, v in options.items() if v is not None})
