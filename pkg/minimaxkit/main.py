"""
Main command-line application.
"""
import json
import logging
import sys
from datetime import datetime, timezone

import click
from pydantic import ValidationError

from minimaxkit.commands import approximate, fp, solve, verify, wasserstein
from minimaxkit.config import get_settings
from minimaxkit.exceptions import EvaluationError, InputError
from minimaxkit.schemas import ErrorResponse

settings = get_settings()

logger = logging.getLogger(__name__)

EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3


def _report_error(error: str, exc: Exception):
    response = ErrorResponse(
        error=error, detail=str(exc), timestamp=datetime.now(timezone.utc)
    )
    click.echo(json.dumps(response.model_dump(mode="json")), err=True)


class MinimaxGroup(click.Group):
    """Command group mapping exceptions to exit codes: 2 for bad input, 3 otherwise."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except (click.exceptions.Exit, click.exceptions.Abort, click.ClickException):
            raise
        except (InputError, ValidationError, EvaluationError) as e:
            logger.info(f"Input error: {e}")
            _report_error("Input Error", e)
            ctx.exit(EXIT_INPUT_ERROR)
        except Exception as e:
            logger.error(f"Unhandled exception: {e}", exc_info=True)
            _report_error(
                "Internal Error",
                e if settings.ENVIRONMENT == "development" else Exception("An error occurred"),
            )
            ctx.exit(EXIT_INTERNAL_ERROR)


@click.group(cls=MinimaxGroup)
@click.option("--log-level", default=None, help="Override LOG_LEVEL for this run.")
@click.version_option("1.0.0", prog_name=settings.APP_NAME)
def cli(log_level):
    """Minimax and least favorable prior solvers for statistical decision problems."""
    logging.basicConfig(
        level=(log_level or settings.LOG_LEVEL).upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


cli.add_command(solve.command)
cli.add_command(approximate.command)
cli.add_command(wasserstein.command)
cli.add_command(verify.command)
cli.add_command(fp.command)


if __name__ == "__main__":
    cli()
