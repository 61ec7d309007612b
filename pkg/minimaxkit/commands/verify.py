"""
Verify command - run the verification suite.
"""
from typing import Optional

import click

from minimaxkit.commands.common import build_config, emit, report_options
from minimaxkit.services.verification_service import DEFECTS, VerificationService


@click.command("verify")
@click.option("--filter", "name_filter", help="Run only this group or check.")
@click.option("--inject-defect", type=click.Choice(DEFECTS), hidden=True)
@report_options
@click.pass_context
def command(
    ctx: click.Context,
    name_filter: Optional[str],
    inject_defect: Optional[str],
    output: Optional[str],
    pretty: bool,
    deterministic: bool,
):
    """Run the property and oracle checks; exit 1 if any fails."""
    config = build_config(
        command="verify", output=output, pretty=pretty, deterministic=deterministic
    )
    report = VerificationService(inject_defect=inject_defect).run(name_filter)
    emit(report, config)
    if not report.passed:
        ctx.exit(1)
