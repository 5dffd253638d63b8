import click

from sfasat.core.middleware import command_middleware
from sfasat.services.selftest_service import SelftestService


@click.command("selftest")
@click.option("--scale", default=1.0, show_default=True, type=click.FloatRange(min=0, min_open=True), help="Multiplier on instance counts.")
@click.option("--seed", default=0, show_default=True, type=int)
@command_middleware
def selftest(scale: float, seed: int):
    """Run the oracle-agreement suites; exit 0 when every suite agrees."""
    reports = SelftestService.run_all(scale=scale, seed=seed)
    for report in reports:
        verdict = "ok" if report.passed else f"FAILED ({len(report.failures)})"
        click.echo(f"{report.name}: {report.instances} instances {verdict}")
        for failure in report.failures:
            click.echo(f"  {failure}")
    raise SystemExit(0 if all(report.passed for report in reports) else 1)
