import json
from typing import Tuple

import click

from sfasat.core.exceptions import SemanticError
from sfasat.core.middleware import command_middleware
from sfasat.schemas.result import CheckMethod, CheckReport
from sfasat.services.decide_service import DecideService
from sfasat.utils.sfa_file import parse_sfa_file


def parse_domain(text: str) -> Tuple[int, ...]:
    """`LO..HI` as the inclusive range of elements."""
    low, sep, high = text.partition("..")
    try:
        lo, hi = int(low), int(high)
    except ValueError:
        raise click.BadParameter(f"expected LO..HI, got {text!r}")
    if not sep or lo > hi:
        raise click.BadParameter(f"expected LO..HI with LO <= HI, got {text!r}")
    return tuple(range(lo, hi + 1))


@click.command("check")
@click.argument("file", type=click.File("r", encoding="utf-8"))
@click.option("--witness", "show_witness", is_flag=True, help="Print the witness word.")
@click.option(
    "--method",
    type=click.Choice([m.value for m in CheckMethod]),
    default=CheckMethod.DECOMP.value,
    show_default=True,
    help="Decision procedure.",
)
@click.option("--brute-dom", default="-8..8", show_default=True, help="Element range for --method brute.")
@click.option("--brute-len", default=4, show_default=True, type=click.IntRange(min=0), help="Word length bound for --method brute.")
@click.option("--json", "as_json", is_flag=True, help="Append a machine-readable record.")
@command_middleware
def check(file, show_witness: bool, method: str, brute_dom: str, brute_len: int, as_json: bool):
    """
    Decide whether the automaton in FILE accepts some word.

    Exit status 0 means SAT, 1 UNSAT, 2 an error.
    """
    sfa, constraint = parse_sfa_file(file.read())
    method = CheckMethod(method)

    if method == CheckMethod.DECOMP:
        result = DecideService.check(sfa, constraint)
    elif method == CheckMethod.PRUNE:
        if constraint is not None:
            raise SemanticError("--method prune cannot decide cardinality constraints")
        result = DecideService.prune_check(sfa)
    else:
        result = DecideService.brute_force_check(sfa, constraint, parse_domain(brute_dom), brute_len)

    click.echo(result.status.value)
    if show_witness and result.witness is not None:
        click.echo(f"witness=[{','.join(str(d) for d in result.witness)}]")
    if as_json:
        report = CheckReport(
            status=result.status,
            method=method,
            witness=result.witness,
            diagnostics=result.diagnostics,
            letters=DecideService.letter_profile(sfa).letters,
        )
        click.echo(json.dumps(report.model_dump(mode="json"), sort_keys=True))

    raise SystemExit(0 if result.is_sat else 1)
