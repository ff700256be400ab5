import click

from prft.cli.functions import EXIT_VALIDATION, echo_ok, echo_violation, exit_codes
from prft.service import UOW
from prft.use_cases.scenario import ListScenariosUseCase, RunScenarioUseCase, ValidateScenarioUseCase


@click.command("run")
@click.argument("scenario")
@click.option("--out", "out", type=click.Path(file_okay=False), default=None,
              help="Output directory (default: PRFT_OUTPUT_DIR/<scenario name>).")
@click.option("--threads", type=click.IntRange(min=1), default=None,
              help="Worker threads (default: PRFT_THREADS).")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Override the scenario seed.")
@exit_codes
def run_command(scenario, out, threads, seed):
    """Run SCENARIO (a JSON / TOML file or a bundled scenario name)."""
    result = RunScenarioUseCase(UOW).execute(scenario, out=out, threads=threads, seed=seed)
    for name in result["outputs"]:
        echo_ok(f"wrote {result['output_dir']}/{name}")
    checks = result["invariants"]
    failed = [name for name, check in checks.items() if not check["ok"]]
    skipped = [name for name, check in checks.items() if check.get("skipped")]
    if not failed:
        echo_ok(f"{len(checks) - len(skipped)} invariant checks passed, {len(skipped)} skipped")


@click.command("validate")
@click.argument("scenario")
@exit_codes
def validate_command(scenario):
    """Check SCENARIO against the schema and the physics constraints without running it."""
    violations = ValidateScenarioUseCase(UOW).execute(scenario)
    if not violations:
        echo_ok(f"{scenario}: ok")
        return
    for violation in violations:
        echo_violation(f"{scenario}: {violation}")
    raise SystemExit(EXIT_VALIDATION)


@click.command("list-scenarios")
@exit_codes
def list_command():
    """List the bundled scenarios."""
    for name, description in ListScenariosUseCase(UOW).execute():
        click.echo(f"{name:<20} {description}")
