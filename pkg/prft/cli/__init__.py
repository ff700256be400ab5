"""Command-line front end: the `prft` click group"""
import sys

import click

from prft.cli.c_scenario import list_command, run_command, validate_command
from prft.cli.functions import EXIT_VALIDATION, echo_violation
from prft.config import LOG_LEVELS, ApplicationConfig
from prft.ext import init_logging
from prft.utils.exceptions.PolicyError import PolicyError


@click.group()
@click.option("--log-level", type=click.Choice(LOG_LEVELS, case_sensitive=False), default=None,
              help="Override PRFT_LOG_LEVEL.")
def cli(log_level):
    """Photon-resolved Floquet toolkit."""
    try:
        level = log_level.upper() if log_level else ApplicationConfig.log_level()
    except PolicyError as e:
        echo_violation(f"invalid: {e}")
        sys.exit(EXIT_VALIDATION)
    init_logging(level)


cli.add_command(run_command)
cli.add_command(validate_command)
cli.add_command(list_command)


def main():
    cli()


__all__ = [
    "cli",
    "main",
]
