import logging
import sys
from functools import wraps

import click
from colorama import Fore, Style

from prft.domain.exceptions import DomainError
from prft.repositories.exceptions import RunStoreError
from prft.utils.exceptions.PolicyError import PolicyError
from prft.utils.exceptions.ServiceError import ServiceError
from prft.utils.exceptions.ToleranceError import ToleranceError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def echo_ok(message: str):
    click.echo(f"{Fore.GREEN}{message}{Style.RESET_ALL}")


def echo_violation(message: str):
    click.echo(f"{Fore.RED}{message}{Style.RESET_ALL}", err=True)


def exit_codes(f):
    """Map the error hierarchy onto process exit codes."""
    @wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except PolicyError as e:
            for violation in e.violations:
                echo_violation(f"invalid: {violation}")
            sys.exit(EXIT_VALIDATION)
        except RunStoreError as e:
            echo_violation(f"invalid: {e}")
            sys.exit(EXIT_VALIDATION)
        except ToleranceError as e:
            echo_violation(f"tolerance breach in '{e.invariant}': {e}")
            sys.exit(EXIT_NUMERICAL)
        except (DomainError, ServiceError) as e:
            logger.debug("numerical failure", exc_info=True)
            echo_violation(f"{type(e).__name__}: {e}")
            sys.exit(EXIT_NUMERICAL)
    return wrapper
