#!/usr/bin/python
"""
This module maps the errors of the dissiflow command line to exit codes.

Handlers are registered per exception class with the ``errorhandler``
decorator; ``handle_error`` dispatches on the most specific registered class
of an error, prints the message to stderr and returns the exit code.

Exit codes:
    - 0: Success, feasible verdict.
    - 2: Infeasible verdict or no feasible operating point.
    - 3: Numerical failure (non-convergence, certificate construction, budget).
    - 4: Usage, file or network error, violated precondition.
"""

import logging

import click

from dissiflow.errors.exceptions import (BudgetExceededError, CertificateError, DimensionError,
                                         DissiflowError, InvalidNetworkError, NetworkFileError,
                                         NoFeasiblePointError, NonConvergenceError,
                                         NotACycleError, PreconditionError)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 2
EXIT_NUMERICAL = 3
EXIT_USAGE = 4

_handlers = {}


def errorhandler(*exception_types):
    """Register the decorated function as handler of ``exception_types``."""
    def decorator(function):
        for exception_type in exception_types:
            _handlers[exception_type] = function
        return function
    return decorator


def handle_error(error):
    """
    Report an error and return its exit code.

    Args:
        error (BaseException): The error raised by a command.

    Returns:
        int: The exit code of the most specific registered handler.

    Raises:
        BaseException: ``error`` itself when no handler is registered.
    """
    for exception_type in type(error).__mro__:
        handler = _handlers.get(exception_type)
        if handler is not None:
            return handler(error)
    raise error


@errorhandler(click.ClickException)
def usage_error(error):
    """
    Handle click usage and parameter errors.

    Args:
        error: The click exception, which knows how to print itself.

    Returns:
        int: EXIT_USAGE.
    """
    error.show()
    return EXIT_USAGE


@errorhandler(click.Abort)
def aborted(error):
    click.echo('Aborted!', err=True)
    return EXIT_USAGE


@errorhandler(NetworkFileError, InvalidNetworkError, PreconditionError, DimensionError,
              NotACycleError)
def input_error(error):
    """
    Handle malformed files, inadmissible networks and violated preconditions.

    Returns:
        int: EXIT_USAGE.
    """
    click.echo(f'error: {error}', err=True)
    return EXIT_USAGE


@errorhandler(NoFeasiblePointError)
def no_feasible_point(error):
    click.echo(f'infeasible: {error}', err=True)
    return EXIT_INFEASIBLE


@errorhandler(NonConvergenceError, CertificateError, BudgetExceededError, DissiflowError)
def numerical_failure(error):
    """
    Handle solver and certificate failures.

    Returns:
        int: EXIT_NUMERICAL.
    """
    logger.debug('numerical failure', exc_info=error)
    click.echo(f'numerical failure: {error}', err=True)
    return EXIT_NUMERICAL


@errorhandler(ValueError, OSError)
def bad_value(error):
    click.echo(f'error: {error}', err=True)
    return EXIT_USAGE
