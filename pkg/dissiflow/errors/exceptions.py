#!/usr/bin/python
"""
This module defines the exceptions raised by the dissiflow package.

Classes:
    - DissiflowError: Root of every error raised on purpose by the package.
    - DimensionError: Inputs indexed by the wrong node or edge set.
    - NotACycleError: A node sequence that is not a closed walk of the graph.
    - InvalidNetworkError: A network failing structural validation.
    - NonConvergenceError: The steady-state solver ran out of iterations.
    - PreconditionError: An ordering or box precondition does not hold.
    - CertificateError: A path certificate could not be constructed.
    - NoFeasiblePointError: The robust search found no feasible point.
    - BudgetExceededError: A sweep would exceed its solve budget.
    - NetworkFileError: A network file failed to parse or validate.
"""


class DissiflowError(Exception):
    """Base class for dissiflow errors."""


class DimensionError(DissiflowError, ValueError):
    """Raised when a state or boundary does not cover the expected nodes."""


class NotACycleError(DissiflowError, ValueError):
    """Raised when a node sequence is not a closed walk along graph edges."""


class InvalidNetworkError(DissiflowError):
    """
    Raised when an operation needs an admissible network.

    Attributes:
        report (ValidationReport): The failing structural report.
    """

    def __init__(self, report):
        self.report = report
        super().__init__('invalid network: ' + '; '.join(report.problems))


class NonConvergenceError(DissiflowError):
    """
    Raised when the Newton iteration stops before the gradient is small enough.

    Attributes:
        iterations (int): Iterations performed.
        gradient_norm (float): Max-norm of the final gradient.
        tol (float): The tolerance that was requested.
    """

    def __init__(self, iterations, gradient_norm, tol, reason='iteration limit reached'):
        self.iterations = iterations
        self.gradient_norm = gradient_norm
        self.tol = tol
        self.reason = reason
        super().__init__(
            f'steady state did not converge ({reason}) after {iterations} iterations: '
            f'|grad| = {gradient_norm:.3e} > tol = {tol:.3e}')


class PreconditionError(DissiflowError, ValueError):
    """Raised when ordered inputs or operating boxes violate a precondition."""


class CertificateError(DissiflowError):
    """Raised when no dominating path reaches the terminal set."""


class NoFeasiblePointError(DissiflowError):
    """
    Raised when the robust search ends without a robust-feasible point.

    Attributes:
        result (SearchResult): Best infeasible point, its verdict and the trace.
    """

    def __init__(self, result):
        self.result = result
        super().__init__('no robust-feasible operating point found within the search budget')


class BudgetExceededError(DissiflowError):
    """Raised when a scenario grid holds more scenarios than the solve budget."""


class NetworkFileError(DissiflowError):
    """
    Raised for syntax and schema errors in a network file.

    Attributes:
        message (str): The problem, without location.
        line (int | None): 1-based line of the offending element.
        column (int | None): 1-based column of the offending element.
        path (str | None): Location inside the document, such as ``nodes[2]``.
        source (str | None): Name of the file.
    """

    def __init__(self, message, line=None, column=None, path=None, source=None):
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        self.source = source
        named = f'{source}: ' if source else ''
        where = f'line {line}, column {column}: ' if line is not None else ''
        located = f'{path}: ' if path else ''
        super().__init__(f'{named}{where}{located}{message}')
