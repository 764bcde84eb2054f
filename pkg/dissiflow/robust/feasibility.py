#!/usr/bin/python
"""
This module decides robust feasibility of an operating point.

Potentials of sources and internal nodes grow with the internal productions
and terminal productions shrink with them. Over a box of internal
productions the lowest potentials therefore occur at the lower corner, the
highest at the upper corner, and the largest cost at the upper corner. Two
steady-state solves decide feasibility for the whole box.

Classes:
    - ScenarioBox: Box of internal productions with its two corners.
    - OperatingPoint: Source injections, terminal potentials, compression.
    - VerdictStatus: Feasible, infeasible or indeterminate.
    - Violation: One potential bound broken in one scenario.
    - RobustVerdict: Outcome of the two-corner test.
    - DeterministicResult: Outcome of a single-scenario solve.

Functions:
    - robust_feasibility: Two-corner robust feasibility test.
    - deterministic_solve: Feasibility and cost for one fixed scenario.
"""

import enum
import logging
import math
from dataclasses import dataclass, field

from dissiflow.config import Config
from dissiflow.errors.exceptions import NonConvergenceError, PreconditionError
from dissiflow.models import BoundaryData
from dissiflow.network.utils import ensure_valid
from dissiflow.solver.newton import solve_steady_state
from dissiflow.utils import parallel_map

logger = logging.getLogger(__name__)

LOWER = 'lower'
UPPER = 'upper'
OPERATING = 'operating'


@dataclass(frozen=True)
class ScenarioBox:
    """
    Cartesian box of internal productions.

    Attributes:
        lower (dict): Internal node mapped to its smallest production.
        upper (dict): Internal node mapped to its largest production.
    """
    lower: dict
    upper: dict

    def __post_init__(self):
        if set(self.lower) != set(self.upper):
            raise ValueError('box corners must cover the same nodes')
        for node in self.lower:
            if self.lower[node] > self.upper[node]:
                raise ValueError(
                    f'reversed production interval at node {node}: '
                    f'[{self.lower[node]}, {self.upper[node]}]')

    @classmethod
    def from_intervals(cls, intervals):
        return cls(lower={node: lo for node, (lo, _) in intervals.items()},
                   upper={node: hi for node, (_, hi) in intervals.items()})

    @property
    def nodes(self):
        return tuple(sorted(self.lower))

    def corner(self, name):
        if name == LOWER:
            return dict(self.lower)
        if name == UPPER:
            return dict(self.upper)
        raise ValueError(f'unknown corner {name!r}')

    def contains(self, q_R, slack=0.0):
        return set(q_R) == set(self.lower) and all(
            self.lower[node] - slack <= q_R[node] <= self.upper[node] + slack for node in q_R)

    @property
    def is_degenerate(self):
        return all(self.lower[node] == self.upper[node] for node in self.lower)


@dataclass(frozen=True)
class OperatingPoint:
    """
    The here-and-now decision of the operator.

    Attributes:
        q_S (dict): Injection at every source.
        pi_T (dict): Potential at every terminal.
        compression (dict): Compressor edge mapped to its offset ``b``.
    """
    q_S: dict
    pi_T: dict
    compression: dict = field(default_factory=dict)

    def boundary(self, q_R):
        return BoundaryData(q_R=dict(q_R), q_S=dict(self.q_S), pi_T=dict(self.pi_T),
                            compression=dict(self.compression))


class VerdictStatus(enum.Enum):
    FEASIBLE = 'feasible'
    INFEASIBLE = 'infeasible'
    INDETERMINATE = 'indeterminate'


@dataclass(frozen=True)
class Violation:
    """
    Attributes:
        node (int): Node whose potential breaks a bound.
        bound (str): ``'min'`` or ``'max'``.
        scenario (str): ``'lower'``, ``'upper'`` or ``'operating'`` (terminal set-points).
        margin (float): Amount by which the bound is exceeded (positive).
    """
    node: int
    bound: str
    scenario: str
    margin: float


@dataclass(frozen=True)
class RobustVerdict:
    """
    Outcome of the two-corner robust test.

    Attributes:
        status (VerdictStatus): Feasible, infeasible, or indeterminate when a
            corner solve failed.
        worst_cost (float): Cost at the upper corner; NaN when that solve failed.
        violations (tuple): Violation records; empty exactly when feasible.
        lower (FlowState | None): Steady state at the lower corner.
        upper (FlowState | None): Steady state at the upper corner.
        message (str): Solver diagnostic for indeterminate verdicts.
    """
    status: VerdictStatus
    worst_cost: float
    violations: tuple = ()
    lower: object = None
    upper: object = None
    message: str = ''

    @property
    def feasible(self):
        return self.status is VerdictStatus.FEASIBLE

    @property
    def violation_total(self):
        return math.fsum(violation.margin for violation in self.violations)


def _bound_violations(network, state, scenario, nodes, slack, check_min=True, check_max=True):
    violations = []
    for node in nodes:
        low, high = network.pi_bounds[node]
        value = state.pi[node]
        if check_min and value < low - slack:
            violations.append(Violation(node, 'min', scenario, low - value))
        if check_max and value > high + slack:
            violations.append(Violation(node, 'max', scenario, value - high))
    return violations


def _terminal_violations(network, op, slack):
    violations = []
    for node, value in sorted(op.pi_T.items()):
        low, high = network.pi_bounds[node]
        if value < low - slack:
            violations.append(Violation(node, 'min', OPERATING, low - value))
        if value > high + slack:
            violations.append(Violation(node, 'max', OPERATING, value - high))
    return violations


def _check_compression(network, op):
    try:
        return network.with_compression(op.compression)
    except ValueError as error:
        raise PreconditionError(str(error)) from error


def robust_feasibility(network, box, op, cost, *, tol=None, slack=Config.BOUND_SLACK,
                       workers=None, **solver_options):
    """
    Decide whether an operating point is feasible for every scenario of a box.

    Args:
        network (Network): The network.
        box (ScenarioBox): Internal production box.
        op (OperatingPoint): Source injections, terminal potentials, compression.
        cost (CostModel): Costs and payments.
        tol (float, optional): Solver tolerance.
        slack (float): Absolute slack on bound comparisons.
        workers (int, optional): Threads for the two corner solves.
        **solver_options: Passed to ``solve_steady_state``.

    Returns:
        RobustVerdict: Feasible when the lower corner respects every lower
        bound, the upper corner every upper bound and the terminal set-points
        their bounds. Solver failures give an indeterminate verdict.

    Raises:
        PreconditionError: If the compression lies outside its boxes.
    """
    ensure_valid(network)
    _check_compression(network, op)

    def solve(corner):
        try:
            return solve_steady_state(network, op.boundary(box.corner(corner)), tol, **solver_options)
        except NonConvergenceError as error:
            logger.warning('%s corner solve failed: %s', corner, error)
            return error

    lower, upper = parallel_map(solve, [LOWER, UPPER], workers)
    failures = [(name, state) for name, state in ((LOWER, lower), (UPPER, upper))
                if isinstance(state, NonConvergenceError)]
    upper_state = None if isinstance(upper, NonConvergenceError) else upper
    lower_state = None if isinstance(lower, NonConvergenceError) else lower
    worst_cost = math.nan
    if upper_state is not None:
        worst_cost = cost.cost(op.q_S, upper_state.productions(network.terminals))
    if failures:
        message = '; '.join(f'{name} corner: {error}' for name, error in failures)
        return RobustVerdict(VerdictStatus.INDETERMINATE, worst_cost, (), lower_state,
                             upper_state, message)

    free = network.free_nodes
    violations = (_bound_violations(network, lower, LOWER, free, slack, check_max=False)
                  + _bound_violations(network, upper, UPPER, free, slack, check_min=False)
                  + _terminal_violations(network, op, slack))
    status = VerdictStatus.INFEASIBLE if violations else VerdictStatus.FEASIBLE
    return RobustVerdict(status, worst_cost, tuple(violations), lower, upper)


@dataclass(frozen=True)
class DeterministicResult:
    """
    Attributes:
        state (FlowState): Steady state of the scenario.
        cost (float): ``c(q_S, q_T)`` of the scenario.
        feasible (bool): Whether every node respects its potential bounds.
        violations (tuple): The broken bounds, tagged with scenario ``'operating'``.
    """
    state: object
    cost: float
    feasible: bool
    violations: tuple = ()


def deterministic_solve(network, q_R, op, cost, *, tol=None, slack=Config.BOUND_SLACK,
                        **solver_options):
    """
    Solve one fixed scenario and check every potential bound.

    Args:
        network (Network): The network.
        q_R (dict): Production of every internal node.
        op (OperatingPoint): The operating point.
        cost (CostModel): Costs and payments.

    Returns:
        DeterministicResult: State, cost and feasibility of the scenario.

    Raises:
        NonConvergenceError: If the steady state cannot be solved.
    """
    _check_compression(network, op)
    state = solve_steady_state(network, op.boundary(q_R), tol, **solver_options)
    violations = _bound_violations(network, state, OPERATING, network.nodes, slack)
    value = cost.cost(op.q_S, state.productions(network.terminals))
    return DeterministicResult(state, value, not violations, tuple(violations))
