#!/usr/bin/python
"""
This module checks the monotone response of steady states to productions.

Raising productions outside the terminals (and terminal potentials) can only
raise the potentials of sources and internal nodes. With terminal potentials
held fixed, it can only lower the terminal productions, since the extra
injection has to leave through the terminals.

Classes:
    - MonotonicityReport: Margins and violations of one ordered pair.

Functions:
    - monotonicity_check: Solve an ordered pair of boundaries and compare.
"""

import logging
import math
from dataclasses import dataclass

from dissiflow.errors.exceptions import PreconditionError
from dissiflow.solver.newton import solve_steady_state

logger = logging.getLogger(__name__)

STRICT_GAP = 1e-3


@dataclass(frozen=True)
class MonotonicityReport:
    """
    Outcome of comparing two steady states with ordered boundaries.

    Attributes:
        potential_margins (dict): Free node mapped to ``pi^A - pi^B``.
        production_margins (dict): Terminal mapped to ``q^B - q^A``; empty
            unless both boundaries share the terminal potentials.
        strict_nodes (tuple): Free nodes with ``q^A - q^B`` above the strict gap.
        strict_violations (tuple): Strict nodes whose potential did not rise.
        violations (tuple): ``(kind, node, margin)`` for every margin below ``-tol``.
        state_a (FlowState): Solution for boundary A.
        state_b (FlowState): Solution for boundary B.
    """
    potential_margins: dict
    production_margins: dict
    strict_nodes: tuple
    strict_violations: tuple
    violations: tuple
    state_a: object = None
    state_b: object = None

    @property
    def passed(self):
        return not self.violations


def _check_order(network, boundary_a, boundary_b, tol):
    boundary_a.check(network)
    boundary_b.check(network)
    if boundary_a.compression != boundary_b.compression:
        raise PreconditionError('ordered boundaries must share the compression settings')
    q_a, q_b = boundary_a.q_free, boundary_b.q_free
    for node in network.free_nodes:
        if q_a[node] < q_b[node] - tol:
            raise PreconditionError(
                f'production ordering fails at node {node}: {q_a[node]} < {q_b[node]}')
    for node in network.terminals:
        if boundary_a.pi_T[node] < boundary_b.pi_T[node] - tol:
            raise PreconditionError(
                f'terminal potential ordering fails at node {node}: '
                f'{boundary_a.pi_T[node]} < {boundary_b.pi_T[node]}')


def monotonicity_check(network, boundary_a, boundary_b, tol=1e-7, solver_tol=None,
                       strict_gap=STRICT_GAP):
    """
    Solve boundaries A and B and compare their steady states.

    Args:
        network (Network): The network.
        boundary_a (BoundaryData): The larger boundary (``q^A >= q^B`` on S and R,
            ``pi_T^A >= pi_T^B``).
        boundary_b (BoundaryData): The smaller boundary.
        tol (float): Slack on the ordering of the results.
        solver_tol (float, optional): Steady-state solver tolerance.
        strict_gap (float): Production increase above which a node is checked
            for a strict potential increase.

    Returns:
        MonotonicityReport: Margins, strict nodes and violations.

    Raises:
        PreconditionError: If the boundaries are not ordered.
        NonConvergenceError: If either steady state cannot be solved.
    """
    _check_order(network, boundary_a, boundary_b, tol)
    state_a = solve_steady_state(network, boundary_a, solver_tol)
    state_b = solve_steady_state(network, boundary_b, solver_tol)

    violations = []
    potential_margins = {}
    for node in network.free_nodes:
        margin = state_a.pi[node] - state_b.pi[node]
        potential_margins[node] = margin
        if margin < -tol:
            violations.append(('potential', node, margin))

    production_margins = {}
    same_terminals = all(math.isclose(boundary_a.pi_T[node], boundary_b.pi_T[node], rel_tol=0.0,
                                      abs_tol=tol) for node in network.terminals)
    if same_terminals:
        for node in network.terminals:
            margin = state_b.q[node] - state_a.q[node]
            production_margins[node] = margin
            if margin < -tol:
                violations.append(('production', node, margin))

    q_a, q_b = boundary_a.q_free, boundary_b.q_free
    strict_nodes = tuple(node for node in network.free_nodes if q_a[node] - q_b[node] > strict_gap)
    strict_violations = tuple(node for node in strict_nodes if not potential_margins[node] > 0)

    if violations:
        logger.warning('monotonicity violated: %s', violations)
    return MonotonicityReport(potential_margins, production_margins, strict_nodes,
                              strict_violations, tuple(violations), state_a, state_b)
