#!/usr/bin/python
"""
This module provides structural checks and residual evaluations on networks.

Functions:
    - validate: List every violated structural assumption of a network.
    - ensure_valid: Raise InvalidNetworkError for an inadmissible network.
    - residuals: Flow-conservation and potential-drop residuals of a state.
    - cycle_law_check: Sum of edge-law values around a closed walk.
    - cycle_basis_residuals: Cycle-law values over a fundamental cycle basis.
"""

import math
from dataclasses import dataclass, field

import networkx as nx

from dissiflow.errors.exceptions import DimensionError, InvalidNetworkError, NotACycleError
from dissiflow.models import NodeRole


@dataclass
class ValidationReport:
    """
    Structural problems found in a network.

    Attributes:
        problems (list): Human-readable problem descriptions; empty when the
            network is admissible.
    """
    problems: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.problems

    def __contains__(self, text):
        return any(text in problem for problem in self.problems)


def validate(network):
    """
    Check the structural assumptions of a network.

    The graph must be connected, the three node classes non-empty, bounds
    ordered, edges canonical, free of self-loops and duplicates, and every
    edge must carry exactly one law.

    Args:
        network (Network): The network to check.

    Returns:
        ValidationReport: Every violated assumption; empty when admissible.
    """
    report = ValidationReport()
    problems = report.problems
    nodes = set(network.nodes)

    if len(nodes) != len(network.nodes):
        problems.append('duplicate node ids')
    for node in network.nodes:
        if node not in network.roles:
            problems.append(f'node {node} has no role')
        bounds = network.pi_bounds.get(node)
        if bounds is None:
            problems.append(f'node {node} has no potential bounds')
        elif math.isnan(bounds[0]) or math.isnan(bounds[1]) or bounds[0] > bounds[1]:
            problems.append(f'inverted potential bounds at node {node}: {bounds}')

    for role, name in ((NodeRole.SOURCE, 'source'), (NodeRole.TERMINAL, 'terminal'),
                       (NodeRole.INTERNAL, 'internal')):
        if not any(network.roles.get(node) is role for node in network.nodes):
            problems.append(f'empty {name} set')

    seen = set()
    for i, j in network.edges:
        if i == j:
            problems.append(f'self-loop on node {i}')
            continue
        if i not in nodes or j not in nodes:
            problems.append(f'edge ({i}, {j}) references an unknown node')
        if i > j:
            problems.append(f'edge ({i}, {j}) is not in canonical orientation')
        if (i, j) in seen:
            problems.append(f'duplicate edge ({i}, {j})')
        seen.add((i, j))
        if (i, j) not in network.laws:
            problems.append(f'edge ({i}, {j}) has no dissipation function')
    for edge in network.laws:
        if edge not in seen:
            problems.append(f'dissipation function registered on unknown edge {edge}')

    if network.nodes and not nx.is_connected(network.graph):
        problems.append('graph not connected')
    return report


def ensure_valid(network):
    """Raise InvalidNetworkError unless ``validate`` returns an empty report."""
    report = validate(network)
    if not report.ok:
        raise InvalidNetworkError(report)
    return network


def _check_state(network, state):
    if set(state.pi) != set(network.nodes) or set(state.q) != set(network.nodes):
        raise DimensionError('state potentials/productions do not cover the network nodes')
    if set(state.phi) != set(network.edges):
        raise DimensionError('state flows do not cover the network edges')


def residuals(network, state):
    """
    Evaluate the steady-state equations on a state.

    Args:
        network (Network): The network.
        state (FlowState): Flows, potentials and productions to check.

    Returns:
        tuple: ``(conservation, drop)`` where ``conservation[i]`` is
        ``sum_j phi_ji + q_i`` and ``drop[(i, j)]`` is
        ``pi_j - pi_i + f_ij(phi_ij)``. Exact solutions give all zeros.

    Raises:
        DimensionError: If the state does not match the network.
    """
    _check_state(network, state)
    conservation = dict(state.q)
    for (i, j), phi in state.phi.items():
        conservation[j] += phi
        conservation[i] -= phi
    drop = {
        (i, j): state.pi[j] - state.pi[i] + float(network.laws[(i, j)](phi))
        for (i, j), phi in state.phi.items()
    }
    return conservation, drop


def cycle_law_check(network, state, cycle):
    """
    Sum the edge laws along a closed walk.

    Args:
        network (Network): The network.
        state (FlowState): A state providing edge flows.
        cycle (sequence): Node ids with ``cycle[0] == cycle[-1]``; consecutive
            nodes must be adjacent.

    Returns:
        float: ``sum_k f_{i_k i_(k+1)}(phi_{i_k i_(k+1)})``, zero for any state
        satisfying the potential-drop equation.

    Raises:
        NotACycleError: If the sequence is not a closed walk of the graph.
    """
    cycle = list(cycle)
    if len(cycle) < 3 or cycle[0] != cycle[-1]:
        raise NotACycleError(f'{cycle} is not closed')
    total = 0.0
    for i, j in zip(cycle, cycle[1:]):
        if i == j or not network.has_edge(i, j):
            raise NotACycleError(f'{cycle} uses the missing edge ({i}, {j})')
        total += float(network.law(i, j)(state.flow(i, j)))
    return total


def cycle_basis_residuals(network, state):
    """
    Cycle-law values over a fundamental cycle basis of the network.

    Returns:
        list: ``(cycle, value)`` pairs, one per independent cycle.
    """
    values = []
    for basis_cycle in nx.cycle_basis(network.graph):
        closed = list(basis_cycle) + [basis_cycle[0]]
        values.append((tuple(closed), cycle_law_check(network, state, closed)))
    return values
