#!/usr/bin/python
"""
This module builds dominating-path certificates between two flow solutions.

Let ``phi`` and ``phi*`` conserve flow for productions ``q`` and ``q*`` with
``q >= q*`` outside a node set T. Extra production at a node u has to leave
through some path to T: there is a simple path from a node of T to u along
which ``phi*`` exceeds ``phi`` on every edge (strictly when ``q_u > q*_u``).
The path is found by growing layers outward from u, each new layer holding
the unvisited neighbours joined to the previous layer by a dominating edge,
until a layer meets T.

Classes:
    - AquariusCertificate: The path and its edgewise flow pairs.

Functions:
    - aquarius_path: Construct the certificate for one node.
"""

import logging
from dataclasses import dataclass

from dissiflow.config import Config
from dissiflow.errors.exceptions import CertificateError, PreconditionError

logger = logging.getLogger(__name__)


def _threshold(a, b, strict_tol):
    return strict_tol * max(1.0, abs(a), abs(b))


def dominates(phi_star, phi, strict, strict_tol=Config.STRICT_TOL):
    """``phi* > phi`` beyond tolerance when strict, ``phi* >= phi`` up to tolerance otherwise."""
    gap = phi_star - phi
    threshold = _threshold(phi_star, phi, strict_tol)
    return gap > threshold if strict else gap >= -threshold


@dataclass(frozen=True)
class AquariusCertificate:
    """
    Attributes:
        target (int): The node u the path ends at.
        path (tuple): Node ids ``(i_1, ..., i_n)`` with ``i_1`` in T and ``i_n = u``.
        edges (tuple): ``(i, j, phi_star_ij, phi_ij)`` for consecutive path nodes.
        strict (bool): Whether every edge is strictly dominating.
    """
    target: int
    path: tuple
    edges: tuple
    strict: bool

    def verify(self, network, state_a, state_b, terminal_set, strict_tol=Config.STRICT_TOL):
        """
        Re-inspect the certificate against the two states.

        Args:
            network (Network): The network.
            state_a (FlowState): Solution with the larger productions (``phi``).
            state_b (FlowState): Solution with the smaller productions (``phi*``).
            terminal_set (iterable): The node set T.

        Returns:
            list: Problems found; empty when the certificate holds.
        """
        problems = []
        path = list(self.path)
        if not path or path[0] not in set(terminal_set):
            problems.append('path does not start in the terminal set')
        if not path or path[-1] != self.target:
            problems.append('path does not end at the target')
        if len(set(path)) != len(path):
            problems.append('path intersects itself')
        for i, j in zip(path, path[1:]):
            if not network.has_edge(i, j):
                problems.append(f'nodes {i} and {j} are not adjacent')
                continue
            phi_star, phi = state_b.flow(i, j), state_a.flow(i, j)
            if not dominates(phi_star, phi, self.strict, strict_tol):
                problems.append(f'edge ({i}, {j}) is not dominating: {phi_star} vs {phi}')
        return problems


def aquarius_path(network, state_a, state_b, terminal_set, u, *, strict_tol=Config.STRICT_TOL,
                  production_tol=None):
    """
    Construct a dominating path from the terminal set to ``u``.

    Args:
        network (Network): The network both states live on.
        state_a (FlowState): Flows ``phi`` for the larger productions ``q``.
        state_b (FlowState): Flows ``phi*`` for the smaller productions ``q*``.
        terminal_set (iterable): The node set T (need not be the network terminals).
        u (int): Target node outside T.
        strict_tol (float): Relative gap separating strict from equal flows.
        production_tol (float, optional): Absolute slack on ``q >= q*``;
            defaults to ``strict_tol * max(1, max|q|)``.

    Returns:
        AquariusCertificate: Strict when ``q_u > q*_u`` beyond tolerance.

    Raises:
        PreconditionError: If ``u`` lies in T or ``q >= q*`` fails somewhere outside T.
        CertificateError: If the layers never reach T, which only happens when
            flows differ by less than the tolerance.
    """
    terminals = set(terminal_set)
    if u in terminals:
        raise PreconditionError(f'target node {u} lies in the terminal set')
    if u not in network.index:
        raise PreconditionError(f'unknown target node {u}')
    if production_tol is None:
        scale = max([1.0] + [abs(value) for value in state_a.q.values()])
        production_tol = strict_tol * scale
    for node in network.nodes:
        if node not in terminals and state_a.q[node] < state_b.q[node] - production_tol:
            raise PreconditionError(
                f'production ordering fails at node {node}: {state_a.q[node]} < {state_b.q[node]}')

    strict = state_a.q[u] - state_b.q[u] > production_tol
    path = _layered_path(network, state_a, state_b, terminals, u, strict, strict_tol)
    if path is None and strict:
        logger.warning('strict layering from node %s failed; retrying with equal flows allowed', u)
        strict = False
        path = _layered_path(network, state_a, state_b, terminals, u, strict, strict_tol)
    if path is None:
        logger.warning('no dominating path from the terminal set to node %s', u)
        raise CertificateError(
            f'no dominating path reaches the terminal set from node {u}; '
            'flows agree to within the strictness tolerance')
    edges = tuple((i, j, state_b.flow(i, j), state_a.flow(i, j)) for i, j in zip(path, path[1:]))
    return AquariusCertificate(u, tuple(path), edges, strict)


def _layered_path(network, state_a, state_b, terminals, u, strict, strict_tol):
    """Grow layers from ``u`` along dominating edges; back-trace once T is met."""
    parent = {u: None}
    layer = [u]
    while layer:
        reached = [node for node in layer if node in terminals]
        if reached:
            path = [min(reached)]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path
        following = []
        for j in sorted(layer):
            for i in network.neighbors(j):
                if i in parent:
                    continue
                if dominates(state_b.flow(i, j), state_a.flow(i, j), strict, strict_tol):
                    parent[i] = j
                    following.append(i)
        layer = sorted(following)
    return None
