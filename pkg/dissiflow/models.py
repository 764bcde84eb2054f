#!/usr/bin/python
"""
This module defines the shared domain records of the dissiflow package.

A network is a connected graph whose nodes are partitioned into sources (S),
terminals (T) and internal customers (R). Each physical pipe is stored once,
on its canonical orientation ``(i, j)`` with ``i < j``; the reverse view is
derived from the edge-inversion symmetry of the laws. Productions ``q`` are
positive for injection into the network and negative for withdrawal.

Classes:
    - NodeRole: Partition label of a node.
    - Network: Immutable graph, partition, potential bounds and edge laws.
    - FlowState: Edge flows, nodal potentials and productions of one solution.
    - BoundaryData: The data fixing one steady state (q_R, q_S, pi_T, compression).

Functions:
    - canonical: Canonical orientation of a node pair.
    - total_production: Sum of an injection vector.
"""

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx
import numpy as np

from dissiflow.errors.exceptions import DimensionError


class NodeRole(enum.Enum):
    SOURCE = 'S'
    TERMINAL = 'T'
    INTERNAL = 'R'


def canonical(i, j):
    """Return the pair ``(i, j)`` ordered so that the smaller id comes first."""
    return (i, j) if i < j else (j, i)


def total_production(q):
    """Return the sum of an injection vector; zero for a balanced one."""
    return math.fsum(q.values())


@dataclass(frozen=True)
class Network:
    """
    Dissipative flow network.

    Attributes:
        nodes (tuple): Node ids in ascending order.
        edges (tuple): Canonical pairs ``(i, j)`` with ``i < j``.
        roles (dict): Node id mapped to its NodeRole.
        pi_bounds (dict): Node id mapped to ``(pi_min, pi_max)``.
        laws (dict): Canonical pair mapped to its DissipationFunction.

    The constructor stores what it is given; ``dissiflow.network.validate``
    reports every structural problem. Use ``Network.build`` to assemble a
    network from pipes given in any orientation.
    """
    nodes: tuple
    edges: tuple
    roles: dict
    pi_bounds: dict
    laws: dict

    @classmethod
    def build(cls, roles, pipes, pi_bounds=None):
        """
        Assemble a network from pipes declared in any orientation.

        Args:
            roles (dict): Node id mapped to NodeRole (or its letter).
            pipes (iterable): ``(i, j, law)`` triples. A pipe declared against
                the canonical orientation is stored as the reversed law.
            pi_bounds (dict, optional): Node id mapped to ``(pi_min, pi_max)``;
                unbounded when omitted.

        Returns:
            Network: The assembled network.
        """
        roles = {node: NodeRole(role) for node, role in roles.items()}
        pi_bounds = dict(pi_bounds or {})
        for node in roles:
            pi_bounds.setdefault(node, (-math.inf, math.inf))
        edges, laws = [], {}
        for i, j, law in pipes:
            pair = canonical(i, j)
            edges.append(pair)
            laws[pair] = law if (i, j) == pair else law.reversed()
        return cls(nodes=tuple(sorted(roles)), edges=tuple(edges), roles=roles,
                   pi_bounds=pi_bounds, laws=laws)

    def _members(self, role):
        return tuple(node for node in self.nodes if self.roles.get(node) is role)

    @cached_property
    def sources(self):
        return self._members(NodeRole.SOURCE)

    @cached_property
    def terminals(self):
        return self._members(NodeRole.TERMINAL)

    @cached_property
    def internals(self):
        return self._members(NodeRole.INTERNAL)

    @cached_property
    def free_nodes(self):
        """Nodes whose potential is solved for (S and R), ascending."""
        return tuple(node for node in self.nodes if self.roles.get(node) is not NodeRole.TERMINAL)

    @cached_property
    def graph(self):
        graph = nx.Graph()
        graph.add_nodes_from(self.nodes)
        graph.add_edges_from(self.edges)
        return graph

    @cached_property
    def index(self):
        """Node id mapped to its position in ``nodes``."""
        return {node: k for k, node in enumerate(self.nodes)}

    @cached_property
    def incidence(self):
        """
        Incidence matrix ``M`` of shape ``(|V|, |O|)`` with
        ``M[k, (i, j)] = delta_kj - delta_ki``, so that ``pi_i - pi_j = -(M.T @ pi)``.
        """
        matrix = np.zeros((len(self.nodes), len(self.edges)))
        for e, (i, j) in enumerate(self.edges):
            matrix[self.index[i], e] -= 1.0
            matrix[self.index[j], e] += 1.0
        return matrix

    def neighbors(self, node):
        return sorted(self.graph.neighbors(node))

    def has_edge(self, i, j):
        return canonical(i, j) in self.laws

    def law(self, i, j):
        """Law of the edge traversed from ``i`` to ``j``."""
        law = self.laws[canonical(i, j)]
        return law if i < j else law.reversed()

    @cached_property
    def compressors(self):
        """Canonical edges whose law exposes an adjustable compression ``b``."""
        return tuple(edge for edge in self.edges if 'b' in self.laws[edge].adjustable)

    def with_compression(self, compression):
        """
        Return the network with compression offsets replaced.

        Args:
            compression (dict): Canonical edge mapped to its new ``b``.

        Raises:
            ValueError: If an edge has no compressor or ``b`` is out of its box.
        """
        if not compression:
            return self
        laws = dict(self.laws)
        for edge, b in compression.items():
            if edge not in laws:
                raise DimensionError(f'compression given for unknown edge {edge}')
            low, high = laws[edge].adjustable.get('b', (None, None))
            if low is None:
                raise ValueError(f'edge {edge} hosts no compressor')
            if not low <= b <= high:
                raise ValueError(f'compression {b} on edge {edge} outside [{low}, {high}]')
            laws[edge] = laws[edge].with_parameters(b=b)
        return Network(nodes=self.nodes, edges=self.edges, roles=self.roles,
                       pi_bounds=self.pi_bounds, laws=laws)


@dataclass(frozen=True)
class FlowState:
    """
    One solution of the steady-state equations.

    Attributes:
        phi (dict): Canonical edge mapped to its signed flow (positive along ``i -> j``).
        pi (dict): Node id mapped to its potential.
        q (dict): Node id mapped to its production (positive = injection).
        iterations (int): Newton iterations spent producing the state.
        gradient_norm (float): Final max-norm of the energy gradient.
    """
    phi: dict
    pi: dict
    q: dict
    iterations: int = 0
    gradient_norm: float = 0.0

    def flow(self, i, j):
        """Flow from ``i`` to ``j``; the reverse of a stored edge is its negation."""
        if i < j:
            return self.phi[(i, j)]
        return -self.phi[(j, i)]

    def productions(self, nodes):
        return {node: self.q[node] for node in nodes}

    def potentials(self, nodes):
        return {node: self.pi[node] for node in nodes}


@dataclass(frozen=True)
class BoundaryData:
    """
    Data fixing a unique steady state.

    Attributes:
        q_R (dict): Production of every internal node (negative = withdrawal).
        q_S (dict): Injection of every source.
        pi_T (dict): Potential of every terminal.
        compression (dict): Canonical compressor edge mapped to its ``b``;
            edges not listed keep the law registered on the network.
    """
    q_R: dict
    q_S: dict
    pi_T: dict
    compression: dict = field(default_factory=dict)

    def check(self, network):
        """
        Raise DimensionError unless the data covers exactly R, S and T.
        """
        for name, given, expected in (('q_R', self.q_R, network.internals),
                                      ('q_S', self.q_S, network.sources),
                                      ('pi_T', self.pi_T, network.terminals)):
            if set(given) != set(expected):
                raise DimensionError(
                    f'{name} covers {sorted(given)} but the network expects {sorted(expected)}')
        for node, value in self.pi_T.items():
            if not math.isfinite(value):
                raise DimensionError(f'terminal potential at node {node} is not finite')

    @property
    def q_free(self):
        """Productions of sources and internal nodes together."""
        return {**self.q_S, **self.q_R}
