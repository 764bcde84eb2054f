#!/usr/bin/python
"""
This module generates seeded random instances for property checks.

Networks are random labelled trees (drawn through a Pruefer sequence) with
optional extra edges closing cycles. Every edge carries a gas pipe law with
a resistance drawn uniformly from a range; compression offsets are zero
unless a compression range is given. Node ids run from 1 to n.

Functions:
    - random_network: Connected random network with gas pipes.
    - random_boundary: Random productions and terminal potentials.
    - ordered_pair: Two boundaries ordered componentwise.
    - random_robust_instance: Network, box, operating point and costs.
"""

import logging
import math
from dataclasses import replace

import networkx as nx
import numpy as np

from dissiflow.dissipation.gas import GasPipe
from dissiflow.models import BoundaryData, Network, NodeRole
from dissiflow.robust.costs import AffineCost, CostModel
from dissiflow.robust.feasibility import OperatingPoint, ScenarioBox
from dissiflow.solver.newton import solve_steady_state

logger = logging.getLogger(__name__)


def _uniform(rng, interval):
    low, high = interval
    return float(rng.uniform(low, high)) if high > low else float(low)


def random_network(rng, n_nodes, *, extra_edges=0, n_sources=1, n_terminals=1,
                   resistance=(0.5, 2.0), compression=(0.0, 0.0),
                   bounds=(-math.inf, math.inf)):
    """
    Draw a connected network.

    Args:
        rng (numpy.random.Generator): Random source.
        n_nodes (int): Number of nodes, at least ``n_sources + n_terminals + 1``.
        extra_edges (int): Edges added to the spanning tree (capped by the
            number of missing pairs).
        n_sources (int): Number of source nodes.
        n_terminals (int): Number of terminal nodes.
        resistance (tuple): Range of the pipe coefficient ``c``.
        compression (tuple): Compressor box ``(b_min, b_max)``; when ``b_max > 0``
            every pipe hosts a compressor with ``b`` drawn from the box.
        bounds (tuple): Potential bounds applied to every node.

    Returns:
        Network: Nodes ``1..n_nodes`` with random roles.
    """
    if n_sources < 1 or n_terminals < 1 or n_nodes < n_sources + n_terminals + 1:
        raise ValueError(f'cannot place {n_sources} sources, {n_terminals} terminals '
                         f'and an internal node on {n_nodes} nodes')
    tree = nx.from_prufer_sequence(rng.integers(0, n_nodes, n_nodes - 2).tolist())
    graph = nx.relabel_nodes(tree, {node: node + 1 for node in tree.nodes})
    missing = sorted(tuple(sorted(pair)) for pair in nx.non_edges(graph))
    if extra_edges and missing:
        picks = rng.choice(len(missing), size=min(extra_edges, len(missing)), replace=False)
        graph.add_edges_from(missing[k] for k in sorted(picks))

    order = (rng.permutation(n_nodes) + 1).tolist()
    roles = {node: NodeRole.INTERNAL for node in order}
    for node in order[:n_sources]:
        roles[node] = NodeRole.SOURCE
    for node in order[n_sources:n_sources + n_terminals]:
        roles[node] = NodeRole.TERMINAL

    b_min, b_max = compression
    pipes = []
    for i, j in sorted(tuple(sorted(edge)) for edge in graph.edges):
        c = _uniform(rng, resistance)
        if b_max > 0:
            law = GasPipe(c, b=_uniform(rng, compression), b_min=b_min, b_max=b_max)
        else:
            law = GasPipe(c)
        pipes.append((i, j, law))
    return Network.build(roles, pipes, {node: tuple(bounds) for node in roles})


def random_boundary(network, rng, *, production=(-1.0, 0.0), injection=(0.0, 2.0),
                    potential=(1.0, 4.0)):
    """
    Draw internal productions, source injections and terminal potentials.

    Compression keeps the offsets registered on the network.
    """
    return BoundaryData(
        q_R={node: _uniform(rng, production) for node in network.internals},
        q_S={node: _uniform(rng, injection) for node in network.sources},
        pi_T={node: _uniform(rng, potential) for node in network.terminals},
    )


def ordered_pair(network, rng, *, equal_terminals=False, increment=(0.0, 0.5), keep=0.3):
    """
    Draw boundaries ``(A, B)`` with ``q^A >= q^B`` on S and R and ``pi_T^A >= pi_T^B``.

    Args:
        network (Network): The network.
        rng (numpy.random.Generator): Random source.
        equal_terminals (bool): Give both boundaries the same terminal potentials.
        increment (tuple): Range of the componentwise increase from B to A.
        keep (float): Probability that a component is left unchanged.

    Returns:
        tuple: ``(boundary_a, boundary_b)``.
    """
    lower = random_boundary(network, rng)

    def raise_(values):
        return {node: value if rng.random() < keep else value + _uniform(rng, increment)
                for node, value in values.items()}

    upper = BoundaryData(q_R=raise_(lower.q_R), q_S=raise_(lower.q_S),
                         pi_T=dict(lower.pi_T) if equal_terminals else raise_(lower.pi_T))
    return upper, lower


def random_robust_instance(rng, n_nodes=5, *, extra_edges=1, width=(0.1, 0.6), spread=(0.0, 1.0),
                           compression=(0.0, 0.0)):
    """
    Draw a robust instance whose potential bounds straddle a reference state.

    The bounds of sources and internal nodes are placed a random distance
    below and above the steady state of the box midpoint, so generated
    instances come out feasible or infeasible depending on the box width.

    Args:
        rng (numpy.random.Generator): Random source.
        n_nodes (int): Number of nodes.
        extra_edges (int): Edges added to the spanning tree.
        width (tuple): Range of the production interval width per internal node.
        spread (tuple): Range of the distance from the reference potential to each bound.
        compression (tuple): Compressor box of every pipe, see ``random_network``.

    Returns:
        tuple: ``(network, box, op, cost)``.
    """
    network = random_network(rng, n_nodes, extra_edges=extra_edges, compression=compression)
    intervals = {}
    for node in network.internals:
        upper = _uniform(rng, (-0.5, 0.0))
        intervals[node] = (upper - _uniform(rng, width), upper)
    box = ScenarioBox.from_intervals(intervals)
    reference = random_boundary(network, rng)
    op = OperatingPoint(q_S=reference.q_S, pi_T=reference.pi_T,
                        compression={edge: network.laws[edge].b for edge in network.compressors})
    midpoint = {node: (lo + hi) / 2.0 for node, (lo, hi) in intervals.items()}
    state = solve_steady_state(network, op.boundary(midpoint))

    pi_bounds = {}
    for node in network.nodes:
        if node in op.pi_T:
            pi_bounds[node] = (op.pi_T[node] - 1.0, op.pi_T[node] + 1.0)
        else:
            pi_bounds[node] = (state.pi[node] - _uniform(rng, spread),
                               state.pi[node] + _uniform(rng, spread))
    network = replace(network, pi_bounds=pi_bounds)
    cost = CostModel(
        source_costs={node: AffineCost(_uniform(rng, (0.5, 1.5))) for node in network.sources},
        terminal_revenues={node: AffineCost(_uniform(rng, (0.5, 2.0))) for node in network.terminals},
    )
    logger.debug('generated robust instance on %d nodes with %d internal nodes',
                 n_nodes, len(network.internals))
    return network, box, op, cost


def seeded(seed):
    """Return a ``numpy.random.Generator`` for ``seed``."""
    return np.random.default_rng(seed)
