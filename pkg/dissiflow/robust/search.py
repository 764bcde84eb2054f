#!/usr/bin/python
"""
This module searches for a robust-feasible operating point of least worst-case cost.

The outer problem ranges over source injections, terminal potentials and
compression offsets inside user boxes. Each candidate is judged by the
two-corner robust test; the search is a derivative-free compass search with
geometric step shrinking, which copes with the non-smooth boundary of the
feasible set. It returns a local optimum only.

Classes:
    - SearchSpace: Boxes of the decision variables.
    - SearchConfig: Search parameters.
    - TraceEntry: One evaluated candidate.
    - SearchResult: Best point, its verdict and the trace.

Functions:
    - optimize_operating_point: Compass search over the operating boxes.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from dissiflow.config import Config
from dissiflow.errors.exceptions import NoFeasiblePointError
from dissiflow.network.utils import ensure_valid
from dissiflow.robust.feasibility import OperatingPoint, VerdictStatus, robust_feasibility
from dissiflow.utils import parallel_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchSpace:
    """
    Boxes of the operational variables.

    Attributes:
        q_S (dict): Source id mapped to its injection box ``(lo, hi)``.
        pi_T (dict): Terminal id mapped to its potential box ``(lo, hi)``.
        compression (dict): Compressor edge mapped to its box ``(lo, hi)``.

    Degenerate boxes fix a variable. Every source needs a finite box.
    """
    q_S: dict
    pi_T: dict
    compression: dict = field(default_factory=dict)

    def __post_init__(self):
        for kind, boxes in (('q_S', self.q_S), ('pi_T', self.pi_T),
                            ('compression', self.compression)):
            for key, (lo, hi) in boxes.items():
                if not (math.isfinite(lo) and math.isfinite(hi)):
                    raise ValueError(f'{kind} box of {key} must be finite, got ({lo}, {hi})')
                if lo > hi:
                    raise ValueError(f'{kind} box of {key} is reversed: ({lo}, {hi})')

    @classmethod
    def for_network(cls, network, q_S, pi_T):
        """
        Build the space of a network, clipping terminal boxes to the terminal
        potential bounds and taking compression boxes from the pipe laws.
        """
        if set(q_S) != set(network.sources):
            raise ValueError('every source needs an injection box')
        clipped = {}
        for node, (lo, hi) in pi_T.items():
            low, high = network.pi_bounds[node]
            clipped[node] = (max(lo, low), min(hi, high))
        compression = {edge: network.laws[edge].adjustable['b'] for edge in network.compressors}
        return cls(q_S=dict(q_S), pi_T=clipped, compression=compression)

    def variables(self):
        """``(kind, key, lo, hi)`` for every variable, in a fixed order."""
        return ([('q_S', node, *self.q_S[node]) for node in sorted(self.q_S)]
                + [('pi_T', node, *self.pi_T[node]) for node in sorted(self.pi_T)]
                + [('compression', edge, *self.compression[edge]) for edge in sorted(self.compression)])

    def midpoint(self):
        return self.point(np.array([(lo + hi) / 2.0 for _, _, lo, hi in self.variables()]))

    def vector(self, op):
        values = []
        for kind, key, lo, hi in self.variables():
            values.append(min(max(getattr(op, kind)[key], lo), hi))
        return np.array(values, dtype=float)

    def point(self, x):
        parts = {'q_S': {}, 'pi_T': {}, 'compression': {}}
        for value, (kind, key, _, _) in zip(x, self.variables()):
            parts[kind][key] = float(value)
        return OperatingPoint(**parts)


@dataclass(frozen=True)
class SearchConfig:
    """
    Attributes:
        space (SearchSpace): Boxes of the variables.
        start (OperatingPoint | None): Starting point; the box midpoint when omitted.
        sweeps (int): Number of sweeps over all variables.
        shrink (float): Step factor applied after a sweep without improvement.
        initial_step (float): First step as a fraction of each box width.
        budget (int): Maximum robust evaluations.
        seed (int): Seed of the per-sweep variable order.
        workers (int | None): Threads evaluating the candidates of one poll.
        tol (float | None): Steady-state solver tolerance.
        solver_options (dict): Further keyword options of ``solve_steady_state``,
            such as ``max_iterations`` or ``derivative_cap``.
    """
    space: SearchSpace
    start: OperatingPoint | None = None
    sweeps: int = Config.SEARCH_SWEEPS
    shrink: float = Config.SEARCH_SHRINK
    initial_step: float = Config.SEARCH_INITIAL_STEP
    budget: int = Config.SEARCH_BUDGET
    seed: int = 0
    workers: int | None = None
    tol: float | None = None
    solver_options: dict = field(default_factory=dict)


@dataclass(frozen=True)
class TraceEntry:
    index: int
    point: OperatingPoint
    status: VerdictStatus
    worst_cost: float
    violation_total: float
    accepted: bool


class SearchResult(NamedTuple):
    point: OperatingPoint
    verdict: object
    trace: list


def _rank(verdict):
    if verdict.status is VerdictStatus.FEASIBLE:
        return (0, verdict.worst_cost)
    if verdict.status is VerdictStatus.INFEASIBLE:
        return (1, verdict.violation_total)
    return (2, math.inf)


def _improves(candidate, current):
    if candidate[0] != current[0]:
        return candidate[0] < current[0]
    return candidate[1] < current[1] - 1e-12 * max(1.0, abs(current[1]))


def optimize_operating_point(network, box, cost, search_config):
    """
    Minimize the worst-case cost over robust-feasible operating points.

    Feasible candidates are ranked by worst-case cost, infeasible ones by
    their total bound violation, indeterminate ones last. Candidates of one
    poll are evaluated concurrently and accepted in a fixed order, so a run
    is reproducible for a given configuration.

    Args:
        network (Network): The network.
        box (ScenarioBox): Internal production box.
        cost (CostModel): Costs and payments.
        search_config (SearchConfig): Boxes, start and search parameters.

    Returns:
        SearchResult: ``(point, verdict, trace)`` with a robust-feasible point.

    Raises:
        NoFeasiblePointError: If no robust-feasible point was met; the error
            carries the best infeasible result.
    """
    ensure_valid(network)
    config = search_config
    space = config.space
    variables = space.variables()
    lows = np.array([lo for _, _, lo, _ in variables], dtype=float)
    highs = np.array([hi for _, _, _, hi in variables], dtype=float)
    steps = config.initial_step * (highs - lows)
    rng = np.random.default_rng(config.seed)
    trace = []

    def evaluate(x):
        return robust_feasibility(network, box, space.point(x), cost, tol=config.tol, workers=1,
                                  **config.solver_options)

    def record(x, verdict, accepted):
        trace.append(TraceEntry(len(trace), space.point(x), verdict.status, verdict.worst_cost,
                                verdict.violation_total, accepted))

    x = space.vector(config.start) if config.start is not None else space.vector(space.midpoint())
    verdict = evaluate(x)
    record(x, verdict, True)
    rank = _rank(verdict)

    for sweep in range(config.sweeps):
        if len(trace) >= config.budget or not np.any(steps > 0):
            break
        improved = False
        for k in rng.permutation(len(variables)):
            while steps[k] > 0 and len(trace) < config.budget:
                candidates = []
                for sign in (1.0, -1.0):
                    y = x.copy()
                    y[k] = min(max(x[k] + sign * steps[k], lows[k]), highs[k])
                    if y[k] != x[k]:
                        candidates.append(y)
                candidates = candidates[:config.budget - len(trace)]
                if not candidates:
                    break
                verdicts = parallel_map(evaluate, candidates, config.workers)
                best = None
                for y, candidate in zip(candidates, verdicts):
                    if _improves(_rank(candidate), rank if best is None else _rank(best[1])):
                        best = (y, candidate)
                for y, candidate in zip(candidates, verdicts):
                    record(y, candidate, best is not None and y is best[0])
                if best is None:
                    break
                x, verdict = best
                rank = _rank(verdict)
                improved = True
        logger.debug('sweep %d: rank %s, %d evaluations', sweep, rank, len(trace))
        if not improved:
            steps = steps * config.shrink

    result = SearchResult(space.point(x), verdict, trace)
    if not verdict.feasible:
        raise NoFeasiblePointError(result)
    return result
