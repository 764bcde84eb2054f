#!/usr/bin/python
"""
This module solves every scenario of a grid over the production box.

The sweep is the brute-force counterpart of the two-corner robust test: it
locates, per node, where the potentials peak and bottom out over the grid,
where the terminal payments are smallest, and whether every scenario is
feasible.

Classes:
    - ScenarioRecord: Summary of one solved scenario.
    - SweepResult: Grid, per-scenario records and extrema.

Functions:
    - scenario_grid: Per-node grid values including both corners.
    - scenario_sweep: Solve all scenarios of a grid.
"""

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from dissiflow.config import Config
from dissiflow.errors.exceptions import BudgetExceededError, NonConvergenceError
from dissiflow.network.utils import ensure_valid
from dissiflow.robust.feasibility import deterministic_solve
from dissiflow.utils import parallel_map

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScenarioRecord:
    """
    Attributes:
        index (int): Position in the grid enumeration.
        q_R (dict): Internal productions of the scenario.
        converged (bool): Whether the steady state was solved.
        pi (dict | None): Potentials of all nodes.
        q_T (dict | None): Terminal productions.
        feasible (bool | None): Whether every potential bound holds.
        cost (float): Operating cost of the scenario.
        revenue (float): Sum of terminal payments.
        is_lower_corner (bool): The scenario is the lower corner of the box.
        is_upper_corner (bool): The scenario is the upper corner of the box.
    """
    index: int
    q_R: dict
    converged: bool
    pi: dict | None
    q_T: dict | None
    feasible: bool | None
    cost: float
    revenue: float
    is_lower_corner: bool
    is_upper_corner: bool


@dataclass(frozen=True)
class SweepResult:
    """
    Attributes:
        grid (dict): Internal node mapped to its tuple of grid values.
        records (tuple): One ScenarioRecord per scenario, in grid order.
        potential_argmax (dict): Node mapped to the record index of its largest potential.
        potential_argmin (dict): Node mapped to the record index of its smallest potential.
        revenue_argmin (int | None): Record index of the smallest terminal payment.
    """
    grid: dict
    records: tuple
    potential_argmax: dict
    potential_argmin: dict
    revenue_argmin: int | None

    @property
    def converged(self):
        return [record for record in self.records if record.converged]

    @property
    def lower(self):
        return next(record for record in self.records if record.is_lower_corner)

    @property
    def upper(self):
        return next(record for record in self.records if record.is_upper_corner)

    @property
    def feasibility_conjunction(self):
        """True when every scenario is feasible; None if any scenario failed to solve."""
        if len(self.converged) != len(self.records):
            return None
        return all(record.feasible for record in self.records)

    def corner_extrema_hold(self, nodes, tol):
        """
        Check that potentials peak at the upper corner, bottom out at the lower
        corner, and that payments are smallest at the upper corner.
        """
        lower, upper = self.lower, self.upper
        if not (lower.converged and upper.converged):
            return False
        for node in nodes:
            values = [record.pi[node] for record in self.converged]
            if max(values) > upper.pi[node] + tol or min(values) < lower.pi[node] - tol:
                return False
        return min(record.revenue for record in self.converged) >= upper.revenue - tol

    def to_frame(self):
        """One row per scenario with productions, potentials, feasibility and cost."""
        rows = []
        for record in self.records:
            row = {'index': record.index}
            row.update({f'q_{node}': value for node, value in sorted(record.q_R.items())})
            if record.converged:
                row.update({f'pi_{node}': value for node, value in sorted(record.pi.items())})
                row.update({f'qT_{node}': value for node, value in sorted(record.q_T.items())})
            row.update(converged=record.converged, feasible=record.feasible,
                       cost=record.cost, revenue=record.revenue,
                       corner='lower' if record.is_lower_corner else
                       'upper' if record.is_upper_corner else '')
            rows.append(row)
        return pd.DataFrame(rows)


def scenario_grid(box, resolution):
    """
    Grid values per internal node, both interval ends included exactly.

    Args:
        box (ScenarioBox): The production box.
        resolution (int | dict): Points per node, at least 2.
    """
    grid = {}
    for node in box.nodes:
        count = resolution[node] if isinstance(resolution, dict) else resolution
        if count < 2:
            raise ValueError(f'resolution must be at least 2, got {count} for node {node}')
        grid[node] = tuple(np.linspace(box.lower[node], box.upper[node], count).tolist())
    return grid


def scenario_sweep(network, box, op, cost, resolution, *, tol=None, budget=Config.SWEEP_BUDGET,
                   workers=None, slack=Config.BOUND_SLACK, **solver_options):
    """
    Solve every scenario of a grid over the box.

    Args:
        network (Network): The network.
        box (ScenarioBox): Internal production box.
        op (OperatingPoint): The operating point.
        cost (CostModel): Costs and payments.
        resolution (int | dict): Grid points per internal node.
        tol (float, optional): Solver tolerance.
        budget (int): Largest number of scenarios allowed.
        workers (int, optional): Solver threads.
        **solver_options: Passed to ``solve_steady_state``.

    Returns:
        SweepResult: Records in grid order and their extrema. Scenarios that
        fail to converge are recorded and left out of the extrema.

    Raises:
        BudgetExceededError: If the grid holds more scenarios than ``budget``.
    """
    ensure_valid(network)
    grid = scenario_grid(box, resolution)
    nodes = list(grid)
    size = math.prod(len(values) for values in grid.values())
    if size > budget:
        raise BudgetExceededError(f'grid of {size} scenarios exceeds the budget of {budget} solves')
    scenarios = [dict(zip(nodes, values)) for values in itertools.product(*grid.values())]

    def solve(q_R):
        try:
            return deterministic_solve(network, q_R, op, cost, tol=tol, slack=slack,
                                       **solver_options)
        except NonConvergenceError as error:
            return error

    outcomes = parallel_map(solve, scenarios, workers)
    records = []
    for index, (q_R, outcome) in enumerate(zip(scenarios, outcomes)):
        corners = dict(is_lower_corner=index == 0, is_upper_corner=index == size - 1)
        if isinstance(outcome, NonConvergenceError):
            logger.warning('scenario %d %s skipped: %s', index, q_R, outcome)
            records.append(ScenarioRecord(index, q_R, False, None, None, None,
                                          math.nan, math.nan, **corners))
            continue
        q_T = outcome.state.productions(network.terminals)
        records.append(ScenarioRecord(index, q_R, True, dict(outcome.state.pi), q_T,
                                      outcome.feasible, outcome.cost, cost.revenue(q_T), **corners))

    solved = [record for record in records if record.converged]
    argmax, argmin = {}, {}
    for node in network.nodes:
        if solved:
            argmax[node] = max(solved, key=lambda record: record.pi[node]).index
            argmin[node] = min(solved, key=lambda record: record.pi[node]).index
    revenue_argmin = min(solved, key=lambda record: record.revenue).index if solved else None
    return SweepResult(grid, tuple(records), argmax, argmin, revenue_argmin)
