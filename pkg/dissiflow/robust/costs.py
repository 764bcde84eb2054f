#!/usr/bin/python
"""
This module defines the operating cost of a network.

The cost of an operating point is the injection cost at the sources minus
the payment collected at the terminals,
``c(q_S, q_T) = sum_S g_i(q_i) - sum_T h_i(q_i)``, evaluated on signed
productions. Terminal payments must be non-decreasing, which is what places
the worst case of the robust problem at the largest internal productions.

Classes:
    - AffineCost: ``slope * q + offset``.
    - TabulatedCost: Piecewise-linear interpolation of a table.
    - CostModel: Per-source costs and per-terminal payments.

Functions:
    - is_non_decreasing: Sampled monotonicity check of a scalar function.
"""

import math
from dataclasses import dataclass, field

import numpy as np

SAMPLE_GRID = np.linspace(-1e3, 1e3, 2001)


@dataclass(frozen=True)
class AffineCost:
    slope: float
    offset: float = 0.0

    def __call__(self, q):
        return self.slope * q + self.offset


@dataclass(frozen=True)
class TabulatedCost:
    """
    Piecewise-linear function through ``points``, constant beyond the ends.

    Attributes:
        points (tuple): ``(q, value)`` pairs with strictly increasing ``q``.
    """
    points: tuple

    def __post_init__(self):
        points = tuple((float(q), float(value)) for q, value in self.points)
        if len(points) < 2:
            raise ValueError('a cost table needs at least two points')
        if any(b[0] <= a[0] for a, b in zip(points, points[1:])):
            raise ValueError('cost table abscissae must be strictly increasing')
        object.__setattr__(self, 'points', points)

    def __call__(self, q):
        xs, ys = zip(*self.points)
        return float(np.interp(q, xs, ys))

    def is_non_decreasing(self):
        return all(b[1] >= a[1] for a, b in zip(self.points, self.points[1:]))


def is_non_decreasing(function, grid=SAMPLE_GRID):
    """
    Check a scalar function for monotonicity on a sample grid.

    Affine and tabulated functions are checked exactly; other callables are
    sampled on ``grid``.
    """
    if isinstance(function, AffineCost):
        return function.slope >= 0
    if isinstance(function, TabulatedCost):
        return function.is_non_decreasing()
    values = [function(float(q)) for q in grid]
    return all(b >= a for a, b in zip(values, values[1:]))


@dataclass(frozen=True)
class CostModel:
    """
    Costs of an operating point.

    Attributes:
        source_costs (dict): Source id mapped to its cost ``g_i``; missing sources cost nothing.
        terminal_revenues (dict): Terminal id mapped to its payment ``h_i``; missing
            terminals pay nothing.
    """
    source_costs: dict = field(default_factory=dict)
    terminal_revenues: dict = field(default_factory=dict)

    def __post_init__(self):
        for node, function in self.terminal_revenues.items():
            if not is_non_decreasing(function):
                raise ValueError(f'payment function of terminal {node} is not non-decreasing')

    def injection_cost(self, q_S):
        return math.fsum(self.source_costs[node](q) for node, q in q_S.items()
                         if node in self.source_costs)

    def revenue(self, q_T):
        return math.fsum(self.terminal_revenues[node](q) for node, q in q_T.items()
                         if node in self.terminal_revenues)

    def cost(self, q_S, q_T):
        """Return ``sum_S g_i(q_i) - sum_T h_i(q_i)``."""
        return self.injection_cost(q_S) - self.revenue(q_T)
