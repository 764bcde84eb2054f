#!/usr/bin/python
"""
This module solves the steady state of a dissipative network.

Given internal productions, source injections, terminal potentials and the
compression settings, the potentials of sources and internal nodes are the
unique minimizer of a strictly convex energy. The minimizer is found with a
damped Newton method on the reduced weighted Laplacian; terminal productions
and edge flows are reconstructed afterwards.

Functions:
    - default_tol: Tolerance scaled to the size of the productions.
    - solve_steady_state: Unique FlowState of one instance.
    - potentials_map: Potentials of sources and internal nodes.
    - productions_map: Productions of terminals.
"""

import logging

import numpy as np
import scipy.linalg
import scipy.optimize

from dissiflow.config import Config
from dissiflow.errors.exceptions import DimensionError, NonConvergenceError
from dissiflow.models import FlowState
from dissiflow.solver.energy import EnergyModel

logger = logging.getLogger(__name__)

_MAX_EXPANSION = 2.0 ** 40


def default_tol(boundary, relative=Config.SOLVER_RELATIVE_TOL):
    """Return ``relative * max(1, max|q|)`` over the given productions."""
    magnitudes = [abs(value) for value in boundary.q_free.values()]
    return relative * max([1.0] + magnitudes)


def _newton_direction(model, x, gradient, cap):
    try:
        factor = scipy.linalg.cho_factor(model.hessian(x, cap), check_finite=True)
        direction = -scipy.linalg.cho_solve(factor, gradient)
    except (np.linalg.LinAlgError, ValueError):
        return None
    if not np.all(np.isfinite(direction)) or direction @ gradient >= 0:
        return None
    return direction


def _slope_at(model, x, direction, step):
    value, gradient, _ = model.evaluate(x + step * direction)
    return value, gradient, float(gradient @ direction)


def _line_search(model, x, value, gradient, direction, armijo, curvature, min_step):
    """
    Step along a descent direction.

    The full step is kept when it satisfies the strong curvature condition
    together with sufficient decrease (or a halved gradient). Otherwise the
    step is expanded until the directional derivative changes sign and the
    exact line minimizer is located with Brent's method. The energy is
    convex along every line, so the root of the directional derivative is
    that minimizer.
    """
    slope = float(gradient @ direction)
    norm = float(np.max(np.abs(gradient)))
    trial_value, trial_gradient, trial_slope = _slope_at(model, x, direction, 1.0)
    if abs(trial_slope) <= curvature * abs(slope) and \
            (trial_slope <= 0 or trial_value <= value + armijo * slope
             or float(np.max(np.abs(trial_gradient))) <= 0.5 * norm):
        return x + direction, trial_value, trial_gradient

    low, high = 0.0, 1.0
    while trial_slope < 0:
        if high >= _MAX_EXPANSION:
            if trial_value < value:
                return x + high * direction, trial_value, trial_gradient
            return None
        low, high = high, 2.0 * high
        trial_value, trial_gradient, trial_slope = _slope_at(model, x, direction, high)
        if abs(trial_slope) <= curvature * abs(slope):
            return x + high * direction, trial_value, trial_gradient

    try:
        step = scipy.optimize.brentq(lambda t: _slope_at(model, x, direction, t)[2],
                                     low, high, xtol=min_step * high)
    except (ValueError, RuntimeError):
        return None
    trial_value, trial_gradient, _ = model.evaluate(x + step * direction)
    if not np.isfinite(trial_value):
        return None
    return x + step * direction, trial_value, trial_gradient


def solve_steady_state(network, boundary, tol=None, *, initial=None,
                       max_iterations=Config.SOLVER_MAX_ITERATIONS,
                       derivative_cap=Config.DERIVATIVE_CAP,
                       armijo=Config.ARMIJO, curvature=Config.CURVATURE,
                       min_step=Config.MIN_STEP):
    """
    Solve the steady state of one instance.

    Args:
        network (Network): A validated network.
        boundary (BoundaryData): q_R, q_S, pi_T and compression settings.
        tol (float, optional): Max-norm tolerance on the gradient (worst nodal
            imbalance). Defaults to ``default_tol(boundary)``.
        initial (dict, optional): Starting potentials of the free nodes.
            Defaults to the mean of the terminal potentials.
        max_iterations (int): Newton iteration limit.
        derivative_cap (float): Clamp on inverse-law derivatives in the Hessian.
        armijo (float): Sufficient-decrease constant of the full Newton step.
        curvature (float): Largest accepted ratio of final to initial slope
            along a step; larger ratios trigger an exact line minimization.
        min_step (float): Relative resolution of the line minimization.

    Returns:
        FlowState: Flows, potentials and the full balanced production vector.

    Raises:
        NonConvergenceError: If the gradient does not reach ``tol``.
        DimensionError: If the boundary or the start do not match the network.
    """
    if tol is None:
        tol = default_tol(boundary)
    if not tol > 0:
        raise ValueError(f'tolerance must be positive, got {tol}')
    model = EnergyModel(network, boundary)
    if initial is None:
        x = np.full(len(model.free), model.terminal_mean)
    else:
        if set(initial) != set(model.free):
            raise DimensionError('initial potentials must cover exactly the free nodes')
        x = np.array([initial[node] for node in model.free], dtype=float)

    value, gradient, _ = model.evaluate(x)
    norm = float(np.max(np.abs(gradient), initial=0.0))
    iteration = 0
    while norm > tol:
        if iteration >= max_iterations:
            logger.warning('Newton stopped after %d iterations with |grad| = %.3e', iteration, norm)
            raise NonConvergenceError(iteration, norm, tol)
        iteration += 1
        accepted = None
        direction = _newton_direction(model, x, gradient, derivative_cap)
        if direction is not None:
            accepted = _line_search(model, x, value, gradient, direction, armijo, curvature,
                                    min_step)
        if accepted is None:
            logger.debug('falling back to a gradient step at iteration %d', iteration)
            accepted = _line_search(model, x, value, gradient, -gradient, armijo, curvature,
                                    min_step)
        if accepted is None:
            logger.warning('line search failed at iteration %d with |grad| = %.3e', iteration, norm)
            raise NonConvergenceError(iteration, norm, tol, reason='line search failed')
        x, value, gradient = accepted
        norm = float(np.max(np.abs(gradient), initial=0.0))
        logger.debug('iteration %d: energy %.12g, |grad| %.3e', iteration, value, norm)

    return _reconstruct(network, boundary, model, x, iteration, norm)


def _reconstruct(network, boundary, model, x, iterations, norm):
    full = model.potentials(x)
    phi = model.flows(model.drops(x))
    inflow = model.incidence @ phi
    q = {**boundary.q_S, **boundary.q_R}
    for node in network.terminals:
        q[node] = -float(inflow[network.index[node]])
    return FlowState(
        phi=dict(zip(network.edges, phi.tolist())),
        pi=dict(zip(network.nodes, full.tolist())),
        q={node: float(q[node]) for node in network.nodes},
        iterations=iterations,
        gradient_norm=norm,
    )


def potentials_map(network, boundary, tol=None, **options):
    """Return the potential of every source and internal node at the steady state."""
    state = solve_steady_state(network, boundary, tol, **options)
    return state.potentials(network.free_nodes)


def productions_map(network, boundary, tol=None, **options):
    """Return the production of every terminal at the steady state."""
    state = solve_steady_state(network, boundary, tol, **options)
    return state.productions(network.terminals)
