#!/usr/bin/python
"""
This module defines the energy function whose minimizer is the steady state.

For free potentials ``x`` on S and R the energy is
``E(x) = sum_(i,j) psi_ij(pi_i - pi_j) - sum_(i in S, R) pi_i q_i``, summed over
canonical edges. Its gradient is ``sum_j phi_ij - q_i`` at every free node,
the negated flow-conservation residual, and its Hessian is the weighted
Laplacian ``M W M.T`` restricted to the free nodes, with edge weights given
by the derivative of the inverse laws.

Classes:
    - EnergyValue: Energy value and gradient at a point.
    - EnergyModel: Precomputed arrays for repeated evaluations.

Functions:
    - energy: Evaluate the energy and its gradient for given free potentials.
"""

from dataclasses import dataclass

import numpy as np

from dissiflow.config import Config
from dissiflow.errors.exceptions import DimensionError


@dataclass(frozen=True)
class EnergyValue:
    """
    Attributes:
        value (float): Energy (shifted by a constant independent of ``x``).
        gradient (dict): Free node mapped to ``dE/dpi_i``.
    """
    value: float
    gradient: dict


class EnergyModel:
    """
    Energy of one steady-state instance over the free potentials.

    The placeholder productions of terminals never enter: the sum of
    ``pi_i q_i`` runs over sources and internal nodes only, which shifts the
    energy by a constant and leaves its minimizer unchanged.

    Args:
        network (Network): The network.
        boundary (BoundaryData): Productions, terminal potentials and compression.
    """

    def __init__(self, network, boundary):
        boundary.check(network)
        self.network = network.with_compression(boundary.compression)
        self.free = network.free_nodes
        self.free_idx = np.array([network.index[node] for node in self.free], dtype=int)
        self.laws = [self.network.laws[edge] for edge in network.edges]
        self.incidence = network.incidence
        self.free_incidence = self.incidence[self.free_idx, :]
        q_free = boundary.q_free
        self.q_free = np.array([q_free[node] for node in self.free], dtype=float)
        self.pi_fixed = np.zeros(len(network.nodes))
        for node, value in boundary.pi_T.items():
            self.pi_fixed[network.index[node]] = value
        self.terminal_mean = float(np.mean(list(boundary.pi_T.values())))

    def potentials(self, x):
        """Full potential vector with ``x`` placed on the free nodes."""
        full = self.pi_fixed.copy()
        full[self.free_idx] = x
        return full

    def drops(self, x):
        """Potential differences ``pi_i - pi_j`` on canonical edges."""
        return -(self.incidence.T @ self.potentials(x))

    def flows(self, delta):
        return np.array([float(law.inverse(d)) for law, d in zip(self.laws, delta)])

    def evaluate(self, x):
        """
        Returns:
            tuple: ``(value, gradient, flows)`` as numpy objects.
        """
        delta = self.drops(x)
        phi = self.flows(delta)
        psi = sum(float(law.psi(d)) for law, d in zip(self.laws, delta))
        value = psi - float(x @ self.q_free)
        gradient = -(self.free_incidence @ phi) - self.q_free
        return value, gradient, phi

    def hessian(self, x, cap=Config.DERIVATIVE_CAP):
        """Reduced weighted Laplacian ``M_free W M_free.T``."""
        delta = self.drops(x)
        weights = np.array([float(law.inverse_derivative(d, cap)) for law, d in zip(self.laws, delta)])
        return (self.free_incidence * weights) @ self.free_incidence.T


def energy(network, boundary, pi_free):
    """
    Evaluate the energy and its exact gradient.

    Args:
        network (Network): The network.
        boundary (BoundaryData): Productions, terminal potentials and compression.
        pi_free (dict): Potential of every source and internal node.

    Returns:
        EnergyValue: The value and the gradient keyed by free node.

    Raises:
        DimensionError: If ``pi_free`` is not indexed exactly by S and R.
    """
    model = EnergyModel(network, boundary)
    if set(pi_free) != set(model.free):
        raise DimensionError(
            f'free potentials given for {sorted(pi_free)}, expected {sorted(model.free)}')
    x = np.array([pi_free[node] for node in model.free], dtype=float)
    value, gradient, _ = model.evaluate(x)
    return EnergyValue(value=value, gradient=dict(zip(model.free, gradient.tolist())))
