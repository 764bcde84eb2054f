#!/usr/bin/python
"""
This module defines the admissible edge laws of a dissipative network.

An edge law ``f`` maps the flow on an edge to the potential drop along it,
``pi_j - pi_i = -f(phi_ij)``. Every law is continuous and strictly
increasing, so it has an inverse ``f^-1`` (flow from a potential
difference) and a convex primitive ``psi`` of that inverse, which is the
edge term of the energy function minimized by the steady-state solver.

Classes:
    - DissipationFunction: Abstract strictly increasing edge law.
    - ReversedLaw: The same physical edge seen against its orientation.
    - LinearResistor: Linear law f(phi) = r * phi (resistive circuits).
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from dissiflow.config import Config


class DissipationFunction(ABC):
    """
    Strictly increasing edge law with inverse and primitive.

    Subclasses evaluate on floats and on numpy arrays alike. Laws are
    immutable; operational parameters (such as a compression offset) are
    changed through ``with_parameters``, which returns a new law.
    """

    @abstractmethod
    def __call__(self, phi):
        """Potential drop caused by flow ``phi``."""

    @abstractmethod
    def inverse(self, y):
        """Flow causing the potential drop ``y``."""

    @abstractmethod
    def psi(self, delta):
        """Primitive of ``inverse`` evaluated at the potential difference ``delta``."""

    @abstractmethod
    def inverse_derivative(self, y, cap=Config.DERIVATIVE_CAP):
        """Derivative of ``inverse`` at ``y``, clamped to ``cap``."""

    @property
    def adjustable(self):
        """
        Operational parameters of the law and their admissible boxes.

        Returns:
            dict: Parameter name mapped to a ``(low, high)`` tuple. Empty when
            the law has no decision variables.
        """
        return {}

    def with_parameters(self, **params):
        """
        Return a copy of the law with operational parameters replaced.

        Raises:
            ValueError: If the law has no parameter of that name or the value
                lies outside its admissible box.
        """
        if params:
            raise ValueError(f'{type(self).__name__} has no adjustable parameters {sorted(params)}')
        return self

    def reversed(self):
        """The law of the same edge traversed against its orientation."""
        return ReversedLaw(self)


@dataclass(frozen=True)
class ReversedLaw(DissipationFunction):
    """
    Edge-inversion view of a law: ``reversed(f)(x) = -f(-x)``.

    Attributes:
        base (DissipationFunction): The law registered on the opposite orientation.
    """
    base: DissipationFunction

    def __call__(self, phi):
        return -self.base(-np.asarray(phi, dtype=float))

    def inverse(self, y):
        return -self.base.inverse(-np.asarray(y, dtype=float))

    def psi(self, delta):
        return self.base.psi(-np.asarray(delta, dtype=float))

    def inverse_derivative(self, y, cap=Config.DERIVATIVE_CAP):
        return self.base.inverse_derivative(-np.asarray(y, dtype=float), cap)

    @property
    def adjustable(self):
        return self.base.adjustable

    def with_parameters(self, **params):
        return ReversedLaw(self.base.with_parameters(**params))

    def reversed(self):
        return self.base


@dataclass(frozen=True)
class LinearResistor(DissipationFunction):
    """
    Ohmic edge law ``f(phi) = r * phi``.

    Attributes:
        resistance (float): Positive resistance ``r``.
    """
    resistance: float

    def __post_init__(self):
        if not self.resistance > 0:
            raise ValueError(f'resistance must be positive, got {self.resistance}')

    def __call__(self, phi):
        return self.resistance * np.asarray(phi, dtype=float)

    def inverse(self, y):
        return np.asarray(y, dtype=float) / self.resistance

    def psi(self, delta):
        delta = np.asarray(delta, dtype=float)
        return delta * delta / (2.0 * self.resistance)

    def inverse_derivative(self, y, cap=Config.DERIVATIVE_CAP):
        return np.minimum(np.full_like(np.asarray(y, dtype=float), 1.0 / self.resistance), cap)
