#!/usr/bin/python
"""
This module provides the steady-state gas pipe law with compression.

Integrating the isothermal momentum balance of a pipe of length L with
friction factor alpha and a compressor adding ``b`` to the squared pressure
gives ``p_j**2 - p_i**2 = -(L*alpha/2) * phi*|phi| + b``. With the potential
``pi = p**2`` and the drop convention ``pi_j - pi_i = -f(phi)`` the edge law
is ``f(phi) = c*phi*|phi| - b`` with ``c = L*alpha/2``.

Classes:
    - GasPipe: The gas pipe law, optionally hosting a compressor.

Functions:
    - gas_f: Potential drop of a pipe for a flow.
    - gas_f_inverse: Flow of a pipe for a potential drop.
    - gas_psi: Primitive of the inverse law.
    - pressure: Pressure corresponding to a gas potential.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from dissiflow.config import Config
from dissiflow.dissipation.laws import DissipationFunction


@dataclass(frozen=True)
class GasPipe(DissipationFunction):
    """
    Gas pipe law ``f(phi) = c*phi*|phi| - b``.

    Attributes:
        resistance (float): The coefficient ``c = L*alpha/2``.
        b (float): Additive compression offset (potential units).
        b_min (float | None): Lower compression bound when a compressor is present.
        b_max (float | None): Upper compression bound when a compressor is present.
        length (float | None): Pipe length, kept when built from geometry.
        alpha (float | None): Friction factor, kept when built from geometry.
        x_c (float | None): Compressor position along the pipe (provenance only).
    """
    resistance: float
    b: float = 0.0
    b_min: float | None = None
    b_max: float | None = None
    length: float | None = None
    alpha: float | None = None
    x_c: float | None = None

    def __post_init__(self):
        if not self.resistance > 0:
            raise ValueError(f'pipe resistance must be positive, got {self.resistance}')
        if (self.b_min is None) != (self.b_max is None):
            raise ValueError('compressor needs both b_min and b_max')
        if self.has_compressor:
            if self.b_min > self.b_max:
                raise ValueError(f'compression bounds reversed: [{self.b_min}, {self.b_max}]')
            if not self.b_min <= self.b <= self.b_max:
                raise ValueError(f'compression {self.b} outside [{self.b_min}, {self.b_max}]')
        elif self.b != 0.0:
            raise ValueError('a pipe without compressor must have b = 0')

    @classmethod
    def from_geometry(cls, length, alpha, **kwargs):
        """
        Build a pipe from its length and friction factor.

        Args:
            length (float): Positive pipe length.
            alpha (float): Positive friction factor.
            **kwargs: Compression fields (``b``, ``b_min``, ``b_max``, ``x_c``).

        Returns:
            GasPipe: Pipe with ``resistance = length*alpha/2``.
        """
        if not (length > 0 and alpha > 0):
            raise ValueError(f'length and alpha must be positive, got {length}, {alpha}')
        return cls(resistance=length * alpha / 2.0, length=length, alpha=alpha, **kwargs)

    @property
    def has_compressor(self):
        return self.b_min is not None

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        return self.resistance * phi * np.abs(phi) - self.b

    def inverse(self, y):
        u = np.asarray(y, dtype=float) + self.b
        return np.sign(u) * np.sqrt(np.abs(u) / self.resistance)

    def psi(self, delta):
        u = np.abs(np.asarray(delta, dtype=float) + self.b)
        return (2.0 / 3.0) * u * np.sqrt(u) / math.sqrt(self.resistance)

    def inverse_derivative(self, y, cap=Config.DERIVATIVE_CAP):
        u = np.abs(np.asarray(y, dtype=float) + self.b)
        with np.errstate(divide='ignore'):
            slope = 0.5 / np.sqrt(self.resistance * u)
        return np.minimum(slope, cap)

    @property
    def adjustable(self):
        if not self.has_compressor:
            return {}
        return {'b': (self.b_min, self.b_max)}

    def with_parameters(self, **params):
        unknown = set(params) - set(self.adjustable)
        if unknown:
            raise ValueError(f'pipe has no adjustable parameters {sorted(unknown)}')
        if 'b' not in params:
            return self
        return replace(self, b=float(params['b']))


def gas_f(pipe, phi):
    """Return ``c*phi*|phi| - b`` for ``pipe``."""
    return float(pipe(phi))


def gas_f_inverse(pipe, y):
    """Return ``sign(u)*sqrt(|u|/c)`` with ``u = y + b``."""
    return float(pipe.inverse(y))


def gas_psi(pipe, delta):
    """Return the primitive of the inverse law, normalized to vanish at ``delta = -b``."""
    return float(pipe.psi(delta))


def pressure(pi):
    """
    Convert a gas potential (squared pressure) to pressure.

    Raises:
        ValueError: If the potential is negative.
    """
    if pi < 0:
        raise ValueError(f'negative potential {pi} has no pressure')
    return math.sqrt(pi)
