from dissiflow.dissipation.laws import DissipationFunction, LinearResistor, ReversedLaw
from dissiflow.dissipation.gas import GasPipe, gas_f, gas_f_inverse, gas_psi, pressure

__all__ = [
    'DissipationFunction', 'LinearResistor', 'ReversedLaw',
    'GasPipe', 'gas_f', 'gas_f_inverse', 'gas_psi', 'pressure',
]
