from dissiflow.solver.energy import EnergyModel, EnergyValue, energy
from dissiflow.solver.newton import (default_tol, solve_steady_state, potentials_map,
                                     productions_map)

__all__ = ['EnergyModel', 'EnergyValue', 'energy', 'default_tol', 'solve_steady_state',
           'potentials_map', 'productions_map']
