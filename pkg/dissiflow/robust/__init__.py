from dissiflow.robust.costs import AffineCost, TabulatedCost, CostModel, is_non_decreasing
from dissiflow.robust.feasibility import (ScenarioBox, OperatingPoint, VerdictStatus, Violation,
                                          RobustVerdict, DeterministicResult, robust_feasibility,
                                          deterministic_solve)
from dissiflow.robust.search import (SearchSpace, SearchConfig, TraceEntry, SearchResult,
                                     optimize_operating_point)

__all__ = [
    'AffineCost', 'TabulatedCost', 'CostModel', 'is_non_decreasing',
    'ScenarioBox', 'OperatingPoint', 'VerdictStatus', 'Violation', 'RobustVerdict',
    'DeterministicResult', 'robust_feasibility', 'deterministic_solve',
    'SearchSpace', 'SearchConfig', 'TraceEntry', 'SearchResult', 'optimize_operating_point',
]
