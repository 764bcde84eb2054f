from dissiflow.oracle.sweep import ScenarioRecord, SweepResult, scenario_grid, scenario_sweep
from dissiflow.oracle.aquarius import AquariusCertificate, aquarius_path, dominates
from dissiflow.oracle.monotonicity import MonotonicityReport, monotonicity_check
from dissiflow.oracle.generator import (random_network, random_boundary, ordered_pair,
                                        random_robust_instance, seeded)

__all__ = [
    'ScenarioRecord', 'SweepResult', 'scenario_grid', 'scenario_sweep',
    'AquariusCertificate', 'aquarius_path', 'dominates',
    'MonotonicityReport', 'monotonicity_check',
    'random_network', 'random_boundary', 'ordered_pair', 'random_robust_instance', 'seeded',
]
