#!/usr/bin/python
"""
 Module for Configuration of the dissiflow tools.
"""

import os


class Config:
    """
    Configuration class for the dissiflow solvers and command line.

    This class holds the numerical defaults used by the steady-state solver,
    the robust search, the scenario sweeps and the report writers. Only the
    worker count is read from the environment; every other value can be
    overridden per network file (``solver``, ``search`` and ``sweep``
    sections) or per command-line flag.

    Attributes:
        - WORKERS: Worker threads for sweeps, corner solves and searches.
        - SOLVER_RELATIVE_TOL: Gradient tolerance, scaled by max(1, max|q|).
        - SOLVER_MAX_ITERATIONS: Newton iteration limit.
        - ARMIJO: Sufficient-decrease constant of the full Newton step.
        - CURVATURE: Slope ratio above which a step is replaced by the line minimizer.
        - MIN_STEP: Relative resolution of the line minimization.
        - DERIVATIVE_CAP: Clamp on the derivative of inverse edge laws.
        - BOUND_SLACK: Absolute slack when comparing potentials to bounds.
        - SEARCH_SWEEPS: Pattern-search sweeps.
        - SEARCH_SHRINK: Step shrink factor after an unproductive sweep.
        - SEARCH_INITIAL_STEP: Initial step as a fraction of each box width.
        - SEARCH_BUDGET: Maximum robust evaluations of one search.
        - SWEEP_RESOLUTION: Default grid points per uncertain node.
        - SWEEP_BUDGET: Maximum steady-state solves of one sweep.
        - STRICT_TOL: Relative tolerance separating strict from equal flows.
        - REPORT_SCHEMA: Name of the machine-readable report schema.
        - REPORT_SCHEMA_VERSION: Version of the machine-readable report schema.
    """
    WORKERS = int(os.environ.get('DISSIFLOW_WORKERS', os.cpu_count() or 1))
    SOLVER_RELATIVE_TOL = 1e-9
    SOLVER_MAX_ITERATIONS = 500
    ARMIJO = 1e-4
    CURVATURE = 0.5
    MIN_STEP = 1e-12
    DERIVATIVE_CAP = 1e8
    BOUND_SLACK = 1e-9
    SEARCH_SWEEPS = 30
    SEARCH_SHRINK = 0.5
    SEARCH_INITIAL_STEP = 0.1
    SEARCH_BUDGET = 2000
    SWEEP_RESOLUTION = 11
    SWEEP_BUDGET = 100_000
    STRICT_TOL = 1e-10
    REPORT_SCHEMA = 'dissiflow.report'
    REPORT_SCHEMA_VERSION = 1
