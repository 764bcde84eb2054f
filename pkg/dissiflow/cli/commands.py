#!/usr/bin/python
"""
This module defines the commands of the dissiflow command line.

Every command reads a network file, runs one operation and prints a report
as aligned text or as a versioned JSON document (``--format records``).
Commands return their exit code; errors propagate to the handlers of
``dissiflow.errors.handlers``.

Commands:
    - validate: Structural report of a network file.
    - solve: Steady state of one scenario.
    - check: Two-corner robust feasibility of the file's operating point.
    - optimize: Robust-feasible operating point of least worst-case cost.
    - sweep: Grid sweep over the production box.
    - certify: Dominating path between two corner solutions.
    - generate: Write a random network file.
"""

import math

import click
import numpy as np
import pandas as pd

from dissiflow.cli.utils import NetworkFile, dump_network_file, load_network_file, render_report
from dissiflow.dissipation.gas import pressure
from dissiflow.errors.exceptions import NoFeasiblePointError
from dissiflow.errors.handlers import EXIT_INFEASIBLE, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE
from dissiflow.network.utils import cycle_basis_residuals, residuals, validate as validate_network
from dissiflow.oracle.aquarius import aquarius_path
from dissiflow.oracle.generator import random_robust_instance
from dissiflow.oracle.sweep import scenario_sweep
from dissiflow.robust.feasibility import LOWER, UPPER, VerdictStatus, deterministic_solve, \
    robust_feasibility
from dissiflow.robust.search import SearchConfig, SearchSpace, optimize_operating_point
from dissiflow.solver.newton import solve_steady_state

NETWORK_FILE = click.Path(exists=True, dir_okay=False)


def format_option(function):
    return click.option('--format', 'fmt', type=click.Choice(['text', 'records']), default='text',
                        show_default=True, help='Human text or JSON records.')(function)


def tol_option(function):
    return click.option('--tol', type=click.FloatRange(min=0.0, min_open=True),
                        help='Solver gradient tolerance (overrides the file).')(function)


def _emit(command, report, fmt):
    click.echo(render_report(command, report, fmt))


def _solver_options(network_file, tol):
    options = {}
    max_iterations = network_file.setting('solver', 'max_iterations')
    if max_iterations is not None:
        options['max_iterations'] = max_iterations
    return network_file.setting('solver', 'tol', tol), options


def _state_frame(network, state):
    rows = []
    for node in network.nodes:
        low, high = network.pi_bounds[node]
        rows.append({'node': node, 'role': network.roles[node].value, 'pi': state.pi[node],
                     'pressure': pressure(state.pi[node]) if state.pi[node] >= 0 else math.nan,
                     'q': state.q[node], 'pi_min': low, 'pi_max': high})
    return pd.DataFrame(rows)


def _flow_frame(state):
    return pd.DataFrame([{'from': i, 'to': j, 'phi': phi} for (i, j), phi in state.phi.items()],
                        columns=['from', 'to', 'phi'])


def _violation_frame(violations):
    return pd.DataFrame([vars(violation) for violation in violations],
                        columns=['node', 'bound', 'scenario', 'margin'])


def _scenario_values(box, scenario, values):
    if scenario != 'values':
        if values:
            raise click.UsageError('--q is only accepted with --scenario values')
        return box.corner(scenario)
    q_R = {}
    for item in values:
        node, sep, value = item.partition('=')
        try:
            if not sep:
                raise ValueError(item)
            q_R[int(node)] = float(value)
        except ValueError:
            raise click.BadParameter(f'expected NODE=VALUE, got {item!r}', param_hint='--q') from None
    if set(q_R) != set(box.nodes):
        raise click.BadParameter(f'give a value for every internal node {list(box.nodes)}',
                                 param_hint='--q')
    return q_R


@click.command()
@click.argument('path', type=NETWORK_FILE)
@format_option
def validate(path, fmt):
    """Report the structural problems of a network file."""
    network_file = load_network_file(path, check=False)
    network = network_file.network
    report = validate_network(network)
    _emit('validate', {
        'file': path, 'valid': report.ok,
        'sources': list(network.sources), 'terminals': list(network.terminals),
        'internals': list(network.internals), 'edges': len(network.edges),
        'compressors': [list(edge) for edge in network.compressors],
        'problems': report.problems,
    }, fmt)
    return EXIT_OK if report.ok else EXIT_USAGE


@click.command()
@click.argument('path', type=NETWORK_FILE)
@click.option('--scenario', type=click.Choice([LOWER, UPPER, 'values']), default=UPPER,
              show_default=True, help='Corner of the production box, or explicit values.')
@click.option('--q', 'values', multiple=True, metavar='NODE=VALUE',
              help='Internal production, repeated for every internal node.')
@tol_option
@format_option
def solve(path, scenario, values, tol, fmt):
    """Solve the steady state of one scenario at the file's operating point."""
    network_file = load_network_file(path)
    network = network_file.network
    q_R = _scenario_values(network_file.box, scenario, values)
    tol, options = _solver_options(network_file, tol)
    result = deterministic_solve(network, q_R, network_file.seed, network_file.cost,
                                 tol=tol, **options)
    state = result.state
    solved = network.with_compression(network_file.seed.compression)
    conservation, drop = residuals(solved, state)
    cycles = cycle_basis_residuals(solved, state)
    _emit('solve', {
        'scenario': q_R,
        'nodes': _state_frame(network, state),
        'flows': _flow_frame(state),
        'residuals': {
            'conservation': max(abs(value) for value in conservation.values()),
            'drop': max((abs(value) for value in drop.values()), default=0.0),
            'cycle': max((abs(value) for _, value in cycles), default=0.0),
        },
        'iterations': state.iterations,
        'cost': result.cost,
        'feasible': result.feasible,
        'violations': _violation_frame(result.violations),
    }, fmt)
    return EXIT_OK if result.feasible else EXIT_INFEASIBLE


@click.command()
@click.argument('path', type=NETWORK_FILE)
@tol_option
@format_option
@click.pass_obj
def check(config, path, tol, fmt):
    """Decide robust feasibility of the file's operating point over the whole box."""
    network_file = load_network_file(path)
    network = network_file.network
    tol, options = _solver_options(network_file, tol)
    verdict = robust_feasibility(network, network_file.box, network_file.seed, network_file.cost,
                                 tol=tol, workers=config.WORKERS, **options)
    corners = pd.DataFrame([
        {'node': node,
         'pi_lower': verdict.lower.pi[node] if verdict.lower else math.nan,
         'pi_upper': verdict.upper.pi[node] if verdict.upper else math.nan,
         'pi_min': network.pi_bounds[node][0], 'pi_max': network.pi_bounds[node][1]}
        for node in network.nodes])
    _emit('check', {
        'verdict': verdict.status.value,
        'worst_cost': verdict.worst_cost,
        'corners': corners,
        'violations': _violation_frame(verdict.violations),
    }, fmt)
    if verdict.status is VerdictStatus.INDETERMINATE:
        click.echo(f'numerical failure: {verdict.message}', err=True)
        return EXIT_NUMERICAL
    return EXIT_OK if verdict.feasible else EXIT_INFEASIBLE


def _point_report(point):
    return {
        'q_S': point.q_S,
        'pi_T': point.pi_T,
        'compression': point.compression,
    }


def _search_report(result):
    return {
        'point': _point_report(result.point),
        'verdict': result.verdict.status.value,
        'worst_cost': result.verdict.worst_cost,
        'violations': _violation_frame(result.verdict.violations),
        'evaluations': len(result.trace),
    }


@click.command()
@click.argument('path', type=NETWORK_FILE)
@click.option('--budget', type=click.IntRange(min=1), help='Maximum robust evaluations.')
@click.option('--seed', type=click.IntRange(min=0), help='Seed of the variable order.')
@tol_option
@format_option
@click.pass_obj
def optimize(config, path, budget, seed, tol, fmt):
    """Search the operating boxes for the robust-feasible point of least worst-case cost."""
    network_file = load_network_file(path)
    network = network_file.network
    tol, options = _solver_options(network_file, tol)
    space = SearchSpace.for_network(network, network_file.space.q_S, network_file.space.pi_T)
    search_config = SearchConfig(
        space=space,
        start=network_file.seed,
        sweeps=network_file.setting('search', 'sweeps', default=config.SEARCH_SWEEPS),
        shrink=network_file.setting('search', 'shrink', default=config.SEARCH_SHRINK),
        initial_step=network_file.setting('search', 'initial_step',
                                          default=config.SEARCH_INITIAL_STEP),
        budget=network_file.setting('search', 'budget', budget, config.SEARCH_BUDGET),
        seed=network_file.setting('search', 'seed', seed, 0),
        workers=config.WORKERS,
        tol=tol,
        solver_options=options,
    )
    try:
        result = optimize_operating_point(network, network_file.box, network_file.cost,
                                          search_config)
    except NoFeasiblePointError as error:
        _emit('optimize', _search_report(error.result), fmt)
        click.echo(f'infeasible: {error}', err=True)
        return EXIT_INFEASIBLE
    _emit('optimize', _search_report(result), fmt)
    return EXIT_OK


@click.command()
@click.argument('path', type=NETWORK_FILE)
@click.option('--resolution', type=click.IntRange(min=2), help='Grid points per internal node.')
@click.option('--budget', type=click.IntRange(min=1), help='Maximum steady-state solves.')
@click.option('--output', type=click.Path(dir_okay=False, writable=True),
              help='Write the scenario table as CSV.')
@tol_option
@format_option
@click.pass_obj
def sweep(config, path, resolution, budget, output, tol, fmt):
    """Solve every scenario of a grid over the production box."""
    network_file = load_network_file(path)
    network = network_file.network
    tol, options = _solver_options(network_file, tol)
    result = scenario_sweep(
        network, network_file.box, network_file.seed, network_file.cost,
        network_file.setting('sweep', 'resolution', resolution, config.SWEEP_RESOLUTION),
        tol=tol, budget=network_file.setting('sweep', 'budget', budget, config.SWEEP_BUDGET),
        workers=config.WORKERS, **options)
    frame = result.to_frame()
    if output:
        frame.to_csv(output, index=False)
    conjunction = result.feasibility_conjunction
    _emit('sweep', {
        'scenarios': frame,
        'corner_extrema_hold': result.corner_extrema_hold(network.free_nodes, 10 * tol if tol else 1e-7),
        'feasible_everywhere': conjunction,
    }, fmt)
    if conjunction is None:
        return EXIT_NUMERICAL
    return EXIT_OK if conjunction else EXIT_INFEASIBLE


def _scenario_pair(text):
    names = [name.strip() for name in text.split(',')]
    if len(names) != 2 or any(name not in (LOWER, UPPER) for name in names):
        raise click.BadParameter(f'expected two of {LOWER}, {UPPER} separated by a comma, '
                                 f'got {text!r}', param_hint='--scenarios')
    return names


@click.command()
@click.argument('path', type=NETWORK_FILE)
@click.option('--node', 'target', type=int, required=True, help='Target node u outside T.')
@click.option('--scenarios', default=f'{UPPER},{LOWER}', show_default=True,
              help='Scenario with the larger productions, then the smaller one.')
@tol_option
@format_option
def certify(path, target, scenarios, tol, fmt):
    """Build a dominating path from the terminals to a node between two corner solutions."""
    network_file = load_network_file(path)
    network = network_file.network
    first, second = _scenario_pair(scenarios)
    tol, options = _solver_options(network_file, tol)
    box, seed = network_file.box, network_file.seed
    state_a = solve_steady_state(network, seed.boundary(box.corner(first)), tol, **options)
    state_b = solve_steady_state(network, seed.boundary(box.corner(second)), tol, **options)
    certificate = aquarius_path(network, state_a, state_b, network.terminals, target)
    problems = certificate.verify(network, state_a, state_b, network.terminals)
    _emit('certify', {
        'target': certificate.target,
        'strict': certificate.strict,
        'path': list(certificate.path),
        'edges': pd.DataFrame(list(certificate.edges), columns=['from', 'to', 'phi_star', 'phi']),
        'problems': problems,
    }, fmt)
    return EXIT_OK if not problems else EXIT_NUMERICAL


@click.command()
@click.argument('output', type=click.File('w'))
@click.option('--nodes', 'n_nodes', type=click.IntRange(min=3), default=5, show_default=True)
@click.option('--extra-edges', type=click.IntRange(min=0), default=1, show_default=True)
@click.option('--compression-max', type=click.FloatRange(min=0.0), default=0.0,
              show_default=True, help='Compressor box [0, max] on every pipe when positive.')
@click.option('--seed', type=click.IntRange(min=0), default=0, show_default=True)
def generate(output, n_nodes, extra_edges, compression_max, seed):
    """Write a random network file to OUTPUT ('-' for stdout)."""
    rng = np.random.default_rng(seed)
    network, box, op, cost = random_robust_instance(
        rng, n_nodes, extra_edges=extra_edges, compression=(0.0, compression_max))
    space = SearchSpace(
        q_S={node: (0.5 * q, 1.5 * q) for node, q in op.q_S.items()},
        pi_T={node: network.pi_bounds[node] for node in network.terminals},
        compression={edge: network.laws[edge].adjustable['b'] for edge in network.compressors})
    output.write(dump_network_file(NetworkFile(network, box, cost, op, space)))
    return EXIT_OK


COMMANDS = (validate, solve, check, optimize, sweep, certify, generate)
