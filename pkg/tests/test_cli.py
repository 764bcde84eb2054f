import json
import math

import numpy as np
import pytest
import yaml
from click.testing import CliRunner

from dissiflow import create_cli
from dissiflow.cli import dump_network_file, load_network_file, parse_network_file, render_report
from dissiflow.config import Config
from dissiflow.errors.exceptions import InvalidNetworkError, NetworkFileError

WORKED = """\
version: 1
nodes:
  - {id: 1, role: S, pi_min: 0, pi_max: 4, q: 1.0, q_lo: 0.5, q_hi: 1.5}
  - {id: 2, role: R, pi_min: 0, pi_max: 4, q_lo: -0.5, q_hi: 0.0}
  - {id: 3, role: T, pi_min: 0, pi_max: 4, pi: 1.0, pi_lo: 1.0, pi_hi: 4.0}
edges:
  - {from: 1, to: 2, c: 1.0}
  - {from: 2, to: 3, c: 1.0}
costs:
  - {node: 1, coefficient: 1.0}
  - {node: 3, price: 2.0}
"""


class SerialConfig(Config):
    WORKERS = 1


@pytest.fixture
def cli():
    return create_cli(SerialConfig)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write(tmp_path):
    def write_(text, name='network.yaml'):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return write_


@pytest.fixture
def worked(write):
    return write(WORKED)


def records(result):
    document = json.loads(result.output)
    assert document['schema'] == Config.REPORT_SCHEMA
    assert document['version'] == Config.REPORT_SCHEMA_VERSION
    return document


def by_node(rows):
    return {row['node']: row for row in rows}


def test_parse_worked_file():
    network_file = parse_network_file(WORKED)
    network = network_file.network
    assert network.sources == (1,)
    assert network.internals == (2,)
    assert network.terminals == (3,)
    assert network_file.box.corner('lower') == {2: -0.5}
    assert network_file.seed.q_S == {1: 1.0}
    assert network_file.seed.pi_T == {3: 1.0}
    assert network_file.space.q_S == {1: (0.5, 1.5)}
    assert network_file.cost.cost({1: 1.0}, {3: -1.0}) == pytest.approx(3.0)
    assert network_file.setting('sweep', 'resolution', default=11) == 11


def test_seed_defaults_to_box_midpoint():
    text = WORKED.replace('q: 1.0, ', '').replace('pi: 1.0, ', '')
    network_file = parse_network_file(text + 'solver: {tol: 1.0e-10}\n')
    assert network_file.seed.q_S == {1: 1.0}
    assert network_file.seed.pi_T == {3: 2.5}
    assert network_file.setting('solver', 'tol') == 1e-10
    assert network_file.setting('solver', 'tol', 1e-6) == 1e-6
    assert network_file.solver == {'tol': 1e-10}


def test_geometry_and_compressor_edges():
    text = WORKED.replace('{from: 2, to: 3, c: 1.0}',
                          '{from: 3, to: 2, length: 4.0, alpha: 0.5, x_c: 1.0, '
                          'compressor: {b: 0.2, b_min: 0.0, b_max: 1.0}}')
    network_file = parse_network_file(text)
    network = network_file.network
    assert network.compressors == ((2, 3),)
    assert network.law(3, 2).resistance == pytest.approx(1.0)
    assert network_file.seed.compression == {(2, 3): 0.2}
    assert network_file.space.compression == {(2, 3): (0.0, 1.0)}


def test_round_trip_through_dump():
    text = WORKED.replace('{from: 2, to: 3, c: 1.0}',
                          '{from: 3, to: 2, c: 2.0, compressor: {b_min: 0.0, b_max: 0.5}}')
    text += 'search: {budget: 50, seed: 3}\n'
    first = parse_network_file(text)
    dumped = dump_network_file(first)
    second = parse_network_file(dumped)
    assert second == first
    assert dump_network_file(second) == dumped
    edge = yaml.safe_load(dumped)['edges'][1]
    assert (edge['from'], edge['to']) == (3, 2)


@pytest.mark.parametrize('old, new, message', [
    ('q_lo: -0.5, q_hi: 0.0', 'q_lo: 0.0, q_hi: -0.5', 'reversed production box'),
    ('role: R', 'role: X', 'role must be one of'),
    ('{from: 1, to: 2, c: 1.0}', '{from: 1, to: 2, c: 1.0, colour: red}', 'unknown keys colour'),
    ('{from: 1, to: 2, c: 1.0}', '{from: 1, to: 1, c: 1.0}', 'self-loop on node 1'),
    ('{from: 1, to: 2, c: 1.0}', '{from: 1, to: 2, c: -1.0}', 'expected a positive number'),
    ('{from: 1, to: 2, c: 1.0}', '{from: 1, to: 7, c: 1.0}', 'unknown node 7'),
    ('{node: 3, price: 2.0}', '{node: 3, coefficient: 2.0}', 'takes no cost of this kind'),
    ('version: 1', 'version: 2', 'unsupported file version'),
    ('pi_min: 0, pi_max: 4, q_lo', 'pi_min: 5, pi_max: 4, q_lo', 'inverted potential bounds'),
])
def test_schema_errors(old, new, message):
    with pytest.raises(NetworkFileError) as excinfo:
        parse_network_file(WORKED.replace(old, new, 1))
    assert message in str(excinfo.value)
    assert excinfo.value.line is not None


def test_error_location_points_at_the_entry():
    with pytest.raises(NetworkFileError) as excinfo:
        parse_network_file(WORKED.replace('q_lo: -0.5, q_hi: 0.0', 'q_lo: 0.0, q_hi: -0.5'))
    error = excinfo.value
    assert (error.line, error.column) == (4, 5)
    assert error.path == 'nodes[1]'


def test_yaml_errors_are_located():
    with pytest.raises(NetworkFileError) as excinfo:
        parse_network_file(WORKED.replace('c: 1.0}', 'c: 1.0, c: 2.0}', 1))
    assert 'duplicate key' in str(excinfo.value)
    assert excinfo.value.line == 7
    with pytest.raises(NetworkFileError):
        parse_network_file('version: 1\nnodes: [\n')


def test_structural_check_is_optional():
    text = WORKED.replace('role: T', 'role: R').replace('pi: 1.0, pi_lo: 1.0, pi_hi: 4.0',
                                                        'q_lo: 0.0, q_hi: 0.0')
    text = text.replace('  - {node: 3, price: 2.0}\n', '')
    with pytest.raises(InvalidNetworkError):
        parse_network_file(text)
    assert parse_network_file(text, check=False).network.terminals == ()


def test_load_names_the_file(write):
    path = write(WORKED.replace('version: 1', 'version: 2'), 'broken.yaml')
    with pytest.raises(NetworkFileError) as excinfo:
        load_network_file(path)
    assert str(excinfo.value).startswith(f'{path}: line 1, column 1')


def test_render_report_formats():
    report = {'verdict': 'feasible', 'flows': {(1, 2): 1.0}, 'path': [3, 2]}
    text = render_report('check', report, 'text')
    assert 'verdict: feasible' in text
    assert '  1-2: 1.0' in text
    document = json.loads(render_report('check', report, 'records'))
    assert document['command'] == 'check'
    assert document['flows'] == {'1-2': 1.0}


def test_records_write_non_finite_numbers_as_null():
    report = {'worst_cost': math.nan, 'bounds': {1: (0.0, math.inf)}, 'scale': np.float64(-math.inf)}
    text = render_report('check', report, 'records')
    assert 'NaN' not in text and 'Infinity' not in text
    document = json.loads(text)
    assert document['worst_cost'] is None
    assert document['bounds'] == {'1': [0.0, None]}
    assert document['scale'] is None


def test_validate(cli, runner, worked, write):
    result = runner.invoke(cli, ['validate', worked])
    assert result.exit_code == 0
    assert 'valid: True' in result.output
    text = WORKED.replace('  - {from: 2, to: 3, c: 1.0}\n', '')
    result = runner.invoke(cli, ['validate', write(text, 'split.yaml'), '--format', 'records'])
    assert result.exit_code == 4
    assert 'graph not connected' in records(result)['problems']


def test_solve_upper_corner(cli, runner, worked):
    result = runner.invoke(cli, ['solve', worked, '--format', 'records'])
    assert result.exit_code == 0, result.output
    document = records(result)
    nodes = by_node(document['nodes'])
    assert nodes[1]['pi'] == pytest.approx(3.0)
    assert nodes[2]['pi'] == pytest.approx(2.0)
    assert nodes[3]['q'] == pytest.approx(-1.0)
    assert nodes[1]['pressure'] == pytest.approx(3.0 ** 0.5)
    assert document['cost'] == pytest.approx(3.0)
    assert document['residuals']['conservation'] <= 1e-8
    assert document['feasible'] is True


def test_solve_lower_corner_and_values(cli, runner, worked):
    result = runner.invoke(cli, ['solve', worked, '--scenario', 'lower', '--format', 'records'])
    assert by_node(records(result)['nodes'])[2]['pi'] == pytest.approx(1.25)
    result = runner.invoke(cli, ['solve', worked, '--scenario', 'values', '--q', '2=-0.25',
                                 '--format', 'records'])
    assert result.exit_code == 0
    nodes = by_node(records(result)['nodes'])
    assert nodes[2]['pi'] == pytest.approx(1.5625)
    assert nodes[3]['q'] == pytest.approx(-0.75)


@pytest.mark.parametrize('args', [
    ['--q', '2=-0.25'],
    ['--scenario', 'values', '--q', '2'],
    ['--scenario', 'values', '--q', '5=1.0'],
    ['--scenario', 'middle'],
    ['--tol', '0'],
])
def test_solve_usage_errors(cli, runner, worked, args):
    result = runner.invoke(cli, ['solve', worked, *args])
    assert result.exit_code == 4


def test_solve_infeasible_scenario(cli, runner, write):
    path = write(WORKED.replace('pi_max: 4, q: 1.0', 'pi_max: 2.9, q: 1.0'))
    result = runner.invoke(cli, ['solve', path])
    assert result.exit_code == 2
    assert 'feasible: False' in result.output


def test_solve_reports_non_convergence(cli, runner, write):
    path = write(WORKED + 'solver: {max_iterations: 1, tol: 1.0e-14}\n')
    result = runner.invoke(cli, ['solve', path, '--scenario', 'values', '--q', '2=-0.3'])
    assert result.exit_code == 3
    assert 'numerical failure' in result.output


def test_check(cli, runner, worked, write):
    result = runner.invoke(cli, ['check', worked, '--format', 'records'])
    assert result.exit_code == 0
    document = records(result)
    assert document['verdict'] == 'feasible'
    assert document['worst_cost'] == pytest.approx(3.0)
    assert by_node(document['corners'])[1]['pi_upper'] == pytest.approx(3.0)

    path = write(WORKED.replace('pi_max: 4, q: 1.0', 'pi_max: 2.9, q: 1.0'), 'tight.yaml')
    result = runner.invoke(cli, ['check', path, '--format', 'records'])
    assert result.exit_code == 2
    (violation,) = records(result)['violations']
    assert (violation['node'], violation['bound'], violation['scenario']) == (1, 'max', 'upper')
    assert violation['margin'] == pytest.approx(0.1)


def test_check_missing_file(cli, runner, tmp_path):
    result = runner.invoke(cli, ['check', str(tmp_path / 'missing.yaml')])
    assert result.exit_code == 4


def test_check_bad_file(cli, runner, write):
    path = write(WORKED.replace('q_lo: -0.5, q_hi: 0.0', 'q_lo: 0.0, q_hi: -0.5'))
    result = runner.invoke(cli, ['check', path])
    assert result.exit_code == 4
    assert 'line 4, column 5' in result.output


def test_optimize(cli, runner, worked):
    result = runner.invoke(cli, ['optimize', worked, '--budget', '200', '--format', 'records'])
    assert result.exit_code == 0, result.output
    document = records(result)
    assert document['verdict'] == 'feasible'
    assert document['point']['q_S']['1'] == pytest.approx(0.5)
    assert document['worst_cost'] == pytest.approx(1.5)
    assert document['evaluations'] <= 200


def test_optimize_without_feasible_point(cli, write):
    runner = CliRunner(mix_stderr=False)
    path = write(WORKED.replace('pi_max: 4, q: 1.0', 'pi_max: 0.9, q: 1.0'))
    result = runner.invoke(cli, ['optimize', path, '--budget', '40', '--format', 'records'])
    assert result.exit_code == 2
    assert 'infeasible' in result.stderr
    document = json.loads(result.stdout)
    assert document['verdict'] == 'infeasible'
    assert set(document['point']) == {'q_S', 'pi_T', 'compression'}
    assert 0 < document['evaluations'] <= 40
    assert document['violations']
    assert all(row['node'] == 1 and row['bound'] == 'max' and row['margin'] > 0
               for row in document['violations'])


def test_search_and_sweep_follow_the_file_solver_settings(cli, write):
    runner = CliRunner(mix_stderr=False)
    path = write(WORKED + 'solver: {max_iterations: 1, tol: 1.0e-14}\n')

    result = runner.invoke(cli, ['optimize', path, '--budget', '5', '--format', 'records'])
    assert result.exit_code == 2
    document = json.loads(result.stdout)
    assert document['verdict'] == 'indeterminate'
    assert document['worst_cost'] is None

    result = runner.invoke(cli, ['sweep', path, '--resolution', '3', '--format', 'records'])
    assert result.exit_code == 3
    document = json.loads(result.stdout)
    assert [row['converged'] for row in document['scenarios']] == [False] * 3
    assert document['feasible_everywhere'] is None

    assert runner.invoke(cli, ['sweep', write(WORKED + 'solver: {max_iterations: 200}\n'),
                               '--resolution', '3']).exit_code == 0


def test_sweep(cli, runner, worked, tmp_path):
    output = tmp_path / 'scenarios.csv'
    result = runner.invoke(cli, ['sweep', worked, '--resolution', '11', '--output', str(output),
                                 '--format', 'records'])
    assert result.exit_code == 0, result.output
    document = records(result)
    assert len(document['scenarios']) == 11
    assert document['corner_extrema_hold'] is True
    assert document['feasible_everywhere'] is True
    assert output.read_text().splitlines()[0].startswith('index,q_2')
    assert len(output.read_text().splitlines()) == 12


@pytest.mark.parametrize('seed', range(6))
def test_check_verdict_matches_sweep_on_generated_files(cli, runner, tmp_path, seed):
    path = str(tmp_path / 'random.yaml')
    assert runner.invoke(cli, ['generate', path, '--nodes', '5', '--seed', str(seed)]).exit_code == 0
    check = runner.invoke(cli, ['check', path, '--format', 'records'])
    sweep = runner.invoke(cli, ['sweep', path, '--resolution', '4', '--format', 'records'])
    assert check.exit_code in (0, 2), check.output
    assert sweep.exit_code == check.exit_code
    assert records(sweep)['feasible_everywhere'] is (records(check)['verdict'] == 'feasible')


def test_sweep_budget_is_a_numerical_failure(cli, runner, worked):
    result = runner.invoke(cli, ['sweep', worked, '--resolution', '11', '--budget', '5'])
    assert result.exit_code == 3


def test_certify(cli, runner, worked):
    result = runner.invoke(cli, ['certify', worked, '--node', '2', '--format', 'records'])
    assert result.exit_code == 0, result.output
    document = records(result)
    assert document['path'] == [3, 2]
    assert document['strict'] is True
    assert document['problems'] == []
    (edge,) = document['edges']
    assert edge['phi_star'] == pytest.approx(-0.5)


@pytest.mark.parametrize('args', [
    ['--node', '3'],
    ['--node', '2', '--scenarios', 'lower,upper'],
    ['--node', '2', '--scenarios', 'upper'],
    [],
])
def test_certify_usage_errors(cli, runner, worked, args):
    result = runner.invoke(cli, ['certify', worked, *args])
    assert result.exit_code == 4


def test_generate_writes_a_loadable_file(cli, runner, tmp_path):
    output = tmp_path / 'random.yaml'
    result = runner.invoke(cli, ['generate', str(output), '--nodes', '6', '--seed', '5',
                                 '--compression-max', '0.5'])
    assert result.exit_code == 0, result.output
    network_file = load_network_file(str(output))
    assert len(network_file.network.nodes) == 6
    assert network_file.network.compressors == network_file.network.edges
    assert runner.invoke(cli, ['validate', str(output)]).exit_code == 0
    again = tmp_path / 'again.yaml'
    runner.invoke(cli, ['generate', str(again), '--nodes', '6', '--seed', '5',
                        '--compression-max', '0.5'])
    assert again.read_text() == output.read_text()


def test_help_lists_every_command(cli, runner):
    result = runner.invoke(cli, ['--help'])
    assert result.exit_code == 0
    for name in ('validate', 'solve', 'check', 'optimize', 'sweep', 'certify', 'generate'):
        assert name in result.output


def test_unknown_command(cli, runner):
    assert runner.invoke(cli, ['frobnicate']).exit_code == 4
