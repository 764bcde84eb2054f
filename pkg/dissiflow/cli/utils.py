#!/usr/bin/python
"""
This module reads, writes and reports network files.

A network file is a YAML document describing nodes, edges, costs and
optional solver, search and sweep settings. It is loaded with a SafeLoader
that remembers where every mapping starts, validated section by section
with the forms of ``dissiflow.cli.forms``, and assembled into the model
objects used by the solvers.

Classes:
    - MarkedMapping: Dict remembering its source position.
    - NetworkFile: A parsed network file.

Functions:
    - parse_network_file: Parse YAML text into a NetworkFile.
    - load_network_file: Read and parse a file from disk.
    - dump_network_file: Export a NetworkFile back to YAML text.
    - render_report: Format a report as text or JSON records.
"""

import json
import math
from dataclasses import dataclass, field

import pandas as pd
import yaml

from dissiflow.cli.forms import (FIELD_NAMES, CompressorForm, CostForm, DocumentForm, EdgeForm,
                                 NodeForm, SearchForm, SolverForm, SweepForm)
from dissiflow.config import Config
from dissiflow.dissipation.gas import GasPipe
from dissiflow.dissipation.laws import ReversedLaw
from dissiflow.errors.exceptions import NetworkFileError
from dissiflow.models import Network, NodeRole
from dissiflow.network.utils import ensure_valid
from dissiflow.robust.costs import AffineCost, CostModel, TabulatedCost
from dissiflow.robust.feasibility import OperatingPoint, ScenarioBox
from dissiflow.robust.search import SearchSpace


class MarkedMapping(dict):
    """Mapping loaded from YAML, with the 1-based position of its first key."""
    line = None
    column = None


class MarkedLoader(yaml.SafeLoader):
    """SafeLoader producing MarkedMapping and rejecting duplicate keys."""


def _construct_mapping(loader, node):
    mapping = MarkedMapping()
    mapping.line = node.start_mark.line + 1
    mapping.column = node.start_mark.column + 1
    yield mapping
    seen = set()
    for key_node, _ in node.value:
        key = loader.construct_object(key_node)
        if key in seen:
            raise yaml.constructor.ConstructorError(
                'while constructing a mapping', node.start_mark,
                f'found duplicate key {key!r}', key_node.start_mark)
        seen.add(key)
    mapping.update(loader.construct_mapping(node))


MarkedLoader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)


@dataclass(frozen=True)
class NetworkFile:
    """
    Attributes:
        network (Network): Nodes, roles, bounds and pipe laws.
        box (ScenarioBox): Production box of the internal nodes.
        cost (CostModel): Source costs and terminal payments.
        seed (OperatingPoint): Starting operating point (fixed values or box midpoints).
        space (SearchSpace): Boxes of the operational variables.
        solver (dict): ``solver`` section as given.
        search (dict): ``search`` section as given.
        sweep (dict): ``sweep`` section as given.
    """
    network: Network
    box: ScenarioBox
    cost: CostModel
    seed: OperatingPoint
    space: SearchSpace
    solver: dict = field(default_factory=dict)
    search: dict = field(default_factory=dict)
    sweep: dict = field(default_factory=dict)

    def setting(self, section, key, override=None, default=None):
        """Return ``override`` if given, else the file value, else ``default``."""
        if override is not None:
            return override
        return getattr(self, section).get(key, default)


def _fail(message, mapping=None, path=None):
    line = getattr(mapping, 'line', None)
    column = getattr(mapping, 'column', None)
    raise NetworkFileError(message, line, column, path)


def _validated(form_class, mapping, path):
    """Validate one mapping with ``form_class`` and return its data by key."""
    if not isinstance(mapping, dict):
        _fail(f'expected a mapping, got {type(mapping).__name__}', mapping, path)
    data = {FIELD_NAMES.get(key, key): value for key, value in mapping.items()}
    form = form_class(data=data)
    unknown = sorted(str(key) for key in data if key not in form._fields)
    if unknown:
        _fail(f'unknown keys {", ".join(unknown)}', mapping, path)
    if not form.validate():
        name, messages = next(iter(form.errors.items()))
        label = form[name].label.text
        _fail(f'{label}: {messages[0]}', mapping, path)
    return {name: form[name].data for name in form._fields}


def _law(edge, path):
    compressor = {}
    if edge['compressor'] is not None:
        block = _validated(CompressorForm, edge['compressor'], f'{path}.compressor')
        compressor = dict(b=float(block['b'] if block['b'] is not None else block['b_min']),
                          b_min=float(block['b_min']), b_max=float(block['b_max']))
    if edge['x_c'] is not None:
        compressor['x_c'] = float(edge['x_c'])
    if edge['c'] is not None:
        return GasPipe(float(edge['c']), **compressor)
    return GasPipe.from_geometry(float(edge['length']), float(edge['alpha']), **compressor)


def _cost_function(entry):
    if entry['table'] is not None:
        return TabulatedCost(tuple(tuple(row) for row in entry['table']))
    slope = entry['coefficient'] if entry['coefficient'] is not None else entry['price']
    return AffineCost(float(slope), float(entry['offset'] or 0.0))


def parse_network_file(text, check=True):
    """
    Parse a network file.

    Args:
        text (str): YAML text.
        check (bool): Run structural validation on the assembled network.

    Returns:
        NetworkFile: The parsed file.

    Raises:
        NetworkFileError: On YAML syntax errors and schema violations, located
            by line and column.
        InvalidNetworkError: If ``check`` is set and the network is not admissible.
    """
    try:
        document = yaml.load(text, Loader=MarkedLoader)
    except yaml.MarkedYAMLError as error:
        mark = error.problem_mark or error.context_mark
        raise NetworkFileError(error.problem or str(error),
                               mark.line + 1 if mark else None,
                               mark.column + 1 if mark else None) from error
    except yaml.YAMLError as error:
        raise NetworkFileError(str(error)) from error
    top = _validated(DocumentForm, document, 'document')

    roles, bounds, intervals = {}, {}, {}
    q_S, q_boxes, pi_T, pi_boxes = {}, {}, {}, {}
    for k, raw in enumerate(top['nodes']):
        path = f'nodes[{k}]'
        node = _validated(NodeForm, raw, path)
        nid = node['id']
        if nid in roles:
            _fail(f'duplicate node id {nid}', raw, path)
        roles[nid] = NodeRole(node['role'])
        bounds[nid] = (float(node['pi_min']), float(node['pi_max']))
        if node['role'] == 'S':
            box = (node['q_lo'], node['q_hi']) if node['q_lo'] is not None else (node['q'],) * 2
            q_boxes[nid] = (float(box[0]), float(box[1]))
            q_S[nid] = float(node['q']) if node['q'] is not None else (box[0] + box[1]) / 2.0
        elif node['role'] == 'R':
            intervals[nid] = (float(node['q_lo']), float(node['q_hi']))
        else:
            box = (node['pi_lo'], node['pi_hi']) if node['pi_lo'] is not None else (node['pi'],) * 2
            pi_boxes[nid] = (float(box[0]), float(box[1]))
            pi_T[nid] = float(node['pi']) if node['pi'] is not None else (box[0] + box[1]) / 2.0

    pipes = []
    for k, raw in enumerate(top['edges']):
        path = f'edges[{k}]'
        edge = _validated(EdgeForm, raw, path)
        for end in (edge['from_'], edge['to']):
            if end not in roles:
                _fail(f'edge references unknown node {end}', raw, path)
        try:
            pipes.append((edge['from_'], edge['to'], _law(edge, path)))
        except ValueError as error:
            _fail(str(error), raw, path)

    source_costs, revenues = {}, {}
    for k, raw in enumerate(top['costs'] or []):
        path = f'costs[{k}]'
        entry = _validated(CostForm, raw, path)
        nid = entry['node']
        role = roles.get(nid)
        if role is NodeRole.SOURCE and entry['price'] is None:
            target = source_costs
        elif role is NodeRole.TERMINAL and entry['coefficient'] is None:
            target = revenues
        else:
            _fail(f'node {nid} takes no cost of this kind', raw, path)
        if nid in target:
            _fail(f'duplicate cost for node {nid}', raw, path)
        target[nid] = _cost_function(entry)

    settings = {}
    for section, form_class in (('solver', SolverForm), ('search', SearchForm),
                                ('sweep', SweepForm)):
        raw = top[section]
        values = _validated(form_class, raw, section) if raw is not None else {}
        settings[section] = {key: value for key, value in values.items() if value is not None}

    network = Network.build(roles, pipes, bounds)
    if check:
        ensure_valid(network)
    try:
        cost = CostModel(source_costs, revenues)
        box = ScenarioBox.from_intervals(intervals)
        space = SearchSpace(q_S=q_boxes, pi_T=pi_boxes, compression={
            edge: network.laws[edge].adjustable['b'] for edge in network.compressors})
    except ValueError as error:
        _fail(str(error), document, 'document')
    seed = OperatingPoint(q_S=q_S, pi_T=pi_T, compression={
        edge: _base(network.laws[edge]).b for edge in network.compressors})
    return NetworkFile(network, box, cost, seed, space, **settings)


def load_network_file(path, check=True):
    """Read ``path`` and parse it; errors carry the file name."""
    with open(path, encoding='utf-8') as stream:
        text = stream.read()
    try:
        return parse_network_file(text, check=check)
    except NetworkFileError as error:
        raise NetworkFileError(error.message, error.line, error.column, error.path,
                               source=str(path)) from error


def _base(law):
    return law.base if isinstance(law, ReversedLaw) else law


def _number(value):
    return float(value) if math.isfinite(value) else value


def _cost_entry(node, function, kind):
    if isinstance(function, TabulatedCost):
        return {'node': node, 'table': [list(point) for point in function.points]}
    entry = {'node': node, kind: function.slope}
    if function.offset:
        entry['offset'] = function.offset
    return entry


def dump_network_file(network_file):
    """
    Export a NetworkFile as YAML text.

    Pipes stored reversed are written in their declared orientation, fixed
    values are written next to their search boxes, and settings sections are
    written only when present, so the text parses back to an equal NetworkFile.
    """
    nf = network_file
    network = nf.network
    nodes = []
    for node in network.nodes:
        low, high = network.pi_bounds[node]
        entry = {'id': node, 'role': network.roles[node].value,
                 'pi_min': _number(low), 'pi_max': _number(high)}
        if node in network.sources:
            entry['q'] = nf.seed.q_S[node]
            entry['q_lo'], entry['q_hi'] = nf.space.q_S[node]
        elif node in network.internals:
            entry['q_lo'], entry['q_hi'] = nf.box.lower[node], nf.box.upper[node]
        else:
            entry['pi'] = nf.seed.pi_T[node]
            entry['pi_lo'], entry['pi_hi'] = nf.space.pi_T[node]
        nodes.append(entry)

    edges = []
    for i, j in network.edges:
        law = network.laws[(i, j)]
        pipe = _base(law)
        entry = {'from': j, 'to': i} if isinstance(law, ReversedLaw) else {'from': i, 'to': j}
        if pipe.length is not None:
            entry['length'], entry['alpha'] = pipe.length, pipe.alpha
        else:
            entry['c'] = pipe.resistance
        if pipe.x_c is not None:
            entry['x_c'] = pipe.x_c
        if pipe.has_compressor:
            entry['compressor'] = {'b': nf.seed.compression.get((i, j), pipe.b),
                                   'b_min': pipe.b_min, 'b_max': pipe.b_max}
        edges.append(entry)

    costs = ([_cost_entry(node, function, 'coefficient')
              for node, function in sorted(nf.cost.source_costs.items())]
             + [_cost_entry(node, function, 'price')
                for node, function in sorted(nf.cost.terminal_revenues.items())])
    document = {'version': 1, 'nodes': nodes, 'edges': edges}
    if costs:
        document['costs'] = costs
    for section in ('solver', 'search', 'sweep'):
        if getattr(nf, section):
            document[section] = dict(getattr(nf, section))
    return yaml.safe_dump(document, sort_keys=False, default_flow_style=None)


def _plain(value):
    if isinstance(value, pd.DataFrame):
        return [_plain(row) for row in value.to_dict(orient='records')]
    if isinstance(value, dict):
        return {_key(key): _plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(item) for item in value]
    if hasattr(value, 'item'):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _key(key):
    if isinstance(key, tuple):
        return '-'.join(str(part) for part in key)
    return key


def render_report(command, report, fmt='text'):
    """
    Format a report.

    Args:
        command (str): Name of the command producing the report.
        report (dict): Title mapped to a scalar, a mapping or a DataFrame.
        fmt (str): ``'text'`` for aligned human output, ``'records'`` for a
            versioned JSON document.

    Returns:
        str: The rendered report.
    """
    if fmt == 'records':
        document = {'schema': Config.REPORT_SCHEMA, 'version': Config.REPORT_SCHEMA_VERSION,
                    'command': command}
        document.update(_plain(report))
        return json.dumps(document, indent=2, allow_nan=False)
    lines = []
    for title, value in report.items():
        if isinstance(value, pd.DataFrame):
            lines.append(f'{title}:')
            lines.append(value.to_string(index=False) if not value.empty else '  (none)')
        elif isinstance(value, dict):
            lines.append(f'{title}:')
            lines.extend(f'  {_key(key)}: {item}' for key, item in value.items())
        elif isinstance(value, (list, tuple)):
            lines.append(f'{title}:')
            lines.extend([f'  {item}' for item in value] or ['  (none)'])
        else:
            lines.append(f'{title}: {value}')
    return '\n'.join(lines)
