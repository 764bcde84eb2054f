#!/usr/bin/python
"""
This module defines the forms validating the sections of a network file.

Every mapping of the file is fed to one form through ``Form(data=...)``.
Field validators check presence and type; inline ``validate_<field>``
methods check the rules that tie a field to its neighbours, such as the
role-specific keys of a node or the ordering of a box.

Classes:
    - Required: Validator rejecting a missing value.
    - Absent: Validator ending validation of an omitted optional value.
    - Number: Validator accepting finite real numbers.
    - Integer: Validator accepting integers.
    - NodeForm: One entry of ``nodes``.
    - EdgeForm: One entry of ``edges``.
    - CompressorForm: The ``compressor`` block of an edge.
    - CostForm: One entry of ``costs``.
    - SolverForm: The ``solver`` section.
    - SearchForm: The ``search`` section.
    - SweepForm: The ``sweep`` section.
    - DocumentForm: The top level of the file.
"""

import math
import numbers

from wtforms import Form, Field
from wtforms.validators import StopValidation, ValidationError

ROLES = ('S', 'T', 'R')


class Required:
    """Stop the chain with an error when the key is missing."""

    def __init__(self, message='this key is required'):
        self.message = message

    def __call__(self, form, field):
        if field.data is None:
            raise StopValidation(self.message)


class Absent:
    """Stop the chain silently when the key is missing."""

    def __call__(self, form, field):
        if field.data is None:
            field.errors[:] = []
            raise StopValidation()


class Number:
    """
    Accept real numbers (booleans excluded).

    Args:
        positive (bool): Require a strictly positive value.
        finite (bool): Reject infinities.
    """

    def __init__(self, positive=False, finite=True):
        self.positive = positive
        self.finite = finite

    def __call__(self, form, field):
        value = field.data
        if isinstance(value, bool) or not isinstance(value, numbers.Real):
            raise ValidationError(f'expected a number, got {value!r}')
        if self.finite and not math.isfinite(value):
            raise ValidationError(f'expected a finite number, got {value!r}')
        if self.positive and not value > 0:
            raise ValidationError(f'expected a positive number, got {value!r}')


class Integer:
    def __init__(self, minimum=None):
        self.minimum = minimum

    def __call__(self, form, field):
        value = field.data
        if isinstance(value, bool) or not isinstance(value, int):
            raise ValidationError(f'expected an integer, got {value!r}')
        if self.minimum is not None and value < self.minimum:
            raise ValidationError(f'expected an integer of at least {self.minimum}, got {value}')


def _real(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool)


def _box(form, low, high, what):
    lo, hi = form[low].data, form[high].data
    if (lo is None) != (hi is None):
        raise ValidationError(f'{what} needs both {low} and {high}')
    if _real(lo) and _real(hi) and lo > hi:
        raise ValidationError(f'reversed {what}: {low} = {lo} > {high} = {hi}')
    return lo is not None


class NodeForm(Form):
    """
    Fields:
        - id: Integer node id.
        - role: One of S, T, R.
        - pi_min, pi_max: Potential bounds (infinite values allowed).
        - q, q_lo, q_hi: Injection (sources) or production box (internal nodes).
        - pi, pi_lo, pi_hi: Potential set-point or search box (terminals).
    """
    id = Field('id', validators=[Required(), Integer()])
    role = Field('role', validators=[Required()])
    pi_min = Field('pi_min', validators=[Required(), Number(finite=False)])
    pi_max = Field('pi_max', validators=[Required(), Number(finite=False)])
    q = Field('q', validators=[Absent(), Number()])
    q_lo = Field('q_lo', validators=[Absent(), Number()])
    q_hi = Field('q_hi', validators=[Absent(), Number()])
    pi = Field('pi', validators=[Absent(), Number()])
    pi_lo = Field('pi_lo', validators=[Absent(), Number()])
    pi_hi = Field('pi_hi', validators=[Absent(), Number()])

    def validate_role(self, role):
        if role.data not in ROLES:
            raise ValidationError(f'role must be one of {", ".join(ROLES)}, got {role.data!r}')
        q = self.q.data
        has_q_box = _box(self, 'q_lo', 'q_hi', 'production box')
        has_pi_box = _box(self, 'pi_lo', 'pi_hi', 'potential box')
        if role.data == 'S' and q is None and not has_q_box:
            raise ValidationError('a source needs q or both q_lo and q_hi')
        if role.data == 'R':
            if q is not None:
                raise ValidationError('an internal node takes q_lo and q_hi, not q')
            if not has_q_box:
                raise ValidationError('an internal node needs q_lo and q_hi')
        if role.data == 'T':
            if q is not None or has_q_box:
                raise ValidationError('a terminal production is not an input')
            if self.pi.data is None and not has_pi_box:
                raise ValidationError('a terminal needs pi or both pi_lo and pi_hi')
        elif self.pi.data is not None or has_pi_box:
            raise ValidationError('only terminals take a potential set-point')

    def validate_pi_max(self, pi_max):
        low = self.pi_min.data
        if _real(low) and _real(pi_max.data) and low > pi_max.data:
            raise ValidationError(f'inverted potential bounds: pi_min = {low} > pi_max = {pi_max.data}')


class CompressorForm(Form):
    b = Field('b', validators=[Absent(), Number()])
    b_min = Field('b_min', validators=[Required(), Number()])
    b_max = Field('b_max', validators=[Required(), Number()])

    def validate_b_max(self, b_max):
        low, high = self.b_min.data, b_max.data
        if _real(low) and _real(high) and low > high:
            raise ValidationError(f'reversed compression box: b_min = {low} > b_max = {high}')
        b = self.b.data
        if _real(b) and _real(low) and _real(high) and not low <= b <= high:
            raise ValidationError(f'compression b = {b} outside [{low}, {high}]')


class EdgeForm(Form):
    """
    Fields:
        - from_, to: End nodes as declared (``from`` in the file).
        - c: Pipe coefficient, or
        - length, alpha: Pipe geometry with ``c = length * alpha / 2``.
        - x_c: Compressor position along the pipe.
        - compressor: Mapping validated by CompressorForm.
    """
    from_ = Field('from', validators=[Required(), Integer()])
    to = Field('to', validators=[Required(), Integer()])
    c = Field('c', validators=[Absent(), Number(positive=True)])
    length = Field('length', validators=[Absent(), Number(positive=True)])
    alpha = Field('alpha', validators=[Absent(), Number(positive=True)])
    x_c = Field('x_c', validators=[Absent(), Number()])
    compressor = Field('compressor', validators=[Absent()])

    def validate_to(self, to):
        if to.data == self.from_.data:
            raise ValidationError(f'self-loop on node {to.data}')
        geometry = (self.length.data is not None, self.alpha.data is not None)
        if self.c.data is not None and any(geometry):
            raise ValidationError('give either c or length and alpha, not both')
        if self.c.data is None and not all(geometry):
            raise ValidationError('an edge needs c or both length and alpha')

    def validate_compressor(self, compressor):
        if not isinstance(compressor.data, dict):
            raise ValidationError('compressor must be a mapping')


class CostForm(Form):
    """
    Fields:
        - node: Source or terminal id.
        - coefficient: Source cost ``g(q) = coefficient * q``.
        - price: Terminal payment ``h(q) = price * q``.
        - offset: Constant added to an affine cost or payment.
        - table: ``[[q, value], ...]`` for a piecewise-linear function.
    """
    node = Field('node', validators=[Required(), Integer()])
    coefficient = Field('coefficient', validators=[Absent(), Number()])
    price = Field('price', validators=[Absent(), Number()])
    offset = Field('offset', validators=[Absent(), Number()])
    table = Field('table', validators=[Absent()])

    def validate_node(self, node):
        given = [name for name in ('coefficient', 'price', 'table') if self[name].data is not None]
        if len(given) != 1:
            raise ValidationError('a cost entry needs exactly one of coefficient, price or table')

    def validate_offset(self, offset):
        if self.table.data is not None:
            raise ValidationError('a tabulated cost takes no offset')

    def validate_table(self, table):
        rows = table.data
        if not isinstance(rows, list) or len(rows) < 2:
            raise ValidationError('a table needs at least two [q, value] rows')
        for row in rows:
            if not (isinstance(row, list) and len(row) == 2 and all(
                    isinstance(v, numbers.Real) and not isinstance(v, bool) and math.isfinite(v)
                    for v in row)):
                raise ValidationError(f'table row {row!r} is not a pair of finite numbers')
        if any(b[0] <= a[0] for a, b in zip(rows, rows[1:])):
            raise ValidationError('table abscissae must be strictly increasing')


class SolverForm(Form):
    tol = Field('tol', validators=[Absent(), Number(positive=True)])
    max_iterations = Field('max_iterations', validators=[Absent(), Integer(minimum=1)])


class SearchForm(Form):
    sweeps = Field('sweeps', validators=[Absent(), Integer(minimum=1)])
    shrink = Field('shrink', validators=[Absent(), Number(positive=True)])
    initial_step = Field('initial_step', validators=[Absent(), Number(positive=True)])
    budget = Field('budget', validators=[Absent(), Integer(minimum=1)])
    seed = Field('seed', validators=[Absent(), Integer(minimum=0)])

    def validate_shrink(self, shrink):
        if not shrink.data < 1:
            raise ValidationError(f'shrink must lie in (0, 1), got {shrink.data}')


class SweepForm(Form):
    resolution = Field('resolution', validators=[Absent(), Integer(minimum=2)])
    budget = Field('budget', validators=[Absent(), Integer(minimum=1)])


class DocumentForm(Form):
    version = Field('version', validators=[Required(), Integer()])
    nodes = Field('nodes', validators=[Required()])
    edges = Field('edges', validators=[Required()])
    costs = Field('costs', validators=[Absent()])
    solver = Field('solver', validators=[Absent()])
    search = Field('search', validators=[Absent()])
    sweep = Field('sweep', validators=[Absent()])

    def validate_version(self, version):
        if version.data != 1:
            raise ValidationError(f'unsupported file version {version.data}')

    def validate_nodes(self, nodes):
        if not isinstance(nodes.data, list) or not nodes.data:
            raise ValidationError('nodes must be a non-empty list')

    def validate_edges(self, edges):
        if not isinstance(edges.data, list):
            raise ValidationError('edges must be a list')

    def validate_costs(self, costs):
        if not isinstance(costs.data, list):
            raise ValidationError('costs must be a list')


FIELD_NAMES = {'from': 'from_'}
