import math

import numpy as np
import pytest

from dissiflow.dissipation import GasPipe
from dissiflow.errors.exceptions import DimensionError, NonConvergenceError
from dissiflow.models import BoundaryData, Network, total_production
from dissiflow.network import residuals
from dissiflow.oracle.generator import random_boundary, random_network, seeded
from dissiflow.solver import (EnergyModel, default_tol, energy, potentials_map, productions_map,
                              solve_steady_state)


def test_two_node_gradient_vanishes_at_solution(two_node):
    boundary = BoundaryData(q_R={}, q_S={1: 1.0}, pi_T={2: 1.0})
    value = energy(two_node, boundary, {1: 2.0})
    assert value.gradient[1] == pytest.approx(0.0, abs=1e-12)


def test_zero_boundary_gradient_vanishes(three_node):
    boundary = BoundaryData(q_R={2: 0.0}, q_S={1: 0.0}, pi_T={3: 1.5})
    value = energy(three_node, boundary, {1: 1.5, 2: 1.5})
    assert value.gradient == {1: 0.0, 2: 0.0}


def test_gradient_matches_finite_differences(triangle, rng):
    boundary = BoundaryData(q_R={2: -0.4}, q_S={1: 0.9}, pi_T={3: 2.0})
    h = 1e-6
    for _ in range(20):
        point = {1: float(rng.uniform(0.0, 4.0)), 2: float(rng.uniform(0.0, 4.0))}
        gradient = energy(triangle, boundary, point).gradient
        for node in point:
            up = energy(triangle, boundary, {**point, node: point[node] + h}).value
            down = energy(triangle, boundary, {**point, node: point[node] - h}).value
            assert (up - down) / (2 * h) == pytest.approx(gradient[node], rel=1e-5, abs=1e-6)


def test_energy_rejects_wrong_index(three_node, upper_boundary):
    with pytest.raises(DimensionError):
        energy(three_node, upper_boundary, {1: 1.0, 3: 1.0})


def test_boundary_must_cover_partition(three_node):
    with pytest.raises(DimensionError):
        solve_steady_state(three_node, BoundaryData(q_R={}, q_S={1: 1.0}, pi_T={3: 1.0}))
    with pytest.raises(DimensionError):
        solve_steady_state(three_node, BoundaryData(q_R={2: 0.0}, q_S={1: 1.0},
                                                    pi_T={3: math.inf}))


def test_two_node_solution(two_node):
    state = solve_steady_state(two_node, BoundaryData(q_R={}, q_S={1: 1.0}, pi_T={2: 1.0}))
    assert state.pi[1] == pytest.approx(2.0)
    assert state.phi[(1, 2)] == pytest.approx(1.0)
    assert state.q[2] == pytest.approx(-1.0)


def test_three_node_upper_corner(three_node, upper_boundary):
    state = solve_steady_state(three_node, upper_boundary)
    assert state.phi[(1, 2)] == pytest.approx(1.0)
    assert state.phi[(2, 3)] == pytest.approx(1.0)
    assert state.pi[2] == pytest.approx(2.0)
    assert state.pi[1] == pytest.approx(3.0)
    assert state.q[3] == pytest.approx(-1.0)


@pytest.mark.parametrize('q_2, pi_2, pi_1, q_3', [
    (-0.5, 1.25, 2.25, -0.5),
    (-0.25, 1.5625, 2.5625, -0.75),
])
def test_three_node_internal_withdrawal(three_node, q_2, pi_2, pi_1, q_3):
    state = solve_steady_state(three_node, BoundaryData(q_R={2: q_2}, q_S={1: 1.0}, pi_T={3: 1.0}))
    assert state.pi[2] == pytest.approx(pi_2)
    assert state.pi[1] == pytest.approx(pi_1)
    assert state.q[3] == pytest.approx(q_3)


def test_zero_boundary_gives_zero_flow(three_node):
    state = solve_steady_state(three_node, BoundaryData(q_R={2: 0.0}, q_S={1: 0.0}, pi_T={3: 1.0}))
    assert state.phi == {(1, 2): 0.0, (2, 3): 0.0}
    assert state.pi == {1: 1.0, 2: 1.0, 3: 1.0}
    assert state.q[3] == 0.0
    assert state.iterations == 0


def test_maps(three_node, upper_boundary):
    assert potentials_map(three_node, upper_boundary) == pytest.approx({1: 3.0, 2: 2.0})
    assert productions_map(three_node, upper_boundary) == pytest.approx({3: -1.0})


def test_compression_shifts_the_potentials(triangle):
    boundary = BoundaryData(q_R={2: -0.3}, q_S={1: 1.0}, pi_T={3: 2.0})
    plain = solve_steady_state(triangle, boundary)
    compressed = solve_steady_state(
        triangle, BoundaryData(q_R={2: -0.3}, q_S={1: 1.0}, pi_T={3: 2.0},
                               compression={(1, 3): 0.8}))
    assert compressed.phi != plain.phi
    conservation, drop = residuals(triangle.with_compression({(1, 3): 0.8}), compressed)
    assert max(abs(v) for v in drop.values()) <= 1e-8
    assert max(abs(v) for v in conservation.values()) <= 1e-8


def test_iteration_limit_raises(triangle):
    boundary = BoundaryData(q_R={2: -0.3}, q_S={1: 1.0}, pi_T={3: 2.0})
    with pytest.raises(NonConvergenceError) as excinfo:
        solve_steady_state(triangle, boundary, max_iterations=0)
    assert excinfo.value.iterations == 0
    assert excinfo.value.gradient_norm > excinfo.value.tol


def test_tolerance_must_be_positive(three_node, upper_boundary):
    with pytest.raises(ValueError):
        solve_steady_state(three_node, upper_boundary, tol=0.0)


def test_default_tol_scales_with_productions():
    boundary = BoundaryData(q_R={2: -50.0}, q_S={1: 3.0}, pi_T={3: 1.0})
    assert default_tol(boundary) == pytest.approx(5e-8)


def test_random_instances_are_unique_and_balanced(rng):
    for _ in range(10):
        network = random_network(rng, int(rng.integers(5, 15)), extra_edges=int(rng.integers(0, 4)),
                                 compression=(0.0, 1.0))
        boundary = random_boundary(network, rng)
        state = solve_steady_state(network, boundary, tol=1e-11)
        conservation, drop = residuals(network, state)
        scale = max(1.0, max(abs(v) for v in state.q.values()))
        assert max(abs(v) for v in conservation.values()) <= 1e-8 * scale
        assert max(abs(v) for v in drop.values()) <= 1e-8 * scale
        assert total_production(state.q) == pytest.approx(0.0, abs=1e-8)
        start = {node: float(rng.uniform(-5.0, 5.0)) for node in network.free_nodes}
        other = solve_steady_state(network, boundary, tol=1e-11, initial=start)
        for node in network.nodes:
            assert other.pi[node] == pytest.approx(state.pi[node], abs=1e-7)


def test_solution_minimizes_energy(triangle, rng):
    boundary = BoundaryData(q_R={2: -0.4}, q_S={1: 0.9}, pi_T={3: 2.0})
    state = solve_steady_state(triangle, boundary)
    best = energy(triangle, boundary, state.potentials(triangle.free_nodes)).value
    for _ in range(100):
        point = {node: state.pi[node] + float(rng.normal(0.0, 0.5)) for node in triangle.free_nodes}
        assert energy(triangle, boundary, point).value >= best - 1e-12


def test_energy_model_hessian_is_positive_definite(triangle):
    model = EnergyModel(triangle, BoundaryData(q_R={2: -0.4}, q_S={1: 0.9}, pi_T={3: 2.0}))
    hessian = model.hessian(np.array([3.0, 2.5]))
    assert np.allclose(hessian, hessian.T)
    assert np.all(np.linalg.eigvalsh(hessian) > 0)


def compressed_path():
    return Network.build({1: 'S', 2: 'R', 3: 'T'},
                         [(1, 2, GasPipe(1.67, b=0.89, b_min=0.0, b_max=1.0)),
                          (2, 3, GasPipe(1.45, b=0.36, b_min=0.0, b_max=1.0))],
                         {node: (0.0, 10.0) for node in (1, 2, 3)})


def test_compressed_path_with_near_balanced_pipe():
    # the (2, 3) pipe ends almost at its compression offset: u = pi_2 - pi_3 + b ~ -6e-4
    network = compressed_path()
    boundary = BoundaryData(q_R={2: -0.47}, q_S={1: 0.45}, pi_T={3: 3.33})
    state = solve_steady_state(network, boundary, tol=1e-12)
    assert state.pi[2] == pytest.approx(2.96942, abs=1e-9)
    assert state.pi[1] == pytest.approx(2.417595, abs=1e-9)
    assert state.phi[(2, 3)] == pytest.approx(-0.02, abs=1e-9)
    assert state.q[3] == pytest.approx(0.02, abs=1e-9)
    assert state.iterations < 100


@pytest.mark.parametrize('start', [{1: 0.0, 2: 0.0}, {1: 10.0, 2: -10.0}, {1: 2.4, 2: 2.97}])
def test_compressed_path_from_any_start(start):
    boundary = BoundaryData(q_R={2: -0.47}, q_S={1: 0.45}, pi_T={3: 3.33})
    state = solve_steady_state(compressed_path(), boundary, tol=1e-12, initial=start)
    assert state.pi[2] == pytest.approx(2.96942, abs=1e-9)
    assert state.pi[1] == pytest.approx(2.417595, abs=1e-9)


def test_compressed_random_instances_converge():
    rng = seeded(4)
    for _ in range(100):
        network = random_network(rng, int(rng.integers(3, 20)), extra_edges=int(rng.integers(0, 4)),
                                 compression=(0.0, 1.0))
        boundary = random_boundary(network, rng)
        state = solve_steady_state(network, boundary, tol=1e-11)
        conservation, drop = residuals(network, state)
        scale = max(1.0, max(abs(v) for v in state.q.values()))
        assert max(abs(v) for v in conservation.values()) <= 1e-8 * scale
        assert max(abs(v) for v in drop.values()) <= 1e-8 * scale
