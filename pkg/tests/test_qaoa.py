import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conic_qaoa.errors import ShapeError
from conic_qaoa.problem import Graph, brute_force_ground, complete_graph, maxcut_hamiltonian, ring_graph
from conic_qaoa.qaoa import (
    OptimizerConfig,
    QaoaParams,
    landscape,
    optimize,
    qaoa_energy,
    qaoa_gradient,
    qaoa_state,
    read_landscape,
    write_landscape,
)
from conic_qaoa.statevector import uniform_superposition

from oracles import (
    dense_cost_phase,
    dense_mixer,
    dense_qaoa_energy_single_edge,
    single_edge_energy,
    single_edge_gradient,
)

EDGE = maxcut_hamiltonian(Graph.from_edges(2, [(0, 1)]))


def P(g, b):
    return QaoaParams((g,), (b,))


def test_params_validation_and_vector_order():
    params = QaoaParams((1.0, 2.0), (3.0, 4.0))
    assert params.to_vector().tolist() == [1.0, 2.0, 3.0, 4.0]
    assert QaoaParams.from_vector(params.to_vector()) == params
    with pytest.raises(ShapeError):
        QaoaParams((1.0,), (1.0, 2.0))
    with pytest.raises(ValueError):
        QaoaParams((float("inf"),), (0.0,))


def test_zero_angles_give_plus_state():
    h = maxcut_hamiltonian(ring_graph(4))
    assert np.array_equal(qaoa_state(h, P(0.0, 0.0)).amplitudes, uniform_superposition(4).amplitudes)


def test_single_edge_optimum():
    assert qaoa_energy(EDGE, P(math.pi / 2, math.pi / 8)) == pytest.approx(-1.0, abs=1e-10)
    assert qaoa_energy(EDGE, P(0.0, 0.0)) == pytest.approx(-0.5, abs=1e-15)


def test_closed_form_cross_checked_by_dense_simulation():
    for g, b in [(0.3, 0.2), (2.1, 1.3), (math.pi / 2, math.pi / 8)]:
        assert dense_qaoa_energy_single_edge(g, b) == pytest.approx(single_edge_energy(g, b), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000), st.integers(1, 4))
def test_state_unit_norm(seed, p):
    rng = np.random.default_rng(seed)
    h = maxcut_hamiltonian(complete_graph(5))
    params = QaoaParams(tuple(rng.uniform(-5, 5, p)), tuple(rng.uniform(-5, 5, p)))
    assert abs(qaoa_state(h, params).norm() - 1) < 1e-12


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 1000), st.integers(1, 3))
def test_periodicity(seed, p):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.7] or [(0, 1)]
    h = maxcut_hamiltonian(Graph.from_edges(n, edges))
    g, b = rng.uniform(0, math.pi, p), rng.uniform(0, math.pi, p)
    e0 = qaoa_energy(h, QaoaParams(tuple(g), tuple(b)))
    k = int(rng.integers(p))
    b2, g2 = b.copy(), g.copy()
    b2[k] += math.pi
    g2[k] += 2 * math.pi
    assert qaoa_energy(h, QaoaParams(tuple(g), tuple(b2))) == pytest.approx(e0, abs=1e-10)
    assert qaoa_energy(h, QaoaParams(tuple(g2), tuple(b))) == pytest.approx(e0, abs=1e-10)


def test_energy_within_bounds():
    h = maxcut_hamiltonian(complete_graph(4))
    ground, _ = brute_force_ground(h)
    rng = np.random.default_rng(0)
    for _ in range(20):
        e = qaoa_energy(h, QaoaParams(tuple(rng.uniform(0, 3, 2)), tuple(rng.uniform(0, 3, 2))))
        assert ground - 1e-12 <= e <= 1e-12


def test_gradient_at_stationary_points():
    assert np.max(np.abs(qaoa_gradient(EDGE, P(0.0, 0.0)))) < 2e-7
    assert np.max(np.abs(qaoa_gradient(EDGE, P(math.pi / 2, math.pi / 8)))) < 2e-7


def test_gradient_matches_closed_form_on_grid():
    worst = 0.0
    for g in np.linspace(0, math.pi, 10):
        for b in np.linspace(0, math.pi, 10):
            fd = qaoa_gradient(EDGE, P(g, b))
            worst = max(worst, np.max(np.abs(fd - single_edge_gradient(g, b))))
    assert worst < 1e-6


def test_gradient_step_halving_is_second_order():
    h = maxcut_hamiltonian(ring_graph(5))
    params = QaoaParams((0.7, 0.4), (0.3, 1.1))
    # high-precision reference from Richardson extrapolation of two small steps
    g1 = qaoa_gradient(h, params, step=1e-2)
    g2 = qaoa_gradient(h, params, step=5e-3)
    ref = (4 * g2 - g1) / 3
    e1 = np.max(np.abs(g1 - ref))
    e2 = np.max(np.abs(g2 - ref))
    assert 3.0 < e1 / e2 < 5.0
    d_big = np.max(np.abs(g1 - qaoa_gradient(h, params, step=5e-3)))
    d_small = np.max(np.abs(g2 - qaoa_gradient(h, params, step=2.5e-3)))
    assert d_big / d_small == pytest.approx(4.0, rel=0.1)


def test_optimize_single_edge_converges():
    trace = optimize(EDGE, P(0.3, 0.3))
    assert trace.final.energy == pytest.approx(-1.0, abs=1e-4)
    assert trace.termination == "zero_gradient"
    for r in trace.records[::50]:
        assert qaoa_energy(EDGE, r.params) == pytest.approx(r.energy, abs=1e-10)


def test_optimize_at_stationary_point_stops_immediately():
    init = P(0.0, 0.0)
    trace = optimize(EDGE, init)
    assert trace.termination == "zero_gradient"
    assert len(trace.records) == 1 and trace.final.params == init


def test_optimize_deterministic():
    h = maxcut_hamiltonian(ring_graph(4))
    cfg = OptimizerConfig(step_size=0.02, momentum=0.5, max_iter=100)
    a = optimize(h, QaoaParams((0.4, 0.1), (0.2, 0.9)), cfg)
    b = optimize(h, QaoaParams((0.4, 0.1), (0.2, 0.9)), cfg)
    assert a == b
    assert a.termination in ("max_iter", "zero_gradient")


def test_optimize_respects_stop_callback():
    h = maxcut_hamiltonian(ring_graph(4))
    trace = optimize(h, QaoaParams((0.4,), (0.2,)), stop=lambda tr: len(tr.records) >= 5)
    assert trace.termination == "plateau" and len(trace.records) == 5


def test_landscape_single_edge_closed_form():
    table = landscape(EDGE, 1, grid=16)
    expected = np.array([[single_edge_energy(g, b) for b in table.betas] for g in table.gammas])
    assert np.max(np.abs(table.energies - expected)) < 1e-10


def test_landscape_matches_dense_simulation_small():
    g = Graph.from_edges(3, [(0, 1), (1, 2, 2.0)])
    h = maxcut_hamiltonian(g)
    table = landscape(h, 1, grid=7)
    plus = np.full(8, 1 / math.sqrt(8), dtype=complex)
    for i, gamma in enumerate(table.gammas):
        for j, beta in enumerate(table.betas):
            psi = dense_mixer(beta, 3) @ (dense_cost_phase(h.energies, gamma) @ plus)
            assert table.energies[i, j] == pytest.approx(float(np.abs(psi) ** 2 @ h.energies), abs=1e-12)


def test_landscape_shares_angles_across_layers():
    h = maxcut_hamiltonian(ring_graph(4))
    table = landscape(h, 3, grid=5)
    g, b = table.gammas[2], table.betas[3]
    assert table.energies[2, 3] == pytest.approx(qaoa_energy(h, QaoaParams((g,) * 3, (b,) * 3)), abs=1e-12)


@pytest.mark.parametrize("p", [1, 2, 4])
def test_landscape_corner_value(p):
    g = Graph.from_edges(4, [(0, 1, 1.5), (1, 2), (2, 3, 0.5), (0, 3)])
    table = landscape(maxcut_hamiltonian(g), p, grid=4)
    assert table.energies[0, 0] == pytest.approx(-g.total_weight / 2, abs=1e-10)


def test_landscape_file_format(tmp_path):
    table = landscape(EDGE, 2, grid=4)
    path = tmp_path / "optimisation_landscape_p=2.txt"
    write_landscape(table, path, ["instance: single edge"])
    text = path.read_text()
    blocks = text.split("\n\n")
    assert len(blocks) == 4
    rows = read_landscape(path)
    assert rows.shape == (16, 3)
    assert np.array_equal(rows[:, 2], table.energies.ravel())
    assert rows[1, 0] == rows[0, 0] and rows[1, 1] > rows[0, 1]  # gamma-major
