"""Radial eigensolver: analytic oracles, backend agreement, invariants."""

import numpy as np
import pytest

from ccdimer.potentials import morse
from ccdimer.solver import (
    BoundState,
    CoupledChannelProblem,
    GridConvergenceWarning,
    RadialGrid,
    converged_bound_states,
    matrix_element,
    radial_node_count,
    solve_dvr,
    solve_propagation,
)
from oracles import harmonic_levels, morse_levels

MU = 500.0
DEPTH, R_E, ALPHA = 0.1, 6.0, 0.8


def _single(vfunc):
    def w(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return vfunc(r).reshape(-1, 1, 1)
    return CoupledChannelProblem(n_channels=1, w=w, mu=MU, label="single")


def _morse_problem():
    return _single(lambda r: morse(r, DEPTH, R_E, ALPHA))


OMEGA, R0 = 1.0e-3, 12.0


def _harmonic_problem():
    k = MU * OMEGA**2
    return _single(lambda r: 0.5 * k * (r - R0) ** 2)


@pytest.fixture(scope="module")
def morse_states():
    grid = RadialGrid(4.0, 18.0, 601)
    states, _ = converged_bound_states(
        _morse_problem(), grid, (-0.11, -0.004), target=2.0e-10)
    return states


@pytest.fixture(scope="module")
def toy_pair():
    """Two coupled Morse channels and the DVR solution."""
    def w(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty((r.size, 2, 2))
        out[:, 0, 0] = morse(r, 0.08, 6.0, 0.9)
        out[:, 1, 1] = morse(r, 0.05, 7.0, 0.7) + 0.01
        out[:, 0, 1] = out[:, 1, 0] = 0.003
        return out
    prob = CoupledChannelProblem(n_channels=2, w=w, mu=100.0, label="toy")
    grid = RadialGrid(4.0, 14.0, 1201)
    return prob, grid, solve_dvr(prob, grid, (-0.075, -0.01))


def test_morse_oracle_lowest_ten(morse_states):
    oracle = morse_levels(DEPTH, ALPHA, MU)
    assert len(morse_states) >= 10
    for v in range(10):
        got = morse_states[v].energy
        assert abs(got - oracle[v]) <= 1.0e-8 * abs(oracle[v]), v


def test_harmonic_oracle_lowest_ten():
    grid = RadialGrid(2.0, 22.0, 801)
    states, _ = converged_bound_states(
        _harmonic_problem(), grid, (0.0, 10.0 * OMEGA), target=1.0e-11)
    oracle = harmonic_levels(OMEGA, 10)
    assert len(states) == 10
    for n in range(10):
        assert abs(states[n].energy - oracle[n]) <= 1.0e-8 * oracle[n], n


def test_backends_agree_on_coupled_toy(toy_pair):
    prob, grid, dvr = toy_pair
    prop = solve_propagation(prob, grid, (-0.075, -0.01))
    assert len(dvr) == len(prop) > 4
    for a, b in zip(dvr, prop):
        assert abs(a.energy - b.energy) <= 1.0e-8 * abs(a.energy) + 1.0e-12


def test_dvr_eigenvalues_decrease_with_resolution():
    prob = _morse_problem()
    window = (-0.11, -0.05)
    prev = None
    for n in (201, 401, 801):
        states = solve_dvr(prob, RadialGrid(4.0, 18.0, n), window)
        energies = np.array([s.energy for s in states[:3]])
        if prev is not None:
            assert np.all(energies <= prev + 1.0e-12)
        prev = energies


def test_eigenvector_continuity_under_refinement():
    prob = _morse_problem()
    coarse_grid = RadialGrid(4.0, 18.0, 601)
    fine_grid = coarse_grid.refined()
    window = (-0.11, -0.08)
    coarse = solve_dvr(prob, coarse_grid, window)
    fine = solve_dvr(prob, fine_grid, window)
    for c, f in zip(coarse, fine):
        interp = np.interp(fine_grid.points, coarse_grid.points, c.psi[0])
        interp /= np.sqrt(fine_grid.h * np.sum(interp**2))
        overlap = abs(fine_grid.h * np.sum(interp * f.psi[0]))
        assert overlap > 0.999999


def test_states_are_orthonormal(toy_pair):
    _, _, states = toy_pair
    for i, a in enumerate(states):
        for j, b in enumerate(states):
            assert abs(a.overlap(b) - (1.0 if i == j else 0.0)) < 1.0e-10


def test_node_count_equals_vibrational_index(morse_states):
    for v in range(7):
        assert radial_node_count(morse_states[v]) == v


def test_energies_invariant_under_channel_permutation(toy_pair):
    prob, grid, states = toy_pair

    def w_swapped(r):
        m = prob.w(r)
        return m[:, ::-1, ::-1]

    swapped = CoupledChannelProblem(n_channels=2, w=w_swapped, mu=prob.mu)
    states_swapped = solve_dvr(swapped, grid, (-0.075, -0.01))
    assert len(states) == len(states_swapped)
    for a, b in zip(states, states_swapped):
        assert abs(a.energy - b.energy) < 1.0e-10
        # channel weights travel with the permutation
        assert a.channel_weights[0] == pytest.approx(
            b.channel_weights[1], abs=1.0e-8)


def test_matrix_element_identity_and_orthogonality(morse_states):
    g, e1 = morse_states[0], morse_states[1]
    assert matrix_element(g, 1.0, g) == pytest.approx(1.0, abs=1.0e-12)
    assert abs(matrix_element(g, 1.0, e1)) < 1.0e-10


def test_matrix_element_position_expectation():
    grid = RadialGrid(2.0, 22.0, 1201)
    states = solve_dvr(_harmonic_problem(), grid, (0.0, 1.5 * OMEGA))
    op = lambda r: np.asarray(r).reshape(-1, 1, 1)  # noqa: E731
    assert matrix_element(states[0], op, states[0]) == pytest.approx(
        R0, abs=1.0e-8)


def test_boundary_amplitude_flags_small_box(morse_states):
    assert all(s.boundary_amplitude < 1.0e-6 for s in morse_states[:8])
    # a box that truncates the outer tail must be flagged
    tight = solve_dvr(_morse_problem(), RadialGrid(4.0, 8.0, 301),
                      (-0.11, -0.08))
    assert tight[0].boundary_amplitude > 1.0e-6


def test_window_above_box_threshold_rejected():
    prob = _morse_problem()
    grid = RadialGrid(4.0, 18.0, 301)
    with pytest.raises(ValueError, match="continuum_ok"):
        solve_dvr(prob, grid, (-1.0e-5, 1.0e-3))
    solve_dvr(prob, grid, (-1.0e-5, 1.0e-3), continuum_ok=True)


def test_empty_window_is_a_defined_result():
    prob = _morse_problem()
    grid = RadialGrid(4.0, 18.0, 301)
    assert solve_dvr(prob, grid, (-0.099, -0.0945)) == []
    assert solve_propagation(prob, grid, (-0.099, -0.0945)) == []


def test_grid_convergence_warning_on_coarse_grid():
    # heavy reduced mass: the ground state spans ~0.2 a0, far below the
    # 0.26 a0 spacing of this grid
    def w(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return morse(r, DEPTH, R_E, ALPHA).reshape(-1, 1, 1)

    prob = CoupledChannelProblem(n_channels=1, w=w, mu=5000.0)
    with pytest.warns(GridConvergenceWarning):
        solve_dvr(prob, RadialGrid(4.0, 30.0, 101), (-0.11, -0.09),
                  convergence_check_tol=1.0e-14)


def test_grid_validation():
    with pytest.raises(ValueError):
        RadialGrid(-1.0, 10.0, 500)
    with pytest.raises(ValueError):
        RadialGrid(5.0, 4.0, 500)
    with pytest.raises(ValueError):
        RadialGrid(5.0, 10.0, 50)
    g = RadialGrid(5.0, 10.0, 101)
    assert g.h == pytest.approx(0.05)
    assert g.refined().n == 201


def test_problem_validation():
    with pytest.raises(ValueError):
        CoupledChannelProblem(n_channels=0, w=lambda r: r, mu=1.0)
    with pytest.raises(ValueError):
        CoupledChannelProblem(n_channels=1, w=lambda r: r, mu=-1.0)
    with pytest.raises(TypeError):
        CoupledChannelProblem(n_channels=1, w=None, mu=1.0)


def test_asymmetric_coupling_rejected():
    def w(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.zeros((r.size, 2, 2))
        out[:, 0, 0] = out[:, 1, 1] = -0.01
        out[:, 0, 1] = 1.0e-3  # [1, 0] left at zero: not symmetric
        return out

    prob = CoupledChannelProblem(n_channels=2, w=w, mu=100.0)
    with pytest.raises(ValueError, match="symmetr"):
        solve_dvr(prob, RadialGrid(4.0, 14.0, 201), (-0.02, -0.001),
                  continuum_ok=True)


def test_scalar_matrix_element_rejects_channel_mismatch(morse_states):
    g = morse_states[0]
    fake = BoundState(
        energy=0.0, grid=g.grid, psi=np.zeros((2, g.grid.n)), norm=1.0,
        channel_weights=np.array([0.5, 0.5]), dominant_channel=0,
        boundary_amplitude=0.0)
    with pytest.raises(ValueError, match="channel"):
        matrix_element(g, 1.0, fake)


def test_matrix_element_rejects_grid_mismatch(morse_states, toy_pair):
    _, _, pair_states = toy_pair
    with pytest.raises(ValueError, match="grid"):
        matrix_element(morse_states[0], 1.0, pair_states[0])
