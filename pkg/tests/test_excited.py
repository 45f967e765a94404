"""Three-channel electronically excited block: structure and dipoles."""

import dataclasses

import numpy as np
import pytest

from ccdimer.excited import (
    ChannelFractions,
    assemble_excited_w,
    builtin_excited_model,
    channel_fractions,
    excited_levels,
    excited_model_from_curves,
    excited_problem,
    single_channel_level,
    transition_dipole,
)
from ccdimer.potentials import morse_curve
from ccdimer.solver import RadialGrid, radial_node_count

GRID = RadialGrid(5.0, 30.0, 901)


def _zero(r):
    return np.zeros_like(np.asarray(r, dtype=float))


@pytest.fixture(scope="module")
def model(mu_kr):
    return builtin_excited_model(mu_kr, j=1)


@pytest.fixture(scope="module")
def low_window(model):
    r = np.linspace(5.0, 30.0, 2001)
    vmin = min(float(model.v_sigma(r).min()), float(model.v_pi3(r).min()),
               float(model.v_pi1(r).min()))
    return (vmin + 1.0e-5, vmin + 2.0e-3)


@pytest.fixture(scope="module")
def coupled_levels(model, low_window):
    return excited_levels(model, GRID, low_window)


def test_dissociation_limits(model):
    asym = model.v_sigma.asymptote
    assert model.lower_limit == pytest.approx(asym - 2.0 * model.delta / 3.0)
    assert model.upper_limit == pytest.approx(asym + model.delta / 3.0)
    assert model.upper_limit - model.lower_limit == pytest.approx(model.delta)


def test_coupling_matrix_signs_and_tails(model):
    w = assemble_excited_w(model, 100.0)
    np.testing.assert_allclose(w, w.T, atol=1.0e-15)
    third = model.delta / 3.0
    assert w[0, 1] > 0.0 and w[1, 2] > 0.0 and w[0, 2] < 0.0
    for i, j in ((0, 1), (0, 2), (1, 2)):
        assert abs(abs(w[i, j]) - third) <= 1.0e-3 * third, (i, j)


def test_asymptotic_splitting_pattern(model):
    w = assemble_excited_w(model, 100.0)
    eig = np.linalg.eigvalsh(w) - model.v_sigma.asymptote
    third = model.delta / 3.0
    expect = np.array([-2.0 * third, third, third])
    assert np.max(np.abs(eig - expect)) < 0.01 * third


def test_tail_validation_rejects_dead_couplings(model):
    with pytest.raises(ValueError, match="Delta/3"):
        dataclasses.replace(model, xi_sigma_pi3=_zero)


def test_model_parameter_validation(model):
    with pytest.raises(ValueError, match="J >= 1"):
        dataclasses.replace(model, j=0)
    with pytest.raises(ValueError, match="splitting"):
        dataclasses.replace(model, delta=-1.0)


def test_window_above_upper_limit_rejected(model):
    with pytest.raises(ValueError, match="upper dissociation limit"):
        excited_levels(model, GRID,
                       (model.upper_limit - 1.0e-5, model.upper_limit + 1.0e-4))


def test_coupled_fractions_sum_to_one(coupled_levels):
    assert len(coupled_levels) >= 3
    last = None
    for state, frac in coupled_levels:
        total = frac.f_sigma + frac.f_pi3 + frac.f_pi1
        assert abs(total - 1.0) < 1.0e-10
        assert frac == channel_fractions(state)
        if last is not None:
            assert state.energy > last
        last = state.energy


def test_decoupled_levels_are_pure(model, low_window):
    bare = dataclasses.replace(
        model, xi_sigma_pi3=_zero, xi_sigma_pi1=_zero, xi_pi3_pi1=_zero,
        validate_tails=False)
    levels = excited_levels(bare, GRID, low_window)
    assert len(levels) >= 3
    for state, frac in levels:
        assert max(frac.f_sigma, frac.f_pi3, frac.f_pi1) == pytest.approx(
            1.0, abs=1.0e-10)


def test_fraction_container_rejects_bad_sums():
    with pytest.raises(ValueError):
        ChannelFractions(0.5, 0.4, 0.2)
    with pytest.raises(ValueError):
        ChannelFractions(1.2, -0.2, 0.0)


def test_single_channel_level_indexing(mu_kr):
    curve = morse_curve("well", depth=0.004, r_e=8.0, alpha=0.7, c6=3.0e3)
    grid = RadialGrid(5.0, 25.0, 801)
    for v in (0, 1, 3):
        state = single_channel_level(curve, mu_kr, grid, v=v)
        assert radial_node_count(state) == v
    with pytest.raises(ValueError, match="supports only"):
        single_channel_level(curve, mu_kr, grid, v=500)


def test_transition_dipole_selection(model, coupled_levels, mu_kr, curves):
    ground = single_channel_level(curves["X1Sigma"], mu_kr, GRID, v=0)
    state, frac = coupled_levels[0]
    # empty dipole map encodes a forbidden transition
    assert transition_dipole(ground, state, {}) == 0.0
    with pytest.raises(ValueError, match="outside channel"):
        transition_dipole(ground, state, {(0, 3): 1.0})
    d = {(0, 2): curves["d_X_1Pi"]}
    assert transition_dipole(ground, state, d) >= 0.0


def test_transition_dipole_vanishes_without_target_character(
        model, low_window, mu_kr, curves):
    bare = dataclasses.replace(
        model, xi_sigma_pi3=_zero, xi_sigma_pi1=_zero, xi_pi3_pi1=_zero,
        validate_tails=False)
    ground = single_channel_level(curves["X1Sigma"], mu_kr, GRID, v=0)
    d = {(0, 2): curves["d_X_1Pi"]}
    for state, frac in excited_levels(bare, GRID, low_window):
        if frac.f_pi1 < 1.0e-12:
            assert transition_dipole(ground, state, d) < 1.0e-12


def test_model_from_curves_infers_splitting(curves, mu_kr, model):
    built = excited_model_from_curves(
        curves["exc_3Sigma"], curves["exc_3Pi"], curves["exc_1Pi"],
        curves["xi_sigma_pi3"], curves["xi_sigma_pi1"], curves["xi_pi1_pi3"],
        mu_kr)
    assert built.delta == pytest.approx(model.delta, rel=2.0e-3)
    assert built.j == 1
