"""Sum-over-states light response: algebra, flags, catalog plumbing."""

import dataclasses

import numpy as np
import pytest

from ccdimer.constants import CONSTANTS, convert
from ccdimer.polarizability import (
    CatalogEntry,
    ExcitedLevelCatalog,
    ManifoldSpec,
    _evaluate,
    assign_resonances,
    build_catalog,
    dynamic_polarizability,
    load_catalog,
    rotational_factor,
    save_catalog,
    scan,
    trap_depth,
)


def _entry(energy, ls=1.0, gamma=0.0, manifold="m", v=0):
    return CatalogEntry(manifold=manifold, v=v, j=1, energy=energy,
                        gamma=gamma, line_strength=ls, source="bound")


def test_static_limit_single_line():
    de, ls = 0.057, 0.42
    cat = ExcitedLevelCatalog([_entry(de, ls=ls)])
    got = dynamic_polarizability(0.0, cat, 0.0)
    assert got.imag == 0.0
    assert abs(got.real - 2.0 * ls / de) <= 1.0e-12 * (2.0 * ls / de)


def test_polarizability_is_even_in_omega():
    cat = ExcitedLevelCatalog([_entry(0.06, ls=0.3, gamma=1.0e-6)])
    w = np.array([0.01, 0.035, 0.0599])
    plus = _evaluate(cat, 0.0, w)
    minus = _evaluate(cat, 0.0, -w)
    np.testing.assert_array_equal(plus, minus)


def test_lorentzian_width_matches_gamma():
    de, gamma = 0.06, 2.0e-6
    cat = ExcitedLevelCatalog([_entry(de, ls=1.0, gamma=gamma)])
    w = np.linspace(de - 10.0 * gamma, de + 10.0 * gamma, 20001)
    im = dynamic_polarizability(0.0, cat, w).imag
    half = im.max() / 2.0
    above = w[im >= half]
    fwhm = above[-1] - above[0]
    assert fwhm == pytest.approx(gamma, rel=0.01)


def test_catalog_additivity_is_exact():
    c1 = ExcitedLevelCatalog([_entry(0.055, ls=0.2)])
    c2 = ExcitedLevelCatalog([_entry(0.065, ls=0.7, manifold="n")])
    w = np.linspace(0.0, 0.05, 101)
    lhs = _evaluate(c1 + c2, 0.0, w)
    rhs = _evaluate(c1, 0.0, w) + _evaluate(c2, 0.0, w)
    np.testing.assert_array_equal(lhs, rhs)


def test_exact_pole_returns_nan_flag():
    cat = ExcitedLevelCatalog([_entry(0.06)])
    got = dynamic_polarizability(0.0, cat, 0.06)
    assert np.isnan(got.real) and np.isnan(got.imag)
    # a finite-width line never produces the NaN flag
    cat_g = ExcitedLevelCatalog([_entry(0.06, gamma=1.0e-8)])
    assert np.isfinite(dynamic_polarizability(0.0, cat_g, 0.06).real)


def test_scan_flags_strong_resonance_and_assignment():
    cat = ExcitedLevelCatalog([_entry(0.06, ls=1.0)])
    step = 1.0e-4
    spec = scan(0.0, cat, (0.0550137, 0.0650137), step)
    assert len(spec.pole_flags) == 0
    assert len(spec.resonance_flags) == 1
    i = spec.resonance_flags[0]
    assert spec.omega[i] < 0.06 < spec.omega[i + 1]
    assignments = assign_resonances(spec, cat)
    assert len(assignments) == 1
    a = assignments[0]
    assert not a.ambiguous
    assert len(a.matches) == 1 and a.matches[0].energy == 0.06


def test_scan_grid_pole_is_flagged_not_crossed():
    cat = ExcitedLevelCatalog([_entry(0.06, ls=1.0)])
    spec = scan(0.0, cat, (0.06, 0.0605), 1.0e-4)
    assert 0 in spec.pole_flags
    assert np.isnan(spec.alpha[0].real)


def test_weak_line_on_strong_background_not_flagged():
    cat = ExcitedLevelCatalog([
        _entry(0.06, ls=1.0e-6),
        _entry(0.5, ls=1.0, manifold="bg"),
    ])
    spec = scan(0.0, cat, (0.0550137, 0.0650137), 1.0e-4)
    assert len(spec.resonance_flags) == 0
    assert np.all(spec.alpha.real > 0.0)


def test_ambiguous_assignment_for_near_degenerate_lines():
    step = 1.0e-4
    cat = ExcitedLevelCatalog([
        _entry(0.06, ls=1.0, v=0),
        _entry(0.06 + 0.6 * step, ls=1.0, v=1),
    ])
    spec = scan(0.0, cat, (0.0550137, 0.0650137), step)
    assignments = assign_resonances(spec, cat)
    assert len(assignments) >= 1
    assert any(a.ambiguous for a in assignments)


def test_scan_input_validation():
    cat = ExcitedLevelCatalog([_entry(0.06)])
    with pytest.raises(ValueError):
        scan(0.0, cat, (0.05, 0.04), 1.0e-4)
    with pytest.raises(ValueError):
        scan(0.0, cat, (0.05, 0.06), -1.0)
    with pytest.raises(ValueError):
        scan(0.0, cat, (-0.01, 0.06), 1.0e-4)
    with pytest.raises(ValueError):
        dynamic_polarizability(0.0, cat, -0.01)


def test_trap_depth_prefactor_sign_linearity():
    # V0 per au of alpha per W/m^2 reduces to 2 pi a0^3 / c in SI units
    a0 = CONSTANTS.bohr_radius.si
    expect_h_per_wcm2 = (2.0 * np.pi * a0**3 / CONSTANTS.speed_of_light.si
                         / CONSTANTS.hartree.si) * 1.0e4
    got = trap_depth(1.0, 1.0)
    assert got.v0_hartree == pytest.approx(-expect_h_per_wcm2, rel=1.0e-9)
    # attractive for red detuning (positive Re alpha), repulsive for blue
    assert trap_depth(300.0, 1.0e4).v0_hartree < 0.0
    assert trap_depth(-300.0, 1.0e4).v0_hartree > 0.0
    # linear in intensity and in Re alpha; imaginary part ignored
    one = trap_depth(250.0 + 3.0j, 5.0e3).v0_hartree
    assert trap_depth(250.0, 1.0e4).v0_hartree == pytest.approx(2.0 * one)
    assert trap_depth(500.0 + 9.0j, 5.0e3).v0_hartree == pytest.approx(
        2.0 * one)
    # microkelvin column is the hartree column in different clothing
    mk = trap_depth(300.0, 1.0e4)
    assert mk.v0_microkelvin == pytest.approx(
        convert(mk.v0_hartree, "hartree", "K") * 1.0e6, rel=1.0e-12)
    with pytest.raises(ValueError):
        trap_depth(1.0, -5.0)


def test_rotational_factor_scope():
    assert rotational_factor(0, 1) == pytest.approx(1.0 / 3.0, abs=1.0e-15)
    for pair in [(1, 1), (0, 2), (1, 0), (0, 0)]:
        with pytest.raises(ValueError):
            rotational_factor(*pair)


def test_catalog_ordering_enforced():
    with pytest.raises(ValueError, match="increase strictly"):
        ExcitedLevelCatalog([_entry(0.06, v=0), _entry(0.055, v=1)])
    # interleaving across manifolds is legal
    cat = ExcitedLevelCatalog([
        _entry(0.06, manifold="a", v=0),
        _entry(0.055, manifold="b", v=0),
    ])
    assert len(cat) == 2


def test_catalog_save_load_round_trip(tmp_path):
    cat = ExcitedLevelCatalog([
        _entry(0.0571234567890123, ls=0.123456789012345, gamma=1.0e-7, v=0),
        _entry(0.0612345678901234, ls=0.9, v=1),
    ])
    path = tmp_path / "cat.csv"
    save_catalog(cat, path)
    back = load_catalog(path)
    # the file stores spectroscopy units, so hartree values can move by
    # one ulp on the way through; identity must hold to float precision
    for a, b in zip(back, cat):
        assert a.manifold == b.manifold and a.v == b.v and a.j == b.j
        assert a.source == b.source
        assert a.energy == pytest.approx(b.energy, rel=4.0e-16)
        assert a.gamma == pytest.approx(b.gamma, rel=4.0e-16)
        assert a.line_strength == pytest.approx(b.line_strength, rel=4.0e-16)
    # and a second save of the loaded catalog is a byte-level fixed point
    path2 = tmp_path / "cat2.csv"
    save_catalog(back, path2)
    assert path2.read_bytes() == path.read_bytes()


@pytest.fixture(scope="module")
def pure_model(mu_kr):
    from ccdimer.excited import builtin_excited_model

    def zero(r):
        return np.zeros_like(np.asarray(r, dtype=float))

    base = builtin_excited_model(mu_kr, j=1)
    return dataclasses.replace(base, xi_sigma_pi3=zero, xi_sigma_pi1=zero,
                               xi_pi3_pi1=zero, validate_tails=False)


def test_build_catalog_line_strengths(pure_model, mu_kr, curves):
    from ccdimer.excited import (excited_levels, excited_problem,
                                 single_channel_level, transition_dipole)
    from ccdimer.solver import RadialGrid

    grid = RadialGrid(5.0, 30.0, 901)
    ground = single_channel_level(curves["X1Sigma"], mu_kr, grid, v=0)
    r = np.linspace(5.0, 30.0, 2001)
    vmin = min(float(pure_model.v_sigma(r).min()),
               float(pure_model.v_pi3(r).min()),
               float(pure_model.v_pi1(r).min()))
    e_max = vmin + 2.0e-3
    d = {(0, 2): curves["d_X_1Pi"]}
    spec = ManifoldSpec(name="exc", symmetry="1",
                        problem=excited_problem(pure_model), dipole=d,
                        threshold=pure_model.lower_limit, j=1)
    cat = build_catalog(ground, [spec], grid, e_max)
    levels = excited_levels(pure_model, grid,
                            (vmin + 1.0e-9, e_max))
    assert len(cat) == len(levels) > 0
    for entry, (state, frac) in zip(cat, levels):
        assert entry.energy == pytest.approx(state.energy, abs=1.0e-12)
        expect = transition_dipole(ground, state, d) ** 2 / 3.0
        assert entry.line_strength == pytest.approx(expect, rel=1.0e-10)
        assert entry.source == "bound"
        if frac.f_pi1 < 1.0e-12:
            assert entry.line_strength < 1.0e-24


def test_build_catalog_skips_zero_minus_manifold(pure_model, mu_kr, curves):
    from ccdimer.excited import excited_problem, single_channel_level
    from ccdimer.solver import RadialGrid

    grid = RadialGrid(5.0, 30.0, 901)
    ground = single_channel_level(curves["X1Sigma"], mu_kr, grid, v=0)
    spec = ManifoldSpec(name="dark", symmetry="0-",
                        problem=excited_problem(pure_model), dipole=None,
                        threshold=pure_model.lower_limit, j=1)
    cat = build_catalog(ground, [spec], grid, pure_model.lower_limit)
    assert len(cat) == 0
