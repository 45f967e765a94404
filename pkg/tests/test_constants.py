"""Unit conversion table: frozen anchors, round trips, error paths."""

import math

import pytest
from hypothesis import given, strategies as st

from ccdimer.constants import CONSTANTS, ENERGY_UNITS, LENGTH_UNITS, convert

ENERGY_NAMES = sorted(ENERGY_UNITS)
LENGTH_NAMES = sorted(LENGTH_UNITS)


def test_hartree_in_wavenumbers():
    # CODATA 2018 hartree-to-inverse-meter quotient / 100
    assert convert(1.0, "hartree", "cm-1") == pytest.approx(
        219474.63136320, rel=1.0e-11)


def test_wavenumber_in_ghz_is_exact_speed_of_light():
    # 1 cm^-1 = c * 100 Hz-per-(m^-1) = 29.9792458 GHz, exact by definition
    assert convert(1.0, "cm-1", "GHz") == pytest.approx(
        29.9792458, rel=1.0e-13)


def test_kelvin_in_megahertz():
    # k_B / h = 2.0836619123e10 Hz/K (exact SI definitions)
    assert convert(1.0, "K", "MHz") == pytest.approx(
        20836.619123, rel=1.0e-10)


def test_bohr_in_nanometers():
    assert convert(1.0, "a0", "nm") == pytest.approx(
        0.0529177210544, rel=1.0e-11)
    assert convert(1.0, "bohr", "a0") == 1.0


def test_identity_conversion_is_exact():
    assert convert(0.123456789, "GHz", "GHz") == 0.123456789
    assert convert(-3.5, "a0", "a0") == -3.5


@given(
    value=st.floats(min_value=1.0e-6, max_value=1.0e6,
                    allow_nan=False, allow_infinity=False),
    u=st.sampled_from(ENERGY_NAMES),
    v=st.sampled_from(ENERGY_NAMES),
)
def test_energy_round_trip(value, u, v):
    back = convert(convert(value, u, v), v, u)
    assert math.isclose(back, value, rel_tol=1.0e-12)


@given(
    value=st.floats(min_value=1.0e-6, max_value=1.0e6,
                    allow_nan=False, allow_infinity=False),
    u=st.sampled_from(LENGTH_NAMES),
    v=st.sampled_from(LENGTH_NAMES),
)
def test_length_round_trip(value, u, v):
    back = convert(convert(value, u, v), v, u)
    assert math.isclose(back, value, rel_tol=1.0e-12)


@given(
    value=st.floats(min_value=1.0e-3, max_value=1.0e3,
                    allow_nan=False, allow_infinity=False),
    u=st.sampled_from(ENERGY_NAMES),
    mid=st.sampled_from(ENERGY_NAMES),
    v=st.sampled_from(ENERGY_NAMES),
)
def test_energy_conversion_is_transitive(value, u, mid, v):
    direct = convert(value, u, v)
    via = convert(convert(value, u, mid), mid, v)
    assert math.isclose(direct, via, rel_tol=1.0e-12)


def test_unknown_unit_rejected():
    with pytest.raises(ValueError, match="kHz"):
        convert(1.0, "MHz", "kHz")


def test_cross_family_rejected():
    with pytest.raises(ValueError):
        convert(1.0, "nm", "GHz")


def test_constant_consistency():
    # hartree energy of one bohr-magneton gauss: mu_B * 1e-4 T / E_h
    expect = CONSTANTS.bohr_magneton.si * 1.0e-4 / CONSTANTS.hartree.si
    assert CONSTANTS.mu_b_hartree_per_gauss == pytest.approx(
        expect, rel=1.0e-14)
    expect_n = CONSTANTS.nuclear_magneton.si * 1.0e-4 / CONSTANTS.hartree.si
    assert CONSTANTS.mu_n_hartree_per_gauss == pytest.approx(
        expect_n, rel=1.0e-14)
