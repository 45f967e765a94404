"""Species records: bundled data, file parsing, derived quantities."""

import pytest

from ccdimer.constants import convert
from ccdimer.species import AtomSpecies, load_species, reduced_mass


def test_bundled_pair_identity(ka, rb):
    assert ka.nuclear_spin == 4.0
    assert rb.nuclear_spin == 1.5
    assert ka.electron_spin == 0.5 and rb.electron_spin == 0.5
    # inverted hyperfine doublet of the lighter atom: negative contact term
    assert ka.a_hf < 0.0 < rb.a_hf


def test_bundled_hyperfine_constants(ka, rb):
    assert convert(ka.a_hf, "hartree", "MHz") == pytest.approx(
        -285.7308, abs=1.0e-9)
    assert convert(rb.a_hf, "hartree", "MHz") == pytest.approx(
        3417.34130545215, abs=1.0e-8)


def test_bundled_g_factors(ka, rb):
    assert ka.g_s == pytest.approx(2.00229421, abs=1.0e-12)
    assert rb.g_s == pytest.approx(2.00233113, abs=1.0e-12)
    assert ka.g_i == pytest.approx(-0.32452500, abs=1.0e-12)
    assert rb.g_i == pytest.approx(1.83454533, abs=1.0e-12)
    # the two nuclear-moment-per-projection scales differ by about 5.7x,
    # and the moments themselves (g_i * i) by about a factor of two
    assert abs(ka.g_i / rb.g_i) == pytest.approx(0.1769, abs=2.0e-4)
    moment_ratio = abs(ka.g_i * ka.nuclear_spin) / (rb.g_i * rb.nuclear_spin)
    assert moment_ratio == pytest.approx(0.4717, abs=2.0e-4)


def test_masses_and_reduced_mass(ka, rb):
    assert ka.mass_u == pytest.approx(39.963998166, abs=1.0e-12)
    assert rb.mass_u == pytest.approx(86.909180531, abs=1.0e-12)
    mu = reduced_mass(ka.mass_au, rb.mass_au)
    assert mu == pytest.approx(49902.794502007404, rel=1.0e-14)
    assert mu < min(ka.mass_au, rb.mass_au)


def test_reduced_mass_symmetric_and_validated():
    assert reduced_mass(3.0, 5.0) == reduced_mass(5.0, 3.0)
    assert reduced_mass(2.0, 2.0) == 1.0
    with pytest.raises(ValueError):
        reduced_mass(-1.0, 5.0)


def test_load_species_from_custom_file(tmp_path):
    f = tmp_path / "one.toml"
    f.write_text(
        '[X7]\n'
        'mass         = { value = 7.0, unit = "u" }\n'
        'nuclear_spin = { value = 1.5, unit = "1" }\n'
        'a_hf         = { value = 100.0, unit = "MHz" }\n'
        'g_S          = { value = 2.0, unit = "1" }\n'
        'g_I          = { value = -1.0, unit = "1" }\n')
    table = load_species(f)
    assert set(table) == {"X7"}
    sp = table["X7"]
    assert isinstance(sp, AtomSpecies)
    assert sp.nuclear_spin == 1.5
    assert convert(sp.a_hf, "hartree", "MHz") == pytest.approx(100.0)


def test_load_species_missing_field(tmp_path):
    f = tmp_path / "bad.toml"
    f.write_text(
        '[X7]\n'
        'mass         = { value = 7.0, unit = "u" }\n'
        'nuclear_spin = { value = 1.5, unit = "1" }\n')
    with pytest.raises(Exception):
        load_species(f)


def test_load_species_missing_file(tmp_path):
    with pytest.raises(Exception):
        load_species(tmp_path / "absent.toml")
