"""Atomic species data and field configuration.

Species records (mass, nuclear spin, Fermi-contact coefficient, g-factors)
live in an editable TOML file; see ``data/species.toml`` for the format and
the source documentation.  Sign conventions used everywhere downstream:

  contact term      a_hf * s . i                  (a_hf carries its sign)
  electron Zeeman   +g_S * mu_B * m_s * B
  nuclear Zeeman    -g_I * mu_N * m_i * B         (g_I = mu/i, nuclear moment
                                                   in nuclear magnetons / spin)
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib as _toml
else:
    import tomli as _toml

from .constants import CONSTANTS, convert

__all__ = [
    "AtomSpecies",
    "FieldConfig",
    "reduced_mass",
    "load_species",
    "default_species_path",
]

_HALF_INT_TOL = 1.0e-9


def _is_half_integer(x: float) -> bool:
    return abs(2.0 * x - round(2.0 * x)) < _HALF_INT_TOL


@dataclass(frozen=True)
class AtomSpecies:
    """One alkali atom in its electronic ground state (s = 1/2)."""

    name: str
    mass_u: float          # atomic mass in unified amu
    nuclear_spin: float    # i, non-negative half-integer
    a_hf: float            # Fermi-contact coefficient, hartree
    g_s: float             # electronic g-factor (~2.0023, positive)
    g_i: float             # nuclear g-factor, mu_N units, moment = g_i * i
    electron_spin: float = 0.5

    def __post_init__(self):
        if self.mass_u <= 0.0:
            raise ValueError(f"{self.name}: mass must be positive, got {self.mass_u}")
        if self.electron_spin != 0.5:
            raise ValueError(
                f"{self.name}: only spin-1/2 electronic ground states are supported")
        if self.nuclear_spin < 0.0 or not _is_half_integer(self.nuclear_spin):
            raise ValueError(
                f"{self.name}: nuclear spin must be a non-negative half-integer, "
                f"got {self.nuclear_spin}")

    @property
    def mass_au(self) -> float:
        """Mass in electron masses."""
        return self.mass_u * CONSTANTS.atomic_mass.au


@dataclass(frozen=True)
class FieldConfig:
    """Static magnetic field along the quantization axis."""

    b_gauss: float

    def __post_init__(self):
        if self.b_gauss < 0.0:
            raise ValueError(f"magnetic field must be >= 0, got {self.b_gauss} G")


def reduced_mass(mass_a: float, mass_b: float) -> float:
    """Two-body reduced mass, in whatever unit the inputs share."""
    if mass_a <= 0.0 or mass_b <= 0.0:
        raise ValueError(f"masses must be positive, got {mass_a}, {mass_b}")
    return mass_a * mass_b / (mass_a + mass_b)


def default_species_path() -> Path:
    return Path(__file__).parent / "data" / "species.toml"


_FIELDS = {
    "mass": "u",
    "nuclear_spin": "1",
    "a_hf": None,        # any energy unit, declared in the file
    "g_S": "1",
    "g_I": "1",
}


def load_species(path: str | Path | None = None) -> dict[str, AtomSpecies]:
    """Load all species records from a TOML data file.

    Every field is a ``{value = ..., unit = "..."}`` table so the file is
    self-describing; a_hf may be given in any supported energy unit and is
    converted to hartree here.
    """
    path = Path(path) if path is not None else default_species_path()
    with open(path, "rb") as fh:
        raw = _toml.load(fh)

    out: dict[str, AtomSpecies] = {}
    for name, rec in raw.items():
        if not isinstance(rec, dict):
            raise ValueError(f"{path}: species {name!r}: expected a table of fields")
        missing = sorted(set(_FIELDS) - set(rec))
        if missing:
            raise ValueError(f"{path}: species {name!r}: missing fields {missing}")
        extra = sorted(set(rec) - set(_FIELDS))
        if extra:
            raise ValueError(f"{path}: species {name!r}: unknown fields {extra}")

        vals = {}
        for key, expect_unit in _FIELDS.items():
            fld = rec[key]
            if not isinstance(fld, dict) or set(fld) != {"value", "unit"}:
                raise ValueError(
                    f"{path}: species {name!r}: field {key!r} must be "
                    f"{{value = ..., unit = \"...\"}}")
            if expect_unit is not None and fld["unit"] != expect_unit:
                raise ValueError(
                    f"{path}: species {name!r}: field {key!r} must be in "
                    f"unit {expect_unit!r}, got {fld['unit']!r}")
            vals[key] = float(fld["value"])
            if key == "a_hf":
                vals[key] = convert(vals[key], fld["unit"], "hartree")

        out[name] = AtomSpecies(
            name=name,
            mass_u=vals["mass"],
            nuclear_spin=vals["nuclear_spin"],
            a_hf=vals["a_hf"],
            g_s=vals["g_S"],
            g_i=vals["g_I"],
        )
    if not out:
        raise ValueError(f"{path}: no species records found")
    return out
