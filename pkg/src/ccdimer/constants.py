"""Physical constants and unit conversions.

All solver-facing code works in Hartree atomic units (hbar = m_e = e =
4*pi*eps0 = 1).  SI values are taken from scipy.constants, i.e. the CODATA
adjustment shipped with the installed scipy (CODATA 2022 for scipy >= 1.15).
Conversions happen at I/O boundaries only; internal quantities are never
mixed-unit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from scipy import constants as _sc

__all__ = [
    "Constant",
    "PhysicalConstants",
    "CONSTANTS",
    "convert",
    "ENERGY_UNITS",
    "LENGTH_UNITS",
]

_pc = _sc.physical_constants


@dataclass(frozen=True)
class Constant:
    """One physical constant: SI value plus the factor taking SI to atomic units.

    ``si * to_au`` is the value in atomic units; ``from_au`` is the exact
    float inverse, so au -> SI -> au round-trips to better than 1e-12.
    """

    si: float
    to_au: float
    unit_si: str

    @property
    def au(self) -> float:
        return self.si * self.to_au

    @property
    def from_au(self) -> float:
        return 1.0 / self.to_au


def _const(name: str, to_au: float, unit: str) -> Constant:
    return Constant(si=_pc[name][0], to_au=to_au, unit_si=unit)


# Atomic-unit scale factors (SI value of one atomic unit of each dimension).
_EH_SI = _pc["Hartree energy"][0]            # J
_A0_SI = _pc["Bohr radius"][0]               # m
_ME_SI = _pc["electron mass"][0]             # kg
_HBAR_SI = _sc.hbar                          # J s
_TIME_AU_SI = _HBAR_SI / _EH_SI              # s
_VEL_AU_SI = _A0_SI / _TIME_AU_SI            # m/s  (= alpha * c)
_MOM_AU_SI = 2.0 * _pc["Bohr magneton"][0]   # J/T, hbar*e/m_e


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA constants used throughout, each with its SI->au factor.

    Sources (all via scipy.constants.physical_constants):
      hbar            "reduced Planck constant"
      bohr_radius     "Bohr radius"
      hartree         "Hartree energy"
      nuclear_magneton"nuclear magneton"
      bohr_magneton   "Bohr magneton"
      speed_of_light  "speed of light in vacuum"
      atomic_mass     "atomic mass constant" (kg per u)
    """

    hbar: Constant = field(
        default_factory=lambda: Constant(_HBAR_SI, 1.0 / _HBAR_SI, "J s"))
    bohr_radius: Constant = field(
        default_factory=lambda: _const("Bohr radius", 1.0 / _A0_SI, "m"))
    hartree: Constant = field(
        default_factory=lambda: _const("Hartree energy", 1.0 / _EH_SI, "J"))
    nuclear_magneton: Constant = field(
        default_factory=lambda: _const("nuclear magneton", 1.0 / _MOM_AU_SI, "J/T"))
    bohr_magneton: Constant = field(
        default_factory=lambda: _const("Bohr magneton", 1.0 / _MOM_AU_SI, "J/T"))
    speed_of_light: Constant = field(
        default_factory=lambda: _const("speed of light in vacuum", 1.0 / _VEL_AU_SI, "m/s"))
    atomic_mass: Constant = field(
        default_factory=lambda: _const("atomic mass constant", 1.0 / _ME_SI, "kg"))

    # Zeeman matrix elements are assembled as g * magneton * B with B in gauss,
    # so expose the magnetons directly in hartree/gauss.
    @property
    def mu_b_hartree_per_gauss(self) -> float:
        return self.bohr_magneton.si / _EH_SI * 1.0e-4

    @property
    def mu_n_hartree_per_gauss(self) -> float:
        return self.nuclear_magneton.si / _EH_SI * 1.0e-4

    @property
    def fine_structure(self) -> float:
        return _sc.alpha


CONSTANTS = PhysicalConstants()

# ---------------------------------------------------------------------------
# Unit conversion.  Each supported unit maps to (dimension, factor-to-base).
# Base units: hartree for energy, bohr for length.  Conversions are linear,
# so composing them is associative; converting across dimensions is an error.
# ---------------------------------------------------------------------------

_HARTREE_CM1 = _pc["hartree-inverse meter relationship"][0] / 100.0
_HARTREE_HZ = _pc["hartree-hertz relationship"][0]
_HARTREE_K = _pc["hartree-kelvin relationship"][0]

ENERGY_UNITS = {
    "hartree": 1.0,
    "cm-1": 1.0 / _HARTREE_CM1,
    "GHz": 1.0e9 / _HARTREE_HZ,
    "MHz": 1.0e6 / _HARTREE_HZ,
    "K": 1.0 / _HARTREE_K,
    "J": 1.0 / _EH_SI,
}

LENGTH_UNITS = {
    "a0": 1.0,
    "bohr": 1.0,
    "nm": 1.0e-9 / _A0_SI,
}

_UNIT_TABLE: dict[str, tuple[str, float]] = {}
for _u, _f in ENERGY_UNITS.items():
    _UNIT_TABLE[_u] = ("energy", _f)
for _u, _f in LENGTH_UNITS.items():
    _UNIT_TABLE[_u] = ("length", _f)


def convert(value, from_unit: str, to_unit: str):
    """Convert a value (scalar or array) between two units of one dimension.

    Supported units: energy {hartree, cm-1, GHz, MHz, K, J} and length
    {a0, bohr, nm}.  Raises ValueError for an unknown unit or a conversion
    that crosses dimensions.
    """
    try:
        dim_from, f_from = _UNIT_TABLE[from_unit]
    except KeyError:
        raise ValueError(
            f"unknown unit {from_unit!r}; known units: {sorted(_UNIT_TABLE)}") from None
    try:
        dim_to, f_to = _UNIT_TABLE[to_unit]
    except KeyError:
        raise ValueError(
            f"unknown unit {to_unit!r}; known units: {sorted(_UNIT_TABLE)}") from None
    if dim_from != dim_to:
        raise ValueError(
            f"cannot convert {from_unit!r} ({dim_from}) to {to_unit!r} ({dim_to})")
    return value * (f_from / f_to)
