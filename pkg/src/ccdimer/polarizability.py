"""Dynamic polarizability of ground ro-vibrational levels.

The complex polarizability of level g at photon energy w (all atomic units)
is a sum over an excited-level catalog:

    alpha(w) = sum_k  ls_k * [ 1/(dE_k - i g_k/2 - w) + 1/(dE_k - i g_k/2 + w) ]

with dE_k = E_k - E_g, width g_k, and ls_k the M'-summed squared transition
dipole for the chosen polarization.  Re alpha sets the optical trap depth,
Im alpha the photon-scattering loss; a resonance appears wherever w crosses
a dE_k.  The continuum of each excited manifold enters through the same sum
as box-discretized pseudo-levels (hard wall at the grid's R_max), whose line
strengths absorb the local density of states through the box normalization.

alpha is reported in atomic units of polarizability.  Conversion of
-Re(alpha) x intensity into a physical trap depth carries the cycle-averaged
prefactor 1/(2 eps0 c): V0 = -Re(alpha) I / (2 eps0 c), evaluated here in
hartree and microkelvin (``trap_depth``).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from math import fsum
from pathlib import Path

import numpy as np
from scipy import constants as _sc

from .constants import convert
from .solver import BoundState, RadialGrid, solve_dvr
from .excited import transition_dipole

__all__ = [
    "CatalogEntry",
    "ExcitedLevelCatalog",
    "ManifoldSpec",
    "build_catalog",
    "load_catalog",
    "save_catalog",
    "dynamic_polarizability",
    "PolarizabilitySpectrum",
    "scan",
    "assign_resonances",
    "ResonanceAssignment",
    "TrapDepth",
    "trap_depth",
    "rotational_factor",
]

#: default scan step, 0.05 cm-1 in hartree
DEFAULT_SCAN_STEP = convert(0.05, "cm-1", "hartree")

#: |alpha| (au) that a Re-alpha sign change must exceed to be flagged
DEFAULT_FLAG_THRESHOLD = 1.0e4

#: squared-dipole orientation factor for J=0 -> J'=1, single polarization
ISOTROPIC_J0_FACTOR = 1.0 / 3.0


@dataclass(frozen=True)
class CatalogEntry:
    """One excited ro-vibrational level (or continuum pseudo-level)."""

    manifold: str
    v: int
    j: int
    energy: float          # hartree, ground-dissociation zero
    gamma: float           # hartree, >= 0
    line_strength: float   # au, >= 0 (M'-summed squared dipole)
    source: str = "bound"  # "bound" | "box-continuum"

    def __post_init__(self):
        if self.gamma < 0.0:
            raise ValueError(f"width must be >= 0, got {self.gamma}")
        if self.line_strength < 0.0:
            raise ValueError(
                f"line strength must be >= 0, got {self.line_strength}")
        if self.source not in ("bound", "box-continuum"):
            raise ValueError(f"unknown source tag {self.source!r}")


class ExcitedLevelCatalog:
    """Immutable, per-manifold-ordered list of catalog entries."""

    def __init__(self, entries):
        entries = tuple(entries)
        last: dict[tuple[str, int], float] = {}
        for e in entries:
            key = (e.manifold, e.j)
            if key in last and e.energy <= last[key]:
                raise ValueError(
                    f"catalog energies must increase strictly within each "
                    f"(manifold, J) series; {key} has {e.energy!r} after "
                    f"{last[key]!r}")
            last[key] = e.energy
        self.entries = entries

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __add__(self, other: "ExcitedLevelCatalog") -> "ExcitedLevelCatalog":
        return ExcitedLevelCatalog(self.entries + other.entries)

    def sha256(self) -> str:
        h = hashlib.sha256()
        for e in self.entries:
            h.update(repr((e.manifold, e.v, e.j, e.energy, e.gamma,
                           e.line_strength, e.source)).encode())
        return h.hexdigest()


def rotational_factor(j_ground: int, j_excited: int) -> float:
    """M'-summed orientation factor multiplying the squared vibronic dipole.

    Implemented for the J=0 -> J'=1 case used throughout (isotropic 1/3 per
    polarization component); other rotational branches are out of scope and
    raise.
    """
    if j_ground == 0 and j_excited == 1:
        return ISOTROPIC_J0_FACTOR
    raise ValueError(
        f"rotational factor implemented only for J=0 -> J'=1, got "
        f"J={j_ground} -> J'={j_excited}")


@dataclass(frozen=True)
class ManifoldSpec:
    """Inputs needed to catalog one excited Omega' manifold.

    ``problem`` is the solver-ready radial problem of the manifold;
    ``dipole`` the channel-pair dipole map to the ground level (see
    ``transition_dipole``); ``threshold`` its lowest dissociation energy,
    used to tag entries above it as box-continuum; ``gamma`` a constant
    natural width or a callable energy -> width (hartree).  ``symmetry``
    is the Omega label ("0+", "0-", "1", ...): 0- manifolds are skipped
    for a 0+ ground level (their dipole vanishes identically).
    """

    name: str
    symmetry: str
    problem: object
    dipole: dict | None
    threshold: float
    j: int = 1
    gamma: object = 0.0
    window_bottom: float | None = None


def build_catalog(ground: BoundState, specs, grid: RadialGrid, e_max: float,
                  *, ground_symmetry: str = "0+",
                  ground_j: int = 0) -> ExcitedLevelCatalog:
    """Solve every declared manifold and assemble its dipole catalog.

    Levels are collected from each manifold's potential minimum up to
    ``e_max`` (absolute, ground-dissociation zero); entries above the
    manifold threshold are box-discretized continuum pseudo-levels.  Line
    strengths are |<ground| d |level>|^2 times the rotational factor.
    """
    entries = []
    for spec in specs:
        if spec.symmetry == "0-" and ground_symmetry == "0+":
            # strict selection rule: no 0- contribution to a 0+ level
            continue
        if spec.dipole is None:
            raise ValueError(
                f"manifold {spec.name!r} is declared but has no dipole "
                f"function")
        factor = rotational_factor(ground_j, spec.j)
        bottom = spec.window_bottom
        if bottom is None:
            w_all = spec.problem.w_on_grid(grid.points)
            bottom = float(np.min(np.linalg.eigvalsh(w_all))) - 1.0e-9
        states = solve_dvr(spec.problem, grid, (bottom, e_max),
                           continuum_ok=True)
        for v, st in enumerate(states):
            ls = factor * transition_dipole(ground, st, spec.dipole) ** 2
            gam = spec.gamma(st.energy) if callable(spec.gamma) \
                else float(spec.gamma)
            entries.append(CatalogEntry(
                manifold=spec.name, v=v, j=spec.j, energy=st.energy,
                gamma=gam, line_strength=ls,
                source="bound" if st.energy < spec.threshold
                else "box-continuum"))
    return ExcitedLevelCatalog(entries)


_CATALOG_COLUMNS = "manifold, v, J, E_cm1, gamma_MHz, line_strength_au"


def save_catalog(catalog: ExcitedLevelCatalog, path) -> None:
    """Write a catalog as CSV (energies cm-1, widths MHz, strengths au)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# columns: {_CATALOG_COLUMNS}\n")
        fh.write("# source tags preserved in a trailing comment per row\n")
        for e in catalog:
            fh.write(f"{e.manifold}, {e.v}, {e.j}, "
                     f"{convert(e.energy, 'hartree', 'cm-1')!r}, "
                     f"{convert(e.gamma, 'hartree', 'MHz')!r}, "
                     f"{e.line_strength!r}  # {e.source}\n")


def load_catalog(path) -> ExcitedLevelCatalog:
    """Read a catalog CSV written by ``save_catalog`` (or by hand)."""
    path = Path(path)
    entries = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            line, _, comment = line.partition("#")
            source = comment.strip() or "bound"
            parts = [p.strip() for p in line.split(",")]
            if len(parts) != 6:
                raise ValueError(
                    f"{path}:{lineno}: expected 6 columns "
                    f"({_CATALOG_COLUMNS}), got {len(parts)}")
            try:
                entries.append(CatalogEntry(
                    manifold=parts[0], v=int(parts[1]), j=int(parts[2]),
                    energy=convert(float(parts[3]), "cm-1", "hartree"),
                    gamma=convert(float(parts[4]), "MHz", "hartree"),
                    line_strength=float(parts[5]), source=source))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return ExcitedLevelCatalog(entries)


def _evaluate(catalog: ExcitedLevelCatalog, e_level: float, omega):
    """Two-term catalog sum; no sign restriction on omega (even function).

    Each exact pole (gamma = 0 and omega hitting a resonance) yields
    complex(nan, nan) at that grid point: that NaN IS the declared pole
    flag, distinguishing an unphysical evaluation from a large finite one.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=float))
    total = np.zeros(omega.shape, dtype=complex)
    with np.errstate(divide="ignore", invalid="ignore"):
        for e in catalog:
            de = e.energy - e_level
            d_minus = de - 1j * (e.gamma / 2.0) - omega
            d_plus = de - 1j * (e.gamma / 2.0) + omega
            term = np.where(d_minus == 0, complex(np.nan, np.nan),
                            np.divide(1.0, np.where(d_minus == 0, 1, d_minus)))
            term = term + np.where(d_plus == 0, complex(np.nan, np.nan),
                                   np.divide(1.0, np.where(d_plus == 0, 1,
                                                           d_plus)))
            total = total + e.line_strength * term
    return total


def dynamic_polarizability(level, catalog: ExcitedLevelCatalog, omega):
    """alpha(omega) in atomic units; omega in hartree, scalar or array.

    ``level`` is a BoundState or a plain energy (hartree) on the same axis
    as the catalog.  Requires omega >= 0 (the function is even; negative
    arguments signal a unit mistake).  Exact gamma=0 poles return
    complex(nan, nan) as the declared pole flag.
    """
    e_level = level.energy if isinstance(level, BoundState) else float(level)
    scalar = np.isscalar(omega)
    omega_arr = np.atleast_1d(np.asarray(omega, dtype=float))
    if np.any(omega_arr < 0.0):
        raise ValueError("photon energy must be >= 0")
    out = _evaluate(catalog, e_level, omega_arr)
    return complex(out[0]) if scalar else out


@dataclass(frozen=True)
class PolarizabilitySpectrum:
    """alpha on a photon-energy grid, with flagged resonance crossings."""

    omega: np.ndarray            # hartree
    alpha: np.ndarray            # complex, au
    level_energy: float
    step: float
    resonance_flags: np.ndarray  # indices i where Re alpha crosses 0 in (i, i+1)
    pole_flags: np.ndarray       # indices with the NaN pole flag
    catalog_sha256: str
    meta: dict = field(default_factory=dict, compare=False)


def scan(level, catalog: ExcitedLevelCatalog, omega_range,
         step: float = DEFAULT_SCAN_STEP, *,
         flag_threshold: float = DEFAULT_FLAG_THRESHOLD) -> PolarizabilitySpectrum:
    """Evaluate alpha on a uniform photon-energy grid and flag resonances.

    A resonance is flagged between consecutive grid points where Re alpha
    changes sign while |alpha| exceeds ``flag_threshold`` on at least one
    side (plain zero crossings of a small smooth background are not
    resonances).
    """
    if step <= 0.0:
        raise ValueError(f"step must be > 0, got {step}")
    lo, hi = map(float, omega_range)
    if hi < lo:
        raise ValueError(f"empty omega range [{lo}, {hi}]")
    n = int(np.floor((hi - lo) / step + 0.5)) + 1
    omega = lo + step * np.arange(n)
    e_level = level.energy if isinstance(level, BoundState) else float(level)
    if lo < 0.0:
        raise ValueError("photon energies must be >= 0")
    alpha = _evaluate(catalog, e_level, omega)

    re = alpha.real
    finite = np.isfinite(re)
    sign_change = (re[:-1] * re[1:] < 0.0) & finite[:-1] & finite[1:]
    big = (np.abs(alpha[:-1]) > flag_threshold) | \
          (np.abs(alpha[1:]) > flag_threshold)
    flags = np.nonzero(sign_change & big)[0]
    poles = np.nonzero(~np.isfinite(alpha))[0]
    return PolarizabilitySpectrum(
        omega=omega, alpha=alpha, level_energy=e_level, step=step,
        resonance_flags=flags, pole_flags=poles,
        catalog_sha256=catalog.sha256())


@dataclass(frozen=True)
class ResonanceAssignment:
    """One flagged crossing matched against the catalog."""

    omega: float                    # flag position (midpoint), hartree
    matches: tuple                  # CatalogEntry candidates within step/2
    ambiguous: bool                 # more than one candidate within the step


def assign_resonances(spectrum: PolarizabilitySpectrum,
                      catalog: ExcitedLevelCatalog) -> list[ResonanceAssignment]:
    """Match every flagged crossing to catalog transition energies.

    A flag at omega matches entries with |dE - omega| <= step/2; if two or
    more entries fall within one step of the flag both are listed and the
    assignment is marked ambiguous.  Flags with no match are returned with
    an empty match tuple.
    """
    out = []
    de = np.array([e.energy - spectrum.level_energy for e in catalog])
    entries = list(catalog)
    for i in spectrum.resonance_flags:
        w = 0.5 * (spectrum.omega[i] + spectrum.omega[i + 1])
        near = [entries[k] for k in np.nonzero(
            np.abs(de - w) <= spectrum.step / 2.0)[0]]
        within_step = int(np.sum(np.abs(de - w) <= spectrum.step))
        out.append(ResonanceAssignment(
            omega=float(w), matches=tuple(near),
            ambiguous=within_step > 1))
    return out


# physical trap-depth prefactor: alpha[au] -> V0[hartree] per (W/m^2)
_ALPHA_AU_SI = _sc.value("atomic unit of electric polarizability")
_HARTREE_J = _sc.value("Hartree energy")
_V0_HARTREE_PER_WM2 = _ALPHA_AU_SI / (2.0 * _sc.epsilon_0 * _sc.c) / _HARTREE_J
_KELVIN_PER_HARTREE = _HARTREE_J / _sc.k


@dataclass(frozen=True)
class TrapDepth:
    """Optical potential depth for one (alpha, intensity) pair."""

    v0_hartree: float
    v0_microkelvin: float
    alpha_re_au: float
    intensity_w_cm2: float


def trap_depth(alpha: complex, intensity_w_cm2: float) -> TrapDepth:
    """V0 = -Re(alpha) * I, with the cycle-averaged 1/(2 eps0 c) attached.

    Positive Re alpha gives a negative (attractive) V0.  Intensity in
    W/cm^2; output in hartree and microkelvin.
    """
    if intensity_w_cm2 < 0.0:
        raise ValueError(f"intensity must be >= 0, got {intensity_w_cm2}")
    i_si = intensity_w_cm2 * 1.0e4
    v0_h = -np.real(alpha) * i_si * _V0_HARTREE_PER_WM2
    return TrapDepth(
        v0_hartree=float(v0_h),
        v0_microkelvin=float(v0_h * _KELVIN_PER_HARTREE * 1.0e6),
        alpha_re_au=float(np.real(alpha)),
        intensity_w_cm2=float(intensity_w_cm2))
