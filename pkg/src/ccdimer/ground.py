"""Ground-manifold coupled-channel model.

Couples the singlet and triplet Born-Oppenheimer potentials through the
atomic spin structure:

    H = -(1/2mu) d^2/dR^2 + l(l+1)/(2 mu R^2)
        + V_X(R) P_(S=0) + V_a(R) P_(S=1) + H_int

    H_int = a_A s_A.i_A + a_B s_B.i_B
            + (g_SA s_Az + g_SB s_Bz) mu_B B - (g_IA i_Az + g_IB i_Bz) mu_N B

H_int conserves M_F = m_S + m_iA + m_iB, so each (l, m_l, M_F) block is an
independent CoupledChannelProblem.  The weak magnetic dipole-dipole coupling
between the electron spins is not part of H; it is applied afterwards as a
first-order energy correction (``dipole_dipole_shifts``), which leaves l and
m_l good labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .angular import ChannelBasis
from .constants import CONSTANTS
from .solver import BoundState, CoupledChannelProblem
from .species import AtomSpecies, FieldConfig, reduced_mass

__all__ = [
    "GroundModel",
    "SpinHamiltonian",
    "build_ground_model",
    "assemble_spin_hamiltonian",
    "zeeman_derivative",
    "potential_matrix",
    "atomic_thresholds",
    "AtomicThresholds",
    "ground_problem",
    "nuclear_zeeman_energy",
    "triplet_fraction",
    "dipole_dipole_shifts",
]

SPIN_SYMMETRY_TOL = 1.0e-14


@dataclass(frozen=True)
class GroundModel:
    """Species pair, the two ground potentials, one channel block, field."""

    species_a: AtomSpecies
    species_b: AtomSpecies
    v_x: object
    v_a: object
    basis: ChannelBasis
    field: FieldConfig

    def __post_init__(self):
        if self.v_x.asymptote != self.v_a.asymptote:
            raise ValueError(
                "singlet and triplet curves must dissociate to one atomic "
                f"limit: declared asymptotes differ, {self.v_x.asymptote!r} "
                f"vs {self.v_a.asymptote!r} hartree")
        for sp, spin, side in ((self.species_a, self.basis.spin_ia, "A"),
                               (self.species_b, self.basis.spin_ib, "B")):
            if sp.nuclear_spin != spin:
                raise ValueError(
                    f"basis was enumerated for i_{side} = {spin}, species "
                    f"{sp.name} has i = {sp.nuclear_spin}")

    @property
    def mu(self) -> float:
        return reduced_mass(self.species_a.mass_au, self.species_b.mass_au)


def build_ground_model(species_a: AtomSpecies, species_b: AtomSpecies,
                       v_x, v_a, ell: int, m_ell: int, m_f: float,
                       b_gauss: float) -> GroundModel:
    """Enumerate the channel block and assemble the model in one step."""
    basis = ChannelBasis(species_a.nuclear_spin, species_b.nuclear_spin,
                         ell, m_ell, m_f)
    return GroundModel(species_a, species_b, v_x, v_a, basis,
                       FieldConfig(b_gauss))


def _ladder(j: float, m: float) -> float:
    """sqrt(j(j+1) - m(m+1)): coefficient of j+ |j m> -> |j m+1>."""
    return sqrt(j * (j + 1) - m * (m + 1))


def _product_contact(basis: ChannelBasis, which: str) -> np.ndarray:
    """s.i for one atom in the product basis, in units of the contact a."""
    prods = basis.product_channels
    n = len(prods)
    half = 0.5
    spin_i = basis.spin_ia if which == "a" else basis.spin_ib
    mat = np.zeros((n, n))
    for p, (msa, msb, mia, mib) in enumerate(prods):
        ms, mi = (msa, mia) if which == "a" else (msb, mib)
        spectator = (msb, mib) if which == "a" else (msa, mia)
        for q, (msa2, msb2, mia2, mib2) in enumerate(prods):
            ms2, mi2 = (msa2, mia2) if which == "a" else (msb2, mib2)
            spect2 = (msb2, mib2) if which == "a" else (msa2, mia2)
            if spect2 != spectator:
                continue
            if ms2 == ms and mi2 == mi:
                mat[p, q] += ms * mi
            # (1/2)(s+ i- + s- i+); real symmetric
            if ms == ms2 + 1 and mi == mi2 - 1:
                mat[p, q] += 0.5 * _ladder(half, ms2) * _ladder(spin_i, mi2 - 1)
            if ms == ms2 - 1 and mi == mi2 + 1:
                mat[p, q] += 0.5 * _ladder(half, ms) * _ladder(spin_i, mi2)
    return mat


@dataclass(frozen=True)
class SpinHamiltonian:
    """R-independent interaction matrix over one channel block (hartree).

    The four physical contributions are kept separately; ``matrix`` is their
    sum.  All pieces are expressed in the coupled |S m_S> basis of the block.
    """

    basis: ChannelBasis
    contact_a: np.ndarray
    contact_b: np.ndarray
    zeeman_e: np.ndarray
    zeeman_n: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return self.contact_a + self.contact_b + self.zeeman_e + self.zeeman_n


def assemble_spin_hamiltonian(model: GroundModel) -> SpinHamiltonian:
    """Contact + Zeeman matrix of the block, in the coupled basis."""
    basis = model.basis
    sp_a, sp_b = model.species_a, model.species_b
    b = model.field.b_gauss
    u = basis.u_coupled_from_product
    mu_b = CONSTANTS.mu_b_hartree_per_gauss
    mu_n = CONSTANTS.mu_n_hartree_per_gauss

    ca = sp_a.a_hf * _product_contact(basis, "a")
    cb = sp_b.a_hf * _product_contact(basis, "b")
    prods = basis.product_channels
    ze = np.diag([mu_b * b * (sp_a.g_s * msa + sp_b.g_s * msb)
                  for msa, msb, _, _ in prods])
    zn = np.diag([-mu_n * b * (sp_a.g_i * mia + sp_b.g_i * mib)
                  for _, _, mia, mib in prods])

    pieces = [u @ m @ u.T for m in (ca, cb, ze, zn)]
    for m in pieces:
        asym = np.max(np.abs(m - m.T))
        if asym > SPIN_SYMMETRY_TOL:
            raise AssertionError(f"spin matrix asymmetry {asym:.2e}")
        m += m.T
        m *= 0.5
        m.flags.writeable = False
    return SpinHamiltonian(basis, *pieces)


def zeeman_derivative(model: GroundModel) -> np.ndarray:
    """dH_int/dB in hartree per gauss (exact, H_int is linear in B)."""
    basis = model.basis
    sp_a, sp_b = model.species_a, model.species_b
    u = basis.u_coupled_from_product
    mu_b = CONSTANTS.mu_b_hartree_per_gauss
    mu_n = CONSTANTS.mu_n_hartree_per_gauss
    prods = basis.product_channels
    d = np.diag([mu_b * (sp_a.g_s * msa + sp_b.g_s * msb)
                 - mu_n * (sp_a.g_i * mia + sp_b.g_i * mib)
                 for msa, msb, mia, mib in prods])
    out = u @ d @ u.T
    return 0.5 * (out + out.T)


def potential_matrix(model: GroundModel, r: float) -> np.ndarray:
    """V_X P_singlet + V_a P_triplet + centrifugal, at one radius."""
    if r <= 0.0:
        raise ValueError(f"potential_matrix requires R > 0, got {r}")
    basis = model.basis
    diag = np.array([model.v_x(r) if ch.s == 0 else model.v_a(r)
                     for ch in basis.channels])
    ell = basis.ell
    diag += ell * (ell + 1) / (2.0 * model.mu * r * r)
    return np.diag(diag)


@dataclass(frozen=True)
class AtomicThresholds:
    """Asymptotic channel energies of one block, lowest shifted to zero.

    ``zero_offset`` is the absolute H_int eigenvalue that was subtracted;
    add it back to recover absolute energies.  For the M_F block that
    contains both atoms in their lowest hyperfine states, this zero is the
    conventional dissociation zero of the pair.
    """

    values: np.ndarray
    zero_offset: float


def atomic_thresholds(model: GroundModel) -> AtomicThresholds:
    """Sorted eigenvalues of H_int with the lowest shifted to 0."""
    h = assemble_spin_hamiltonian(model).matrix
    vals = np.linalg.eigvalsh(h)
    return AtomicThresholds(values=vals - vals[0], zero_offset=float(vals[0]))


def ground_problem(model: GroundModel) -> CoupledChannelProblem:
    """Package the block as a solver-ready CoupledChannelProblem.

    Energies are absolute (H_int not re-zeroed): the dissociation zero of
    the block is atomic_thresholds(model).zero_offset.
    """
    basis = model.basis
    n = len(basis)
    h_int = assemble_spin_hamiltonian(model).matrix
    singlet = np.array([ch.s == 0 for ch in basis.channels])
    ell = basis.ell
    mu = model.mu

    def w(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.broadcast_to(h_int, (r.size, n, n)).copy()
        vx = model.v_x(r)
        va = model.v_a(r)
        cent = ell * (ell + 1) / (2.0 * mu * r * r)
        idx = np.arange(n)
        out[:, idx, idx] += np.where(singlet[None, :], vx[:, None],
                                     va[:, None]) + cent[:, None]
        return out

    label = (f"{model.species_a.name}{model.species_b.name} ground block "
             f"l={ell} ml={basis.m_ell} MF={basis.m_f:+g} "
             f"B={model.field.b_gauss}G")
    return CoupledChannelProblem(n_channels=n, w=w, mu=mu, label=label)


def nuclear_zeeman_energy(m_a: float, m_b: float, b_gauss: float,
                          species_a: AtomSpecies,
                          species_b: AtomSpecies) -> float:
    """Pure nuclear Zeeman energy -(g_IA m_A + g_IB m_B) mu_N B (hartree).

    This is the leading B-dependence of a deeply bound singlet level, where
    the paired electron spins drop out and only the bare nuclei respond.
    """
    for m, sp in ((m_a, species_a), (m_b, species_b)):
        if abs(m) > sp.nuclear_spin + 1.0e-12:
            raise ValueError(
                f"|m| = {abs(m)} exceeds i = {sp.nuclear_spin} for {sp.name}")
    mu_n = CONSTANTS.mu_n_hartree_per_gauss
    return -(species_a.g_i * m_a + species_b.g_i * m_b) * mu_n * b_gauss


def triplet_fraction(state: BoundState, basis: ChannelBasis) -> float:
    """Integrated S=1 channel density of a normalized state, in [0, 1]."""
    if abs(state.norm - 1.0) > 1.0e-8:
        raise ValueError(f"state is not normalized: norm = {state.norm!r}")
    if state.n_channels != len(basis):
        raise ValueError(
            f"state has {state.n_channels} channels, basis has {len(basis)}")
    return float(np.sum(state.channel_weights[basis.triplet_indices()]))


def _p2_average(ell: int, m_ell: int) -> float:
    """<l m| P2(cos theta) |l m> = [l(l+1) - 3m^2] / [(2l-1)(2l+3)]."""
    if ell == 0:
        return 0.0
    return (ell * (ell + 1) - 3 * m_ell**2) / ((2 * ell - 1) * (2 * ell + 3))


def dipole_dipole_shifts(states: list[BoundState], basis: ChannelBasis,
                         species_a: AtomSpecies,
                         species_b: AtomSpecies) -> np.ndarray:
    """First-order electron-spin dipole-dipole corrections, hartree.

    The operator (alpha^2/4) g_SA g_SB [s_A.s_B - 3 (s_A.Rhat)(s_B.Rhat)]
    / R^3 is diagonal in |S m_S>|l m_l> to first order: the spin factor is
    0 for S=0, -1/2 for |m_S| = 1 and +1 for m_S = 0, and the orientation
    average contributes P2(cos theta) averaged over |l m_l>.  Each shift is
    that prefactor times the state's sum over channels of the channel
    weight against 1/R^3.  States must come from a solve WITHOUT this term.
    """
    alpha = CONSTANTS.fine_structure
    pref = (alpha**2 / 4.0) * species_a.g_s * species_b.g_s \
        * _p2_average(basis.ell, basis.m_ell)
    q = np.array([0.0 if ch.s == 0 else (1.0 if ch.m_s == 0.0 else -0.5)
                  for ch in basis.channels])
    out = np.empty(len(states))
    for i, st in enumerate(states):
        if st.n_channels != len(basis):
            raise ValueError(
                f"state {i} has {st.n_channels} channels, basis has "
                f"{len(basis)}")
        r = st.grid.points
        dens = st.grid.h * np.sum(st.psi**2 / r**3, axis=1)
        out[i] = pref * float(q @ dens)
    return out
