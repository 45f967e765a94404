"""Three-channel spin-orbit model for the Omega = 1 excited manifold.

Channels, in this fixed order: (3Sigma+, 3Pi, 1Pi).  The diagonal carries the
Born-Oppenheimer curves plus the rotational term J(J+1)/(2 mu R^2); the
spin-orbit coupling appears only off-diagonally (its diagonal elements vanish
for these Omega = 1 states) and every coupling magnitude tends to Delta/3 at
large R, with Delta the atomic fine-structure splitting of the excited atom.

The off-diagonal SIGNS are fixed to (+, -, +) for (Sigma-Pi3, Sigma-Pi1,
Pi3-Pi1).  With equal magnitudes x the asymptotic matrix then has eigenvalues
(+x, +x, -2x): one limit Delta below the other two, which is the physical
fine-structure doublet (the all-positive choice would wrongly put the single
limit on top).  Any odd number of negative couplings is gauge-equivalent;
this one is canonical here.

Transition dipole moments to the ground manifold follow the strict selection
rule that only the 1Pi channel connects to X 1Sigma+: a level carries
oscillator strength from X only through its 1Pi fraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .solver import (BoundState, CoupledChannelProblem, RadialGrid,
                     matrix_element, solve_dvr, solve_propagation)

__all__ = [
    "ExcitedModel",
    "ChannelFractions",
    "assemble_excited_w",
    "excited_problem",
    "excited_levels",
    "channel_fractions",
    "transition_dipole",
    "single_channel_level",
    "excited_model_from_curves",
    "builtin_excited_model",
    "SpectrumRow",
    "spectrum_report",
]

#: radius (a0) at which the coupling tails are validated on construction
TAIL_CHECK_RADIUS = 100.0
#: relative tolerance for |xi(R_check)| against Delta/3
TAIL_CHECK_RTOL = 1.0e-3

FRACTION_SUM_TOL = 1.0e-10

#: canonical channel order and coupling signs (see module docstring)
CHANNEL_NAMES = ("3Sigma+", "3Pi", "1Pi")
_SIGN_SIGMA_PI3 = +1.0
_SIGN_SIGMA_PI1 = -1.0
_SIGN_PI3_PI1 = +1.0


@dataclass(frozen=True)
class ExcitedModel:
    """Curves and couplings of the Omega = 1 three-channel block.

    ``delta`` is the atomic fine-structure splitting in hartree; each
    coupling function must satisfy |xi(100 a0) - delta/3| <= 0.1% of
    delta/3.  ``j`` is the total rotational quantum number (>= 1 for
    Omega = 1).  ``validate_tails=False`` skips the tail requirement so
    decoupled diagnostics (all couplings zeroed) can be run; physical
    models must keep it on.
    """

    v_sigma: object
    v_pi3: object
    v_pi1: object
    xi_sigma_pi3: object
    xi_sigma_pi1: object
    xi_pi3_pi1: object
    delta: float
    mu: float
    j: int = 1
    validate_tails: bool = True

    def __post_init__(self):
        if self.delta <= 0.0:
            raise ValueError(f"fine-structure splitting must be > 0, "
                             f"got {self.delta}")
        if self.j < 1:
            raise ValueError(f"Omega = 1 requires J >= 1, got {self.j}")
        if self.mu <= 0.0:
            raise ValueError(f"reduced mass must be > 0, got {self.mu}")
        if not self.validate_tails:
            return
        target = self.delta / 3.0
        for name, xi in (("xi_sigma_pi3", self.xi_sigma_pi3),
                         ("xi_sigma_pi1", self.xi_sigma_pi1),
                         ("xi_pi3_pi1", self.xi_pi3_pi1)):
            val = float(xi(TAIL_CHECK_RADIUS))
            if abs(val - target) > TAIL_CHECK_RTOL * target:
                raise ValueError(
                    f"{name}({TAIL_CHECK_RADIUS:g} a0) = {val!r} does not "
                    f"reach Delta/3 = {target!r} within "
                    f"{TAIL_CHECK_RTOL:.1%}")

    @property
    def lower_limit(self) -> float:
        """Lower dissociation limit (hartree): asymptote - 2 Delta/3."""
        return self.v_sigma.asymptote - 2.0 * self.delta / 3.0

    @property
    def upper_limit(self) -> float:
        """Upper dissociation limit (hartree): asymptote + Delta/3."""
        return self.v_sigma.asymptote + self.delta / 3.0


@dataclass(frozen=True)
class ChannelFractions:
    """Integrated channel densities of one level; must sum to 1."""

    f_sigma: float
    f_pi3: float
    f_pi1: float

    def __post_init__(self):
        total = self.f_sigma + self.f_pi3 + self.f_pi1
        if abs(total - 1.0) > FRACTION_SUM_TOL:
            raise ValueError(f"channel fractions sum to {total!r}, not 1")
        for name, f in (("f_sigma", self.f_sigma), ("f_pi3", self.f_pi3),
                        ("f_pi1", self.f_pi1)):
            if not -1.0e-12 <= f <= 1.0 + 1.0e-12:
                raise ValueError(f"{name} = {f!r} outside [0, 1]")


def assemble_excited_w(model: ExcitedModel, r: float) -> np.ndarray:
    """The 3x3 coupling matrix at one radius (hartree)."""
    if np.any(np.asarray(r) <= 0.0):
        raise ValueError(f"assemble_excited_w requires R > 0, got {r}")
    cent = model.j * (model.j + 1) / (2.0 * model.mu * r * r)
    w = np.array([
        [model.v_sigma(r) + cent,
         _SIGN_SIGMA_PI3 * model.xi_sigma_pi3(r),
         _SIGN_SIGMA_PI1 * model.xi_sigma_pi1(r)],
        [_SIGN_SIGMA_PI3 * model.xi_sigma_pi3(r),
         model.v_pi3(r) + cent,
         _SIGN_PI3_PI1 * model.xi_pi3_pi1(r)],
        [_SIGN_SIGMA_PI1 * model.xi_sigma_pi1(r),
         _SIGN_PI3_PI1 * model.xi_pi3_pi1(r),
         model.v_pi1(r) + cent],
    ])
    return w


def excited_problem(model: ExcitedModel) -> CoupledChannelProblem:
    """Package the model as a solver-ready three-channel problem."""

    def w(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.empty((r.size, 3, 3))
        cent = model.j * (model.j + 1) / (2.0 * model.mu * r * r)
        out[:, 0, 0] = model.v_sigma(r) + cent
        out[:, 1, 1] = model.v_pi3(r) + cent
        out[:, 2, 2] = model.v_pi1(r) + cent
        out[:, 0, 1] = out[:, 1, 0] = _SIGN_SIGMA_PI3 * model.xi_sigma_pi3(r)
        out[:, 0, 2] = out[:, 2, 0] = _SIGN_SIGMA_PI1 * model.xi_sigma_pi1(r)
        out[:, 1, 2] = out[:, 2, 1] = _SIGN_PI3_PI1 * model.xi_pi3_pi1(r)
        return out

    return CoupledChannelProblem(n_channels=3, w=w, mu=model.mu,
                                 label=f"Omega=1 block J={model.j}")


def channel_fractions(state: BoundState) -> ChannelFractions:
    """Fractions of (Sigma, Pi3, Pi1) character from the channel weights."""
    w = state.channel_weights / np.sum(state.channel_weights)
    return ChannelFractions(f_sigma=float(w[0]), f_pi3=float(w[1]),
                            f_pi1=float(w[2]))


def excited_levels(model: ExcitedModel, grid: RadialGrid, energy_window,
                   *, backend: str = "dvr",
                   **solver_kwargs) -> list[tuple[BoundState, ChannelFractions]]:
    """Bound levels of the block with their channel-character fractions.

    Energies are absolute on the shared axis whose zero is the ground-state
    dissociation limit, i.e. they already read as the photon energy needed
    to reach each level from that zero.  Levels between the two dissociation
    limits are box-discretized resonances; the solver is told to accept them
    (the window must still stay below the upper limit).
    """
    lo, hi = map(float, energy_window)
    if hi > model.upper_limit:
        raise ValueError(
            f"window top {hi!r} exceeds the upper dissociation limit "
            f"{model.upper_limit!r} hartree; above it there are no "
            f"quasi-bound Omega = 1 levels")
    solver = {"dvr": solve_dvr, "propagation": solve_propagation}[backend]
    if hi > model.lower_limit - 1.0e-12:
        solver_kwargs.setdefault("continuum_ok", True)
    states = solver(excited_problem(model), grid, (lo, hi), **solver_kwargs)
    return [(s, channel_fractions(s)) for s in states]


def single_channel_level(curve, mu: float, grid: RadialGrid, v: int = 0,
                         *, ell: int = 0, backend: str = "dvr") -> BoundState:
    """One vibrational level of a single uncoupled curve (default v=0, l=0).

    Used for the X 1Sigma+ reference level of dipole-moment spectra, which
    deliberately ignores hyperfine and Zeeman structure.
    """

    def w(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = curve(r) + ell * (ell + 1) / (2.0 * mu * r * r)
        return out.reshape(-1, 1, 1)

    prob = CoupledChannelProblem(n_channels=1, w=w, mu=mu,
                                 label=f"single channel {curve.label}")
    solver = {"dvr": solve_dvr, "propagation": solve_propagation}[backend]
    minimum = curve.well_minimum()
    if minimum is None:
        raise ValueError(f"curve {curve.label} has no well")
    # window up to the box threshold V(R_max): levels binding less than the
    # box truncation are excluded by construction
    top = float(w(grid.r_max)[0, 0, 0])
    states = solver(prob, grid, (minimum[1] - 1.0e-6, top))
    if v >= len(states):
        raise ValueError(
            f"curve {curve.label} supports only {len(states)} levels on "
            f"this grid, requested v = {v}")
    return states[v]


def transition_dipole(ground: BoundState, excited: BoundState, d: dict) -> float:
    """|vibrationally averaged transition dipole| between two states.

    ``d`` maps channel-index pairs (ground_channel, excited_channel) to a
    dipole function of R (or a constant, atomic units); every pair absent
    from the map contributes exactly zero, which encodes the selection
    rules (e.g. only X <-> 1Pi is nonzero for the X -> Omega=1 spectrum).
    The magnitude is returned: eigenvector signs are arbitrary.
    """
    nb, nk = ground.n_channels, excited.n_channels
    for (ci, cj) in d:
        if not (0 <= ci < nb and 0 <= cj < nk):
            raise ValueError(
                f"dipole map entry {(ci, cj)} outside channel ranges "
                f"({nb}, {nk})")

    def op(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        out = np.zeros((r.size, nb, nk))
        for (ci, cj), fn in d.items():
            out[:, ci, cj] = fn(r) if callable(fn) else float(fn)
        return out

    return abs(matrix_element(ground, op, excited))


def excited_model_from_curves(v_sigma, v_pi3, v_pi1, xi_sigma_pi3,
                              xi_sigma_pi1, xi_pi3_pi1, mu: float,
                              j: int = 1, delta: float | None = None,
                              ) -> ExcitedModel:
    """Assemble an ExcitedModel from curve objects, inferring delta.

    With ``delta=None`` the fine-structure splitting is read off the
    coupling tails (each must approach delta/3); the three tails must agree
    to TAIL_CHECK_RTOL or the ExcitedModel constructor rejects the set.
    """
    if delta is None:
        tails = [float(np.asarray(fn(TAIL_CHECK_RADIUS)))
                 for fn in (xi_sigma_pi3, xi_sigma_pi1, xi_pi3_pi1)]
        delta = 3.0 * sum(tails) / 3.0
    return ExcitedModel(
        v_sigma=v_sigma, v_pi3=v_pi3, v_pi1=v_pi1,
        xi_sigma_pi3=xi_sigma_pi3, xi_sigma_pi1=xi_sigma_pi1,
        xi_pi3_pi1=xi_pi3_pi1, delta=float(delta), mu=mu, j=j)


def builtin_excited_model(mu: float, j: int = 1) -> ExcitedModel:
    """The bundled desk-scale model assembled into an ExcitedModel."""
    from .constants import convert
    from .potentials import MODEL_FINE_STRUCTURE_CM1, builtin_model_curves
    c = builtin_model_curves()
    return ExcitedModel(
        v_sigma=c["exc_3Sigma"], v_pi3=c["exc_3Pi"], v_pi1=c["exc_1Pi"],
        xi_sigma_pi3=c["xi_sigma_pi3"], xi_sigma_pi1=c["xi_sigma_pi1"],
        xi_pi3_pi1=c["xi_pi1_pi3"],
        delta=convert(MODEL_FINE_STRUCTURE_CM1, "cm-1", "hartree"),
        mu=mu, j=j)


@dataclass(frozen=True)
class SpectrumRow:
    """One line of the excited-spectrum table."""

    energy: float           # hartree, ground-dissociation zero
    fractions: ChannelFractions
    dipole: float           # |d| in atomic units


def spectrum_report(model: ExcitedModel, grid: RadialGrid, energy_window,
                    d: dict, ground: BoundState,
                    **solver_kwargs) -> list[SpectrumRow]:
    """Levels, fractions and |dipole| from ``ground``, ascending in energy."""
    rows = []
    for state, frac in excited_levels(model, grid, energy_window,
                                      **solver_kwargs):
        rows.append(SpectrumRow(
            energy=state.energy,
            fractions=frac,
            dipole=transition_dipole(ground, state, d),
        ))
    return rows
