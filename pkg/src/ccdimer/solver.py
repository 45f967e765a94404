"""Multichannel radial bound-state solvers.

Solves  [-(1/2mu) d^2/dR^2 I + W(R)] psi(R) = E psi(R)  for an N_ch-channel
radial problem with box boundary conditions psi(R_min) = psi(R_max) = 0,
in atomic units throughout (energies hartree, lengths bohr, mu in m_e).

Two independent backends are provided and must agree on every problem:

* ``solve_dvr``: sinc-function discrete variable representation on the
  uniform grid; one dense symmetric eigensolve of the (N-2)*N_ch matrix.
* ``solve_propagation``: renormalized-Numerov ratio propagation outward and
  inward with matching at an interior point; eigenvalues bracketed by
  bisection on the count of negative propagator eigenvalues (a multichannel
  node count) and polished to machine width.

W(R) must contain everything besides the radial kinetic operator: potential
curves, centrifugal term, and R-independent spin couplings.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh

__all__ = [
    "RadialGrid",
    "CoupledChannelProblem",
    "BoundState",
    "GridConvergenceWarning",
    "solve_dvr",
    "solve_propagation",
    "converged_bound_states",
    "matrix_element",
    "radial_node_count",
    "dump_wavefunction",
]

#: W(R) asymmetry beyond this (hartree) is rejected as a malformed problem.
SYMMETRY_TOL = 1.0e-13

#: |E| gap under which two eigenvalues count as degenerate; ties are then
#: ordered by dominant-channel index so output order is reproducible.
DEGENERACY_TOL = 1.0e-12


class GridConvergenceWarning(UserWarning):
    """Doubling the grid moved an eigenvalue by more than the declared tolerance."""


@dataclass(frozen=True)
class RadialGrid:
    """Uniform radial grid, endpoints included.

    The wavefunction is pinned to zero at both endpoints, so R_max must lie
    well beyond the outer classical turning point of every level of interest
    (the ``boundary_amplitude`` of each returned state measures whether it
    does).
    """

    r_min: float
    r_max: float
    n: int

    def __post_init__(self):
        if not self.r_min > 0.0:
            raise ValueError(f"R_min must be > 0, got {self.r_min}")
        if not self.r_max > self.r_min:
            raise ValueError(
                f"need R_max > R_min, got [{self.r_min}, {self.r_max}]")
        if self.n < 100:
            raise ValueError(f"need at least 100 grid points, got {self.n}")

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.n)

    def refined(self) -> "RadialGrid":
        """Same span with the spacing halved (old points are kept)."""
        return RadialGrid(self.r_min, self.r_max, 2 * self.n - 1)


@dataclass(frozen=True)
class CoupledChannelProblem:
    """N_ch-channel radial eigenproblem.

    ``w`` maps R (scalar or 1-D array) to the symmetric N_ch x N_ch coupling
    matrix in hartree; an array input may return shape (len(R), N_ch, N_ch).
    ``mu`` is the reduced mass in electron masses.
    """

    n_channels: int
    w: object
    mu: float
    label: str = ""

    def __post_init__(self):
        if self.n_channels < 1:
            raise ValueError(f"need n_channels >= 1, got {self.n_channels}")
        if not self.mu > 0.0:
            raise ValueError(f"reduced mass must be positive, got {self.mu}")
        if not callable(self.w):
            raise TypeError("w must be callable: R -> (N_ch, N_ch) matrix")

    def w_on_grid(self, r: np.ndarray, v_cap: float | None = None) -> np.ndarray:
        """Evaluate W at every point of ``r`` as shape (len(r), nch, nch).

        Verifies symmetry to SYMMETRY_TOL at every point, then symmetrizes
        exactly.  ``v_cap`` clamps the diagonal entries from above (the
        couplings are untouched), which tames unphysically steep inner walls
        without moving levels that live far below the cap.
        """
        r = np.asarray(r, dtype=float)
        nch = self.n_channels
        out = np.asarray(self.w(r), dtype=float)
        if out.shape != (r.size, nch, nch):
            # fall back to point-by-point evaluation
            out = np.empty((r.size, nch, nch))
            for i, ri in enumerate(r):
                wi = np.asarray(self.w(ri), dtype=float)
                if wi.shape == () and nch == 1:
                    wi = wi.reshape(1, 1)
                if wi.shape != (nch, nch):
                    raise ValueError(
                        f"w({ri}) returned shape {wi.shape}, expected "
                        f"({nch}, {nch})")
                out[i] = wi
        asym = np.max(np.abs(out - np.transpose(out, (0, 2, 1))))
        if asym > SYMMETRY_TOL:
            raise ValueError(
                f"W(R) is not symmetric: max |W - W^T| = {asym:.3e} exceeds "
                f"{SYMMETRY_TOL:.0e}")
        out = 0.5 * (out + np.transpose(out, (0, 2, 1)))
        if v_cap is not None:
            idx = np.arange(nch)
            diag = out[:, idx, idx]
            out[:, idx, idx] = np.minimum(diag, v_cap)
        return out


@dataclass(frozen=True, eq=False)
class BoundState:
    """One normalized multichannel bound state on a radial grid.

    ``psi`` has shape (n_channels, grid.n) and is the radial function itself
    (quadrature: h * sum over points), with psi[:, 0] = psi[:, -1] = 0 by the
    box boundary condition.  ``boundary_amplitude`` is the largest |psi| at
    the first and last interior points relative to the global maximum; values
    above ~1e-6 mean the box is too small for this level.  The overall sign
    is fixed by making the largest-magnitude sample positive.
    """

    energy: float
    grid: RadialGrid
    psi: np.ndarray
    norm: float
    channel_weights: np.ndarray
    dominant_channel: int
    boundary_amplitude: float
    backend: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def n_channels(self) -> int:
        return self.psi.shape[0]

    def overlap(self, other: "BoundState") -> float:
        """Grid-quadrature overlap <self|other> (same grid required)."""
        _require_same_grid(self.grid, other.grid)
        return float(self.grid.h * np.sum(self.psi * other.psi))


def _require_same_grid(a: RadialGrid, b: RadialGrid):
    if (a.n != b.n or a.r_min != b.r_min or a.r_max != b.r_max):
        raise ValueError(f"states live on different grids: {a} vs {b}")


def _finalize_state(energy, grid, psi_full, backend, meta=None) -> BoundState:
    """Apply the sign convention and package one state."""
    h = grid.h
    k = np.unravel_index(np.argmax(np.abs(psi_full)), psi_full.shape)
    if psi_full[k] < 0.0:
        psi_full = -psi_full
    norm = float(np.sqrt(h * np.sum(psi_full**2)))
    weights = h * np.sum(psi_full**2, axis=1) / norm**2
    interior_edge = max(
        float(np.max(np.abs(psi_full[:, 1]))),
        float(np.max(np.abs(psi_full[:, -2]))),
    )
    amax = float(np.max(np.abs(psi_full)))
    psi_full = psi_full.copy()
    psi_full.flags.writeable = False
    w = np.asarray(weights)
    w.flags.writeable = False
    return BoundState(
        energy=float(energy),
        grid=grid,
        psi=psi_full,
        norm=norm,
        channel_weights=w,
        dominant_channel=int(np.argmax(weights)),
        boundary_amplitude=interior_edge / amax,
        backend=backend,
        meta=dict(meta or {}),
    )


def _order_states(states: list[BoundState]) -> list[BoundState]:
    """Ascending energy; degenerate pairs ordered by dominant channel."""
    states = sorted(states, key=lambda s: s.energy)
    i = 0
    while i < len(states):
        j = i + 1
        while (j < len(states)
               and states[j].energy - states[j - 1].energy <= DEGENERACY_TOL):
            j += 1
        if j - i > 1:
            states[i:j] = sorted(states[i:j],
                                 key=lambda s: (s.dominant_channel, s.energy))
        i = j
    return states


def _window_checks(energy_window, w_all, continuum_ok):
    e_lo, e_hi = map(float, energy_window)
    if not e_lo < e_hi:
        raise ValueError(f"empty energy window [{e_lo}, {e_hi}]")
    eigs_last = np.linalg.eigvalsh(w_all[-1])
    threshold = float(eigs_last[0])
    if e_hi > threshold + 1.0e-12 and not continuum_ok:
        raise ValueError(
            f"window top {e_hi:.12g} lies above the lowest threshold "
            f"W(R_max) = {threshold:.12g}; box states there are artifacts of "
            f"R_max. Pass continuum_ok=True to accept box-discretized "
            f"continuum levels.")
    return e_lo, e_hi


def solve_dvr(problem: CoupledChannelProblem, grid: RadialGrid,
              energy_window, *, v_cap: float | None = None,
              continuum_ok: bool = False,
              convergence_check_tol: float | None = None) -> list[BoundState]:
    """All bound states with energy inside ``energy_window`` (ascending).

    Sinc-DVR backend: kinetic matrix T_kk' = (-1)^(k-k') / (2 mu h^2) *
    (pi^2/3 if k = k' else 2/(k-k')^2) over the interior grid points, plus
    W(R_k) as channel blocks; one symmetric eigensolve restricted to the
    window.  An empty window returns [] (that is a defined result, not an
    error).  ``convergence_check_tol`` (hartree), when given, re-solves on a
    spacing-halved grid and emits GridConvergenceWarning if any windowed
    eigenvalue moves by more than the tolerance.
    """
    r = grid.points
    h = grid.h
    nch = problem.n_channels
    r_in = r[1:-1]
    m = r_in.size

    w_all = problem.w_on_grid(r_in, v_cap=v_cap)
    w_last = problem.w_on_grid(r[-1:], v_cap=v_cap)
    e_lo, e_hi = _window_checks(energy_window,
                                np.concatenate([w_all, w_last]), continuum_ok)

    size = m * nch
    if size * size * 8 > 6.0e9:
        raise ValueError(
            f"DVR matrix would need {size}^2 doubles; shrink the grid or "
            f"use solve_propagation")

    k = np.arange(m)
    dk = k[:, None] - k[None, :]
    with np.errstate(divide="ignore"):
        t = 2.0 / dk.astype(float) ** 2
    t[dk == 0] = np.pi**2 / 3.0
    t *= np.where(dk % 2 == 0, 1.0, -1.0) / (2.0 * problem.mu * h * h)

    ham = np.kron(t, np.eye(nch))
    hv = ham.reshape(m, nch, m, nch)
    idx = np.arange(m)
    hv[idx, :, idx, :] += w_all

    vals, vecs = eigh(ham, subset_by_value=(e_lo, e_hi), driver="evr")
    if vals.size == 0:
        return []

    states = []
    for e, c in zip(vals, vecs.T):
        psi = np.zeros((nch, grid.n))
        psi[:, 1:-1] = (c.reshape(m, nch) / np.sqrt(h)).T
        states.append(_finalize_state(e, grid, psi, "dvr"))
    states = _order_states(states)

    if convergence_check_tol is not None:
        fine = solve_dvr(problem, grid.refined(), (e_lo, e_hi),
                         v_cap=v_cap, continuum_ok=continuum_ok)
        for i, s in enumerate(states):
            if i >= len(fine):
                break
            shift = abs(fine[i].energy - s.energy)
            if shift > convergence_check_tol:
                warnings.warn(
                    f"grid too coarse: level {i} at {s.energy:.10g} hartree "
                    f"moves by {shift:.3e} on spacing halving (tolerance "
                    f"{convergence_check_tol:.3e})", GridConvergenceWarning,
                    stacklevel=2)
    return states


def _numerov_tables(problem, grid, v_cap):
    r = grid.points
    w_all = problem.w_on_grid(r, v_cap=v_cap)
    return r, w_all


def _numerov_u(w_all, mu, h, energy):
    """U_n = (I - T_n)^(-1) (2I + 10 T_n) for every grid point."""
    nch = w_all.shape[1]
    eye = np.eye(nch)
    t = (h * h / 12.0) * 2.0 * mu * (w_all - energy * eye)
    u = np.linalg.solve(eye - t, 2.0 * eye + 10.0 * t)
    return t, u


def _count_below(w_all, mu, h, energy) -> int:
    """Number of eigenvalues below ``energy``.

    Outward sweep of the ratio matrices R_n = U_n - R_(n-1)^(-1); the total
    count of negative eigenvalues met along the sweep equals the number of
    bound levels below E (multichannel node theorem).
    """
    _, u = _numerov_u(w_all, mu, h, energy)
    n = w_all.shape[0]
    nch = w_all.shape[1]
    if nch == 1:
        seq = u[:, 0, 0]
        count = 0
        ratio = seq[1]
        count += ratio < 0.0
        for i in range(2, n - 1):
            ratio = seq[i] - 1.0 / ratio
            count += ratio < 0.0
        return int(count)
    if nch == 2:
        # closed-form 2x2 path: negative-eigenvalue count from trace and
        # determinant, explicit symmetric inverse
        ua, ub, ud = u[:, 0, 0], u[:, 0, 1], u[:, 1, 1]
        count = 0
        a, b, d = ua[1], ub[1], ud[1]
        for i in range(1, n - 1):
            if i > 1:
                det = a * d - b * b
                a, b, d = (ua[i] - d / det, ub[i] + b / det,
                           ud[i] - a / det)
            det = a * d - b * b
            if det < 0.0:
                count += 1
            elif det > 0.0 and a + d < 0.0:
                count += 2
        return count
    if nch == 3:
        # closed-form 3x3 path: adjugate inverse; the negative-eigenvalue
        # count comes from the characteristic polynomial coefficients
        # (Descartes' rule is exact when all roots are real)
        count = 0
        m = u[1].copy()
        for i in range(1, n - 1):
            if i > 1:
                a, b, c = m[0]
                _, d, e = m[1]
                f = m[2, 2]
                det = a * (d * f - e * e) - b * (b * f - e * c) \
                    + c * (b * e - d * c)
                ui = u[i]
                m = np.array([
                    [ui[0, 0] - (d * f - e * e) / det,
                     ui[0, 1] - (c * e - b * f) / det,
                     ui[0, 2] - (b * e - c * d) / det],
                    [0.0,
                     ui[1, 1] - (a * f - c * c) / det,
                     ui[1, 2] - (b * c - a * e) / det],
                    [0.0, 0.0,
                     ui[2, 2] - (a * d - b * b) / det]])
                m[1, 0] = m[0, 1]
                m[2, 0] = m[0, 2]
                m[2, 1] = m[1, 2]
            a, b, c = m[0]
            _, d, e = m[1]
            f = m[2, 2]
            c2 = a + d + f
            c1 = (a * d - b * b) + (a * f - c * c) + (d * f - e * e)
            c0 = a * (d * f - e * e) - b * (b * f - e * c) \
                + c * (b * e - d * c)
            # sign variations of (1, c2, c1, c0) = number of negative roots
            neg = 0
            prev = 1.0
            for coef in (c2, c1, c0):
                if coef != 0.0:
                    if (coef > 0.0) != (prev > 0.0):
                        neg += 1
                    prev = coef
            count += neg
        return count
    count = 0
    ratio = u[1].copy()
    count += int(np.sum(np.linalg.eigvalsh(ratio) < 0.0))
    for i in range(2, n - 1):
        ratio = u[i] - np.linalg.inv(ratio)
        count += int(np.sum(np.linalg.eigvalsh(ratio) < 0.0))
    return count


def _match_index(w_all, r, energy, mu) -> int:
    """Grid index of the outer turning point of the lowest adiabat, clamped."""
    n = r.size
    vmin = np.array([np.linalg.eigvalsh(w_all[i])[0] for i in range(n)])
    below = np.nonzero(vmin < energy)[0]
    im = int(below[-1]) if below.size else n // 2
    return int(np.clip(im, n // 8, (7 * n) // 8))


def _numerov_wavefunction(problem, grid, w_all, energy):
    """Reconstruct psi at a converged eigenvalue by two-sided propagation."""
    h = grid.h
    nch = problem.n_channels
    n = grid.n
    t, u = _numerov_u(w_all, problem.mu, h, energy)

    im = _match_index(w_all, grid.points, energy, problem.mu)

    # outward ratios R_i = F_(i+1) F_i^(-1), i = 1 .. im
    r_out = np.empty((n, nch, nch))
    r_out[1] = u[1]
    for i in range(2, im + 1):
        r_out[i] = u[i] - np.linalg.inv(r_out[i - 1])
    # inward ratios B_i = F_(i-1) F_i^(-1), i = N-2 .. im+1
    b_in = np.empty((n, nch, nch))
    b_in[n - 2] = u[n - 2]
    for i in range(n - 3, im, -1):
        b_in[i] = u[i] - np.linalg.inv(b_in[i + 1])

    match = r_out[im] - np.linalg.inv(b_in[im + 1])
    mvals, mvecs = np.linalg.eigh(match)
    f = np.zeros((n, nch))
    f[im] = mvecs[:, int(np.argmin(np.abs(mvals)))]
    for i in range(im, 1, -1):
        f[i - 1] = np.linalg.solve(r_out[i - 1], f[i])
    for i in range(im, n - 2):
        f[i + 1] = np.linalg.solve(b_in[i + 1], f[i])

    eye = np.eye(nch)
    psi = np.zeros((nch, n))
    for i in range(1, n - 1):
        psi[:, i] = np.linalg.solve(eye - t[i], f[i])
    norm = np.sqrt(h * np.sum(psi**2))
    return psi / norm, im


def solve_propagation(problem: CoupledChannelProblem, grid: RadialGrid,
                      energy_window, *, v_cap: float | None = None,
                      continuum_ok: bool = False,
                      bisection_tol: float = 1.0e-14) -> list[BoundState]:
    """Renormalized-Numerov backend; same contract as ``solve_dvr``.

    Each eigenvalue inside the window is bracketed by bisection on the
    negative-eigenvalue count of the outward ratio sweep, tightened to
    ``bisection_tol * max(1, |E|)``, then the wavefunction is rebuilt by
    outward/inward propagation matched at the outer turning point of the
    lowest adiabat (clamped to the central 3/4 of the grid).
    """
    r, w_all = _numerov_tables(problem, grid, v_cap)
    e_lo, e_hi = _window_checks(energy_window, w_all, continuum_ok)
    mu, h = problem.mu, grid.h

    def count(e: float) -> int:
        return _count_below(w_all, mu, h, e)

    c_lo, c_hi = count(e_lo), count(e_hi)
    if c_hi == c_lo:
        return []

    states = []
    for k in range(c_lo, c_hi):
        lo, hi = e_lo, e_hi
        # invariant: count(lo) <= k < count(hi); bisect until the bracket
        # is at machine width, then take its midpoint as the eigenvalue
        while hi - lo > bisection_tol * max(1.0, abs(lo)):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if count(mid) <= k:
                lo = mid
            else:
                hi = mid
        energy = 0.5 * (lo + hi)
        psi, im = _numerov_wavefunction(problem, grid, w_all, energy)
        states.append(_finalize_state(energy, grid, psi, "propagation",
                                      meta={"match_index": im}))
    return _order_states(states)


def converged_bound_states(problem: CoupledChannelProblem, grid: RadialGrid,
                           energy_window, *, backend: str = "dvr",
                           target: float = 1.519829846e-10,
                           max_refinements: int = 4, **kwargs):
    """Refine the grid until no level in the window moves more than ``target``.

    The default target is 1 MHz in hartree.  Returns (states, report) where
    report records the per-refinement maximum level shift.  Raises if the
    target is still not met after ``max_refinements`` spacing halvings.
    """
    solver = {"dvr": solve_dvr, "propagation": solve_propagation}[backend]
    states = solver(problem, grid, energy_window, **kwargs)
    report = {"n": [grid.n], "max_shift": []}
    for _ in range(max_refinements):
        fine_grid = grid.refined()
        fine = solver(problem, fine_grid, energy_window, **kwargs)
        n_cmp = min(len(states), len(fine))
        if len(states) != len(fine):
            shift = np.inf
        elif n_cmp == 0:
            shift = 0.0
        else:
            shift = max(abs(fine[i].energy - states[i].energy)
                        for i in range(n_cmp))
        report["n"].append(fine_grid.n)
        report["max_shift"].append(shift)
        grid, states = fine_grid, fine
        if shift <= target:
            return states, report
    raise RuntimeError(
        f"levels still move by {report['max_shift'][-1]:.3e} hartree after "
        f"{max_refinements} refinements (target {target:.3e}); "
        f"report: {report}")


def matrix_element(bra: BoundState, op, ket: BoundState) -> float:
    """<bra| op |ket> = sum_cc' integral psi_c^bra op_cc'(R) psi_c'^ket dR.

    ``op`` may be a scalar (requires equal channel counts), a constant
    matrix of shape (bra.n_channels, ket.n_channels), or a callable of R
    returning that shape (vectorized callables may return (n_points,
    n_bra, n_ket)).  A matrix-valued op IS the declared channel map between
    bases of different sizes; a scalar op with mismatched channel counts is
    an error.  Both states must live on the same grid.
    """
    _require_same_grid(bra.grid, ket.grid)
    nb, nk = bra.n_channels, ket.n_channels
    r = bra.grid.points
    h = bra.grid.h

    if np.isscalar(op):
        if nb != nk:
            raise ValueError(
                f"scalar operator needs equal channel counts, got {nb} vs "
                f"{nk}; pass an explicit ({nb}, {nk}) matrix (the channel "
                f"map) instead")
        return float(op) * float(h * np.sum(bra.psi * ket.psi))

    if callable(op):
        mat = np.asarray(op(r), dtype=float)
        if mat.shape != (r.size, nb, nk):
            mat = np.empty((r.size, nb, nk))
            for i, ri in enumerate(r):
                mi = np.asarray(op(ri), dtype=float)
                if mi.shape != (nb, nk):
                    raise ValueError(
                        f"op({ri}) returned shape {mi.shape}, expected "
                        f"({nb}, {nk})")
                mat[i] = mi
        return float(h * np.einsum("ck,kcd,dk->", bra.psi, mat, ket.psi))

    mat = np.asarray(op, dtype=float)
    if mat.shape != (nb, nk):
        raise ValueError(
            f"constant operator must have shape ({nb}, {nk}), got "
            f"{mat.shape}")
    return float(h * np.einsum("ck,cd,dk->", bra.psi, mat, ket.psi))


def radial_node_count(state: BoundState, channel: int | None = None,
                      floor: float = 1.0e-7) -> int:
    """Sign changes of one channel function across the grid interior.

    Defaults to the dominant channel.  Samples below ``floor`` times the
    channel maximum are skipped so numerical noise in the classically
    forbidden tails does not register as nodes.
    """
    c = state.dominant_channel if channel is None else channel
    y = state.psi[c, 1:-1]
    cut = floor * np.max(np.abs(y))
    y = y[np.abs(y) > cut]
    if y.size < 2:
        return 0
    return int(np.sum(np.signbit(y[1:]) != np.signbit(y[:-1])))


def dump_wavefunction(state: BoundState, path) -> None:
    """Write one state as CSV: columns R, psi_1 .. psi_N (atomic units)."""
    g = state.grid
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# energy_hartree = {state.energy!r}\n")
        fh.write(f"# backend = {state.backend}\n")
        fh.write(f"# grid = [{g.r_min!r}, {g.r_max!r}] n = {g.n}\n")
        fh.write(f"# norm = {state.norm!r}\n")
        cols = ", ".join(f"psi_{c + 1}" for c in range(state.n_channels))
        fh.write(f"# columns: R_a0, {cols}\n")
        for i, ri in enumerate(g.points):
            row = ", ".join(repr(float(v)) for v in state.psi[:, i])
            fh.write(f"{ri!r}, {row}\n")
