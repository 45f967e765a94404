"""Radial potential curves and scalar R-functions.

A curve is a table of (R, V) points bridged by a cubic spline, an analytic
dispersion tail beyond a declared splice radius, and an exponential wall
below the innermost point:

    R <  R[0]          A * exp(-b R), A and b fixed by the two innermost points
    R[0] <= R <= R_K   cubic spline through the table knots
    R >  R_K           asymptote - C6/R^6 - C8/R^8 - C10/R^10

R_K is the outermost knot not beyond the declared splice radius.  The spline
end derivatives are clamped to the wall and tail derivatives, so the evaluated
curve is C1 across both splices; the table value at R_K must agree with the
tail there (validated at construction).

File format (one curve per file):

    # label = a3Sigma
    # asymptote_cm-1 = 0.0
    # C6_au = 4274.0
    # C8_au = 460000.0
    # C10_au = 0.0
    # splice_R_a0 = 28.0
    5.80  1.23e-2
    ...   two columns, R in a0 (strictly increasing) and V in hartree

C8_au and C10_au may be omitted (default 0).  Body values are on the same
absolute energy scale as the declared asymptote.

RFunction uses the same representation for couplings and dipole functions
(values in atomic units, header key asymptote_au), except that below the
table it continues flat at the innermost value.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .constants import convert

__all__ = [
    "PotentialCurve",
    "RFunction",
    "load_curve",
    "save_curve",
    "load_rfunction",
    "save_rfunction",
    "CurveFormatError",
    "morse",
    "morse_curve",
    "builtin_model_curves",
    "MODEL_FINE_STRUCTURE_CM1",
]

TAIL_MATCH_TOL = 1.0e-8  # hartree; table vs tail at the outer splice knot


class CurveFormatError(ValueError):
    """Raised for malformed curve files; message carries the line number."""


def _dispersion(r, asymptote, c6, c8, c10):
    r2 = r * r
    r6 = r2 * r2 * r2
    return asymptote - c6 / r6 - c8 / (r6 * r2) - c10 / (r6 * r2 * r2)


def _dispersion_derivative(r, c6, c8, c10):
    r2 = r * r
    r7 = r2 * r2 * r2 * r
    return 6.0 * c6 / r7 + 8.0 * c8 / (r7 * r2) + 10.0 * c10 / (r7 * r2 * r2)


class _SplicedFunction:
    """Shared spline-plus-tail evaluation; subclasses fix the inner branch."""

    def __init__(self, label, r, values, asymptote, c6, c8, c10, splice_radius):
        r = np.ascontiguousarray(r, dtype=float)
        values = np.ascontiguousarray(values, dtype=float)
        if r.ndim != 1 or values.shape != r.shape:
            raise ValueError(f"{label}: R and value arrays must be equal-length 1-D")
        if r.size < 4:
            raise ValueError(f"{label}: need at least 4 table points, got {r.size}")
        if r[0] <= 0.0:
            raise ValueError(f"{label}: R values must be positive")
        dr = np.diff(r)
        if np.any(dr <= 0.0):
            k = int(np.argmax(dr <= 0.0)) + 1
            raise ValueError(f"{label}: R values must be strictly increasing "
                             f"(violated at point {k + 1})")
        if not np.isfinite(values).all():
            raise ValueError(f"{label}: non-finite table values")
        if splice_radius < r[3]:
            raise ValueError(f"{label}: splice radius {splice_radius} leaves fewer "
                             f"than 4 table points inside")

        n_in = int(np.searchsorted(r, splice_radius * (1.0 + 1e-12), side="right"))
        self.label = str(label)
        self.r_table = r[:n_in].copy()
        self.v_table = values[:n_in].copy()
        self.asymptote = float(asymptote)
        self.c6 = float(c6)
        self.c8 = float(c8)
        self.c10 = float(c10)
        self.splice_radius = float(splice_radius)
        self.r_outer = float(self.r_table[-1])
        self.r_inner = float(self.r_table[0])

        tail_here = _dispersion(self.r_outer, asymptote, c6, c8, c10)
        if abs(tail_here - self.v_table[-1]) > TAIL_MATCH_TOL:
            raise ValueError(
                f"{self.label}: table value {self.v_table[-1]:.10e} at the splice knot "
                f"R = {self.r_outer:g} does not match the dispersion tail "
                f"{tail_here:.10e} (|diff| > {TAIL_MATCH_TOL:g} au)")
        # snap the splice knot onto the tail so the branch switch is exact
        self.v_table[-1] = tail_here
        self.r_table.flags.writeable = False
        self.v_table.flags.writeable = False

        d_left = self._inner_derivative()
        d_right = _dispersion_derivative(self.r_outer, c6, c8, c10)
        self._spline = CubicSpline(self.r_table, self.v_table,
                                   bc_type=((1, d_left), (1, d_right)))

    def _inner_derivative(self) -> float:
        raise NotImplementedError

    def _inner_values(self, r):
        raise NotImplementedError

    def __call__(self, r):
        scalar = np.isscalar(r)
        r = np.atleast_1d(np.asarray(r, dtype=float))
        if np.any(r <= 0.0):
            raise ValueError(f"{self.label}: evaluation requires R > 0")
        out = np.empty_like(r)
        lo = r < self.r_inner
        hi = r > self.r_outer
        mid = ~(lo | hi)
        if lo.any():
            out[lo] = self._inner_values(r[lo])
        if mid.any():
            out[mid] = self._spline(r[mid])
        if hi.any():
            out[hi] = _dispersion(r[hi], self.asymptote, self.c6, self.c8, self.c10)
        return out[0] if scalar else out

    evaluate = __call__

    def derivative(self, r, eps=1.0e-6):
        """Centered finite-difference derivative; used by smoothness checks."""
        return (self(r + eps) - self(r - eps)) / (2.0 * eps)


class PotentialCurve(_SplicedFunction):
    """Born-Oppenheimer potential: exponential wall inside the table."""

    def __init__(self, label, r, v, asymptote, c6, splice_radius,
                 c8=0.0, c10=0.0):
        r = np.asarray(r, dtype=float)
        v = np.asarray(v, dtype=float)
        if r.size < 4:
            raise ValueError(f"{label}: need at least 4 table points, got {r.size}")
        v0, v1 = float(v[0]), float(v[1])
        if not (v0 > v1 > 0.0):
            raise ValueError(
                f"{label}: the two innermost points must lie on a decreasing "
                f"positive repulsive wall for the exp(-bR) fit, got "
                f"V = {v0:.6g}, {v1:.6g}")
        # A exp(-bR) through the innermost two points
        self._wall_b = math.log(v0 / v1) / (float(r[1]) - float(r[0]))
        self._wall_v0 = v0
        super().__init__(label, r, v, asymptote, c6, c8, c10, splice_radius)

    def _inner_derivative(self) -> float:
        return -self._wall_b * self._wall_v0

    def _inner_values(self, r):
        return self._wall_v0 * np.exp(-self._wall_b * (r - self.r_inner))

    def well_minimum(self):
        """(R, V) at the spline minimum; None for purely repulsive tables."""
        der = self._spline.derivative()
        roots = der.roots(extrapolate=False)
        cand = [(float(self._spline(x)), float(x)) for x in np.atleast_1d(roots)]
        cand.append((float(self.v_table[0]), float(self.r_table[0])))
        cand.append((float(self.v_table[-1]), float(self.r_table[-1])))
        vmin, rmin = min(cand)
        if vmin >= self.asymptote:
            return None
        return rmin, vmin


class RFunction(_SplicedFunction):
    """Scalar function of R (coupling or dipole): flat inside the table."""

    def _inner_derivative(self) -> float:
        return 0.0

    def _inner_values(self, r):
        return np.full(r.shape, self.v_table[0])


# ---------------------------------------------------------------------------
# File I/O
# ---------------------------------------------------------------------------

_POT_HEADER = {
    "label": str,
    "asymptote_cm-1": float,
    "C6_au": float,
    "C8_au": float,
    "C10_au": float,
    "splice_R_a0": float,
}
_POT_REQUIRED = ("label", "asymptote_cm-1", "C6_au", "splice_R_a0")

_RF_HEADER = {
    "label": str,
    "asymptote_au": float,
    "C6_au": float,
    "C8_au": float,
    "C10_au": float,
    "splice_R_a0": float,
}
_RF_REQUIRED = ("label", "asymptote_au", "splice_R_a0")


def _parse_table_file(path, header_spec, required):
    headers: dict[str, object] = {}
    rows: list[tuple[float, float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" not in body:
                    continue  # plain comment
                key, _, val = body.partition("=")
                key, val = key.strip(), val.strip()
                if key not in header_spec:
                    raise CurveFormatError(
                        f"{path}:{lineno}: unknown header key {key!r}")
                if key in headers:
                    raise CurveFormatError(
                        f"{path}:{lineno}: duplicate header key {key!r}")
                if header_spec[key] is float:
                    try:
                        headers[key] = float(val)
                    except ValueError:
                        raise CurveFormatError(
                            f"{path}:{lineno}: header {key!r} is not a number: "
                            f"{val!r}") from None
                else:
                    headers[key] = val
                continue
            parts = line.split()
            if len(parts) != 2:
                raise CurveFormatError(
                    f"{path}:{lineno}: expected two columns, got {len(parts)}")
            try:
                r, v = float(parts[0]), float(parts[1])
            except ValueError:
                raise CurveFormatError(
                    f"{path}:{lineno}: could not parse row {line!r}") from None
            if rows and r <= rows[-1][0]:
                raise CurveFormatError(
                    f"{path}:{lineno}: R values must be strictly increasing")
            rows.append((r, v))

    missing = [k for k in required if k not in headers]
    if missing:
        if "C6_au" in missing:
            raise CurveFormatError(
                f"{path}: missing long-range tail coefficient C6_au")
        raise CurveFormatError(f"{path}: missing header keys {missing}")
    if len(rows) < 4:
        raise CurveFormatError(
            f"{path}: need at least 4 table rows, got {len(rows)}")
    return headers, np.array(rows, dtype=float)


def load_curve(path: str | Path) -> PotentialCurve:
    """Read one potential curve; raises CurveFormatError with a line number."""
    headers, table = _parse_table_file(path, _POT_HEADER, _POT_REQUIRED)
    try:
        return PotentialCurve(
            label=headers["label"],
            r=table[:, 0],
            v=table[:, 1],
            asymptote=convert(headers["asymptote_cm-1"], "cm-1", "hartree"),
            c6=headers["C6_au"],
            c8=headers.get("C8_au", 0.0),
            c10=headers.get("C10_au", 0.0),
            splice_radius=headers["splice_R_a0"],
        )
    except ValueError as exc:
        raise CurveFormatError(f"{path}: {exc}") from None


def save_curve(curve: PotentialCurve, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# label = {curve.label}\n")
        fh.write(f"# asymptote_cm-1 = "
                 f"{float(convert(curve.asymptote, 'hartree', 'cm-1'))!r}\n")
        fh.write(f"# C6_au = {float(curve.c6)!r}\n")
        fh.write(f"# C8_au = {float(curve.c8)!r}\n")
        fh.write(f"# C10_au = {float(curve.c10)!r}\n")
        fh.write(f"# splice_R_a0 = {float(curve.splice_radius)!r}\n")
        for r, v in zip(curve.r_table, curve.v_table):
            fh.write(f"{float(r)!r} {float(v)!r}\n")


def load_rfunction(path: str | Path) -> RFunction:
    headers, table = _parse_table_file(path, _RF_HEADER, _RF_REQUIRED)
    try:
        return RFunction(
            label=headers["label"],
            r=table[:, 0],
            values=table[:, 1],
            asymptote=headers["asymptote_au"],
            c6=headers.get("C6_au", 0.0),
            c8=headers.get("C8_au", 0.0),
            c10=headers.get("C10_au", 0.0),
            splice_radius=headers["splice_R_a0"],
        )
    except ValueError as exc:
        raise CurveFormatError(f"{path}: {exc}") from None


def save_rfunction(fn: RFunction, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# label = {fn.label}\n")
        fh.write(f"# asymptote_au = {float(fn.asymptote)!r}\n")
        fh.write(f"# C6_au = {float(fn.c6)!r}\n")
        fh.write(f"# C8_au = {float(fn.c8)!r}\n")
        fh.write(f"# C10_au = {float(fn.c10)!r}\n")
        fh.write(f"# splice_R_a0 = {float(fn.splice_radius)!r}\n")
        for r, v in zip(fn.r_table, fn.v_table):
            fh.write(f"{float(r)!r} {float(v)!r}\n")


# ---------------------------------------------------------------------------
# Analytic model curves
# ---------------------------------------------------------------------------

def morse(r, depth, r_e, alpha, asymptote=0.0):
    """Morse potential, value at the minimum asymptote - depth."""
    e = np.exp(-alpha * (np.asarray(r, dtype=float) - r_e))
    return asymptote + depth * ((1.0 - e) ** 2 - 1.0)


def morse_curve(label, depth, r_e, alpha, asymptote=0.0, c6=1.0e4,
                c8=0.0, r_min=None, r_max=None, dr=0.02,
                blend_radius=None, blend_width=1.0):
    """Tabulate a Morse well blended into a C6/C8 dispersion tail.

    The blend keeps the table smooth and makes its outermost value agree with
    the analytic tail, which the PotentialCurve constructor requires.  Inside
    r < blend_radius - 4*blend_width the table is pure Morse, so analytic
    Morse results apply there.
    """
    if r_min is None:
        # start high on the wall but keep exp overflow in check
        r_min = max(r_e - 4.5 / alpha, 0.3 * r_e)
    if blend_radius is None:
        blend_radius = r_e + 9.0 / alpha
    if r_max is None:
        r_max = blend_radius + 8.0 * blend_width
    r = np.arange(r_min, r_max + 0.5 * dr, dr)
    vm = morse(r, depth, r_e, alpha, asymptote)
    vt = _dispersion(r, asymptote, c6, c8, 0.0)
    s = 1.0 / (1.0 + np.exp(-(r - blend_radius) / blend_width))
    v = vm + s * (vt - vm)
    # force exact tail agreement at the last knot
    v[-1] = vt[-1]
    return PotentialCurve(label=label, r=r, v=v, asymptote=asymptote, c6=c6,
                          c8=c8, splice_radius=r[-1])


def _exp_approach_rfunction(label, asymptote_value, amp, decay, r_ref,
                            r_min=3.0, r_max=60.0, dr=0.05):
    """asymptote * (1 + amp * exp(-decay (R - r_ref))) as a tabulated RFunction."""
    r = np.arange(r_min, r_max + 0.5 * dr, dr)
    v = asymptote_value * (1.0 + amp * np.exp(-decay * (r - r_ref)))
    # pin the residual at the outer knot into an R^-6 term so the tail matches
    c6 = -(v[-1] - asymptote_value) * r[-1] ** 6
    return RFunction(label=label, r=r, values=v, asymptote=asymptote_value,
                     c6=c6, c8=0.0, c10=0.0, splice_radius=r[-1])


def _gaussian_bump_rfunction(label, base, amp, center, width2,
                             r_min=3.0, r_max=60.0, dr=0.05):
    r = np.arange(r_min, r_max + 0.5 * dr, dr)
    v = base + amp * np.exp(-((r - center) ** 2) / width2)
    c6 = -(v[-1] - base) * r[-1] ** 6
    return RFunction(label=label, r=r, values=v, asymptote=base,
                     c6=c6, c8=0.0, c10=0.0, splice_radius=r[-1])


# Model scale constants (cm^-1 / a0).  The excited asymptote is the spin-free
# s+p limit; the fine-structure splitting Delta pushes the coupled limits to
# asymptote + Delta/3 (twice) and asymptote - 2*Delta/3 (once).
MODEL_FINE_STRUCTURE_CM1 = 237.595
_MODEL_EXC_ASYM_CM1 = 12737.35
_MODEL_GROUND_C6 = 4274.0      # shared by the ground pair
_MODEL_GROUND_C8 = 4.6e5
_MODEL_EXC_C6 = 12500.0
_MODEL_EXC_C8 = 7.0e5


def builtin_model_curves() -> dict[str, object]:
    """Analytic stand-in curve set for tests, demos and dry runs.

    Not fitted to any molecule: a deep singlet ground well and a shallow
    triplet well sharing one asymptote and one C6, three excited wells on a
    common spin-free asymptote whose coupled long-range limits split into a
    single lower limit 2*Delta/3 below the spin-free asymptote plus a double
    limit Delta/3 above it, exponential-approach couplings, and smooth dipole
    functions.  Quantitative work requires user-supplied curves.
    """
    cm = lambda x: convert(x, "cm-1", "hartree")
    exc_asym = cm(_MODEL_EXC_ASYM_CM1)
    xi_inf = cm(MODEL_FINE_STRUCTURE_CM1) / 3.0

    curves: dict[str, object] = {
        "X1Sigma": morse_curve("X1Sigma", depth=cm(4200.0), r_e=7.7, alpha=0.42,
                               asymptote=0.0, c6=_MODEL_GROUND_C6,
                               c8=_MODEL_GROUND_C8),
        "a3Sigma": morse_curve("a3Sigma", depth=cm(240.0), r_e=11.2, alpha=0.55,
                               asymptote=0.0, c6=_MODEL_GROUND_C6,
                               c8=_MODEL_GROUND_C8),
        "exc_3Sigma": morse_curve("exc_3Sigma", depth=cm(3560.0), r_e=9.4,
                                  alpha=0.50, asymptote=exc_asym,
                                  c6=_MODEL_EXC_C6, c8=_MODEL_EXC_C8),
        "exc_3Pi": morse_curve("exc_3Pi", depth=cm(6737.0), r_e=7.3,
                               alpha=0.43, asymptote=exc_asym,
                               c6=_MODEL_EXC_C6, c8=_MODEL_EXC_C8),
        "exc_1Pi": morse_curve("exc_1Pi", depth=cm(1837.0), r_e=7.9,
                               alpha=0.58, asymptote=exc_asym,
                               c6=_MODEL_EXC_C6, c8=_MODEL_EXC_C8),
        "xi_sigma_pi3": _exp_approach_rfunction("xi_sigma_pi3", xi_inf,
                                                amp=0.6, decay=0.70, r_ref=9.0),
        "xi_sigma_pi1": _exp_approach_rfunction("xi_sigma_pi1", xi_inf,
                                                amp=0.4, decay=0.65, r_ref=9.0),
        "xi_pi1_pi3": _exp_approach_rfunction("xi_pi1_pi3", xi_inf,
                                              amp=0.8, decay=0.75, r_ref=9.0),
        "d_X_1Pi": _gaussian_bump_rfunction("d_X_1Pi", base=3.5, amp=1.0,
                                            center=7.0, width2=10.0),
        "d_a_3Sigma": _gaussian_bump_rfunction("d_a_3Sigma", base=2.9, amp=0.9,
                                               center=9.0, width2=12.0),
        "d_a_3Pi": _gaussian_bump_rfunction("d_a_3Pi", base=2.2, amp=0.7,
                                            center=8.0, width2=9.0),
        "d_perm_X": _gaussian_bump_rfunction("d_perm_X", base=0.0, amp=0.30,
                                             center=7.7, width2=6.0),
        "d_perm_a": _gaussian_bump_rfunction("d_perm_a", base=0.0, amp=0.03,
                                             center=11.2, width2=10.0),
    }
    return curves
