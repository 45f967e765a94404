"""Spin channels and angular-momentum coupling.

A channel is one basis vector |S m_S> |i_A m_iA> |i_B m_iB> |l m_l> with the
two electron spins coupled to total S.  The partial wave l, its projection
m_l and M_F = m_S + m_iA + m_iB are conserved labels of the ground-state
Hamiltonian; m_l is not folded into M_F.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, sqrt

import numpy as np

__all__ = [
    "clebsch_gordan",
    "Channel",
    "ChannelBasis",
    "enumerate_channels",
    "allowed_mf_values",
]

_HALF_INT_TOL = 1.0e-9


def _twice(x: float, what: str) -> int:
    """Return 2x as an exact int; reject non-half-integer input."""
    t = 2.0 * x
    if abs(t - round(t)) > _HALF_INT_TOL:
        raise ValueError(f"{what} must be integer or half-integer, got {x}")
    return int(round(t))


def clebsch_gordan(j1, m1, j2, m2, j3, m3) -> float:
    """Clebsch-Gordan coefficient <j1 m1 j2 m2 | j3 m3>, Condon-Shortley phase.

    Returns 0.0 when the triangle rule or projection conservation fails;
    raises ValueError for non-half-integer or inconsistent (j, m) input.
    """
    tj1, tm1 = _twice(j1, "j1"), _twice(m1, "m1")
    tj2, tm2 = _twice(j2, "j2"), _twice(m2, "m2")
    tj3, tm3 = _twice(j3, "j3"), _twice(m3, "m3")
    for tj, tm, name in ((tj1, tm1, "1"), (tj2, tm2, "2"), (tj3, tm3, "3")):
        if tj < 0:
            raise ValueError(f"j{name} must be non-negative")
        if abs(tm) > tj or (tj - tm) % 2 != 0:
            raise ValueError(f"|m{name}| must be <= j{name} with j-m integer")

    if tm1 + tm2 != tm3:
        return 0.0
    if tj3 < abs(tj1 - tj2) or tj3 > tj1 + tj2 or (tj1 + tj2 - tj3) % 2 != 0:
        return 0.0

    # Racah's closed form; all arguments below are exact integers.
    def f(n2: int) -> int:
        if n2 % 2 != 0:
            raise ValueError("internal: non-integer factorial argument")
        return factorial(n2 // 2)

    num = (
        (tj3 + 1)
        * f(tj1 + tj2 - tj3) * f(tj1 - tj2 + tj3) * f(-tj1 + tj2 + tj3)
        * f(tj1 + tm1) * f(tj1 - tm1) * f(tj2 + tm2) * f(tj2 - tm2)
        * f(tj3 + tm3) * f(tj3 - tm3)
    )
    pref = num / f(tj1 + tj2 + tj3 + 2)

    k_min = max(0, (tj2 - tj3 - tm1) // 2, (tj1 - tj3 + tm2) // 2)
    k_max = min((tj1 + tj2 - tj3) // 2, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    total = 0.0
    for k in range(k_min, k_max + 1):
        den = (
            factorial(k)
            * f(tj1 + tj2 - tj3 - 2 * k)
            * f(tj1 - tm1 - 2 * k)
            * f(tj2 + tm2 - 2 * k)
            * f(tj3 - tj2 + tm1 + 2 * k)
            * f(tj3 - tj1 - tm2 + 2 * k)
        )
        total += (-1.0) ** k / den
    return sqrt(pref) * total


@dataclass(frozen=True, order=True)
class Channel:
    """Quantum numbers of one coupled-spin channel."""

    s: int          # total electron spin, 0 or 1
    m_s: float
    m_ia: float
    m_ib: float
    ell: int
    m_ell: int

    @property
    def m_f(self) -> float:
        return self.m_s + self.m_ia + self.m_ib

    def __str__(self):
        return (f"|S={self.s} mS={self.m_s:+g} miA={self.m_ia:+g} "
                f"miB={self.m_ib:+g} l={self.ell} ml={self.m_ell:+d}>")


def _projections(j: float) -> list[float]:
    """m = -j ... +j, descending."""
    tj = _twice(j, "spin")
    return [(tj - 2 * k) / 2.0 for k in range(tj + 1)]


class ChannelBasis:
    """Ordered channel set for conserved (l, m_l, M_F).

    Channel order: S ascending, then m_S descending, then m_iA descending
    (m_iB is fixed by M_F).  ``u_coupled_from_product`` is the orthogonal
    matrix U with H_coupled = U @ H_product @ U.T, where the product basis
    (attribute ``product_channels``, tuples (m_sA, m_sB, m_iA, m_iB)) is
    ordered m_sA descending, then m_sB descending, then m_iA descending.
    """

    def __init__(self, spin_ia: float, spin_ib: float, ell: int, m_ell: int,
                 m_f: float):
        if ell < 0 or abs(m_ell) > ell:
            raise ValueError(f"need l >= 0 and |m_l| <= l, got l={ell}, m_l={m_ell}")
        self.spin_ia = float(spin_ia)
        self.spin_ib = float(spin_ib)
        self.ell = int(ell)
        self.m_ell = int(m_ell)
        self.m_f = float(m_f)

        mia_vals = _projections(spin_ia)
        mib_vals = set(_projections(spin_ib))

        chans: list[Channel] = []
        for s in (0, 1):
            for m_s in ([0.0] if s == 0 else [1.0, 0.0, -1.0]):
                for m_ia in mia_vals:
                    m_ib = m_f - m_s - m_ia
                    if m_ib in mib_vals:
                        chans.append(Channel(s=s, m_s=m_s, m_ia=m_ia,
                                             m_ib=m_ib, ell=ell, m_ell=m_ell))
        if not chans:
            raise ValueError(
                f"no channels exist for M_F = {m_f} with nuclear spins "
                f"({spin_ia}, {spin_ib})")
        self.channels: tuple[Channel, ...] = tuple(chans)

        prods: list[tuple[float, float, float, float]] = []
        for m_sa in (0.5, -0.5):
            for m_sb in (0.5, -0.5):
                for m_ia in mia_vals:
                    m_ib = m_f - m_sa - m_sb - m_ia
                    if m_ib in mib_vals:
                        prods.append((m_sa, m_sb, m_ia, m_ib))
        self.product_channels: tuple[tuple[float, float, float, float], ...] = \
            tuple(prods)

        n = len(chans)
        u = np.zeros((n, n))
        for i, ch in enumerate(chans):
            for j, (m_sa, m_sb, m_ia, m_ib) in enumerate(prods):
                if m_ia == ch.m_ia and m_ib == ch.m_ib:
                    u[i, j] = clebsch_gordan(0.5, m_sa, 0.5, m_sb, ch.s, ch.m_s)
        self.u_coupled_from_product = u
        u.flags.writeable = False

    def __len__(self) -> int:
        return len(self.channels)

    def __iter__(self):
        return iter(self.channels)

    def index(self, channel: Channel) -> int:
        return self.channels.index(channel)

    def singlet_indices(self) -> np.ndarray:
        return np.array([i for i, c in enumerate(self.channels) if c.s == 0])

    def triplet_indices(self) -> np.ndarray:
        return np.array([i for i, c in enumerate(self.channels) if c.s == 1])


def enumerate_channels(spin_ia: float, spin_ib: float, ell: int, m_ell: int,
                       m_f: float) -> ChannelBasis:
    """Build the coupled-spin channel basis for conserved (l, m_l, M_F)."""
    return ChannelBasis(spin_ia, spin_ib, ell, m_ell, m_f)


def allowed_mf_values(spin_ia: float, spin_ib: float) -> list[float]:
    """All M_F with at least one channel, descending."""
    top = 1.0 + spin_ia + spin_ib
    t_top = _twice(top, "M_F bound")
    return [(t_top - 2 * k) / 2.0 for k in range(t_top + 1)]
