"""Independent reference implementations used only by the tests.

Each oracle reaches the tested quantity by a different algorithm than the
package: closed-form hyperfine-Zeeman level formulas instead of matrix
diagonalization, textbook analytic well spectra instead of numerical
eigensolves, and ladder-operator construction of angular-momentum coupling
coefficients instead of the factorial sum.
"""

from __future__ import annotations

import numpy as np

from ccdimer.constants import CONSTANTS


def breit_rabi_levels(species, b_gauss: float) -> dict[tuple[float, float], float]:
    """Single-atom hyperfine-Zeeman energies, keyed by (f, m_f), hartree.

    Closed form for H = a s.i + g_s mu_B B s_z - g_i mu_N B i_z with
    s = 1/2.  The sqrt branch gives f = i + 1/2 (+) and f = i - 1/2 (-);
    the stretched |m_f| = i + 1/2 states are linear in B.
    """
    a = species.a_hf
    i = species.nuclear_spin
    mu_b = CONSTANTS.mu_b_hartree_per_gauss
    mu_n = CONSTANTS.mu_n_hartree_per_gauss
    b = float(b_gauss)
    out = {}
    f_hi = i + 0.5
    for k in range(int(round(2 * f_hi)) + 1):
        m = f_hi - k
        if abs(m) == f_hi:
            sign = 1.0 if m > 0 else -1.0
            out[(f_hi, m)] = (a * i / 2.0
                              + sign * b * (species.g_s * mu_b / 2.0
                                            - species.g_i * mu_n * i))
            continue
        root = 0.5 * np.sqrt(
            (a * m + (species.g_s * mu_b + species.g_i * mu_n) * b) ** 2
            + a * a * (f_hi ** 2 - m * m))
        base = -a / 4.0 - species.g_i * mu_n * b * m
        out[(f_hi, m)] = base + root
        if i > 0:
            out[(i - 0.5, m)] = base - root
    return out


def pair_thresholds(species_a, species_b, m_f_total: float,
                    b_gauss: float) -> np.ndarray:
    """Sorted two-atom threshold energies of one M_F block, hartree.

    Pairs every (f_a, m_a) level of atom A with every (f_b, m_b) level of
    atom B subject to m_a + m_b = M_F (electron + nuclear projections both
    included in m_f, so this matches the molecular M_F of the block).
    """
    lev_a = breit_rabi_levels(species_a, b_gauss)
    lev_b = breit_rabi_levels(species_b, b_gauss)
    sums = [ea + eb
            for (fa, ma), ea in lev_a.items()
            for (fb, mb), eb in lev_b.items()
            if abs(ma + mb - m_f_total) < 1.0e-9]
    return np.sort(np.array(sums))


def morse_levels(depth: float, alpha: float, mu: float,
                 asymptote: float = 0.0) -> np.ndarray:
    """All bound levels of a Morse well, hartree, ascending.

    E_v = asymptote - depth + w(v + 1/2) - w^2 (v + 1/2)^2 / (4 depth)
    with w = alpha sqrt(2 depth / mu), for v = 0 .. floor(lambda - 1/2)
    where lambda = sqrt(2 mu depth) / alpha.
    """
    w = alpha * np.sqrt(2.0 * depth / mu)
    lam = np.sqrt(2.0 * mu * depth) / alpha
    v = np.arange(int(np.floor(lam - 0.5)) + 1)
    x = v + 0.5
    return asymptote - depth + w * x - (w * x) ** 2 / (4.0 * depth)


def harmonic_levels(omega: float, n_levels: int, v_min: float = 0.0) -> np.ndarray:
    """E_n = v_min + omega (n + 1/2) for n = 0 .. n_levels-1."""
    return v_min + omega * (np.arange(n_levels) + 0.5)


def _ladder_down(j: float, m: float) -> float:
    """Coefficient of J- |j m> -> |j m-1>."""
    return np.sqrt(j * (j + 1) - m * (m - 1))


def coupling_matrix(j1: float, j2: float) -> dict:
    """All <j1 m1 j2 m2 | j m> by explicit ladder construction.

    Start from the stretched |j_max j_max> = |j1 j1>|j2 j2>, lower with
    J- = J1- + J2- to fill each j family, and open every new family at
    m = j with the orthogonal complement, signed so the component with the
    largest m1 is positive (Condon-Shortley).  Returns a dict
    {(m1, m2, j, m): coefficient} over the nonzero entries.
    """
    two_j1, two_j2 = int(round(2 * j1)), int(round(2 * j2))
    m1s = [(two_j1 - 2 * k) / 2.0 for k in range(two_j1 + 1)]
    m2s = [(two_j2 - 2 * k) / 2.0 for k in range(two_j2 + 1)]
    index = {}
    for a, m1 in enumerate(m1s):
        for b, m2 in enumerate(m2s):
            index[(m1, m2)] = a * len(m2s) + b
    dim = len(m1s) * len(m2s)

    vecs = {}  # (j, m) -> vector over the product basis
    j_top = j1 + j2
    two_j_min = abs(two_j1 - two_j2)
    two_js = list(range(int(round(2 * j_top)), two_j_min - 1, -2))
    for tj in two_js:
        j = tj / 2.0
        if j == j_top:
            v = np.zeros(dim)
            v[index[(j1, j2)]] = 1.0
            vecs[(j, j)] = v
        else:
            # orthogonal complement within the m = j block
            block = [(m1, m2) for m1 in m1s for m2 in m2s
                     if abs(m1 + m2 - j) < 1.0e-9]
            prev = np.array([[vecs[(jp / 2.0, j)][index[pair]]
                              for pair in block]
                             for jp in two_js if jp > tj])
            _, _, vt = np.linalg.svd(prev)
            comp = vt[-1]
            # Condon-Shortley: positive coefficient at the largest m1
            top = max(range(len(block)), key=lambda k: block[k][0])
            if comp[top] < 0.0:
                comp = -comp
            v = np.zeros(dim)
            for pair, c in zip(block, comp):
                v[index[pair]] = c
            vecs[(j, j)] = v
        # lower through the family
        m = j
        while m > -j + 1.0e-9:
            src = vecs[(j, m)]
            dst = np.zeros(dim)
            for (m1, m2), k in index.items():
                if src[k] == 0.0:
                    continue
                if m1 - 1 >= -j1 - 1.0e-9:
                    dst[index[(m1 - 1, m2)]] += _ladder_down(j1, m1) * src[k]
                if m2 - 1 >= -j2 - 1.0e-9:
                    dst[index[(m1, m2 - 1)]] += _ladder_down(j2, m2) * src[k]
            dst /= _ladder_down(j, m)
            vecs[(j, m - 1)] = dst
            m -= 1.0

    out = {}
    for (j, m), v in vecs.items():
        for (m1, m2), k in index.items():
            if v[k] != 0.0:
                out[(m1, m2, j, m)] = v[k]
    return out
