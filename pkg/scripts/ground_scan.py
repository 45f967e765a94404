"""Magnetic-field scan of coupled-channel bound levels.

Solves one M_F block of a shallow two-curve model at several fields and
prints each level's energy, triplet fraction, and dominant channel.  The
wells are desk-scale stand-ins; swap in your own curve files via
load_curve to scan a real system.
"""

import numpy as np

from ccdimer.constants import convert
from ccdimer.ground import build_ground_model, ground_problem
from ccdimer.potentials import morse_curve
from ccdimer.solver import RadialGrid, solve_dvr
from ccdimer.species import load_species

M_F = -3.5
FIELDS_GAUSS = (100.0, 300.0, 545.9, 800.0)
WINDOW_HARTREE = (-0.0040, -0.0028)   # singlet and triplet v=0 groups


def main():
    sp = load_species()
    ka, rb = sp["K40"], sp["Rb87"]
    v_x = morse_curve("model singlet", 0.004, 8.0, 0.7, c6=3.0e3)
    v_a = morse_curve("model triplet", 0.003, 9.0, 0.6, c6=3.0e3)
    grid = RadialGrid(5.5, 16.0, 301)

    print(f"M_F = {M_F}, l = 0, window {WINDOW_HARTREE} hartree")
    for b in FIELDS_GAUSS:
        model = build_ground_model(ka, rb, v_x, v_a, 0, 0, M_F, b)
        states = solve_dvr(ground_problem(model), grid, WINDOW_HARTREE)
        print(f"\nB = {b:7.1f} G   ({len(states)} levels)")
        print("   E (GHz)        triplet  dominant channel")
        for st in states:
            ch = model.basis.channels[st.dominant_channel]
            tf = sum(st.channel_weights[i]
                     for i, c in enumerate(model.basis.channels) if c.s == 1)
            e_ghz = convert(st.energy, "hartree", "GHz")
            print(f"  {e_ghz:12.4f}   {tf:7.4f}  "
                  f"|S={ch.s} mS={ch.m_s:+g} miA={ch.m_ia:+g} "
                  f"miB={ch.m_ib:+g}>")


if __name__ == "__main__":
    main()
