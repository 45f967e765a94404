"""Excited-manifold spectrum with channel fractions and transition dipoles.

Solves the three-channel spin-orbit coupled block near its well bottom,
then tabulates each level against the ground v=0 reference: energy,
sigma/pi character, and |TDM|.  Uses the bundled model curves; point
excited_model_from_curves at your own files for a real system.
"""

import numpy as np

from ccdimer.constants import convert
from ccdimer.excited import (builtin_excited_model, single_channel_level,
                             spectrum_report)
from ccdimer.potentials import builtin_model_curves
from ccdimer.solver import RadialGrid
from ccdimer.species import load_species, reduced_mass


def main():
    sp = load_species()
    mu = reduced_mass(sp["K40"].mass_au, sp["Rb87"].mass_au)
    curves = builtin_model_curves()
    model = builtin_excited_model(mu, j=1)
    grid = RadialGrid(5.0, 30.0, 901)

    # same grid as the excited solve: dipole integrals need matching points
    ground = single_channel_level(curves["X1Sigma"], mu, grid, v=0)
    print(f"ground anchor: v=0, E = "
          f"{convert(ground.energy, 'hartree', 'cm-1'):.3f} cm-1")

    vmin = float(np.min(model.v_sigma(np.linspace(5.0, 30.0, 2001))))
    window = (vmin + 1.0e-5, vmin + 2.0e-3)
    d = {(0, 2): curves["d_X_1Pi"]}   # ground channel -> 1Pi component
    rows = spectrum_report(model, grid, window, d, ground)

    print(f"\n{len(rows)} levels in "
          f"({convert(window[0], 'hartree', 'cm-1'):.1f}, "
          f"{convert(window[1], 'hartree', 'cm-1'):.1f}) cm-1")
    print("   E (cm-1)    f_sigma   f_pi3    f_pi1    |TDM| (a.u.)")
    for row in rows:
        f = row.fractions
        print(f"  {convert(row.energy, 'hartree', 'cm-1'):10.3f} "
              f"  {f.f_sigma:7.4f}  {f.f_pi3:7.4f}  {f.f_pi1:7.4f} "
              f"  {row.dipole:.6f}")


if __name__ == "__main__":
    main()
