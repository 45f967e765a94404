"""Trap-light polarizability scan with resonance flags.

Builds a level catalog for the coupled excited manifold, scans the
complex dynamic polarizability of the ground v=0 level over a frequency
window, flags pole crossings, and reports the trap depth at a detuned
frequency for a chosen intensity.
"""

import numpy as np

from ccdimer.constants import convert
from ccdimer.excited import (builtin_excited_model, excited_problem,
                             single_channel_level)
from ccdimer.polarizability import (ManifoldSpec, assign_resonances,
                                    build_catalog, scan, trap_depth)
from ccdimer.potentials import builtin_model_curves
from ccdimer.solver import RadialGrid
from ccdimer.species import load_species, reduced_mass

INTENSITY_W_CM2 = 2.0e3
GAMMA_HARTREE = 2.0e-7   # constant model linewidth


def main():
    sp = load_species()
    mu = reduced_mass(sp["K40"].mass_au, sp["Rb87"].mass_au)
    curves = builtin_model_curves()
    model = builtin_excited_model(mu, j=1)
    grid = RadialGrid(5.0, 30.0, 901)

    # same grid as the excited solve: dipole integrals need matching points
    ground = single_channel_level(curves["X1Sigma"], mu, grid, v=0)

    vmin = float(np.min(model.v_sigma(np.linspace(5.0, 30.0, 2001))))
    spec = ManifoldSpec(name="omega1", symmetry="1",
                        problem=excited_problem(model),
                        dipole={(0, 2): curves["d_X_1Pi"]},
                        threshold=model.lower_limit, j=1,
                        gamma=GAMMA_HARTREE)
    catalog = build_catalog(ground, [spec], grid, e_max=vmin + 2.0e-3)
    print(f"catalog: {len(catalog.entries)} lines "
          f"(sha256 {catalog.sha256()[:12]})")

    lines = sorted(e.energy - ground.energy for e in catalog.entries)
    print(f"transition span ({convert(lines[0], 'hartree', 'cm-1'):.1f}, "
          f"{convert(lines[-1], 'hartree', 'cm-1'):.1f}) cm-1")

    # zoom on the six lowest lines; the step must be fine enough that the
    # samples bracketing each core crossing sit inside the Lorentzian wing
    lo, hi = lines[0] - 4.9871e-5, lines[5] + 2.0e-5
    step = 5.0e-8
    spectrum = scan(ground.energy, catalog, (lo, hi), step,
                    flag_threshold=1.0e3)
    print(f"scan ({convert(lo, 'hartree', 'cm-1'):.1f}, "
          f"{convert(hi, 'hartree', 'cm-1'):.1f}) cm-1, "
          f"step {convert(step, 'hartree', 'cm-1'):.4f} cm-1: "
          f"{len(spectrum.resonance_flags)} flagged crossings")
    for a in assign_resonances(spectrum, catalog):
        if a.matches:
            m = a.matches[0]
            tag = f"{m.manifold} v={m.v}"
            if a.ambiguous:
                tag += " (ambiguous)"
        else:
            tag = "no catalog line within step/2"
        print(f"  flag at {convert(a.omega, 'hartree', 'cm-1'):10.3f} cm-1"
              f" -> {tag}")

    alpha = spectrum.alpha[0]          # red of every line
    depth = trap_depth(alpha, INTENSITY_W_CM2)
    print(f"\nat {convert(spectrum.omega[0], 'hartree', 'cm-1'):.2f} cm-1, "
          f"{INTENSITY_W_CM2:.0f} W/cm^2: Re alpha = {alpha.real:.2f} a.u., "
          f"V0 = {depth.v0_microkelvin:.3f} uK")


if __name__ == "__main__":
    main()
