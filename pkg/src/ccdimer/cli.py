"""Command line driver.

Subcommands: channels, bound-states, excited, tdm, polarizability,
validate-curves.  Global flags (--config, --out-dir, --threads, --strict)
go before the subcommand; task parameters come from the config file's task
section and can be overridden by subcommand flags.  The output directory
resolves as: --out-dir flag, else the CCDIMER_OUT_DIR environment variable,
else ./ccdimer_out.  That environment variable is the only one consulted.

Exit codes: 0 success, including defined-empty results such as a bound-state
window containing no levels; 1 usage or configuration errors; 2 compute
errors.  Every run writes a JSON manifest next to its CSV tables; the CSVs
embed the config hash in their '#' header block.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTE = 2

#: benchmark trap wavelengths, nm (presets lambda1, lambda2, lambda3)
WAVELENGTH_PRESETS_NM = {
    "lambda1": 1090.0,
    "lambda2": 1064.0,
    "lambda3": 1030.0,
}

_CURVES_DIR_FILES = {
    "sigma": "sigma.curve",
    "pi3": "pi3.curve",
    "pi1": "pi1.curve",
    "xi_sigma_pi3": "xi_sigma_pi3.rfunc",
    "xi_sigma_pi1": "xi_sigma_pi1.rfunc",
    "xi_pi3_pi1": "xi_pi3_pi1.rfunc",
}


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1 (not argparse's 2)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _half_integer(text: str) -> float:
    """Accept '-3.5' or '-7/2' style values for spin projections."""
    t = text.strip()
    try:
        if "/" in t:
            num, _, den = t.partition("/")
            value = int(num) / int(den)
        else:
            value = float(t)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(
            f"expected a (half-)integer like -3.5 or -7/2, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ccdimer",
        description="Coupled-channel bound states and light shifts "
                    "for bialkali dimers.")
    parser.add_argument("--config", metavar="FILE", default=None,
                        help="TOML run configuration (default: builtin "
                             "curves and species, tasks need flags)")
    parser.add_argument("--out-dir", metavar="DIR", default=None,
                        help="output directory (default: $CCDIMER_OUT_DIR "
                             "or ./ccdimer_out)")
    parser.add_argument("--threads", type=int, metavar="N", default=None,
                        help="cap BLAS/OpenMP threads for this run")
    parser.add_argument("--strict", action=argparse.BooleanOptionalAction,
                        default=True,
                        help="reject unknown config keys (default on)")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("channels",
                       help="enumerate one (ell, m_ell, M_F) channel block "
                            "and its thresholds")
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--m-ell", type=int, default=None)
    p.add_argument("--MF", type=_half_integer, default=None,
                   help="total projection, e.g. -7/2 or -3.5")
    p.add_argument("--B-gauss", type=float, default=None)
    p.set_defaults(handler=_cmd_channels)

    p = sub.add_parser("bound-states",
                       help="coupled-channel bound levels in an energy "
                            "window near threshold")
    p.add_argument("--ell", type=int, default=None)
    p.add_argument("--m-ell", type=int, default=None)
    p.add_argument("--MF", type=_half_integer, default=None)
    p.add_argument("--B-gauss", type=float, default=None)
    p.add_argument("--energy-window", type=float, nargs=2, default=None,
                   metavar=("LO", "HI"),
                   help="window in GHz relative to the block's lowest "
                        "threshold")
    p.add_argument("--offset-GHz", type=float, default=None,
                   help="constant added to reported energies (empirical "
                        "alignment, output only)")
    p.set_defaults(handler=_cmd_bound_states)

    p = sub.add_parser("excited",
                       help="spin-orbit coupled excited levels with channel "
                            "fractions and dipoles")
    p.add_argument("--J", type=int, default=None)
    p.add_argument("--window-cm1", type=float, nargs=2, default=None,
                   metavar=("LO", "HI"),
                   help="absolute energy window on the ground-dissociation "
                        "zero, cm^-1")
    p.add_argument("--curves", metavar="DIR", default=None,
                   help="directory with sigma/pi3/pi1.curve and "
                        "xi_*.rfunc files replacing the configured set")
    p.set_defaults(handler=_cmd_excited)

    p = sub.add_parser("tdm",
                       help="transition dipoles from one ground level to "
                            "the excited spectrum")
    p.add_argument("--ground-v", type=int, default=None)
    p.add_argument("--J", type=int, default=None)
    p.add_argument("--window-cm1", type=float, nargs=2, default=None,
                   metavar=("LO", "HI"))
    p.add_argument("--curves", metavar="DIR", default=None)
    p.set_defaults(handler=_cmd_tdm)

    p = sub.add_parser("polarizability",
                       help="dynamic polarizability scan, resonance "
                            "assignment, trap depths")
    p.add_argument("--manifold", choices=("X", "a"), default=None)
    p.add_argument("--v", type=int, default=None)
    p.add_argument("--omega-min-cm1", type=float, default=None)
    p.add_argument("--omega-max-cm1", type=float, default=None)
    p.add_argument("--step-cm1", type=float, default=None)
    p.add_argument("--intensity-W-cm2", type=float, default=None)
    p.add_argument("--catalog", metavar="FILE", default=None,
                   help="excited-level catalog CSV (default: build from "
                        "the configured excited curves)")
    p.add_argument("--flag-threshold-au", type=float, default=None,
                   help="|alpha| a sign change must exceed to count as a "
                        "resonance crossing")
    p.set_defaults(handler=_cmd_polarizability)

    p = sub.add_parser("validate-curves",
                       help="check curve/coupling files for format and "
                            "smoothness problems")
    p.add_argument("paths", nargs="*", metavar="FILE",
                   help="files to validate (default: the configured "
                        "curve set)")
    p.set_defaults(handler=_cmd_validate_curves)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        if args.threads < 1:
            print("error: --threads must be >= 1", file=sys.stderr)
            return EXIT_USAGE
        # must land before numpy is first imported to take effect
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS",
                    "MKL_NUM_THREADS", "NUMEXPR_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    from .config import ConfigError
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"compute error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


def _out_dir(args) -> Path:
    if args.out_dir is not None:
        return Path(args.out_dir)
    env = os.environ.get("CCDIMER_OUT_DIR")
    if env:
        return Path(env)
    return Path("ccdimer_out")


def _load(args, overrides):
    from .config import load_config
    cfg = load_config(args.config, strict=args.strict, overrides=overrides)
    return cfg


def _manifest(cfg, task: str):
    from .runio import RunManifest
    m = RunManifest(config_hash=cfg.hash, task=task).start()
    if cfg.path is not None:
        m.add_input(cfg.path)
    for p in cfg.curve_paths.values():
        m.add_input(p)
    return m


def _finish(manifest, out_dir, *written) -> None:
    from .runio import write_manifest
    manifest.outputs.extend(str(Path(w).name) for w in written)
    manifest.finish()
    path = write_manifest(manifest, out_dir)
    print(f"wrote {', '.join(manifest.outputs)} and {path.name} "
          f"in {out_dir}")


def _grid(cfg):
    from .solver import RadialGrid
    s = cfg.solver
    return RadialGrid(s["r_min"], s["r_max"], s["n"])


def _solve(cfg, problem, grid, window, **kwargs):
    from . import solver
    fn = solver.solve_dvr if cfg.solver["backend"] == "dvr" \
        else solver.solve_propagation
    if cfg.solver["v_cap"] is not None:
        kwargs.setdefault("v_cap", cfg.solver["v_cap"])
    return fn(problem, grid, window, **kwargs)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_channels(args) -> int:
    overrides = {
        "channels": {"ell": args.ell, "m_ell": args.m_ell, "m_f": args.MF},
        "field": {"b_gauss": args.B_gauss},
    }
    cfg = _load(args, overrides)
    t = cfg.task("channels")
    out = _out_dir(args)
    manifest = _manifest(cfg, "channels")

    from . import ground
    from .constants import convert
    from .runio import write_csv

    model = ground.build_ground_model(
        cfg.species_a, cfg.species_b, cfg.curves["x"], cfg.curves["a"],
        t["ell"], t["m_ell"], t["m_f"], cfg.b_gauss)
    thresholds = ground.atomic_thresholds(model)

    meta = {"task": "channels", "ell": t["ell"], "m_ell": t["m_ell"],
            "M_F": t["m_f"], "B_gauss": cfg.b_gauss,
            "species": f"{cfg.species_a.name}+{cfg.species_b.name}"}
    rows = [(i, ch.s, ch.m_s, ch.m_ia, ch.m_ib)
            for i, ch in enumerate(model.basis.channels)]
    write_csv(out / "channels.csv",
              ["index", "S", "m_S", "m_iA", "m_iB"],
              rows, config_hash=cfg.hash, meta=meta)
    thr_meta = dict(meta)
    thr_meta["zero_offset_hartree"] = repr(thresholds.zero_offset)
    write_csv(out / "thresholds.csv",
              ["index", "threshold_MHz"],
              [(i, convert(v, "hartree", "MHz"))
               for i, v in enumerate(thresholds.values)],
              config_hash=cfg.hash, meta=thr_meta)

    print(f"{len(model.basis)} channels at ell={t['ell']}, "
          f"m_ell={t['m_ell']}, M_F={t['m_f']}, B={cfg.b_gauss} G:")
    for i, ch in enumerate(model.basis.channels):
        print(f"  [{i:2d}] {ch}")
    _finish(manifest, out, "channels.csv", "thresholds.csv")
    return EXIT_OK


def _cmd_bound_states(args) -> int:
    window = list(args.energy_window) if args.energy_window else None
    overrides = {
        "bound_states": {"ell": args.ell, "m_ell": args.m_ell,
                         "m_f": args.MF, "window_ghz": window,
                         "offset_ghz": args.offset_GHz},
        "field": {"b_gauss": args.B_gauss},
    }
    cfg = _load(args, overrides)
    t = cfg.task("bound_states")
    out = _out_dir(args)
    manifest = _manifest(cfg, "bound_states")

    from . import ground
    from .constants import convert
    from .runio import write_csv

    model = ground.build_ground_model(
        cfg.species_a, cfg.species_b, cfg.curves["x"], cfg.curves["a"],
        t["ell"], t["m_ell"], t["m_f"], cfg.b_gauss)
    problem = ground.ground_problem(model)
    thresholds = ground.atomic_thresholds(model)
    zero = thresholds.zero_offset

    lo, hi = t["window_ghz"]
    grid = _grid(cfg)
    states = _solve(cfg, problem, grid,
                    (zero + convert(lo, "GHz", "hartree"),
                     zero + convert(hi, "GHz", "hartree")))
    shifts = ground.dipole_dipole_shifts(
        states, model.basis, cfg.species_a, cfg.species_b)

    meta = {"task": "bound_states", "ell": t["ell"], "m_ell": t["m_ell"],
            "M_F": t["m_f"], "B_gauss": cfg.b_gauss,
            "window_GHz": f"[{lo}, {hi}]", "offset_GHz": t["offset_ghz"],
            "energy_zero": "block lowest threshold",
            "backend": cfg.solver["backend"]}
    rows = []
    for i, st in enumerate(states):
        e_ghz = convert(st.energy - zero, "hartree", "GHz") + t["offset_ghz"]
        rows.append((i, e_ghz,
                     ground.triplet_fraction(st, model.basis),
                     st.dominant_channel,
                     convert(shifts[i], "hartree", "MHz") * 1.0e3))
    write_csv(out / "bound_states.csv",
              ["v", "energy_GHz", "triplet_fraction", "dominant_channel",
               "dd_shift_kHz"],
              rows, config_hash=cfg.hash, meta=meta)

    if not states:
        print(f"no bound states in [{lo}, {hi}] GHz "
              f"(M_F={t['m_f']}, B={cfg.b_gauss} G)")
    else:
        print(f"{len(states)} bound state(s) in [{lo}, {hi}] GHz "
              f"(M_F={t['m_f']}, B={cfg.b_gauss} G):")
        for row in rows:
            print(f"  v={row[0]:3d}  E={row[1]:+.6f} GHz  "
                  f"triplet={row[2]:.4f}  dd={row[4]:+.3f} kHz")
    _finish(manifest, out, "bound_states.csv")
    return EXIT_OK


def _apply_curves_dir(args, overrides) -> None:
    if getattr(args, "curves", None) is None:
        return
    from .config import ConfigError
    base = Path(args.curves)
    if not base.is_dir():
        raise ConfigError(f"--curves: not a directory: {base}")
    slot_values = {}
    missing = []
    for slot, fname in _CURVES_DIR_FILES.items():
        p = base / fname
        if p.is_file():
            slot_values[slot] = str(p.resolve())
        else:
            missing.append(fname)
    if missing:
        raise ConfigError(
            f"--curves {base}: missing {', '.join(missing)} "
            f"(expected files: {', '.join(_CURVES_DIR_FILES.values())})")
    extra = base / "d_x_pi1.rfunc"
    if extra.is_file():
        slot_values["d_x_pi1"] = str(extra.resolve())
    overrides.setdefault("curves", {}).update(slot_values)


def _excited_inputs(cfg, j):
    from .excited import excited_model_from_curves
    from .species import reduced_mass
    mu = reduced_mass(cfg.species_a.mass_au, cfg.species_b.mass_au)
    model = excited_model_from_curves(
        cfg.curves["sigma"], cfg.curves["pi3"], cfg.curves["pi1"],
        cfg.curves["xi_sigma_pi3"], cfg.curves["xi_sigma_pi1"],
        cfg.curves["xi_pi3_pi1"], mu=mu, j=j)
    return mu, model


def _cmd_excited(args) -> int:
    overrides = {"excited": {"j": args.J, "window_cm1":
                             list(args.window_cm1) if args.window_cm1
                             else None}}
    _apply_curves_dir(args, overrides)
    cfg = _load(args, overrides)
    t = cfg.task("excited")
    out = _out_dir(args)
    manifest = _manifest(cfg, "excited")

    from .constants import convert
    from .excited import single_channel_level, spectrum_report
    from .runio import write_csv

    mu, model = _excited_inputs(cfg, t["j"])
    grid = _grid(cfg)
    ground_state = single_channel_level(cfg.curves["x"], mu, grid, v=0)
    lo, hi = t["window_cm1"]
    rows_raw = spectrum_report(
        model, grid,
        (convert(lo, "cm-1", "hartree"), convert(hi, "cm-1", "hartree")),
        {(0, 2): cfg.curves["d_x_pi1"]}, ground_state,
        backend=cfg.solver["backend"])

    meta = {"task": "excited", "J": t["j"],
            "window_cm1": f"[{lo}, {hi}]",
            "energy_zero": "ground dissociation",
            "ground_level": "X v=0",
            "limits_cm1": f"[{convert(model.lower_limit, 'hartree', 'cm-1')}"
                          f", {convert(model.upper_limit, 'hartree', 'cm-1')}]"}
    rows = [(i, convert(r.energy, "hartree", "cm-1"),
             r.fractions.f_sigma, r.fractions.f_pi3, r.fractions.f_pi1,
             r.dipole)
            for i, r in enumerate(rows_raw)]
    write_csv(out / "excited.csv",
              ["index", "E_cm1", "f_sigma", "f_pi3", "f_pi1", "dipole_au"],
              rows, config_hash=cfg.hash, meta=meta)

    print(f"{len(rows)} excited level(s) in [{lo}, {hi}] cm^-1 (J={t['j']})")
    for r in rows[:10]:
        print(f"  [{r[0]:3d}] E={r[1]:10.3f} cm^-1  fractions "
              f"({r[2]:.3f}, {r[3]:.3f}, {r[4]:.3f})  |d|={r[5]:.3e} au")
    if len(rows) > 10:
        print(f"  ... {len(rows) - 10} more in excited.csv")
    _finish(manifest, out, "excited.csv")
    return EXIT_OK


def _cmd_tdm(args) -> int:
    overrides = {"tdm": {"ground_v": args.ground_v, "j": args.J,
                         "window_cm1":
                         list(args.window_cm1) if args.window_cm1
                         else None}}
    _apply_curves_dir(args, overrides)
    cfg = _load(args, overrides)
    t = cfg.task("tdm")
    j = t["j"]
    out = _out_dir(args)
    manifest = _manifest(cfg, "tdm")

    from .constants import convert
    from .excited import single_channel_level, spectrum_report
    from .runio import write_csv

    mu, model = _excited_inputs(cfg, j)
    grid = _grid(cfg)
    ground_state = single_channel_level(cfg.curves["x"], mu, grid,
                                        v=t["ground_v"])
    lo, hi = t["window_cm1"]
    rows_raw = spectrum_report(
        model, grid,
        (convert(lo, "cm-1", "hartree"), convert(hi, "cm-1", "hartree")),
        {(0, 2): cfg.curves["d_x_pi1"]}, ground_state,
        backend=cfg.solver["backend"])

    e_g = ground_state.energy
    meta = {"task": "tdm", "J": j, "ground_v": t["ground_v"],
            "ground_E_cm1": repr(convert(e_g, "hartree", "cm-1")),
            "window_cm1": f"[{lo}, {hi}]",
            "energy_zero": "ground dissociation"}
    rows = [(i, convert(r.energy, "hartree", "cm-1"),
             convert(r.energy - e_g, "hartree", "cm-1"),
             r.dipole, r.fractions.f_pi1)
            for i, r in enumerate(rows_raw)]
    write_csv(out / "tdm.csv",
              ["index", "E_cm1", "transition_cm1", "dipole_au", "f_pi1"],
              rows, config_hash=cfg.hash, meta=meta)

    print(f"{len(rows)} transition(s) from X v={t['ground_v']} "
          f"in [{lo}, {hi}] cm^-1")
    for r in rows[:10]:
        print(f"  [{r[0]:3d}] hv={r[2]:10.3f} cm^-1  |d|={r[3]:.3e} au  "
              f"f_pi1={r[4]:.4f}")
    if len(rows) > 10:
        print(f"  ... {len(rows) - 10} more in tdm.csv")
    _finish(manifest, out, "tdm.csv")
    return EXIT_OK


def _cmd_polarizability(args) -> int:
    overrides = {"polarizability": {
        "manifold": args.manifold, "v": args.v,
        "omega_min_cm1": args.omega_min_cm1,
        "omega_max_cm1": args.omega_max_cm1,
        "step_cm1": args.step_cm1,
        "intensity_w_cm2": args.intensity_W_cm2,
        "catalog": args.catalog,
        "flag_threshold_au": args.flag_threshold_au,
    }}
    cfg = _load(args, overrides)
    t = cfg.task("polarizability")
    out = _out_dir(args)
    manifest = _manifest(cfg, "polarizability")

    from . import polarizability as pol
    from .constants import convert
    from .excited import excited_problem, single_channel_level
    from .runio import write_csv

    mu, model = _excited_inputs(cfg, 1)
    grid = _grid(cfg)
    curve = cfg.curves["x"] if t["manifold"] == "X" else cfg.curves["a"]
    level = single_channel_level(curve, mu, grid, v=t["v"])

    written = ["alpha.csv", "resonances.csv", "presets.csv"]
    if t["catalog"] is not None:
        catalog = pol.load_catalog(t["catalog"])
        manifest.add_input(t["catalog"])
        catalog_note = str(t["catalog"])
    else:
        if t["manifold"] == "X":
            dipole = {(0, 2): cfg.curves["d_x_pi1"]}
        else:
            dipole = {(0, 0): cfg.curves["d_a_sigma"],
                      (0, 1): cfg.curves["d_a_pi3"]}
        e_max = model.lower_limit - 1.0e-9
        if t["catalog_e_max_cm1"] is not None:
            e_max = convert(t["catalog_e_max_cm1"], "cm-1", "hartree")
        spec = pol.ManifoldSpec(
            name="exc", symmetry="1", problem=excited_problem(model),
            dipole=dipole, threshold=model.lower_limit, j=1)
        out.mkdir(parents=True, exist_ok=True)
        catalog = pol.build_catalog(level, [spec], grid, e_max)
        pol.save_catalog(catalog, out / "catalog.csv")
        catalog_note = "built from configured excited curves (catalog.csv)"
        written.append("catalog.csv")

    lo_h = convert(t["omega_min_cm1"], "cm-1", "hartree")
    hi_h = convert(t["omega_max_cm1"], "cm-1", "hartree")
    step_h = convert(t["step_cm1"], "cm-1", "hartree")
    scan_kwargs = {}
    if t["flag_threshold_au"] is not None:
        scan_kwargs["flag_threshold"] = t["flag_threshold_au"]
    spectrum = pol.scan(level, catalog, (lo_h, hi_h), step_h, **scan_kwargs)
    assignments = pol.assign_resonances(spectrum, catalog)
    intensity = t["intensity_w_cm2"]

    meta = {"task": "polarizability",
            "level": f"{t['manifold']} v={t['v']} J=0",
            "level_E_cm1": repr(convert(level.energy, "hartree", "cm-1")),
            "intensity_W_cm2": intensity,
            "catalog": catalog_note,
            "catalog_sha256": spectrum.catalog_sha256,
            "n_catalog_entries": len(catalog.entries)}
    rows = []
    for w, a in zip(spectrum.omega, spectrum.alpha):
        depth = pol.trap_depth(a if a == a else complex(0.0), intensity)
        v0 = depth.v0_microkelvin if a == a else float("nan")
        rows.append((convert(w, "hartree", "cm-1"), a.real, a.imag, v0))
    write_csv(out / "alpha.csv",
              ["omega_cm1", "re_alpha_au", "im_alpha_au", "V0_uK"],
              rows, config_hash=cfg.hash, meta=meta)

    res_rows = []
    for a in assignments:
        match_e = convert(a.matches[0].energy - spectrum.level_energy,
                          "hartree", "cm-1") if a.matches else float("nan")
        res_rows.append((convert(a.omega, "hartree", "cm-1"),
                         len(a.matches), a.ambiguous, match_e))
    write_csv(out / "resonances.csv",
              ["omega_cm1", "n_matches", "ambiguous", "transition_cm1"],
              res_rows, config_hash=cfg.hash, meta=meta)

    preset_rows = []
    for k, (name, lam) in enumerate(WAVELENGTH_PRESETS_NM.items(), start=1):
        w_cm1 = 1.0e7 / lam
        w_h = convert(w_cm1, "cm-1", "hartree")
        a = pol.dynamic_polarizability(level, catalog, w_h)
        depth = pol.trap_depth(a if a == a else complex(0.0), intensity)
        v0 = depth.v0_microkelvin if a == a else float("nan")
        preset_rows.append((k, lam, w_cm1, a.real, a.imag, v0))
    write_csv(out / "presets.csv",
              ["preset", "lambda_nm", "omega_cm1", "re_alpha_au",
               "im_alpha_au", "V0_uK"],
              preset_rows, config_hash=cfg.hash, meta=meta)

    print(f"alpha(omega) for {t['manifold']} v={t['v']} J=0 on "
          f"[{t['omega_min_cm1']}, {t['omega_max_cm1']}] cm^-1, "
          f"step {t['step_cm1']} cm^-1: {len(rows)} points, "
          f"{len(assignments)} flagged resonance(s)")
    for k, (name, lam) in enumerate(WAVELENGTH_PRESETS_NM.items()):
        r = preset_rows[k]
        print(f"  {name} ({lam:.0f} nm): Re alpha = {r[3]:.4f} au, "
              f"V0 = {r[5]:+.4f} uK at {intensity} W/cm^2")
    _finish(manifest, out, *written)
    return EXIT_OK


def _sniff_kind(path: Path) -> str:
    """'curve' or 'rfunction', decided by which asymptote header appears."""
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line.startswith("#"):
                break
            if "asymptote_cm-1" in line:
                return "curve"
            if "asymptote_au" in line:
                return "rfunction"
    return "curve"


def _cmd_validate_curves(args) -> int:
    from . import potentials
    from .config import ConfigError

    failures = 0
    if args.paths:
        for raw in args.paths:
            path = Path(raw)
            if not path.is_file():
                print(f"FAIL {path}: file not found")
                failures += 1
                continue
            kind = _sniff_kind(path)
            loader = potentials.load_curve if kind == "curve" \
                else potentials.load_rfunction
            try:
                obj = loader(path)
            except potentials.CurveFormatError as exc:
                print(f"FAIL {path}: {exc}")
                failures += 1
                continue
            print(f"OK   {path}: {kind} '{obj.label}', "
                  f"{obj.r_table.size} points, splice at "
                  f"{obj.splice_radius} a0")
    else:
        # the config loader already validated these; report what it holds
        cfg = _load(args, None)
        for slot, obj in cfg.curves.items():
            src = cfg.curve_paths.get(slot, "builtin")
            print(f"OK   curves.{slot} = {src} ('{obj.label}')")
    if failures:
        raise ConfigError(f"{failures} file(s) failed validation")
    print("all curve inputs validate")
    return EXIT_OK
