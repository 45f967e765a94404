"""Run configuration: strict TOML parsing with schema and semantic checks.

A config file selects the atom pair, magnetic field, potential curves, solver
settings, and per-task parameters.  Parsing is strict: any key not in the
schema is a fatal error naming the full dotted path, wrong types are fatal,
and semantically impossible values (an M_F outside the spin range, a negative
field) are rejected with the offending field named.  Curve entries are either
"builtin:<name>" or a path to a curve/coupling file, resolved relative to the
config file; referenced files must exist and validate at parse time.

The config hash is the sha256 of the canonical JSON rendering of the parsed
TOML, so rephrasing the file (comments, key order) does not change the hash
but any value change does.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from . import potentials, species as species_mod
from .runio import sha256_of_text

__all__ = ["ConfigError", "RunConfig", "load_config", "config_hash_of_dict"]


class ConfigError(ValueError):
    """Malformed or semantically invalid run configuration."""


# Schema: section -> key -> (python type(s), default).  A default of
# _REQUIRED marks a key that must be present when its section is used.
_REQUIRED = object()

_SCHEMA = {
    "species": {
        "a": (str, "K40"),
        "b": (str, "Rb87"),
        "file": (str, None),
    },
    "field": {
        "b_gauss": ((int, float), 0.0),
    },
    "curves": {
        "x": (str, "builtin:X1Sigma"),
        "a": (str, "builtin:a3Sigma"),
        "sigma": (str, "builtin:exc_3Sigma"),
        "pi3": (str, "builtin:exc_3Pi"),
        "pi1": (str, "builtin:exc_1Pi"),
        "xi_sigma_pi3": (str, "builtin:xi_sigma_pi3"),
        "xi_sigma_pi1": (str, "builtin:xi_sigma_pi1"),
        "xi_pi3_pi1": (str, "builtin:xi_pi1_pi3"),
        "d_x_pi1": (str, "builtin:d_X_1Pi"),
        "d_a_sigma": (str, "builtin:d_a_3Sigma"),
        "d_a_pi3": (str, "builtin:d_a_3Pi"),
    },
    "solver": {
        "r_min": ((int, float), 5.0),
        "r_max": ((int, float), 30.0),
        "n": (int, 1201),
        "backend": (str, "dvr"),
        "v_cap": ((int, float), None),
    },
    "channels": {
        "ell": (int, 0),
        "m_ell": (int, 0),
        "m_f": ((int, float), _REQUIRED),
    },
    "bound_states": {
        "ell": (int, 0),
        "m_ell": (int, 0),
        "m_f": ((int, float), _REQUIRED),
        "window_ghz": (list, _REQUIRED),
        "offset_ghz": ((int, float), 0.0),
    },
    "excited": {
        "j": (int, 1),
        "window_cm1": (list, _REQUIRED),
    },
    "tdm": {
        "ground_v": (int, 0),
        "j": (int, 1),
        "window_cm1": (list, _REQUIRED),
    },
    "polarizability": {
        "manifold": (str, "X"),
        "v": (int, 0),
        "j": (int, 0),
        "omega_min_cm1": ((int, float), _REQUIRED),
        "omega_max_cm1": ((int, float), _REQUIRED),
        "step_cm1": ((int, float), 0.05),
        "intensity_w_cm2": ((int, float), 0.0),
        "catalog": (str, None),
        "catalog_e_max_cm1": ((int, float), None),
        "flag_threshold_au": ((int, float), None),
    },
}

_TASK_SECTIONS = ("channels", "bound_states", "excited", "tdm",
                  "polarizability")


def config_hash_of_dict(raw: dict) -> str:
    return sha256_of_text(json.dumps(raw, sort_keys=True, default=str))


def _check_section(name: str, table: dict, strict: bool) -> dict:
    schema = _SCHEMA[name]
    out = {}
    for key, value in table.items():
        if key not in schema:
            msg = f"unknown config key '{name}.{key}'"
            if strict:
                raise ConfigError(msg)
            continue
        types, _ = schema[key]
        if isinstance(value, bool) or not isinstance(value, types):
            raise ConfigError(
                f"config key '{name}.{key}' expects "
                f"{getattr(types, '__name__', types)}, got {value!r}")
        out[key] = value
    for key, (_, default) in schema.items():
        if key in out:
            continue
        if default is _REQUIRED:
            raise ConfigError(f"config key '{name}.{key}' is required")
        out[key] = default
    return out


def _check_window(name: str, window, unit: str) -> tuple[float, float]:
    if (not isinstance(window, list) or len(window) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                       for v in window)):
        raise ConfigError(f"'{name}' must be a two-number list ({unit})")
    lo, hi = float(window[0]), float(window[1])
    if not lo < hi:
        raise ConfigError(f"'{name}' needs lower < upper, got [{lo}, {hi}]")
    return lo, hi


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration.

    ``raw`` keeps the normalized key/value tree (hashed for provenance);
    ``species_a``/``species_b`` are resolved atom records; ``curves`` maps
    the logical curve slots to loaded objects; task sections appear in
    ``tasks`` only when present in the file.
    """

    path: Path | None
    raw: dict
    hash: str
    species_a: "species_mod.AtomSpecies"
    species_b: "species_mod.AtomSpecies"
    b_gauss: float
    curves: dict
    curve_paths: dict
    solver: dict
    tasks: dict

    def task(self, name: str) -> dict:
        if name not in self.tasks:
            raise ConfigError(
                f"config has no [{name}] section and required values were "
                "not given on the command line")
        return self.tasks[name]


def _resolve_curve(slot: str, ref: str, base: Path | None):
    """Load one curve/coupling reference, returning (object, path or None)."""
    coupling_slots = {"xi_sigma_pi3", "xi_sigma_pi1", "xi_pi3_pi1",
                      "d_x_pi1", "d_a_sigma", "d_a_pi3"}
    if ref.startswith("builtin:"):
        name = ref[len("builtin:"):]
        table = potentials.builtin_model_curves()
        # the builtin table stores the Pi couplings under the historical key
        alias = {"xi_pi3_pi1": "xi_pi1_pi3"}
        name = alias.get(name, name)
        if name not in table:
            raise ConfigError(
                f"curves.{slot}: no builtin curve named '{name}' "
                f"(available: {', '.join(sorted(table))})")
        return table[name], None
    path = Path(ref)
    if base is not None and not path.is_absolute():
        path = base / path
    if not path.is_file():
        raise ConfigError(f"curves.{slot}: file not found: {path}")
    try:
        if slot in coupling_slots:
            obj = potentials.load_rfunction(path)
        else:
            obj = potentials.load_curve(path)
    except potentials.CurveFormatError as exc:
        raise ConfigError(f"curves.{slot}: {exc}") from exc
    return obj, path


def load_config(path=None, *, strict: bool = True,
                overrides: dict | None = None) -> RunConfig:
    """Parse and validate a TOML run config.

    With ``path=None`` an all-defaults config is built (builtin curves,
    B = 0, no task sections).  ``overrides`` is a ``{section: {key: value}}``
    tree applied after the file, used for command line flags; overridden
    values face the same schema and semantic checks.
    """
    base = None
    if path is None:
        doc = {}
    else:
        path = Path(path)
        base = path.parent
        try:
            with open(path, "rb") as fh:
                doc = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: invalid TOML: {exc}") from exc

    for section in doc:
        if section not in _SCHEMA:
            if strict:
                raise ConfigError(f"unknown config section '[{section}]'")
        elif not isinstance(doc[section], dict):
            raise ConfigError(f"'[{section}]' must be a table")

    for section, values in (overrides or {}).items():
        if section not in _SCHEMA:
            raise ConfigError(f"unknown override section '{section}'")
        slot = doc.setdefault(section, {})
        for k, v in values.items():
            if v is not None:
                slot[k] = v

    checked = {}
    for section in _SCHEMA:
        if section in doc:
            checked[section] = _check_section(section, doc[section], strict)
        elif section not in _TASK_SECTIONS:
            checked[section] = _check_section(section, {}, strict)

    # -- species ------------------------------------------------------------
    sp = checked["species"]
    species_file = sp["file"]
    if species_file is not None:
        sp_path = Path(species_file)
        if base is not None and not sp_path.is_absolute():
            sp_path = base / sp_path
        if not sp_path.is_file():
            raise ConfigError(f"species.file: file not found: {sp_path}")
        table = species_mod.load_species(sp_path)
    else:
        table = species_mod.load_species()
    for key in ("a", "b"):
        if sp[key] not in table:
            raise ConfigError(
                f"species.{key}: unknown species '{sp[key]}' "
                f"(available: {', '.join(sorted(table))})")
    species_a = table[sp["a"]]
    species_b = table[sp["b"]]

    # -- field --------------------------------------------------------------
    b_gauss = float(checked["field"]["b_gauss"])
    if not b_gauss >= 0.0:
        raise ConfigError(f"field.b_gauss must be >= 0, got {b_gauss}")

    # -- solver -------------------------------------------------------------
    sol = dict(checked["solver"])
    if not 0.0 < float(sol["r_min"]) < float(sol["r_max"]):
        raise ConfigError(
            f"solver grid needs 0 < r_min < r_max, got "
            f"[{sol['r_min']}, {sol['r_max']}]")
    if sol["n"] < 100:
        raise ConfigError(f"solver.n must be >= 100, got {sol['n']}")
    if sol["backend"] not in ("dvr", "propagation"):
        raise ConfigError(
            f"solver.backend must be 'dvr' or 'propagation', "
            f"got '{sol['backend']}'")
    sol["r_min"] = float(sol["r_min"])
    sol["r_max"] = float(sol["r_max"])
    if sol["v_cap"] is not None:
        sol["v_cap"] = float(sol["v_cap"])

    # -- curves -------------------------------------------------------------
    curves = {}
    curve_paths = {}
    for slot, ref in checked["curves"].items():
        obj, src = _resolve_curve(slot, ref, base)
        curves[slot] = obj
        if src is not None:
            curve_paths[slot] = src

    # -- task sections: semantic checks --------------------------------------
    tasks = {}
    mf_top = 1.0 + species_a.nuclear_spin + species_b.nuclear_spin
    for name in ("channels", "bound_states"):
        if name not in checked:
            continue
        t = dict(checked[name])
        if t["ell"] < 0:
            raise ConfigError(f"{name}.ell must be >= 0, got {t['ell']}")
        if abs(t["m_ell"]) > t["ell"]:
            raise ConfigError(
                f"{name}.m_ell = {t['m_ell']} is outside |m_ell| <= ell "
                f"= {t['ell']}")
        m_f = float(t["m_f"])
        if abs(m_f) > mf_top + 1e-9 or (2 * m_f) != round(2 * m_f):
            raise ConfigError(
                f"{name}.m_f = {t['m_f']} is impossible for spins "
                f"(s=1/2, i_a={species_a.nuclear_spin}, "
                f"i_b={species_b.nuclear_spin}): need |m_f| <= {mf_top} "
                "on the half-integer ladder")
        t["m_f"] = m_f
        if name == "bound_states":
            t["window_ghz"] = _check_window(
                "bound_states.window_ghz", t["window_ghz"], "GHz")
            t["offset_ghz"] = float(t["offset_ghz"])
        tasks[name] = t

    if "excited" in checked:
        t = dict(checked["excited"])
        if t["j"] < 1:
            raise ConfigError(f"excited.j must be >= 1, got {t['j']}")
        t["window_cm1"] = _check_window(
            "excited.window_cm1", t["window_cm1"], "cm^-1")
        tasks["excited"] = t

    if "tdm" in checked:
        t = dict(checked["tdm"])
        if t["ground_v"] < 0:
            raise ConfigError(
                f"tdm.ground_v must be >= 0, got {t['ground_v']}")
        if t["j"] < 1:
            raise ConfigError(f"tdm.j must be >= 1, got {t['j']}")
        t["window_cm1"] = _check_window(
            "tdm.window_cm1", t["window_cm1"], "cm^-1")
        tasks["tdm"] = t

    if "polarizability" in checked:
        t = dict(checked["polarizability"])
        if t["manifold"] not in ("X", "a"):
            raise ConfigError(
                f"polarizability.manifold must be 'X' or 'a', "
                f"got '{t['manifold']}'")
        if t["v"] < 0:
            raise ConfigError(
                f"polarizability.v must be >= 0, got {t['v']}")
        if t["j"] != 0:
            raise ConfigError(
                "polarizability.j: only j = 0 ground levels are supported, "
                f"got {t['j']}")
        lo = float(t["omega_min_cm1"])
        hi = float(t["omega_max_cm1"])
        if not 0.0 <= lo < hi:
            raise ConfigError(
                "polarizability scan needs 0 <= omega_min_cm1 < "
                f"omega_max_cm1, got [{lo}, {hi}]")
        t["omega_min_cm1"] = lo
        t["omega_max_cm1"] = hi
        if not float(t["step_cm1"]) > 0:
            raise ConfigError(
                f"polarizability.step_cm1 must be > 0, got {t['step_cm1']}")
        t["step_cm1"] = float(t["step_cm1"])
        if float(t["intensity_w_cm2"]) < 0:
            raise ConfigError(
                "polarizability.intensity_w_cm2 must be >= 0, got "
                f"{t['intensity_w_cm2']}")
        t["intensity_w_cm2"] = float(t["intensity_w_cm2"])
        if t["catalog"] is not None:
            cat_path = Path(t["catalog"])
            if base is not None and not cat_path.is_absolute():
                cat_path = base / cat_path
            if not cat_path.is_file():
                raise ConfigError(
                    f"polarizability.catalog: file not found: {cat_path}")
            t["catalog"] = cat_path
        if t["catalog_e_max_cm1"] is not None:
            t["catalog_e_max_cm1"] = float(t["catalog_e_max_cm1"])
        if t["flag_threshold_au"] is not None:
            if not float(t["flag_threshold_au"]) > 0:
                raise ConfigError(
                    "polarizability.flag_threshold_au must be > 0, got "
                    f"{t['flag_threshold_au']}")
            t["flag_threshold_au"] = float(t["flag_threshold_au"])
        tasks["polarizability"] = t

    raw = {k: dict(v) for k, v in checked.items()}
    for sect in raw.values():
        for k, v in sect.items():
            if isinstance(v, Path):
                sect[k] = str(v)
    return RunConfig(
        path=path,
        raw=raw,
        hash=config_hash_of_dict(raw),
        species_a=species_a,
        species_b=species_b,
        b_gauss=b_gauss,
        curves=curves,
        curve_paths=curve_paths,
        solver=sol,
        tasks=tasks,
    )
