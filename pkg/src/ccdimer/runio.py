"""Reproducible run outputs: manifests, atomic writes, numeric CSV tables.

Every output CSV starts with a '#' header block that names its columns and
embeds the config hash of the run that produced it; stripping the '#' lines
leaves a strictly rectangular, purely numeric table.  Numeric cells are
written with repr() so identical computations give bit-identical files.
The JSON manifest records what was run (config hash, tool version, input
checksums, outputs) and is the only artifact carrying timestamps.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

__all__ = [
    "RunManifest",
    "sha256_of_file",
    "sha256_of_text",
    "atomic_write_text",
    "write_csv",
    "write_manifest",
]


def sha256_of_text(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def sha256_of_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.",
                               suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _cell(x) -> str:
    """One strictly numeric CSV cell (bools as 0/1, full float precision)."""
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int,)):
        return repr(int(x))
    return repr(float(x))


def write_csv(path, columns, rows, *, config_hash: str = "",
              meta: dict | None = None) -> None:
    """Emit one numeric table with the standard '#' header block.

    ``columns`` are the column names (recorded in the header only; the body
    holds numbers exclusively); ``rows`` is an iterable of row sequences of
    matching length.  ``meta`` adds extra "# key = value" header lines.
    """
    lines = [f"# config_sha256 = {config_hash or 'unconfigured'}"]
    for k, v in (meta or {}).items():
        lines.append(f"# {k} = {v}")
    lines.append(f"# columns: {', '.join(columns)}")
    ncol = len(columns)
    for row in rows:
        row = list(row)
        if len(row) != ncol:
            raise ValueError(
                f"row has {len(row)} cells, expected {ncol}: {row!r}")
        lines.append(", ".join(_cell(x) for x in row))
    atomic_write_text(path, "\n".join(lines) + "\n")


@dataclass
class RunManifest:
    """What ran, on which inputs, producing which files."""

    config_hash: str
    task: str
    version: str = __version__
    started_utc: str = ""
    finished_utc: str = ""
    inputs: dict = field(default_factory=dict)    # path -> sha256
    outputs: list = field(default_factory=list)   # paths relative to out dir
    notes: dict = field(default_factory=dict)

    def start(self) -> "RunManifest":
        self.started_utc = datetime.now(timezone.utc).isoformat()
        return self

    def finish(self) -> "RunManifest":
        self.finished_utc = datetime.now(timezone.utc).isoformat()
        return self

    def add_input(self, path) -> None:
        p = str(path)
        if p not in self.inputs:
            self.inputs[p] = sha256_of_file(path)

    def to_json(self) -> str:
        payload = {
            "config_sha256": self.config_hash,
            "task": self.task,
            "tool_version": self.version,
            "started_utc": self.started_utc,
            "finished_utc": self.finished_utc,
            "inputs_sha256": dict(sorted(self.inputs.items())),
            "outputs": list(self.outputs),
            "notes": self.notes,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_manifest(manifest: RunManifest, out_dir) -> Path:
    out = Path(out_dir) / f"manifest_{manifest.task}.json"
    atomic_write_text(out, manifest.to_json())
    return out
