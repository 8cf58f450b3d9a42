"""CSV/JSON output and run manifests."""

from __future__ import annotations

import csv
import json
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

SCHEMA_VERSION = 1
OUTPUT_DIR_ENV = "ZETAWALK_OUTPUT_DIR"


def output_dir() -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, "."))


def resolve_output(path: str | None, default_name: str) -> Path:
    """Explicit paths are used as given; otherwise ``default_name`` in the output dir."""
    return Path(path) if path else output_dir() / default_name


def _jsonable(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if hasattr(v, "item"):  # numpy scalar
        return v.item()
    return v


def write_csv(rows: list[dict], path: str | Path, columns: list[str] | None = None) -> Path:
    """Write dict rows as RFC-4180 CSV with a header (CRLF line endings)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    if columns is None:
        columns = list(rows[0]) if rows else []
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=columns, lineterminator="\r\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: _jsonable(row[k]) for k in columns})
    return path


def write_json(obj, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(obj), indent=2, allow_nan=True) + "\n")
    return path


def write_rows(rows: list[dict], path: str | Path) -> Path:
    """CSV unless the suffix is ``.json``."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        return write_json(rows, path)
    return write_csv(rows, path)


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass
class RunManifest:
    command: str
    parameters: dict
    seed: int | None
    started: str
    finished: str = ""
    outputs: list[str] = field(default_factory=list)
    capped_fraction: float | None = None
    wall_time: float = 0.0
    schema_version: int = SCHEMA_VERSION
    argv: list[str] = field(default_factory=lambda: list(sys.argv))

    def write_beside(self, output: str | Path) -> Path:
        """Write ``<output>.manifest.json`` next to ``output``."""
        output = Path(output)
        missing = [p for p in self.outputs if not Path(p).exists()]
        if missing:
            raise FileNotFoundError(f"manifest references missing outputs: {missing}")
        return write_json(asdict(self), output.with_name(output.name + ".manifest.json"))
