"""Reproducible experiment reports with JSON and CSV emission.

Reports serialize deterministically: keys are sorted, floats use python's
shortest round-trip repr (lossless for doubles), and volatile data such as
wall time stays out of the serialized payload so that identical configs
yield byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field

ARTIFACT_VERSION = "0.1.0"


def derive_seed(master_seed: int, index: int) -> int:
    """Stable per-trial seed: hash of (master seed, trial index)."""
    digest = hashlib.sha256(f"{master_seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "little")


@dataclass
class ExperimentReport:
    """One experiment run: config echo, per-case rows, aggregate verdict.

    ``wall_time_s`` is informational only and never serialized.
    """

    kind: str
    config: dict
    rows: list = field(default_factory=list)
    passed: bool = True
    version: str = ARTIFACT_VERSION
    wall_time_s: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "version": self.version,
            "kind": self.kind,
            "config": self.config,
            "rows": self.rows,
            "passed": self.passed,
        }

    def json_bytes(self) -> bytes:
        return (json.dumps(self.to_json_dict(), sort_keys=True, indent=2,
                           ensure_ascii=True) + "\n").encode()

    def csv_text(self) -> str:
        buf = io.StringIO()
        if self.rows:
            fields = list(self.rows[0].keys())
            writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
            writer.writeheader()
            for row in self.rows:
                writer.writerow({k: _csv_cell(row.get(k)) for k in fields})
        return buf.getvalue()

    def write(self, path: str, fmt: str = "json") -> None:
        if fmt == "json":
            with open(path, "wb") as fh:
                fh.write(self.json_bytes())
        elif fmt == "csv":
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(self.csv_text())
        else:
            raise ValueError(f"unknown report format {fmt!r}")


def _csv_cell(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, bool):
        return str(v).lower()
    return v
