"""Tabular results with a byte-stable CSV and JSON encoding."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any

from .errors import InvariantError

__all__ = ["SweepTable", "format_cell"]


def format_cell(x: Any) -> str:
    """Render one cell: floats with 17 significant digits, ints and strings verbatim."""
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return "%.17g" % x
    return str(x)


def _parse_cell(s: str) -> Any:
    for conv in (int, float):
        try:
            return conv(s)
        except ValueError:
            pass
    return s


@dataclass
class SweepTable:
    """Named columns, ordered rows and free-form metadata.

    Cells are numbers or short labels. When ``key`` names a column the rows
    must be sorted by it (non-decreasing).
    """

    columns: list[str]
    rows: list[tuple]
    metadata: dict = field(default_factory=dict)
    key: str | None = None

    def __post_init__(self):
        self.rows = [tuple(float(c) if hasattr(c, "dtype") else c for c in r) for r in self.rows]
        self.validate()

    def validate(self) -> None:
        n = len(self.columns)
        for i, r in enumerate(self.rows):
            if len(r) != n:
                raise InvariantError(f"row {i} has {len(r)} cells, expected {n}")
            for c in r:
                if isinstance(c, float) and not math.isfinite(c):
                    raise InvariantError(f"row {i} contains a non-finite cell")
        if self.key is not None:
            j = self.columns.index(self.key)
            col = [r[j] for r in self.rows]
            if any(b < a for a, b in zip(col, col[1:])):
                raise InvariantError(f"rows are not sorted by {self.key}")

    def column(self, name: str) -> list:
        j = self.columns.index(name)
        return [r[j] for r in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k in sorted(self.metadata):
            buf.write(f"# {k}: {json.dumps(self.metadata[k], sort_keys=True)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([format_cell(c) for c in r])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"columns": self.columns, "rows": [list(r) for r in self.rows],
               "metadata": self.metadata, "key": self.key}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def dumps(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")

    @classmethod
    def from_csv(cls, text: str) -> "SweepTable":
        meta, body = {}, []
        for line in text.splitlines():
            if line.startswith("# "):
                k, v = line[2:].split(": ", 1)
                meta[k] = json.loads(v)
            else:
                body.append(line)
        rows = list(csv.reader(body))
        return cls(rows[0], [tuple(_parse_cell(c) for c in r) for r in rows[1:]], meta)

    @classmethod
    def from_json(cls, text: str) -> "SweepTable":
        doc = json.loads(text)
        return cls(doc["columns"], [tuple(r) for r in doc["rows"]], doc["metadata"], doc.get("key"))
