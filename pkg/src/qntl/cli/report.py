"""Experiment reports and their CSV/JSON serializations.

A report is the full artifact of one run: the resolved config, the result
rows, the summary scalars, and the wall-clock duration.  Rows are the
reproducible part; for a fixed resolved config they serialize to identical
bytes on every run (duration, by nature, varies and lives outside them).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping, Sequence

__all__ = ["ExperimentReport", "format_cell", "rows_to_csv"]


def format_cell(value: Any) -> str:
    """Deterministic text form of one CSV cell.

    Floats use repr (shortest round-tripping decimal, '.' separator); bools
    become 0/1 before the int path; everything else is str().
    """
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        # float() strips float subclasses whose repr is not plain decimal
        return repr(float(value))
    return str(value)


def rows_to_csv(columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    """Header plus one line per row, comma-separated, LF endings."""
    lines = [",".join(columns)]
    for row in rows:
        if len(row) != len(columns):
            raise ValueError(f"row width {len(row)} does not match {len(columns)} columns")
        lines.append(",".join(format_cell(v) for v in row))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ExperimentReport:
    """One run's complete output."""

    config: Mapping[str, Any]
    columns: tuple[str, ...]
    rows: tuple[tuple[Any, ...], ...]
    summary: Mapping[str, Any]
    duration_ms: float

    def rows_csv(self) -> str:
        return rows_to_csv(self.columns, self.rows)

    def to_json(self) -> str:
        """Full report document; keys follow the external contract."""
        payload = {
            "config": self.config,
            "rows": [dict(zip(self.columns, row)) for row in self.rows],
            "summary": dict(self.summary),
            "duration_ms": self.duration_ms,
        }
        return json.dumps(payload, indent=2, allow_nan=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        doc = json.loads(text)
        for key in ("config", "rows", "summary", "duration_ms"):
            if key not in doc:
                raise ValueError(f"report document is missing {key!r}")
        rows = doc["rows"]
        columns: tuple[str, ...] = tuple(rows[0].keys()) if rows else ()
        return cls(
            config=doc["config"],
            columns=columns,
            rows=tuple(tuple(row[c] for c in columns) for row in rows),
            summary=doc["summary"],
            duration_ms=float(doc["duration_ms"]),
        )
