"""CSV and JSON writers for experiment reports.

Every CSV starts with a ``# dtlab <schema> v1`` comment line followed by the
column header.  The JSON twin holds the same schema name, the run parameters,
the columns and the rows, so either file can be rebuilt from the other.
Floats are written with ``repr`` so output is byte-stable across reruns.
"""

from __future__ import annotations

import csv
import io
import json
import os
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

SCHEMA_VERSION = "v1"


def _cell(v: Any) -> Any:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    return str(v)


def _json_value(v: Any) -> Any:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, int) and not isinstance(v, bool) and abs(v) >= 2**53:
        return str(v)
    return v


def render_csv(schema: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    buf.write(f"# dtlab {schema} {SCHEMA_VERSION}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_json(schema: str, params: dict, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    doc = {
        "schema": schema,
        "version": SCHEMA_VERSION,
        "params": {k: _json_value(v) for k, v in params.items()},
        "columns": list(columns),
        "rows": [[_json_value(v) for v in row] for row in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def read_csv(path: str | os.PathLike) -> tuple[str, list[str], list[list[str]]]:
    with open(path, newline="", encoding="utf-8") as fh:
        first = fh.readline()
        if not first.startswith("# dtlab "):
            raise ValueError(f"{path}: missing schema comment line")
        schema = first.split()[2]
        reader = csv.reader(fh)
        columns = next(reader)
        return schema, columns, [row for row in reader]


def write_report(out: str | os.PathLike | None, schema: str, params: dict, columns, rows, stream=None) -> list[Path]:
    """Write ``out`` (CSV) and its ``.json`` twin; with ``out=None`` print CSV to ``stream``."""
    text = render_csv(schema, columns, rows)
    if out is None:
        if stream is not None:
            stream.write(text)
        return []
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    json_path = out.with_suffix(".json")
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    with open(json_path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_json(schema, params, columns, rows))
    return [out, json_path]
