"""Machine-readable sweep output: CSV and JSON, exact round-trips.

CSV files carry the mandatory header below, one row per grid point, UTF-8
with LF line endings. Floats are written in shortest round-trip form, so
parsing an emitted file reproduces the result bit-for-bit. Columns for
decoders or analyses that were not enabled are empty (``null`` in JSON).
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, fields

from .harness import SweepResult, SweepRow

CSV_COLUMNS = [f.name for f in fields(SweepRow)]

_INT_COLUMNS = {"trials"}
_OPTIONAL_COLUMNS = {
    "mean_T_noncoop",
    "std_T_noncoop",
    "mean_T_coop",
    "std_T_coop",
    "bound_noncoop",
    "de_upper",
}


def _cell(value: float | int | None) -> str:
    return "" if value is None else repr(value) if isinstance(value, float) else str(value)


def dumps_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in result.rows:
        record = asdict(row)
        writer.writerow([_cell(record[name]) for name in CSV_COLUMNS])
    return buf.getvalue()


def write_csv(result: SweepResult, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_csv(result))


def _parse_row(record: dict[str, str]) -> SweepRow:
    kwargs = {}
    for name in CSV_COLUMNS:
        raw = record[name]
        if raw == "":
            if name not in _OPTIONAL_COLUMNS:
                raise ValueError(f"column {name!r} must not be empty")
            kwargs[name] = None
        elif name in _INT_COLUMNS:
            kwargs[name] = int(raw)
        else:
            kwargs[name] = float(raw)
    return SweepRow(**kwargs)


def loads_csv(text: str) -> SweepResult:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header: {reader.fieldnames}")
    return SweepResult(rows=[_parse_row(record) for record in reader])


def read_csv(path: str) -> SweepResult:
    with open(path, encoding="utf-8", newline="") as fh:
        return loads_csv(fh.read())


def dumps_json(result: SweepResult) -> str:
    return json.dumps([asdict(row) for row in result.rows], indent=2) + "\n"


def write_json(result: SweepResult, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_json(result))


def loads_json(text: str) -> SweepResult:
    rows = []
    for record in json.loads(text):
        missing = set(CSV_COLUMNS) - set(record)
        if missing:
            raise ValueError(f"row missing fields: {sorted(missing)}")
        coerced = {
            name: (
                record[name]
                if record[name] is None or name in _INT_COLUMNS
                else float(record[name])
            )
            for name in CSV_COLUMNS
        }
        rows.append(SweepRow(**coerced))
    return SweepResult(rows=rows)


def read_json(path: str) -> SweepResult:
    with open(path, encoding="utf-8") as fh:
        return loads_json(fh.read())


def write_result(result: SweepResult, path: str, output_format: str) -> None:
    if output_format == "csv":
        write_csv(result, path)
    elif output_format == "json":
        write_json(result, path)
    else:
        raise ValueError(f"unknown output format {output_format!r}")


def dumps_result(result: SweepResult, output_format: str) -> str:
    if output_format == "csv":
        return dumps_csv(result)
    if output_format == "json":
        return dumps_json(result)
    raise ValueError(f"unknown output format {output_format!r}")
