"""CSV / JSON report emission and parsing of grid arguments."""

import csv
import dataclasses
import io
import json
import sys
from decimal import Decimal, InvalidOperation


def _as_dict(row):
    if isinstance(row, dict):
        return row
    if hasattr(row, "as_row"):
        return row.as_row()
    if dataclasses.is_dataclass(row):
        return dataclasses.asdict(row)
    raise TypeError(f"cannot report a {type(row).__name__}")


def format_value(v):
    """Text form used in CSV cells: 17 significant digits, '' for missing."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g")
    if hasattr(v, "dtype"):
        return format_value(v.item())
    return str(v)


def emit_report(rows, fmt="csv", path=None, columns=None, meta=None):
    """Write homogeneous ``rows`` as CSV (RFC 4180) or JSON ``{meta, rows}``.

    ``path`` of None or '-' means standard output.  In CSV, ``meta`` becomes a
    single leading '#' line.
    """
    rows = [_as_dict(r) for r in rows]
    if columns is None:
        columns = list(rows[0]) if rows else []
    columns = list(columns)
    for r in rows:
        if list(r) != columns:
            raise ValueError(f"row keys {list(r)} do not match columns {columns}")
    if fmt == "csv":
        buf = io.StringIO(newline="")
        if meta:
            buf.write("# " + "; ".join(f"{k}={format_value(v)}" for k, v in meta.items()) + "\r\n")
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([format_value(r[c]) for c in columns])
        text = buf.getvalue()
    elif fmt == "json":
        clean = [{c: _json_value(r[c]) for c in columns} for r in rows]
        meta = {k: _json_value(v) for k, v in (meta or {}).items()}
        text = json.dumps({"meta": meta, "rows": clean}, indent=1) + "\n"
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text


def _json_value(v):
    if hasattr(v, "dtype"):
        return v.item()
    return v


def read_csv_report(path):
    """Rows of a CSV report as dicts of strings; '#' metadata lines are skipped."""
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def parse_grid(text):
    """``start:stop:step`` (stop included only if hit exactly) or a comma list."""
    text = str(text).strip()
    if ":" not in text:
        return [float(x) for x in text.split(",") if x.strip()]
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = (Decimal(x.strip()) for x in parts)
    except InvalidOperation:
        raise ValueError(f"bad grid {text!r}") from None
    if not all(x.is_finite() for x in (start, stop, step)) or not step > 0 or stop < start:
        raise ValueError(f"bad grid {text!r}")
    # decimal arithmetic, so 0:2:0.05 yields 1.95 and lands on 2 exactly
    count = int((stop - start) // step) + 1
    return [float(start + i * step) for i in range(count)]
