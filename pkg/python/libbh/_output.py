"""Writers for CSV, JSON-lines and text-table records"""
import csv
import io
import json
import math
from typing import Any, Iterable, TextIO

import mpmath
import numpy as np

from ._errors import DomainError

SCHEMA_VERSION = 1
"""int: Version of the record schema, written into every JSON-lines record"""

MACHINE_DIGITS = 17
"""int: Significant digits of floats in CSV output"""

TABLE_DIGITS = 6
"""int: Significant digits of floats in text tables"""


def flatten(record: dict, prefix: str = "") -> dict:
    """Flatten nested dicts, joining keys with ``"."``"""
    flat = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, prefix=f"{name}."))
        else:
            flat[name] = value
    return flat


def _plain(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, mpmath.mp.dps)
    return value


def format_value(value: Any, digits: int = MACHINE_DIGITS) -> str:
    """Format one value: floats with `digits` significant digits, booleans as
    ``true``/``false``, None as an empty string"""
    value = _plain(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if not math.isfinite(value):
            return repr(value)
        return f"{value:.{digits}g}"
    return str(value)


def _fieldnames(records: list[dict]) -> list[str]:
    names = []
    for record in records:
        for key in record:
            if key not in names:
                names.append(key)
    return names


def write_csv(records: Iterable[dict], stream: TextIO):
    """Write flattened records as CSV with a header line

    Columns appear in order of first occurrence; missing values are empty.
    """
    records = [flatten(r) for r in records]
    writer = csv.DictWriter(
        stream, fieldnames=_fieldnames(records), lineterminator="\n"
    )
    writer.writeheader()
    for record in records:
        writer.writerow({k: format_value(v) for k, v in record.items()})


def _json_value(value: Any) -> Any:
    value = _plain(value)
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    return value


def write_jsonl(records: Iterable[dict], stream: TextIO, command: str):
    """Write one JSON object per line

    Each record is prefixed with ``schema_version`` and ``command``. Floats are
    written in their shortest round-trip form, non-finite floats as strings.
    """
    for record in records:
        data = {"schema_version": SCHEMA_VERSION, "command": command}
        data.update(_json_value(record))
        stream.write(json.dumps(data) + "\n")


def write_table(records: Iterable[dict], stream: TextIO):
    """Write flattened records as an aligned text table with 6 significant
    digits"""
    records = [flatten(r) for r in records]
    names = _fieldnames(records)
    rows = [
        [format_value(r.get(name), digits=TABLE_DIGITS) for name in names]
        for r in records
    ]
    widths = [
        max([len(name)] + [len(row[i]) for row in rows])
        for i, name in enumerate(names)
    ]
    lines = ["  ".join(n.ljust(w) for n, w in zip(names, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in rows]
    stream.write("\n".join(line.rstrip() for line in lines) + "\n")


def format_records(records: Iterable[dict], output_format: str, command: str) -> str:
    """Render records in ``"csv"``, ``"jsonl"`` or ``"table"`` format"""
    stream = io.StringIO()
    if output_format == "csv":
        write_csv(records, stream)
    elif output_format == "jsonl":
        write_jsonl(records, stream, command)
    elif output_format == "table":
        write_table(records, stream)
    else:
        raise DomainError(f"Error in format_records: unknown format {output_format}")
    return stream.getvalue()
