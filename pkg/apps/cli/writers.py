"""
Artifact writers: CSV tables, JSON documents and the manifest log.

Floats are written as 17 significant digits in scientific notation so
re-runs can be compared byte for byte.
"""

# Python modules
import hashlib
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

# Third party modules
import numpy as np


MANIFEST_NAME: str = "manifest.jsonl"


def format_value(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.16e}"
    return str(value)


def to_jsonable(value: Any) -> Any:
    """Plain JSON types; non-finite floats become the strings "inf", "-inf", "nan"."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isfinite(number):
            return number
        return "nan" if math.isnan(number) else ("inf" if number > 0 else "-inf")
    return value


def dumps(document: Any) -> str:
    return json.dumps(to_jsonable(document), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    lines: list[str] = [",".join(header)]
    lines.extend(",".join(format_value(v) for v in row) for row in rows)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write("\n".join(lines) + "\n")
    return path


def write_json(path: Path, document: Any) -> Path:
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(dumps(document))
    return path


def write_table(path_stem: Path, header: Sequence[str], rows: Iterable[Sequence[Any]], fmt: str) -> Path:
    """Write rows as `<stem>.csv`, or as `<stem>.json` with one object per row."""
    if fmt == "json":
        records = [dict(zip(header, row)) for row in rows]
        return write_json(path_stem.with_suffix(".json"), {"columns": list(header), "rows": records})
    return write_csv(path_stem.with_suffix(".csv"), header, rows)


def digest(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def append_manifest(out: Path, entry: dict[str, Any]) -> Path:
    """Append one sorted-key JSON line to `<out>/manifest.jsonl`."""
    out.mkdir(parents=True, exist_ok=True)
    target = out / MANIFEST_NAME
    with target.open("a", encoding="utf-8", newline="\n") as handle:
        handle.write(json.dumps(to_jsonable(entry), sort_keys=True, ensure_ascii=False) + "\n")
    return target


def read_manifest(path: Path) -> list[dict[str, Any]]:
    with path.open("r", encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]
