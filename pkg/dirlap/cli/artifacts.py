"""Deterministic CSV/JSON/text artifact writers.

Floats are written with 17 significant digits in both CSV and JSON so that
identical runs produce identical bytes.
"""

import csv
import json
import logging
import math
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from dirlap.core.number_utils import format_float

logger = logging.getLogger(__name__)

JSON_INDENT = "  "


def _cell(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """Comma-separated file with floats at 17 significant digits and LF line endings."""
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"Row {row!r} does not match header {list(header)}")
            writer.writerow([_cell(value) for value in row])
            count += 1
    logger.debug(f"Wrote {count} rows to {path}")
    return path


def _key(key: Any) -> str:
    if isinstance(key, bool):
        return "true" if key else "false"
    if isinstance(key, float):
        return format_float(key)
    return str(key)


def _encode(payload: Any, depth: int) -> str:
    """JSON text for payload; NaN and infinities become null."""
    if payload is None or isinstance(payload, bool):
        return json.dumps(payload)
    if isinstance(payload, float):
        return format_float(payload) if math.isfinite(payload) else "null"
    if isinstance(payload, int):
        return str(payload)
    if isinstance(payload, str):
        return json.dumps(payload)

    pad = "\n" + JSON_INDENT * (depth + 1)
    close = "\n" + JSON_INDENT * depth
    if isinstance(payload, dict):
        if not payload:
            return "{}"
        # Sort on the original keys so integer keys keep numeric order
        items = sorted(payload.items(), key=lambda item: item[0])
        body = ("," + pad).join(
            f"{json.dumps(_key(key))}: {_encode(value, depth + 1)}" for key, value in items
        )
        return "{" + pad + body + close + "}"
    if isinstance(payload, (list, tuple)):
        if not payload:
            return "[]"
        body = ("," + pad).join(_encode(value, depth + 1) for value in payload)
        return "[" + pad + body + close + "]"
    return json.dumps(str(payload))


def write_json(path: Path, payload: Any) -> Path:
    """Indented JSON with sorted keys and floats at 17 significant digits."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(_encode(payload, 0) + "\n", encoding="utf-8")
    logger.debug(f"Wrote {path}")
    return path


def write_text(path: Path, lines: Iterable[str]) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
