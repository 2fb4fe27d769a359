"""Reading and writing matrix files (CSV with fractions, or JSON)."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .errors import NonSquare, ParseError
from .matrix import PCMatrix


def _number(field, row: int, col: int) -> float:
    if isinstance(field, bool):
        raise ParseError(f"row {row}, column {col}: boolean is not a number")
    if isinstance(field, (int, float)):
        return float(field)
    text = str(field).strip()
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"row {row}, column {col}: cannot parse {text!r}") from exc


def parse_csv(text: str) -> PCMatrix:
    """``n`` lines of ``n`` comma-separated decimals or ``p/q`` fractions."""
    rows = []
    for r, line in enumerate(text.splitlines()):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        rows.append([_number(f, r, c) for c, f in enumerate(line.split(","))])
    if not rows:
        raise ParseError("empty matrix file")
    return PCMatrix(_rectangular(rows))


def parse_json(text: str) -> PCMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "entries" not in doc:
        raise ParseError('expected an object with an "entries" field')
    entries = doc["entries"]
    if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
        raise ParseError('"entries" must be a list of rows')
    rows = [[_number(f, r, c) for c, f in enumerate(row)] for r, row in enumerate(entries)]
    if "n" in doc and doc["n"] != len(rows):
        raise ParseError(f'"n" is {doc["n"]} but {len(rows)} rows were given')
    return PCMatrix(_rectangular(rows))


def _rectangular(rows: list[list[float]]) -> list[list[float]]:
    widths = {len(r) for r in rows}
    if len(widths) != 1:
        raise NonSquare(f"rows have differing lengths {sorted(widths)}")
    return rows


def parse_matrix(text: str, fmt: str | None = None) -> PCMatrix:
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "csv"
    if fmt == "json":
        return parse_json(text)
    if fmt == "csv":
        return parse_csv(text)
    raise ValueError(f"unknown matrix format {fmt!r}")


def load_matrix(path) -> PCMatrix:
    path = Path(path)
    fmt = "json" if path.suffix.lower() == ".json" else None
    return parse_matrix(path.read_text(), fmt)


def matrix_to_json(m: PCMatrix) -> str:
    return json.dumps({"n": m.n, "entries": m.tolist()})


def matrix_to_csv(m: PCMatrix) -> str:
    return "".join(",".join(repr(x) for x in row) + "\n" for row in m.tolist())
