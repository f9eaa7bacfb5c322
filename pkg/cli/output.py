"""
Output Module

Serializers for CLI payloads: json (exact literal strings), csv (the payload's
table) and pretty (aligned key/value text followed by the table).

The table of a payload is its ``rows``, else its ``coeffs`` list, else the
``coeffs`` of its Schur-basis block.
"""

from typing import Any, Dict, List, Optional

from reporting.tables import dumps_json, rows_to_csv, to_jsonable


FORMATS = ("json", "csv", "pretty")


def _pretty_value(value: Any) -> str:
    value = to_jsonable(value)
    if isinstance(value, list):
        return "[" + ", ".join(_pretty_value(item) for item in value) + "]"
    if isinstance(value, dict):
        return ", ".join(f"{key}={_pretty_value(item)}" for key, item in value.items())
    return "-" if value is None else str(value)


def _table(payload: Dict[str, Any]) -> Optional[List[Dict[str, Any]]]:
    if "rows" in payload:
        return payload["rows"]
    if "coeffs" in payload:
        return payload["coeffs"]
    schur = payload.get("schur")
    if isinstance(schur, dict):
        return schur.get("coeffs")
    return None


def _pretty_rows(rows: List[Dict[str, Any]]) -> List[str]:
    if not rows:
        return ["(no rows)"]
    header: List[str] = []
    for row in rows:
        header.extend(key for key in row if key not in header)
    cells = [[_pretty_value(row.get(key)) for key in header] for row in rows]
    widths = [max(len(key), *(len(line[i]) for line in cells)) for i, key in enumerate(header)]
    lines = ["  ".join(key.ljust(width) for key, width in zip(header, widths))]
    lines.extend("  ".join(cell.ljust(width) for cell, width in zip(line, widths)) for line in cells)
    return lines


def render(payload: Dict[str, Any], fmt: str) -> str:
    """
    Render a command payload.

    Raises:
        ValueError: For an unknown format
    """
    if fmt == "json":
        return dumps_json(payload)
    rows = _table(payload)
    if fmt == "csv":
        if rows is None:
            rows = [{"key": key, "value": _pretty_value(value)} for key, value in payload.items()]
        return rows_to_csv(rows).rstrip("\n")
    if fmt == "pretty":
        lines = []
        for key, value in payload.items():
            if key in ("rows", "coeffs") or (rows is not None and isinstance(value, dict) and value.get("coeffs") is rows):
                continue
            lines.append(f"{key}: {_pretty_value(value)}")
        if rows is not None:
            lines.extend(_pretty_rows(rows))
        return "\n".join(lines)
    raise ValueError(f"Unknown output format '{fmt}'. Available: {', '.join(FORMATS)}")
