"""
Table helpers shared by reporters and the CLI output layer.
"""

import csv
import io
import json
from typing import Any, Dict, List


def to_jsonable(value: Any) -> Any:
    """Recursively turn scalars (Fraction, GaussianRational, mpf) into their exact literal strings."""
    from core.scalar import format_scalar

    if isinstance(value, dict):
        return {str(key): to_jsonable(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item) for item in value]
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, int):
        return value
    try:
        return format_scalar(value)
    except TypeError:
        return str(value)


def dumps_json(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), indent=2)


def rows_to_csv(rows: List[Dict[str, Any]]) -> str:
    """CSV with the union of row keys as header, in first-seen order."""
    header: List[str] = []
    for row in rows:
        for key in row:
            if key not in header:
                header.append(key)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: to_jsonable(value) for key, value in row.items()})
    return buffer.getvalue()
