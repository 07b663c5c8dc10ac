"""Deterministic JSON writer: insertion-ordered keys, fixed-point floats.

Every exported artifact (scene geometry, session logs, reports) goes
through this so that identical inputs yield byte-identical files.
"""

from __future__ import annotations

import json

from .errors import DomainError


def fmt_float(v: float, decimals: int = 6) -> str:
    out = f"{v:.{decimals}f}"
    if out == f"-0.{'0' * decimals}":
        out = out[1:]
    return out


def dumps(value, *, decimals: int = 6) -> str:
    """Serialize to compact JSON with floats fixed to `decimals` places."""
    parts: list[str] = []
    _write(value, parts, decimals)
    return "".join(parts)


def _write(value, parts: list[str], decimals: int) -> None:
    if value is None:
        parts.append("null")
    elif value is True:
        parts.append("true")
    elif value is False:
        parts.append("false")
    elif isinstance(value, int):
        parts.append(str(value))
    elif isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise DomainError(f"cannot serialize non-finite float {value}")
        parts.append(fmt_float(value, decimals))
    elif isinstance(value, str):
        parts.append(json.dumps(value, ensure_ascii=False))
    elif isinstance(value, dict):
        parts.append("{")
        for i, (k, v) in enumerate(value.items()):
            if i:
                parts.append(",")
            parts.append(json.dumps(str(k), ensure_ascii=False))
            parts.append(":")
            _write(v, parts, decimals)
        parts.append("}")
    elif isinstance(value, (list, tuple)):
        parts.append("[")
        for i, v in enumerate(value):
            if i:
                parts.append(",")
            _write(v, parts, decimals)
        parts.append("]")
    else:
        raise DomainError(f"cannot serialize {type(value).__name__}")
