"""Deterministic serialization with exact float round trips.

Floats are written with 17 significant digits ("%.17g"), which reproduces the
IEEE double exactly on parse; complex values serialize as {"re": .., "im": ..}
objects in JSON and "re;im" fields in CSV.
"""
from __future__ import annotations

import dataclasses
import enum
import json
import math

import numpy as np

FLOAT_FMT = "%.17g"


def fmt_float(x: float) -> str:
    """Exact-round-trip decimal form of a double (JSON-compatible tokens)."""
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return FLOAT_FMT % x


def fmt_complex(z: complex) -> str:
    """CSV field form of a complex value: "re;im"."""
    z = complex(z)
    return f"{fmt_float(z.real)};{fmt_float(z.imag)}"


def parse_complex(field: str) -> complex:
    """Inverse of fmt_complex."""
    re, im = field.split(";")
    return complex(float(re), float(im))


def to_plain(obj):
    """Recursively convert to plain Python types (complex preserved)."""
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        return obj
    if isinstance(obj, complex):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, np.generic):
        return to_plain(obj.item())
    if isinstance(obj, np.ndarray):
        return [to_plain(x) for x in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name))
                for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(obj, out: list) -> None:
    if obj is None:
        out.append("null")
    elif isinstance(obj, bool):
        out.append("true" if obj else "false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(fmt_float(obj))
    elif isinstance(obj, complex):
        out.append('{"re": %s, "im": %s}' % (fmt_float(obj.real), fmt_float(obj.imag)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(", ")
            out.append(json.dumps(str(k)))
            out.append(": ")
            _emit(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(", ")
            _emit(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """JSON text with %.17g floats and complex objects, insertion-ordered keys."""
    out: list = []
    _emit(to_plain(obj), out)
    return "".join(out)


def _decode_object(d: dict):
    if set(d) == {"re", "im"}:
        return complex(d["re"], d["im"])
    return d


def loads(text: str):
    """Parse dumps output; {"re", "im"} objects come back as complex."""
    return json.loads(text, object_hook=_decode_object)


def csv_field(value) -> str:
    """One CSV cell: floats at 17 digits, complex as re;im, rest via str."""
    if isinstance(value, (bool, int)) or value is None:
        return "" if value is None else str(value)
    if isinstance(value, float):
        return fmt_float(value)
    if isinstance(value, complex):
        return fmt_complex(value)
    return str(value)


def csv_lines(header: list[str], rows: list[list]) -> list[str]:
    """Comma-joined lines (no quoting needed: fields never contain commas)."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(csv_field(v) for v in row))
    return lines
