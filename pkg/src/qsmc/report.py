"""Structured-text report rendering.

One `key = value` pair per line; nesting is expressed with dotted keys and
sequences with `.N` indices, so the format stays greppable and trivially
parseable (see parse_kv).  Floats are written with repr for round-tripping.
"""

from __future__ import annotations

import numpy as np


def _fmt(value) -> str:
    # np.float64 subclasses float but reprs differently; cast either way
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (np.integer,)):
        return str(int(value))
    if isinstance(value, np.ndarray):
        return " ".join(repr(float(v)) for v in np.ravel(value))
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    return str(value)


def flatten(obj, prefix: str = ""):
    """Yield (dotted_key, scalar) pairs from nested dicts/lists/tuples."""
    if isinstance(obj, dict):
        for key, val in obj.items():
            yield from flatten(val, f"{prefix}{key}.")
    elif isinstance(obj, (list, tuple)) and not isinstance(obj, np.ndarray):
        for i, val in enumerate(obj):
            yield from flatten(val, f"{prefix}{i}.")
    else:
        yield prefix.rstrip("."), obj


def render_kv(obj) -> str:
    lines = []
    for key, value in flatten(obj):
        lines.append(f"{key} = {_fmt(value)}")
    return "\n".join(lines) + "\n"


def parse_kv(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        out[key.strip()] = value.strip()
    return out
