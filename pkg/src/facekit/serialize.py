"""Bit-stable serialization helpers: deterministic JSON (sorted keys, floats
at 17 significant digits) and little-endian float64 binary blobs."""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["json_dumps", "dump_json", "write_f64", "read_f64"]


def _fmt(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if not np.isfinite(v):
            raise ValueError(f"non-finite float {v} not representable in JSON")
        if v == int(v) and abs(v) < 1e16:
            return f"{v:.1f}"
        return f"{v:.17g}"
    if isinstance(value, str):
        import json

        return json.dumps(value)
    if isinstance(value, dict):
        items = sorted(value.items())
        inner = ",".join(f"{_fmt(str(k))}:{_fmt(v)}" for k, v in items)
        return "{" + inner + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        seq = value.tolist() if isinstance(value, np.ndarray) else value
        return "[" + ",".join(_fmt(v) for v in seq) + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def json_dumps(obj) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    return _fmt(obj)


def dump_json(obj, path) -> None:
    Path(path).write_text(json_dumps(obj) + "\n")


def write_f64(path, *arrays) -> None:
    """Concatenate arrays as little-endian float64 into one blob."""
    with open(path, "wb") as f:
        for a in arrays:
            f.write(np.ascontiguousarray(a, dtype="<f8").tobytes())


def read_f64(path, shapes) -> list[np.ndarray]:
    """Read back arrays laid out by write_f64 given their shapes."""
    data = np.frombuffer(Path(path).read_bytes(), dtype="<f8")
    out = []
    pos = 0
    for shape in shapes:
        n = int(np.prod(shape))
        out.append(data[pos:pos + n].reshape(shape).copy())
        pos += n
    if pos != data.size:
        raise ValueError(f"blob has {data.size} values, shapes consume {pos}")
    return out
