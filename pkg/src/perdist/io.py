"""File formats: coefficient and cone JSON, generator CSV, trace CSV.

Floats are written with 17 significant digits, which round-trips IEEE doubles
exactly.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .cones import LatticeCone
from .distributions import CoefficientField
from .shiftinv import SampledGenerator


class FormatError(ValueError):
    """Malformed input file; the message names the file and a character offset."""

    def __init__(self, path, offset: int, reason: str):
        self.path = str(path)
        self.offset = int(offset)
        self.reason = reason
        super().__init__(f"{self.path}: offset {self.offset}: {reason}")


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def dumps(obj, indent: int = 1, _level: int = 0) -> str:
    """JSON text with every float at 17 significant digits (non-finite floats become null)."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in seq):
            return "[" + ", ".join(dumps(v) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_json(obj, path) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def _load_json(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(path, 0, f"cannot read file ({exc.strerror})") from exc
    try:
        return text, json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(path, exc.pos, exc.msg) from exc


def _key_offset(text: str, key: str) -> int:
    i = text.find(f'"{key}"')
    return max(i, 0)


# ------------------------------------------------------------------------------------
# coefficient fields

def field_to_dict(f: CoefficientField) -> dict:
    inter = np.empty(2 * f.data.size)
    flat = f.data.ravel()
    inter[0::2] = flat.real
    inter[1::2] = flat.imag
    return {"dim": f.dim, "radius": f.radius, "coeffs": inter}


def field_dumps(f: CoefficientField) -> str:
    flat = f.data.ravel()
    body = ",".join(f"{fmt(z.real)},{fmt(z.imag)}" for z in flat)
    return f'{{"dim": {f.dim}, "radius": {f.radius}, "coeffs": [{body}]}}\n'


def write_field(f: CoefficientField, path) -> None:
    Path(path).write_text(field_dumps(f))


def field_from_obj(obj, path="<memory>", text: str = "") -> CoefficientField:
    if not isinstance(obj, dict):
        raise FormatError(path, 0, "expected a JSON object with dim, radius, coeffs")
    for key in ("dim", "radius", "coeffs"):
        if key not in obj:
            raise FormatError(path, 0, f"missing key {key!r}")
    dim, radius, coeffs = obj["dim"], obj["radius"], obj["coeffs"]
    if not isinstance(dim, int) or dim not in (1, 2, 3):
        raise FormatError(path, _key_offset(text, "dim"), f"dim must be 1, 2 or 3, got {dim!r}")
    if not isinstance(radius, int) or radius < 0:
        raise FormatError(path, _key_offset(text, "radius"), f"radius must be a nonnegative integer, got {radius!r}")
    expected = 2 * (2 * radius + 1) ** dim
    if not isinstance(coeffs, list) or len(coeffs) != expected:
        got = len(coeffs) if isinstance(coeffs, list) else type(coeffs).__name__
        raise FormatError(path, _key_offset(text, "coeffs"), f"coeffs must hold {expected} numbers, got {got}")
    try:
        arr = np.array(coeffs, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise FormatError(path, _key_offset(text, "coeffs"), "coeffs must be numbers") from exc
    if not np.all(np.isfinite(arr)):
        raise FormatError(path, _key_offset(text, "coeffs"), "coeffs must be finite")
    data = (arr[0::2] + 1j * arr[1::2]).reshape((2 * radius + 1,) * dim)
    return CoefficientField(data)


def read_field(path) -> CoefficientField:
    text, obj = _load_json(path)
    return field_from_obj(obj, path, text)


# ------------------------------------------------------------------------------------
# cones

def write_cone(cone: LatticeCone, path) -> None:
    write_json(cone.to_dict(), path)


def read_cone(path) -> LatticeCone:
    text, obj = _load_json(path)
    try:
        return LatticeCone.from_dict(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(path, _key_offset(text, "halfspaces"), f"invalid cone: {exc}") from exc


# ------------------------------------------------------------------------------------
# generators

def generator_to_csv(gen: SampledGenerator) -> str:
    vals = np.asarray(gen.values)
    if np.iscomplexobj(vals):
        if np.any(vals.imag != 0):
            raise ValueError("generator CSV holds real samples only")
        vals = vals.real
    lines = ["t,value"]
    lines += [f"{fmt(t)},{fmt(v)}" for t, v in zip(gen.t, vals)]
    return "\n".join(lines) + "\n"


def write_generator(gen: SampledGenerator, path) -> None:
    Path(path).write_text(generator_to_csv(gen))


def read_generator(path, s: float = 0.0, label: str | None = None) -> SampledGenerator:
    """Read ``t,value`` rows on a uniform grid ``t = p / M``; ``M`` is inferred from the spacing."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(path, 0, f"cannot read file ({exc.strerror})") from exc
    lines = text.splitlines(keepends=True)
    if not lines or lines[0].strip().replace(" ", "") != "t,value":
        raise FormatError(path, 0, "expected header 't,value'")
    ts, vals = [], []
    pos = len(lines[0])
    for line in lines[1:]:
        row = line.strip()
        if row:
            parts = row.split(",")
            try:
                if len(parts) != 2:
                    raise ValueError
                ts.append(float(parts[0]))
                vals.append(float(parts[1]))
            except ValueError:
                raise FormatError(path, pos, f"expected two numbers, got {row!r}") from None
        pos += len(line)
    if len(ts) < 2:
        raise FormatError(path, pos, "need at least two samples")
    ts = np.array(ts)
    M = int(round(1.0 / (ts[1] - ts[0])))
    p = np.rint(ts * M)
    if M <= 0 or np.any(np.abs(p - ts * M) > 1e-6) or np.any(np.diff(p) != 1):
        raise FormatError(path, len(lines[0]), "samples are not on a uniform grid t = p/M")
    return SampledGenerator(np.array(vals), int(p[0]), M, s, label if label is not None else path.stem)


def write_trace(trace, path) -> None:
    Path(path).write_text(trace.to_csv())
