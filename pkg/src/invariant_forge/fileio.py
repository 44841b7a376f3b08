"""JSON structure files.

Format (schema_version 1)::

    {"schema_version": 1,
     "field": {"kind": "cyclotomic", "order": 8},
     "dim": 2,
     "tensors": [{"name": "T", "p": 1, "q": 1,
                  "entries": [{"up": [0], "down": [0], "value": "z"}]}]}

Entries not listed are zero.  Listing the same index twice is an error.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import FieldError, ParseError, SchemaError
from .scalars import field_from_descriptor, parse_scalar, scalar_str
from .tensors import Structure, Tensor

SCHEMA_VERSION = 1


def _require(obj, key, kind, where):
    if not isinstance(obj, dict) or key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    val = obj[key]
    if kind is int and (not isinstance(val, int) or isinstance(val, bool)):
        raise SchemaError(f"{where}.{key}: expected an integer")
    if kind is not int and not isinstance(val, kind):
        raise SchemaError(f"{where}.{key}: expected {kind.__name__}")
    return val


def load_json(text: str, source: str = "<string>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def read_json(path):
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return load_json(text, str(path))


def structure_from_json(doc, source: str = "<structure>") -> Structure:
    if not isinstance(doc, dict):
        raise SchemaError(f"{source}: top level must be an object")
    version = _require(doc, "schema_version", int, source)
    if version != SCHEMA_VERSION:
        raise SchemaError(f"{source}: unsupported schema_version {version}")
    fdesc = _require(doc, "field", dict, source)
    try:
        field = field_from_descriptor(fdesc)
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"{source}.field: {exc}") from None
    dim = _require(doc, "dim", int, source)
    if dim < 1:
        raise SchemaError(f"{source}.dim: must be positive")
    tensors = {}
    for ti, td in enumerate(_require(doc, "tensors", list, source)):
        where = f"{source}.tensors[{ti}]"
        name = _require(td, "name", str, where)
        if name in tensors:
            raise SchemaError(f"{where}: duplicate tensor name {name!r}")
        p = _require(td, "p", int, where)
        q = _require(td, "q", int, where)
        if p < 0 or q < 0:
            raise SchemaError(f"{where}: p and q must be non-negative")
        t = Tensor.zeros(p, q, dim, field)
        seen = set()
        for ei, ed in enumerate(_require(td, "entries", list, where)):
            ew = f"{where}.entries[{ei}]"
            up = _require(ed, "up", list, ew)
            down = _require(ed, "down", list, ew)
            if len(up) != p or len(down) != q:
                raise SchemaError(f"{ew}: expected {p} up and {q} down indices")
            for i in up + down:
                if not isinstance(i, int) or isinstance(i, bool) or not 0 <= i < dim:
                    raise SchemaError(f"{ew}: index {i!r} out of range 0..{dim - 1}")
            key = tuple(up) + tuple(down)
            if key in seen:
                raise SchemaError(f"{ew}: duplicate entry for index {key}")
            seen.add(key)
            raw = ed.get("value")
            if raw is None:
                raise SchemaError(f"{ew}: missing field 'value'")
            try:
                t.arr[key] = parse_scalar(raw, field)
            except FieldError as exc:
                raise FieldError(f"{ew}.value: {exc}") from None
        tensors[name] = t
    return Structure(dim, field, tensors)


def parse_structure_text(text: str, source: str = "<string>") -> Structure:
    return structure_from_json(load_json(text, source), source)


def parse_structure_file(path) -> Structure:
    path = Path(path)
    return parse_structure_text(path.read_text(encoding="utf-8"), str(path))


def structure_to_json(s: Structure) -> dict:
    tensors = []
    for name, t in s.tensors.items():
        entries = [
            {"up": list(up), "down": list(down), "value": scalar_str(v)} for (up, down), v in t.items()
        ]
        tensors.append({"name": name, "p": t.p, "q": t.q, "entries": entries})
    return {
        "schema_version": SCHEMA_VERSION,
        "field": s.field.descriptor(),
        "dim": s.dim,
        "tensors": tensors,
    }


def dump_structure(s: Structure) -> str:
    """Canonical text: fixed key order, entries in index order, two-space indent."""
    return json.dumps(structure_to_json(s), indent=2, ensure_ascii=False) + "\n"


def write_structure(s: Structure, path):
    Path(path).write_text(dump_structure(s), encoding="utf-8")
