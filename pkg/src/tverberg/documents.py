"""JSON documents for instances and witnesses.

Rationals travel as strings (``"3/2"``, ``"-4"``); bare JSON integers are
accepted as shorthand, JSON floats are rejected.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

from .model import Instance, InvalidInstance, TverbergWitness, to_fraction


class DocumentError(ValueError):
    """Unparseable or inconsistent document; the message names the field."""


def rational_str(x: Fraction) -> str:
    return str(Fraction(x))


def _rational(value, where: str) -> Fraction:
    if isinstance(value, float):
        raise DocumentError(f"{where}: floats are not allowed, write {value!r} as a string 'p/q'")
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise DocumentError(f"{where}: expected a rational string, got {value!r}")
    try:
        q = to_fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"{where}: {exc}") from None
    return q


def _int(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(f"{where}: expected an integer, got {value!r}")
    return value


def _load(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise DocumentError("top level: expected a JSON object")
    return doc


def _field(doc: dict, key: str, kind=list):
    if key not in doc:
        raise DocumentError(f"{key}: missing field")
    value = doc[key]
    if kind is list and not isinstance(value, list):
        raise DocumentError(f"{key}: expected an array")
    return value


def instance_to_doc(instance: Instance, metadata: dict | None = None) -> dict:
    doc = {
        "d": instance.d,
        "r": instance.r,
        "points": [[rational_str(x) for x in p] for p in instance.points],
        "colors": list(instance.coloring.class_of),
    }
    if metadata:
        doc["metadata"] = metadata
    return doc


def dump_instance(instance: Instance, metadata: dict | None = None) -> str:
    return json.dumps(instance_to_doc(instance, metadata), indent=2) + "\n"


def parse_instance(text: str) -> tuple[Instance, dict]:
    """Return the instance and its (possibly empty) metadata."""
    doc = _load(text)
    d = _int(_field(doc, "d", int), "d")
    r = _int(_field(doc, "r", int), "r")
    raw_points = _field(doc, "points")
    points = []
    for v, p in enumerate(raw_points):
        if not isinstance(p, list):
            raise DocumentError(f"points[{v}]: expected an array")
        if len(p) != d:
            raise DocumentError(f"points[{v}]: has {len(p)} coordinates, expected d={d}")
        points.append(tuple(_rational(x, f"points[{v}][{k}]") for k, x in enumerate(p)))
    colors = [_int(c, f"colors[{v}]") for v, c in enumerate(_field(doc, "colors"))]
    if len(colors) != len(points):
        raise DocumentError(f"colors: {len(colors)} entries for {len(points)} points")
    metadata = doc.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise DocumentError("metadata: expected an object")
    try:
        return Instance.build(d, r, points, colors), metadata
    except InvalidInstance as exc:
        raise DocumentError(str(exc)) from None


def witness_to_doc(witness: TverbergWitness) -> dict:
    return {
        "faces": [list(f) for f in witness.faces],
        "point": [rational_str(x) for x in witness.point],
        "coefficients": [
            [{"vertex": v, "value": rational_str(c[v])} for v in sorted(c)]
            for c in witness.coefficients
        ],
    }


def dump_witness(witness: TverbergWitness) -> str:
    return json.dumps(witness_to_doc(witness), indent=2) + "\n"


def dump_witnesses(witnesses) -> str:
    return json.dumps({"witnesses": [witness_to_doc(w) for w in witnesses]}, indent=2) + "\n"


def witness_from_doc(doc: dict, where: str = "") -> TverbergWitness:
    faces = []
    for i, face in enumerate(_field(doc, "faces")):
        if not isinstance(face, list):
            raise DocumentError(f"{where}faces[{i}]: expected an array")
        faces.append(tuple(_int(v, f"{where}faces[{i}][{k}]") for k, v in enumerate(face)))
    point = tuple(_rational(x, f"{where}point[{k}]") for k, x in enumerate(_field(doc, "point")))
    coefficients = []
    for i, entries in enumerate(_field(doc, "coefficients")):
        if not isinstance(entries, list):
            raise DocumentError(f"{where}coefficients[{i}]: expected an array")
        coeffs = {}
        for k, entry in enumerate(entries):
            at = f"{where}coefficients[{i}][{k}]"
            if not isinstance(entry, dict) or set(entry) != {"vertex", "value"}:
                raise DocumentError(f"{at}: expected {{'vertex': ..., 'value': ...}}")
            v = _int(entry["vertex"], f"{at}.vertex")
            if v in coeffs:
                raise DocumentError(f"{at}: vertex {v} listed twice")
            coeffs[v] = _rational(entry["value"], f"{at}.value")
        coefficients.append(coeffs)
    return TverbergWitness(tuple(faces), point, tuple(coefficients))


def parse_witness(text: str) -> TverbergWitness:
    return witness_from_doc(_load(text))


def parse_witnesses(text: str) -> list[TverbergWitness]:
    """Accept either a single witness document or ``{"witnesses": [...]}``."""
    doc = _load(text)
    if "witnesses" in doc:
        items = _field(doc, "witnesses")
        return [witness_from_doc(w, f"witnesses[{i}].") for i, w in enumerate(items)]
    return [witness_from_doc(doc)]


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` so that ``path`` either gets the full content or is untouched."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
