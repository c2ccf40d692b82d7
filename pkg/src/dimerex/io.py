"""Dimer documents: parsing, serialization and the bundled fixtures.

A document is JSON with the fields::

    {
      "name": "dp0",                      # optional
      "blacks": ["b1", ...],
      "whites": ["w1", ...],
      "edges": [{"id": "e1", "black": "b1", "white": "w1", "shift": [0, 0]}, ...],
      "cyclic_order": {"b1": ["e1", "e2", "e3"], ...},   # counterclockwise
      "positions": {"b1": ["1/6", "1/3"], ...}          # optional, figures only
    }

All integers are exact; positions are rationals written as strings or ints.
"""
from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

from .dimer import DimerModel, DimerStructureError, Edge

FIXTURES = ("c3", "dp0", "f0", "f1", "wf1")


class DimerParseError(DimerStructureError):
    """Document does not follow the dimer format; ``location`` names the field."""

    def __init__(self, message: str, location: str):
        super().__init__(f"{location}: {message}", location)
        self.location = location


def _ident(value: Any, where: str) -> str:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DimerParseError(f"expected an id (string or integer), got {value!r}", where)
    return str(value)


def _int(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DimerParseError(f"expected an integer, got {value!r}", where)
    return value


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise DimerParseError(f"expected an exact rational, got {value!r}", where)
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise DimerParseError(f"bad rational {value!r}", where) from exc


def parse_dimer(document: str | dict) -> DimerModel:
    """Parse a JSON string (or an already-decoded mapping) into a model."""
    if isinstance(document, str):
        try:
            data = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DimerParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from exc
    else:
        data = document
    if not isinstance(data, dict):
        raise DimerParseError("top level must be an object", "document")
    for key in ("blacks", "whites", "edges", "cyclic_order"):
        if key not in data:
            raise DimerParseError("missing required field", key)
    blacks = [_ident(x, f"blacks[{i}]") for i, x in enumerate(data["blacks"])]
    whites = [_ident(x, f"whites[{i}]") for i, x in enumerate(data["whites"])]
    edges = []
    if not isinstance(data["edges"], list):
        raise DimerParseError("must be a list", "edges")
    for i, e in enumerate(data["edges"]):
        where = f"edges[{i}]"
        if not isinstance(e, dict):
            raise DimerParseError("must be an object", where)
        for key in ("id", "black", "white"):
            if key not in e:
                raise DimerParseError("missing field", f"{where}.{key}")
        shift = e.get("shift", [0, 0])
        if not isinstance(shift, list) or len(shift) != 2:
            raise DimerParseError("shift must be a pair of integers", f"{where}.shift")
        edges.append(
            Edge(
                _ident(e["id"], f"{where}.id"),
                _ident(e["black"], f"{where}.black"),
                _ident(e["white"], f"{where}.white"),
                (_int(shift[0], f"{where}.shift[0]"), _int(shift[1], f"{where}.shift[1]")),
            )
        )
    co = data["cyclic_order"]
    if not isinstance(co, dict):
        raise DimerParseError("must be an object", "cyclic_order")
    for node in blacks + whites:
        if node not in co:
            raise DimerParseError(f"no cyclic order for node {node!r}", f"cyclic_order.{node}")
    cyclic = {
        str(n): [_ident(x, f"cyclic_order.{n}[{j}]") for j, x in enumerate(order)]
        for n, order in co.items()
    }
    positions = None
    if data.get("positions"):
        positions = {}
        for n, p in data["positions"].items():
            if not isinstance(p, list) or len(p) != 2:
                raise DimerParseError("position must be a pair", f"positions.{n}")
            positions[str(n)] = (
                _rational(p[0], f"positions.{n}[0]"),
                _rational(p[1], f"positions.{n}[1]"),
            )
    return DimerModel.build(blacks, whites, edges, cyclic, positions, name=str(data.get("name", "")))


def dimer_to_dict(model: DimerModel) -> dict:
    doc: dict[str, Any] = {}
    if model.name:
        doc["name"] = model.name
    doc["blacks"] = list(model.blacks)
    doc["whites"] = list(model.whites)
    doc["edges"] = [
        {"id": e.id, "black": e.black, "white": e.white, "shift": list(e.shift)} for e in model.edges
    ]
    doc["cyclic_order"] = {n: list(order) for n, order in model.rotation}
    if model.positions:
        doc["positions"] = {n: [str(p[0]), str(p[1])] for n, p in model.positions}
    return doc


def serialize_dimer(model: DimerModel) -> str:
    """Stable text form: one edge / node entry per line."""
    doc = dimer_to_dict(model)
    lines = []
    for key, value in doc.items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            body = ",\n".join(f"    {json.dumps(v)}" for v in value)
            lines.append(f'  "{key}": [\n{body}\n  ]')
        elif isinstance(value, dict):
            body = ",\n".join(f"    {json.dumps(k)}: {json.dumps(v)}" for k, v in value.items())
            lines.append(f'  "{key}": {{\n{body}\n  }}')
        else:
            lines.append(f'  "{key}": {json.dumps(value)}')
    return "{\n" + ",\n".join(lines) + "\n}\n"


def load_dimer(path: str | Path) -> DimerModel:
    return parse_dimer(Path(path).read_text())


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    return resources.files("dimerex.fixtures").joinpath(f"{name}.json").read_text()


def load_fixture(name: str) -> DimerModel:
    return parse_dimer(fixture_text(name))
