"""Instance descriptors and deterministic JSON output.

A descriptor looks like::

    {
      "schema": "involquat/1",
      "algebra": {"field": "GF(3)", "n": 4,
                  "involution": {"kind": "first", "g": [[1,0,0,0], ...]}},
      "elements": {"e": [[...]], "lambda": 1},
      "seed": 0, "trials": 1000
    }

``field`` is a name (``"GF(2)"``, ``"GF(4)"``, ``"GF(9)u"``, ``"Q"``) or a
field descriptor as produced by ``FieldSpec.descriptor()``.  Matrix entries
are integers, rationals as strings (``"1/2"``), or for extension fields
polynomials in ``t`` (``"t+1"``) or low-to-high digit lists (``[1, 1]``).
Plain integers always denote integers, i.e. elements of the prime field.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from ..errors import InvolquatError, PreconditionViolated, SizeMismatch
from ..exactfield import FieldSpec, field_from_json, parse_field_name
from ..involalg import InvolutionAlgebra, Kind
from ..matspace import Matrix

SCHEMA = "involquat/1"


class MalformedDescriptor(PreconditionViolated):
    def __init__(self, detail: str = ""):
        super().__init__("well-formed descriptor", detail)


@dataclass
class InstanceDescriptor:
    field: FieldSpec
    n: int
    algebra: InvolutionAlgebra | None
    elements: dict[str, Matrix] = field(default_factory=dict)
    scalars: dict[str, Any] = field(default_factory=dict)
    task: str | None = None
    seed: int = 0
    trials: int = 1000

    def element(self, *names: str) -> Matrix:
        for name in names:
            if name in self.elements:
                return self.elements[name]
        raise MalformedDescriptor(f"missing element {' or '.join(repr(n) for n in names)}")


def parse_field(obj: Any) -> FieldSpec:
    if isinstance(obj, str):
        return parse_field_name(obj)
    if isinstance(obj, dict):
        return field_from_json(obj)
    raise MalformedDescriptor(f"cannot read a field from {obj!r}")


def parse_matrix(F: FieldSpec, obj: Any, n: int | None = None) -> Matrix:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise MalformedDescriptor("a matrix must be a list of rows")
    try:
        M = Matrix.of(F, obj)
    except SizeMismatch as exc:
        raise MalformedDescriptor(str(exc)) from exc
    if n is not None and M.n != n:
        raise MalformedDescriptor(f"expected a {n}x{n} matrix, got {M.n}x{M.n}")
    return M


def parse_descriptor(obj: Any) -> InstanceDescriptor:
    if not isinstance(obj, dict):
        raise MalformedDescriptor("top level must be an object")
    schema = obj.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise MalformedDescriptor(f"unsupported schema {schema!r}")
    a = obj.get("algebra")
    if not isinstance(a, dict) or "field" not in a or "n" not in a:
        raise MalformedDescriptor("algebra needs 'field' and 'n'")
    try:
        F = parse_field(a["field"])
        n = int(a["n"])
        if n < 1:
            raise MalformedDescriptor("n must be positive")
        alg = None
        inv = a.get("involution")
        if inv is not None:
            kind = Kind(inv.get("kind", "first"))
            g = parse_matrix(F, inv["g"], n) if inv.get("g") is not None else None
            alg = InvolutionAlgebra(F, n, g, kind)
        elements, scalars = {}, {}
        for name, val in (obj.get("elements") or {}).items():
            if isinstance(val, list) and val and isinstance(val[0], list):
                elements[name] = parse_matrix(F, val, n)
            else:
                scalars[name] = F.coerce(val)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvolquatError):
            raise
        raise MalformedDescriptor(str(exc)) from exc
    return InstanceDescriptor(F, n, alg, elements, scalars, obj.get("task"), int(obj.get("seed", 0)),
                              int(obj.get("trials", 1000)))


def loads_descriptor(text: str) -> InstanceDescriptor:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDescriptor(f"invalid JSON: {exc}") from exc
    return parse_descriptor(obj)


def descriptor_for(alg: InvolutionAlgebra | None, elements: dict[str, Matrix] | None = None,
                   scalars: dict[str, Any] | None = None, field: FieldSpec | None = None,
                   n: int | None = None, **extra: Any) -> dict:
    """JSON-ready descriptor; inverse of :func:`parse_descriptor`."""
    if alg is not None:
        d = {"schema": SCHEMA, "algebra": alg.descriptor()}
        F = alg.field
    else:
        F = field
        d = {"schema": SCHEMA, "algebra": {"field": F.descriptor(), "n": n}}
    els = {k: m.to_json() for k, m in (elements or {}).items()}
    els.update({k: F.to_json(v) for k, v in (scalars or {}).items()})
    if els:
        d["elements"] = els
    d.update(extra)
    return d


def _default(o: Any) -> Any:
    if isinstance(o, Matrix):
        return o.to_json()
    if hasattr(o, "to_json"):
        return o.to_json()
    if isinstance(o, (set, frozenset)):
        return sorted(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def dumps(payload: dict, indent: int | None = 2) -> str:
    """Stable serialization: schema tag, sorted keys, ASCII only."""
    body = {"schema": SCHEMA, **payload}
    return json.dumps(body, sort_keys=True, indent=indent, ensure_ascii=True, default=_default)
