"""JSON workspaces and machine-readable reports.

A workspace document looks like::

    {
      "space": {"kind": "linf", "dim": 2},
      "vectors": {"x": ["1", "1"], "y": ["1", "-1"]},
      "operators": {"T": [["1", "0"], ["-1", "2"]]},
      "sets": {"A": ["x", ["1", "0"]]},
      "functionals": {"F": [["1", "0"], ["0", "1"]], "G": [["1", "0"]]}
    }

Exact spaces take rationals as strings ("-3/4") or integers; JSON floats
are accepted only in float-mode spaces (regular polygons, float euclidean).
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .space import EUCLIDEAN, POLYGON, POLYHEDRAL, NormSpace, Operator, SpaceError, build_space


class WorkspaceError(ValueError):
    """Schema violation; the message starts with the offending field path."""


@dataclass
class Workspace:
    space: NormSpace | None = None
    vectors: dict = field(default_factory=dict)
    operators: dict = field(default_factory=dict)
    sets: dict = field(default_factory=dict)
    functionals: dict = field(default_factory=dict)

    def vector(self, name: str) -> tuple:
        try:
            return self.vectors[name]
        except KeyError:
            raise WorkspaceError(f"vectors.{name}: no such vector") from None

    def operator(self, name: str) -> Operator:
        try:
            return self.operators[name]
        except KeyError:
            raise WorkspaceError(f"operators.{name}: no such operator") from None

    def set(self, name: str) -> tuple:
        try:
            return self.sets[name]
        except KeyError:
            raise WorkspaceError(f"sets.{name}: no such set") from None


def _scalar(value, exact: bool, where: str):
    if isinstance(value, bool):
        raise WorkspaceError(f"{where}: booleans are not numbers")
    if isinstance(value, int):
        return Fraction(value) if exact else float(value)
    if isinstance(value, float):
        if exact:
            raise WorkspaceError(f"{where}: float {value!r} in an exact space; write it as a rational string")
        return value
    if isinstance(value, str):
        try:
            q = Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise WorkspaceError(f"{where}: {value!r} is not a rational number") from None
        return q if exact else float(q)
    raise WorkspaceError(f"{where}: expected a number, got {type(value).__name__}")


def _vector(values, exact: bool, where: str, dim: int | None = None) -> tuple:
    if not isinstance(values, list):
        raise WorkspaceError(f"{where}: expected a list of numbers")
    v = tuple(_scalar(a, exact, f"{where}[{i}]") for i, a in enumerate(values))
    if dim is not None and len(v) != dim:
        raise WorkspaceError(f"{where}: expected {dim} coordinates, got {len(v)}")
    return v


def _matrix(rows, exact: bool, where: str) -> tuple:
    if not isinstance(rows, list) or not rows:
        raise WorkspaceError(f"{where}: expected a non-empty list of rows")
    out = tuple(_vector(r, exact, f"{where}[{i}]") for i, r in enumerate(rows))
    if len({len(r) for r in out}) != 1 or not out[0]:
        raise WorkspaceError(f"{where}: rows must be non-empty and of equal length")
    return out


def _parse_space(doc, rational_only: bool, eps: float | None) -> NormSpace:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise WorkspaceError("space: expected an object with a 'kind' field")
    kind = str(doc["kind"]).lower()
    kwargs = {}
    if eps is not None:
        kwargs["eps"] = eps
    elif "eps" in doc:
        kwargs["eps"] = float(doc["eps"])
    try:
        if kind == POLYGON:
            if rational_only:
                raise WorkspaceError("space: polygon spaces are float mode but rational-only was requested")
            n_poly = doc.get("n", doc.get("n_poly"))
            if not isinstance(n_poly, int):
                raise WorkspaceError("space.n: polygon needs an integer n")
            return build_space(POLYGON, n_poly=n_poly, **kwargs)
        dim = doc.get("dim")
        if not isinstance(dim, int):
            raise WorkspaceError("space.dim: expected an integer")
        if kind == POLYHEDRAL:
            facets = doc.get("facets")
            exact = not any(isinstance(a, float) for f in facets or [] for a in f)
            if rational_only and not exact:
                raise WorkspaceError("space.facets: float facets but rational-only was requested")
            fs = _matrix(facets, exact, "space.facets")
            return build_space(POLYHEDRAL, dim, facets=fs, exact=exact, **kwargs)
        if kind == EUCLIDEAN:
            exact = bool(doc.get("exact", True))
            if rational_only and not exact:
                raise WorkspaceError("space.exact: float euclidean space but rational-only was requested")
            return build_space(EUCLIDEAN, dim, exact=exact, **kwargs)
        return build_space(kind, dim, **kwargs)
    except SpaceError as e:
        raise WorkspaceError(f"space: {e}") from None


def parse_workspace(document, rational_only: bool = False, eps: float | None = None) -> Workspace:
    """Parse a workspace from a JSON string or an already-decoded dict."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as e:
            raise WorkspaceError(f"line {e.lineno} column {e.colno}: {e.msg}") from None
    if not isinstance(document, dict):
        raise WorkspaceError("document: expected a JSON object")
    unknown = set(document) - {"space", "vectors", "operators", "sets", "functionals"}
    if unknown:
        raise WorkspaceError(f"document: unknown field(s) {sorted(unknown)}")
    space = _parse_space(document["space"], rational_only, eps) if "space" in document else None
    exact = space.exact if space is not None else True
    dim = space.dim if space is not None else None
    ws = Workspace(space)
    for section in ("vectors", "operators", "sets", "functionals"):
        if not isinstance(document.get(section, {}), dict):
            raise WorkspaceError(f"{section}: expected an object")
    for name, values in document.get("vectors", {}).items():
        ws.vectors[name] = _vector(values, exact, f"vectors.{name}", dim)
    for name, rows in document.get("operators", {}).items():
        M = _matrix(rows, exact, f"operators.{name}")
        if dim is not None and (len(M), len(M[0])) != (dim, dim):
            raise WorkspaceError(f"operators.{name}: expected a {dim}x{dim} matrix")
        ws.operators[name] = Operator(M)
    for name, members in document.get("sets", {}).items():
        if not isinstance(members, list):
            raise WorkspaceError(f"sets.{name}: expected a list")
        pts = []
        for i, m in enumerate(members):
            if isinstance(m, str):
                pts.append(ws.vector(m))
            else:
                pts.append(_vector(m, exact, f"sets.{name}[{i}]", dim))
        ws.sets[name] = tuple(pts)
    for name, rows in document.get("functionals", {}).items():
        ws.functionals[name] = _matrix(rows, exact, f"functionals.{name}")
    return ws


# ---------------------------------------------------------------------------
# emitting


def scalar_text(a) -> str | float:
    if isinstance(a, Fraction):
        return str(a)
    if isinstance(a, int) and not isinstance(a, bool):
        return str(a)
    return a


def _space_json(space: NormSpace) -> dict:
    d = {"kind": space.kind}
    if space.kind == POLYGON:
        d["n"] = space.n_poly
    else:
        d["dim"] = space.dim
    if space.kind == POLYHEDRAL:
        d["facets"] = [[scalar_text(a) for a in f] for f in space.facets]
    if space.kind == EUCLIDEAN:
        d["exact"] = space.exact
    if space.eps != 1e-9:
        d["eps"] = space.eps
    return d


def emit_workspace(ws: Workspace) -> dict:
    doc = {}
    if ws.space is not None:
        doc["space"] = _space_json(ws.space)
    if ws.vectors:
        doc["vectors"] = {k: [scalar_text(a) for a in v] for k, v in ws.vectors.items()}
    if ws.operators:
        doc["operators"] = {k: [[scalar_text(a) for a in r] for r in T.rows]
                            for k, T in ws.operators.items()}
    if ws.sets:
        doc["sets"] = {k: [[scalar_text(a) for a in v] for v in pts] for k, pts in ws.sets.items()}
    if ws.functionals:
        doc["functionals"] = {k: [[scalar_text(a) for a in r] for r in M]
                              for k, M in ws.functionals.items()}
    return doc


def to_jsonable(obj):
    """Convert verdict objects (dataclasses, named tuples, fractions) to JSON data."""
    if isinstance(obj, NormSpace):
        return _space_json(obj)
    if isinstance(obj, Operator):
        return [[scalar_text(a) for a in r] for r in obj.rows]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (int, float)):
        return obj
    if dataclasses.is_dataclass(obj):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)
                if not f.name.startswith("_")}
    if isinstance(obj, tuple) and hasattr(obj, "_fields"):
        return {k: to_jsonable(v) for k, v in zip(obj._fields, obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return str(obj)


def _text_lines(data, prefix: str = "") -> list:
    if isinstance(data, dict):
        lines = []
        for k, v in data.items():
            key = f"{prefix}{k}"
            if isinstance(v, dict) and v:
                lines += _text_lines(v, key + ".")
            else:
                lines.append(f"{key}: {_inline(v)}")
        return lines
    return [f"{prefix or 'result'}: {_inline(data)}"]


def _inline(v) -> str:
    if isinstance(v, list):
        return "(" + ", ".join(_inline(a) for a in v) + ")"
    if v is True:
        return "yes"
    if v is False:
        return "no"
    if v is None:
        return "-"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}={_inline(a)}" for k, a in v.items()) + "}"
    return str(v)


def emit_report(result, fmt: str = "json") -> str:
    data = to_jsonable(result)
    if fmt == "json":
        return json.dumps(data, indent=2)
    if fmt == "text":
        return "\n".join(_text_lines(data))
    raise ValueError(f"unknown output format {fmt!r}")
