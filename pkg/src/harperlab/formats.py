"""JSON file formats: vertex sets, stability instances, reports.

Vertex-set file::

    {"n": 3, "vertices": ["0x0", "0x1", "0x2", "0x4"]}

Masks are hex with bit 0 standing for coordinate 1.  Instance files add a
``"params"`` block ``{"n", "k", "p", "rho", "kappa"}`` whose rationals are
written as ``"num/den"`` strings.
"""

from __future__ import annotations

import enum
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .cube import Vertex, VertexSet


def fraction_str(x: Fraction | int) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"rationals must be ints or 'num/den' strings, got {value!r}")


def jsonable(obj: Any) -> Any:
    """Convert nested report data into plain JSON types, exactly."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, float):
        raise TypeError("floating point values are not allowed in reports")
    if isinstance(obj, Vertex):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return jsonable(obj.to_dict())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def vertex_set_to_dict(U: VertexSet, params: dict[str, Any] | None = None) -> dict[str, Any]:
    out: dict[str, Any] = {"n": U.n, "vertices": [hex(m) for m in U]}
    if params is not None:
        out["params"] = jsonable(params)
    return out


def vertex_set_from_dict(data: dict[str, Any]) -> VertexSet:
    try:
        n = data["n"]
        raw = data["vertices"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"vertex-set file needs 'n' and 'vertices': {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"'n' must be an integer, got {n!r}")
    masks = []
    for item in raw:
        if not isinstance(item, str) or not item.lower().startswith("0x"):
            raise ValueError(f"vertices must be '0x...' hex masks, got {item!r}")
        masks.append(int(item, 16))
    if len(set(masks)) != len(masks):
        raise ValueError("duplicate vertices in file")
    return VertexSet(n, frozenset(masks))


def write_vertex_set(path: str | Path, U: VertexSet, params: dict[str, Any] | None = None) -> None:
    Path(path).write_text(dumps(vertex_set_to_dict(U, params)))


def read_instance(path: str | Path) -> tuple[VertexSet, dict[str, Any]]:
    """Load a vertex set and its (possibly empty) params block."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from None
    U = vertex_set_from_dict(data)
    return U, dict(data.get("params") or {})
