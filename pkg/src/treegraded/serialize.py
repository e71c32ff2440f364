"""JSON forms of specs, points, descriptors, types, medians and group elements.

Scalars are written as decimal strings (``p/q`` when the decimal does not
terminate) so exact values survive a round trip.
"""

from __future__ import annotations

import json
from typing import Any

from . import conelab
from .geom import Median, PiecePlacement
from .numeric import Mode, format_scalar, parse_scalar
from .pieces import CanonicalPair, PieceSpec, TREE
from .qtypes import Interval, QType
from .treeprod import TREE_ALPHA, Alpha, Descriptor, Step


class ParseError(ValueError):
    pass


def spec_to_json(spec: PieceSpec) -> dict:
    if spec.is_tree:
        return {"model": "tree"}
    return {"model": "plane", "dim": spec.dim, "norm": spec.norm}


def spec_from_json(data) -> PieceSpec:
    try:
        if data["model"] == "tree":
            return TREE
        return PieceSpec.plane(int(data["dim"]), data["norm"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad piece spec {data!r}") from exc


def point_to_json(spec: PieceSpec, p) -> list:
    if spec.is_tree:
        return [[label, format_scalar(length)] for label, length in p]
    return [format_scalar(x) for x in p]


def point_from_json(spec: PieceSpec, data, mode: Mode = Mode.EXACT) -> tuple:
    try:
        if spec.is_tree:
            return tuple((str(label), parse_scalar(length, mode)) for label, length in data)
        return tuple(parse_scalar(x, mode) for x in data)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad point {data!r}") from exc


def alpha_to_json(alpha: Alpha) -> dict:
    if alpha.is_tree:
        return {"kind": "tree"}
    return {"kind": "piece", "spec": spec_to_json(alpha.spec), "copy": alpha.copy}


def alpha_from_json(data) -> Alpha:
    if data.get("kind") == "tree":
        return TREE_ALPHA
    if data.get("kind") == "piece":
        return Alpha(spec_from_json(data["spec"]), str(data["copy"]))
    raise ParseError(f"bad alpha {data!r}")


def step_to_json(s: Step) -> dict:
    out = alpha_to_json(s.alpha)
    out["entry"] = point_to_json(s.alpha.spec, s.entry)
    out["exit"] = point_to_json(s.alpha.spec, s.exit)
    return out


def step_from_json(data, mode: Mode = Mode.EXACT) -> Step:
    if not isinstance(data, dict):
        raise ParseError(f"step must be an object, got {data!r}")
    try:
        alpha = alpha_from_json(data)
        entry = point_from_json(alpha.spec, data["entry"], mode)
        exit_ = point_from_json(alpha.spec, data["exit"], mode)
    except (KeyError, ValueError) as exc:
        raise ParseError(f"bad step {data!r}: {exc}") from exc
    return Step(alpha, entry, exit_)


def descriptor_to_json(f: Descriptor) -> dict:
    return {"steps": [step_to_json(s) for s in f.steps]}


def descriptor_from_json(data, mode: Mode = Mode.EXACT) -> Descriptor:
    if isinstance(data, list):
        data = {"steps": data}
    if not isinstance(data, dict) or not isinstance(data.get("steps"), list):
        raise ParseError("descriptor must be an object with a 'steps' list")
    return Descriptor(tuple(step_from_json(s, mode) for s in data["steps"]))


def cpair_to_json(p: CanonicalPair) -> dict:
    return {
        "spec": spec_to_json(p.spec),
        "points": [point_to_json(p.spec, p.first), point_to_json(p.spec, p.second)],
    }


def cpair_from_json(data, mode: Mode = Mode.EXACT) -> CanonicalPair:
    spec = spec_from_json(data["spec"])
    first, second = (point_from_json(spec, x, mode) for x in data["points"])
    return CanonicalPair(spec, first, second)


def qtype_to_json(t: QType) -> dict:
    return {
        "total": format_scalar(t.total),
        "intervals": [
            {"a": format_scalar(iv.a), "b": format_scalar(iv.b), "cpair": cpair_to_json(iv.cpair)}
            for iv in t.intervals
        ],
    }


def qtype_from_json(data, mode: Mode = Mode.EXACT) -> QType:
    try:
        intervals = tuple(
            Interval(parse_scalar(iv["a"], mode), parse_scalar(iv["b"], mode), cpair_from_json(iv["cpair"], mode))
            for iv in data["intervals"]
        )
        return QType(parse_scalar(data["total"], mode), intervals)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad type: {exc}") from exc


def median_to_json(m: Median) -> dict:
    if m.point is not None:
        return {"kind": "point", "at": descriptor_to_json(m.point)}
    pl = m.placement
    spec = pl.alpha.spec
    return {
        "kind": "gates",
        "prefix": descriptor_to_json(pl.prefix),
        "alpha": alpha_to_json(pl.alpha),
        "entry": point_to_json(spec, pl.entry),
        "gates": [point_to_json(spec, g) for g in m.gates],
    }


def median_from_json(data, mode: Mode = Mode.EXACT) -> Median:
    if data["kind"] == "point":
        return Median(point=descriptor_from_json(data["at"], mode))
    alpha = alpha_from_json(data["alpha"])
    spec = alpha.spec
    pl = PiecePlacement(
        descriptor_from_json(data["prefix"], mode), alpha, point_from_json(spec, data["entry"], mode)
    )
    gates = tuple(point_from_json(spec, g, mode) for g in data["gates"])
    return Median(placement=pl, gates=gates)


def element_to_json(g: conelab.GroupElement) -> list:
    return conelab.serialize_element(g)


def element_from_json(data) -> conelab.GroupElement:
    return conelab.parse_element(data)


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def load_json(path) -> Any:
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc
