"""JSON formats for patterns, flows, traces and output frames."""

from __future__ import annotations

import json
from collections.abc import Iterable, Mapping
from fractions import Fraction
from pathlib import Path
from typing import Any

from mbqcflow import angles
from mbqcflow.clifford import Clifford
from mbqcflow.flow import Flavour, PartialOrder, PauliFlow
from mbqcflow.graph import GraphError, LabelledOpenGraph, Measurement, Plane
from mbqcflow.rewrites import Step


class ParseError(ValueError):
    """Input JSON is malformed or describes an invalid object."""


def _int(x: Any, what: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        if isinstance(x, str) and x.lstrip("-").isdigit():
            return int(x)
        raise ParseError(f"{what} must be an integer, got {x!r}")
    return x


def _ints(xs: Any, what: str) -> list[int]:
    if not isinstance(xs, list):
        raise ParseError(f"{what} must be a list")
    return [_int(x, what) for x in xs]


# --------------------------------------------------------------------------- patterns


def label_to_json(m: Measurement) -> dict:
    if isinstance(m.angle, Fraction):
        return {"plane": m.plane.value, "angle_num": m.angle.numerator, "angle_den": m.angle.denominator}
    return {"plane": m.plane.value, "angle_num": 0, "angle_den": 1, "angle_float": angles.to_radians(m.angle)}


def label_from_json(d: Any) -> Measurement:
    if not isinstance(d, dict) or "plane" not in d:
        raise ParseError(f"label must be an object with a plane, got {d!r}")
    try:
        plane = Plane(d["plane"])
    except ValueError as e:
        raise ParseError(f"unknown plane {d['plane']!r}") from e
    if "angle_float" in d:
        if not isinstance(d["angle_float"], (int, float)):
            raise ParseError("angle_float must be a number")
        angle: angles.Angle = angles.from_radians(float(d["angle_float"]))
    else:
        den = _int(d.get("angle_den", 1), "angle_den")
        if den == 0:
            raise ParseError("angle_den must be nonzero")
        angle = Fraction(_int(d.get("angle_num", 0), "angle_num"), den)
    try:
        return Measurement(plane, angle)
    except GraphError as e:
        raise ParseError(str(e)) from e


def pattern_to_json(g: LabelledOpenGraph) -> dict:
    return {
        "vertices": sorted(g.vertices),
        "edges": [list(e) for e in sorted(g.edges)],
        "inputs": sorted(g.inputs),
        "outputs": sorted(g.outputs),
        "labels": {str(v): label_to_json(g.labels[v]) for v in sorted(g.labels)},
    }


def pattern_from_json(d: Any) -> LabelledOpenGraph:
    if not isinstance(d, dict):
        raise ParseError("pattern must be a JSON object")
    for key in ("vertices", "edges", "inputs", "outputs", "labels"):
        if key not in d:
            raise ParseError(f"pattern is missing {key!r}")
    if not isinstance(d["edges"], list) or any(not isinstance(e, list) or len(e) != 2 for e in d["edges"]):
        raise ParseError("edges must be a list of [u, v] pairs")
    edges = [(_int(u, "edge"), _int(v, "edge")) for u, v in d["edges"]]
    if len({tuple(sorted(e)) for e in edges}) != len(edges):
        raise ParseError("duplicate edge")
    if not isinstance(d["labels"], dict):
        raise ParseError("labels must be an object")
    try:
        return LabelledOpenGraph(
            frozenset(_ints(d["vertices"], "vertex")),
            frozenset(edges),
            frozenset(_ints(d["inputs"], "input")),
            frozenset(_ints(d["outputs"], "output")),
            {_int(k, "label key"): label_from_json(v) for k, v in d["labels"].items()},
        )
    except GraphError as e:
        raise ParseError(str(e)) from e


# --------------------------------------------------------------------------- flows


def flow_to_json(f: PauliFlow) -> dict:
    return {
        "flavour": f.flavour.value,
        "p": {str(u): sorted(f.p[u]) for u in sorted(f.p)},
        "order": [list(pair) for pair in f.order.cover_relation()],
    }


def flow_from_json(d: Any, *, strict: bool = True) -> PauliFlow:
    """Parse a flow; the order is closed transitively and, if ``strict``, must be acyclic."""
    if not isinstance(d, dict) or "p" not in d or "order" not in d:
        raise ParseError("flow must be an object with 'p' and 'order'")
    try:
        flavour = Flavour(d.get("flavour", "pauli"))
    except ValueError as e:
        raise ParseError(f"unknown flavour {d.get('flavour')!r}") from e
    if not isinstance(d["p"], dict):
        raise ParseError("p must be an object")
    p = {_int(k, "p key"): frozenset(_ints(v, "correction")) for k, v in d["p"].items()}
    if not isinstance(d["order"], list) or any(not isinstance(x, list) or len(x) != 2 for x in d["order"]):
        raise ParseError("order must be a list of [pred, succ] pairs")
    order = PartialOrder.generated_by((_int(u, "order"), _int(v, "order")) for u, v in d["order"])
    if strict and not order.is_strict():
        raise ParseError("order is not a strict partial order (it has a cycle)")
    return PauliFlow(p, order, flavour)


# --------------------------------------------------------------------------- traces and frames


def trace_to_json(trace: Iterable[Step]) -> list[dict]:
    return [s.as_dict() for s in trace]


def trace_from_json(d: Any) -> list[Step]:
    if not isinstance(d, list):
        raise ParseError("trace must be a list")
    try:
        return [Step(x["step"], x.get("args", {})) for x in d]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"bad trace entry: {e}") from e


def frame_to_json(frame: Mapping[int, Clifford]) -> dict:
    return {str(v): [list(img) for img in c.images] for v, c in sorted(frame.items())}


def frame_from_json(d: Any) -> dict[int, Clifford]:
    if not isinstance(d, dict):
        raise ParseError("frame must be an object")
    try:
        return {_int(k, "frame key"): Clifford(tuple(tuple(x) for x in v)) for k, v in d.items()}
    except (TypeError, ValueError) as e:
        raise ParseError(f"bad frame entry: {e}") from e


# --------------------------------------------------------------------------- files


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"{path}: {e}") from e


def write_json(path: str | Path, data: Any) -> None:
    Path(path).write_text(json.dumps(data, indent=2, sort_keys=False) + "\n")


def load_pattern(path: str | Path) -> LabelledOpenGraph:
    return pattern_from_json(read_json(path))


def load_flow(path: str | Path, *, strict: bool = True) -> PauliFlow:
    return flow_from_json(read_json(path), strict=strict)


def save_pattern(path: str | Path, g: LabelledOpenGraph) -> None:
    write_json(path, pattern_to_json(g))


def save_flow(path: str | Path, f: PauliFlow) -> None:
    write_json(path, flow_to_json(f))
