from __future__ import annotations

import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from rewrite_cases import cases
from strategies import flow_instances, graphs

from mbqcflow.clifford import Clifford
from mbqcflow.flow import Flavour, PartialOrder, PauliFlow
from mbqcflow.graph import Measurement, Plane
from mbqcflow.io import (
    ParseError,
    flow_from_json,
    flow_to_json,
    frame_from_json,
    frame_to_json,
    label_from_json,
    label_to_json,
    load_pattern,
    pattern_from_json,
    pattern_to_json,
    save_pattern,
    trace_from_json,
    trace_to_json,
)
from mbqcflow.rewrites import replay, same_pattern


@settings(max_examples=60, deadline=None)
@given(graphs(max_vertices=8))
def test_pattern_roundtrip(g):
    text = json.dumps(pattern_to_json(g))
    assert same_pattern(pattern_from_json(json.loads(text)), g)


@settings(max_examples=30, deadline=None)
@given(flow_instances(max_vertices=6))
def test_flow_roundtrip(inst):
    _, f = inst
    back = flow_from_json(json.loads(json.dumps(flow_to_json(f))))
    assert back == f


def test_pattern_field_names():
    d = pattern_to_json(pattern_from_json(
        {"vertices": [0, 1], "edges": [[0, 1]], "inputs": [0], "outputs": [1],
         "labels": {"0": {"plane": "XY", "angle_num": 1, "angle_den": 4}}}
    ))  # fmt: skip
    assert set(d) == {"vertices", "edges", "inputs", "outputs", "labels"}
    assert d["labels"]["0"] == {"plane": "XY", "angle_num": 1, "angle_den": 4}


def test_angle_float_overrides_and_is_radians():
    m = label_from_json({"plane": "YZ", "angle_num": 1, "angle_den": 2, "angle_float": 1.0})
    assert math.isclose(m.radians, 1.0)
    out = label_to_json(Measurement(Plane.XZ, 0.3))
    assert math.isclose(out["angle_float"], 0.3 * math.pi)
    assert label_to_json(Measurement(Plane.X, Fraction(1)))["angle_num"] == 1


def test_flow_order_is_closed_and_strict():
    d = {"flavour": "gflow", "p": {"0": [1]}, "order": [[0, 1], [1, 2]]}
    f = flow_from_json(d)
    assert f.flavour is Flavour.GFLOW
    assert f.order.precedes(0, 2)
    with pytest.raises(ParseError, match="cycle"):
        flow_from_json({"p": {}, "order": [[0, 1], [1, 0]]})
    loose = flow_from_json({"p": {}, "order": [[0, 1], [1, 0]]}, strict=False)
    assert not loose.order.is_strict()


def test_flow_written_as_cover_relation():
    f = PauliFlow({0: {2}}, PartialOrder.generated_by([(0, 1), (1, 2)]))
    assert flow_to_json(f)["order"] == [[0, 1], [1, 2]]


@pytest.mark.parametrize(
    "bad",
    [
        [],
        {"vertices": [0]},
        {"vertices": [0, 1], "edges": [[0, 1], [1, 0]], "inputs": [], "outputs": [1], "labels": {"0": {"plane": "XY"}}},
        {"vertices": [0, 1], "edges": [[0, 2]], "inputs": [], "outputs": [1], "labels": {"0": {"plane": "XY"}}},
        {"vertices": [0, 1], "edges": [], "inputs": [], "outputs": [1], "labels": {"0": {"plane": "QQ"}}},
        {"vertices": [0, 1], "edges": [], "inputs": [], "outputs": [1], "labels": {}},
        {"vertices": [0, 1], "edges": [], "inputs": [], "outputs": [1], "labels": {"0": {"plane": "X", "angle_num": 1, "angle_den": 2}}},
        {"vertices": [0, 1], "edges": [], "inputs": [], "outputs": [1], "labels": {"0": {"plane": "XY", "angle_den": 0}}},
        {"vertices": ["a"], "edges": [], "inputs": [], "outputs": [], "labels": {}},
    ],
)
def test_pattern_parse_errors(bad):
    with pytest.raises(ParseError):
        pattern_from_json(bad)


def test_file_helpers(tmp_path):
    g = pattern_from_json({"vertices": [0, 1], "edges": [[0, 1]], "inputs": [], "outputs": [1], "labels": {"0": {"plane": "Y", "angle_num": 1, "angle_den": 1}}})
    save_pattern(tmp_path / "g.json", g)
    assert load_pattern(tmp_path / "g.json") == g
    (tmp_path / "bad.json").write_text("{not json")
    with pytest.raises(ParseError):
        load_pattern(tmp_path / "bad.json")


def test_frame_roundtrip():
    frame = {3: Clifford.hadamard(), 5: Clifford.rz(1).then(Clifford.rx(2))}
    assert frame_from_json(json.loads(json.dumps(frame_to_json(frame)))) == frame
    with pytest.raises(ParseError):
        frame_from_json({"0": [[0, 1], [0, 1], [2, 1]]})


@pytest.mark.parametrize("op", ["yz_to_xy", "subdivide_edge", "neighbour_unfuse", "normalize_to_xy", "z_insert"])
def test_trace_roundtrip_replays(op):
    for c in cases(op, 5, seed=2):
        text = json.dumps(trace_to_json(c.result.trace))
        again = replay(c.graph, trace_from_json(json.loads(text)), c.flow)
        assert again.graph == c.result.graph


def test_trace_parse_errors():
    with pytest.raises(ParseError):
        trace_from_json({"step": "lc"})
    with pytest.raises(ParseError):
        trace_from_json([{"args": {}}])
