"""Small named patterns used as regression fixtures and CLI demos.

Edge sets were reconstructed so that the quoted correction sets form a valid
gflow (or Pauli flow) for them; see the tests for the checks.
"""

from __future__ import annotations

from mbqcflow.flow import Flavour, PartialOrder, PauliFlow
from mbqcflow.graph import LabelledOpenGraph, Measurement, Plane, open_graph

# ids for the named vertices of each fixture
MIYAZAKI = {"i1": 0, "i2": 1, "a": 2, "b": 3, "o1": 4, "o2": 5}
REMARK = {"a": 0, "b": 1, "x": 2, "c": 3, "d": 4}
UNFUSION = {"a": 0, "b": 1, "c": 2, "d": 3}


def miyazaki() -> LabelledOpenGraph:
    """Two inputs, two outputs, two XY-measured interior vertices."""
    n = MIYAZAKI
    edges = [
        ("a", "b"), ("a", "i2"), ("b", "i1"), ("b", "i2"), ("b", "o2"),
        ("i1", "o1"), ("i1", "o2"), ("i2", "o1"), ("i2", "o2"),
    ]  # fmt: skip
    return open_graph([(n[u], n[v]) for u, v in edges], [n["i1"], n["i2"]], [n["o1"], n["o2"]])


def miyazaki_gflow() -> PauliFlow:
    """The quoted gflow with order i1, i2 < a < b < o1, o2."""
    n = MIYAZAKI
    p = {
        n["i1"]: {n["a"], n["o2"]},
        n["i2"]: {n["a"], n["b"], n["o2"]},
        n["a"]: {n["b"], n["o2"]},
        n["b"]: {n["o1"], n["o2"]},
    }
    chain = [(n["i1"], n["a"]), (n["i2"], n["a"]), (n["a"], n["b"]), (n["b"], n["o1"]), (n["b"], n["o2"])]
    return PauliFlow(p, PartialOrder.generated_by(chain), Flavour.GFLOW)


def remark(alpha=0) -> LabelledOpenGraph:
    """Inputs a, b; outputs c, d; x is YZ-measured and adjacent to both inputs."""
    n = REMARK
    edges = [(n["a"], n["c"]), (n["b"], n["d"]), (n["x"], n["a"]), (n["x"], n["b"])]
    return open_graph(edges, [n["a"], n["b"]], [n["c"], n["d"]], {n["x"]: Measurement(Plane.YZ, alpha)})


def remark_gflow() -> PauliFlow:
    n = REMARK
    p = {n["a"]: {n["c"]}, n["b"]: {n["d"]}, n["x"]: {n["c"], n["d"], n["x"]}}
    order = [(u, v) for u in (n["a"], n["b"], n["x"]) for v in (n["c"], n["d"])]
    return PauliFlow(p, PartialOrder.generated_by(order), Flavour.GFLOW)


def unfusion_example(alpha=0) -> LabelledOpenGraph:
    """Inputs a, b joined by an edge; outputs c and d hang off a and b."""
    n = UNFUSION
    edges = [(n["a"], n["b"]), (n["a"], n["c"]), (n["b"], n["d"])]
    return open_graph(edges, [n["a"], n["b"]], [n["c"], n["d"]], {n["a"]: Measurement(Plane.XY, alpha)})


def unfusion_example_gflow() -> PauliFlow:
    n = UNFUSION
    p = {n["a"]: {n["c"]}, n["b"]: {n["d"]}}
    order = [(u, v) for u in (n["a"], n["b"]) for v in (n["c"], n["d"])]
    return PauliFlow(p, PartialOrder.generated_by(order), Flavour.GFLOW)


def identity_wire() -> LabelledOpenGraph:
    """One XY-measured input adjacent to one output."""
    return open_graph([(0, 1)], [0], [1])


FIXTURES = {
    "miyazaki": (miyazaki, miyazaki_gflow),
    "remark": (remark, remark_gflow),
    "unfusion": (unfusion_example, unfusion_example_gflow),
}
