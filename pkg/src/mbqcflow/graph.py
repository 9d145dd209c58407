"""Labelled open graphs and the pure graph operations on them."""

from __future__ import annotations

import enum
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from types import MappingProxyType

from mbqcflow import angles
from mbqcflow.angles import Angle
from mbqcflow.clifford import X_AXIS, Y_AXIS, Z_AXIS, Clifford

VertexSet = frozenset[int]
Edge = tuple[int, int]

EMPTY: VertexSet = frozenset()


class GraphError(ValueError):
    """A vertex or edge argument does not fit the graph."""


class Plane(enum.Enum):
    XY = "XY"
    XZ = "XZ"
    YZ = "YZ"
    X = "X"
    Y = "Y"
    Z = "Z"

    @property
    def is_pauli(self) -> bool:
        return self in (Plane.X, Plane.Y, Plane.Z)

    def __str__(self) -> str:
        return self.value


PLANES = (Plane.XY, Plane.XZ, Plane.YZ)
PAULIS = (Plane.X, Plane.Y, Plane.Z)

# Orthonormal Bloch axes (e1, e2) of each plane: |+_{P,a}> points along cos(a) e1 + sin(a) e2.
_PLANE_BASIS = {Plane.XY: (X_AXIS, Y_AXIS), Plane.XZ: (Z_AXIS, X_AXIS), Plane.YZ: (Z_AXIS, Y_AXIS)}
_PAULI_AXIS = {Plane.X: X_AXIS, Plane.Y: Y_AXIS, Plane.Z: Z_AXIS}


@dataclass(frozen=True)
class Measurement:
    """A measurement plane (or Pauli axis) and an angle, as a multiple of pi."""

    plane: Plane
    angle: Angle = Fraction(0)

    def __post_init__(self) -> None:
        if not isinstance(self.plane, Plane):
            object.__setattr__(self, "plane", Plane(self.plane))
        object.__setattr__(self, "angle", angles.normalize(self.angle))
        if self.plane.is_pauli and not (angles.equal(self.angle, 0) or angles.equal(self.angle, 1)):
            raise GraphError(f"Pauli {self.plane} measurement needs angle 0 or pi, got {angles.fmt(self.angle)}")
        if self.plane.is_pauli and not isinstance(self.angle, Fraction):
            object.__setattr__(self, "angle", Fraction(0) if angles.equal(self.angle, 0) else Fraction(1))

    @property
    def radians(self) -> float:
        return angles.to_radians(self.angle)

    def bloch(self) -> tuple[float, float, float]:
        """Bloch vector of the desired-outcome state."""
        v = [0.0, 0.0, 0.0]
        if self.plane.is_pauli:
            v[_PAULI_AXIS[self.plane]] = -1.0 if self.angle == 1 else 1.0
            return (v[0], v[1], v[2])
        e1, e2 = _PLANE_BASIS[self.plane]
        v[e1] = math.cos(self.radians)
        v[e2] = math.sin(self.radians)
        return (v[0], v[1], v[2])

    def rotated(self, c: Clifford) -> Measurement:
        """The label whose desired state is ``U|m>``, for ``U`` the Clifford ``c``.

        Planes go to planes and Pauli axes to Pauli axes; the angle update is
        exact when the angle is a :class:`~fractions.Fraction`.
        """
        if self.plane.is_pauli:
            sign = -1 if self.angle == 1 else 1
            axis, s = c.apply(_PAULI_AXIS[self.plane], sign)
            return Measurement(PAULIS[axis], Fraction(0) if s > 0 else Fraction(1))
        e1, e2 = _PLANE_BASIS[self.plane]
        f1, s1 = c.apply(e1)
        f2, s2 = c.apply(e2)
        for plane, (g1, g2) in _PLANE_BASIS.items():
            if (f1, f2) == (g1, g2):
                return Measurement(plane, _signed_angle(s1, s2, self.angle))
            if (f1, f2) == (g2, g1):
                # cos(a) g2 + sin(a) g1 = sin(b) g2 + cos(b) g1 with b = pi/2 - a
                return Measurement(plane, _signed_angle(s2, s1, angles.sub(angles.HALF, self.angle)))
        raise AssertionError("rotation does not map a plane to a plane")

    def shifted(self, delta: Angle) -> Measurement:
        return Measurement(self.plane, angles.add(self.angle, delta))

    def __str__(self) -> str:
        return f"{self.plane}({angles.fmt(self.angle)})"


def _signed_angle(s1: int, s2: int, a: Angle) -> Angle:
    # Angle b with cos b = s1 cos a and sin b = s2 sin a.
    if s1 > 0:
        return a if s2 > 0 else angles.neg(a)
    return angles.sub(angles.ONE, a) if s2 > 0 else angles.add(angles.ONE, a)


def _edge(u: int, v: int) -> Edge:
    if u == v:
        raise GraphError(f"self-loop at {u}")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class LabelledOpenGraph:
    """A simple graph with input and output sets and a label on every non-output.

    Instances are immutable; every operation returns a new graph.
    """

    vertices: VertexSet
    edges: frozenset[Edge]
    inputs: VertexSet = EMPTY
    outputs: VertexSet = EMPTY
    labels: Mapping[int, Measurement] = field(default_factory=dict)

    def __post_init__(self) -> None:
        verts = frozenset(int(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        edges = frozenset(_edge(int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "inputs", frozenset(int(v) for v in self.inputs))
        object.__setattr__(self, "outputs", frozenset(int(v) for v in self.outputs))
        object.__setattr__(self, "labels", MappingProxyType({int(k): v for k, v in dict(self.labels).items()}))
        for u, v in edges:
            if u not in verts or v not in verts:
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside the vertex set")
        if not self.inputs <= verts or not self.outputs <= verts:
            raise GraphError("inputs and outputs must be vertices")
        if set(self.labels) != verts - self.outputs:
            missing = sorted(verts - self.outputs - set(self.labels))
            extra = sorted(set(self.labels) - (verts - self.outputs))
            raise GraphError(f"labels must cover exactly the non-outputs (missing {missing}, extra {extra})")
        for k, m in self.labels.items():
            if not isinstance(m, Measurement):
                raise GraphError(f"label of {k} is not a Measurement")

    @cached_property
    def adjacency(self) -> Mapping[int, VertexSet]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return MappingProxyType({v: frozenset(n) for v, n in adj.items()})

    @property
    def non_outputs(self) -> VertexSet:
        return self.vertices - self.outputs

    @property
    def non_inputs(self) -> VertexSet:
        return self.vertices - self.inputs

    def neighbours(self, v: int) -> VertexSet:
        self._require(v)
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and _edge(u, v) in self.edges

    def label(self, v: int) -> Measurement | None:
        self._require(v)
        return self.labels.get(v)

    def plane(self, v: int) -> Plane | None:
        m = self.labels.get(v)
        return m.plane if m is not None else None

    def fresh_id(self, k: int = 0) -> int:
        """The ``k``-th unused id above the current maximum."""
        return max(self.vertices, default=-1) + 1 + k

    def _require(self, *vs: int) -> None:
        for v in vs:
            if v not in self.vertices:
                raise GraphError(f"unknown vertex {v}")

    def replace(self, **changes) -> LabelledOpenGraph:
        data = {
            "vertices": self.vertices,
            "edges": self.edges,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "labels": dict(self.labels),
        }
        data.update(changes)
        return LabelledOpenGraph(**data)

    def __str__(self) -> str:
        labels = ", ".join(f"{v}:{self.labels[v]}" for v in sorted(self.labels))
        return (
            f"LabelledOpenGraph(V={sorted(self.vertices)}, E={sorted(self.edges)}, "
            f"I={sorted(self.inputs)}, O={sorted(self.outputs)}, labels={{{labels}}})"
        )


def odd_neighbourhood(g: LabelledOpenGraph, a: Iterable[int]) -> VertexSet:
    """Vertices with an odd number of neighbours in ``a``."""
    a = frozenset(a)
    g._require(*a)
    return reduce(frozenset.symmetric_difference, (g.adjacency[w] for w in a), EMPTY)


def local_complement(g: LabelledOpenGraph, u: int) -> LabelledOpenGraph:
    """Toggle every edge between two neighbours of ``u``.  Labels are untouched."""
    nb = sorted(g.neighbours(u))
    toggles = {(b, c) for i, b in enumerate(nb) for c in nb[i + 1 :]}
    return g.replace(edges=g.edges.symmetric_difference(toggles))


def pivot(g: LabelledOpenGraph, u: int, v: int) -> LabelledOpenGraph:
    """``G * u * v * u`` for an edge ``{u, v}``."""
    g._require(u, v)
    if not g.has_edge(u, v):
        raise GraphError(f"pivot needs adjacent vertices, {u} and {v} are not")
    return local_complement(local_complement(local_complement(g, u), v), u)


def add_vertex(
    g: LabelledOpenGraph,
    v: int,
    label: Measurement | None = None,
    neighbours: Iterable[int] = (),
    *,
    is_input: bool = False,
    is_output: bool = False,
) -> LabelledOpenGraph:
    if v in g.vertices:
        raise GraphError(f"vertex {v} already exists")
    if (label is None) != is_output:
        raise GraphError("a new vertex needs a label exactly when it is not an output")
    neighbours = frozenset(neighbours)
    g._require(*neighbours)
    labels = dict(g.labels)
    if label is not None:
        labels[v] = label
    return g.replace(
        vertices=g.vertices | {v},
        edges=g.edges | {_edge(v, w) for w in neighbours},
        inputs=g.inputs | {v} if is_input else g.inputs,
        outputs=g.outputs | {v} if is_output else g.outputs,
        labels=labels,
    )


def remove_vertex(g: LabelledOpenGraph, v: int) -> LabelledOpenGraph:
    g._require(v)
    labels = dict(g.labels)
    labels.pop(v, None)
    return g.replace(
        vertices=g.vertices - {v},
        edges=frozenset(e for e in g.edges if v not in e),
        inputs=g.inputs - {v},
        outputs=g.outputs - {v},
        labels=labels,
    )


def add_edge(g: LabelledOpenGraph, u: int, v: int) -> LabelledOpenGraph:
    g._require(u, v)
    e = _edge(u, v)
    if e in g.edges:
        raise GraphError(f"edge {e} already exists")
    return g.replace(edges=g.edges | {e})


def remove_edge(g: LabelledOpenGraph, u: int, v: int) -> LabelledOpenGraph:
    g._require(u, v)
    e = _edge(u, v)
    if e not in g.edges:
        raise GraphError(f"no edge {e}")
    return g.replace(edges=g.edges - {e})


def toggle_edges(g: LabelledOpenGraph, pairs: Iterable[tuple[int, int]]) -> LabelledOpenGraph:
    """Symmetric difference of the edge set with ``pairs`` (a pair listed twice cancels)."""
    toggles: set[Edge] = set()
    for u, v in pairs:
        g._require(u, v)
        toggles ^= {_edge(u, v)}
    return g.replace(edges=g.edges.symmetric_difference(toggles))


def set_label(g: LabelledOpenGraph, v: int, label: Measurement) -> LabelledOpenGraph:
    g._require(v)
    if v in g.outputs:
        raise GraphError(f"output {v} cannot carry a measurement label")
    return g.replace(labels={**g.labels, v: label})


def relabel(g: LabelledOpenGraph, mapping: Mapping[int, int]) -> LabelledOpenGraph:
    """Rename vertices by an injective ``mapping`` (missing ids map to themselves)."""
    f = {v: mapping.get(v, v) for v in g.vertices}
    if len(set(f.values())) != len(f):
        raise GraphError("relabelling is not injective")
    return LabelledOpenGraph(
        vertices=frozenset(f.values()),
        edges=frozenset((f[u], f[v]) for u, v in g.edges),
        inputs=frozenset(f[v] for v in g.inputs),
        outputs=frozenset(f[v] for v in g.outputs),
        labels={f[v]: m for v, m in g.labels.items()},
    )


def open_graph(
    edges: Iterable[tuple[int, int]],
    inputs: Iterable[int] = (),
    outputs: Iterable[int] = (),
    labels: Mapping[int, Measurement | str | tuple[str, Angle]] | None = None,
    vertices: Iterable[int] = (),
) -> LabelledOpenGraph:
    """Convenience constructor.

    Labels may be given as :class:`Measurement`, a plane name (angle 0) or a
    ``(plane, angle)`` pair.  Unlabelled non-outputs default to ``XY(0)``.
    """
    edges = [tuple(e) for e in edges]
    verts = set(vertices) | {v for e in edges for v in e} | set(inputs) | set(outputs)
    labels = dict(labels or {})
    out: dict[int, Measurement] = {}
    for v in verts - set(outputs):
        m = labels.get(v, Measurement(Plane.XY))
        if isinstance(m, str):
            m = Measurement(Plane(m))
        elif isinstance(m, tuple):
            m = Measurement(Plane(m[0]), m[1])
        out[v] = m
    return LabelledOpenGraph(frozenset(verts), frozenset(edges), frozenset(inputs), frozenset(outputs), out)
