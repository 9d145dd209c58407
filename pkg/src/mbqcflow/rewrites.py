"""Flow-preserving rewrites of labelled open graphs.

Every public rule returns a :class:`RewriteResult` holding the new graph, the
transformed flow (when a flow was supplied), role-keyed fresh vertex ids, the
trace of elementary steps and an output *frame*.

The frame records single-qubit Cliffords that a rule pushes onto output
qubits, where no measurement label can absorb them.  Semantically
``eval(after) ~ frame . eval(before)``; it is empty whenever no Clifford
reaches an output.

Local complementation about ``u`` uses the identity
``|G*u> = Rx(-pi/2)_u Rz(pi/2)_{N(u)} |G>`` (rotations act on the Bloch
sphere counterclockwise), so each affected label is rotated by the
corresponding Clifford.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Any

from mbqcflow import angles
from mbqcflow.angles import Angle
from mbqcflow.clifford import Clifford
from mbqcflow.flow import (
    Flavour,
    FlowError,
    PartialOrder,
    PauliFlow,
    check_focused,
    check_gflow,
    check_pauli_flow,
    find_pauli_flow_bruteforce,
    flow_from_corrections,
    focus_flow,
)
from mbqcflow.graph import (
    EMPTY,
    GraphError,
    LabelledOpenGraph,
    Measurement,
    Plane,
    VertexSet,
    add_vertex,
    local_complement,
    odd_neighbourhood,
    relabel,
    remove_vertex,
)

#: Clifford absorbed at the centre of a local complementation.
LC_CENTRE = Clifford.rx(-1)
#: Clifford absorbed at each neighbour of the centre.
LC_NEIGHBOUR = Clifford.rz(1)

PAULI_X = Clifford.rx(2)
PAULI_Y = Clifford.ry(2)
PAULI_Z = Clifford.rz(2)

STEP_KINDS = ("z_insert", "z_delete", "lc", "pivot", "gadget_fuse", "split", "relabel", "focus")


class RewriteError(ValueError):
    """A rewrite's precondition does not hold."""


@dataclass(frozen=True)
class Step:
    kind: str
    args: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in STEP_KINDS:
            raise RewriteError(f"unknown step kind {self.kind!r}")
        object.__setattr__(self, "args", MappingProxyType(dict(self.args)))

    def as_dict(self) -> dict:
        return {"step": self.kind, "args": dict(self.args)}


@dataclass(frozen=True)
class RewriteResult:
    graph: LabelledOpenGraph
    flow: PauliFlow | None = None
    fresh: Mapping[str, int] = field(default_factory=dict)
    trace: tuple[Step, ...] = ()
    frame: Mapping[int, Clifford] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "fresh", MappingProxyType(dict(self.fresh)))
        object.__setattr__(self, "frame", MappingProxyType(dict(self.frame)))

    @property
    def flow_paths(self) -> list[str]:
        """How each step's flow was obtained: ``constructed`` or ``bruteforce``."""
        return [s.args["flow"] for s in self.trace if "flow" in s.args]


# --------------------------------------------------------------------------- session


class _Session:
    """Mutable scratchpad threading graph, flow, frame and trace through steps."""

    def __init__(self, g: LabelledOpenGraph, f: PauliFlow | None) -> None:
        if f is not None:
            rep = check_pauli_flow(g, f)
            if not rep.ok:
                raise FlowError(f"input flow is invalid: {[v.condition for v in rep.violations]}")
            f = PauliFlow(f.p, f.order, Flavour.PAULI)
        self.g = g
        self.f = f
        self.frame: dict[int, Clifford] = {}
        self.trace: list[Step] = []
        self.fresh: dict[str, int] = {}

    def result(self) -> RewriteResult:
        return RewriteResult(self.g, self.f, self.fresh, tuple(self.trace), self.frame)

    # ---- helpers

    def _push(self, kind: str, args: dict, path: str | None) -> None:
        if path is not None:
            args = {**args, "flow": path}
        self.trace.append(Step(kind, args))

    def _apply_cliffords(self, g: LabelledOpenGraph, cliffs: Mapping[int, Clifford]) -> LabelledOpenGraph:
        labels = dict(g.labels)
        for v, c in cliffs.items():
            if c.is_identity:
                continue
            if v in g.outputs:
                total = self.frame.get(v, Clifford()).then(c)
                if total.is_identity:
                    self.frame.pop(v, None)
                else:
                    self.frame[v] = total
            else:
                labels[v] = labels[v].rotated(c)
        return g.replace(labels=labels)

    def _settle(self, g: LabelledOpenGraph, cand: Mapping[int, VertexSet] | None, order: PartialOrder | None) -> str | None:
        """Install a flow for ``g``: the candidate if valid, else a brute-force one."""
        if self.f is None:
            self.g = g
            return None
        self.g = g
        if cand is not None:
            if order is not None:
                f = PauliFlow(cand, order, Flavour.PAULI)
                if check_pauli_flow(g, f).ok:
                    self.f = f
                    return "constructed"
            f = flow_from_corrections(g, cand)
            if f is not None:
                self.f = f
                return "constructed"
        f = find_pauli_flow_bruteforce(g)
        if f is None:
            raise RewriteError("rewritten pattern has no Pauli flow; the rule was applied outside its scope")
        self.f = f
        return "bruteforce"

    def _label(self, v: int) -> Measurement:
        m = self.g.labels.get(v)
        if m is None:
            raise RewriteError(f"vertex {v} is an output and has no label")
        return m

    # ---- elementary steps

    def z_insert(self, neighbours: Iterable[int], angle: Angle = 0, vertex: int | None = None) -> int:
        g = self.g
        neighbours = frozenset(neighbours)
        g._require(*neighbours)
        if not (angles.equal(angle, 0) or angles.equal(angle, 1)):
            raise RewriteError("Z insertion angle must be 0 or pi")
        v = g.fresh_id() if vertex is None else vertex
        m = Measurement(Plane.Z, angle)
        h = add_vertex(g, v, m, neighbours)
        if m.angle == 1:
            h = self._apply_cliffords(h, {w: PAULI_Z for w in neighbours})
        cand = order = None
        if self.f is not None:
            cand = {**self.f.p, v: frozenset({v})}
            order = self.f.order.extended((v, w) for w in neighbours)
        path = self._settle(h, cand, order)
        self._push("z_insert", {"vertex": v, "neighbours": sorted(neighbours), "angle": angles.fmt_json(m.angle)}, path)
        return v

    def z_delete(self, v: int) -> None:
        g = self.g
        g._require(v)
        m = g.labels.get(v)
        if m is None or m.plane is not Plane.Z:
            raise RewriteError(f"z_delete needs a Z-measured vertex, {v} is {m or 'an output'}")
        nb = g.neighbours(v)
        h = remove_vertex(g, v)
        if m.angle == 1:
            h = self._apply_cliffords(h, {w: PAULI_Z for w in nb})
        cand = order = None
        if self.f is not None:
            pv = self.f.p[v]
            cand = {u: (a ^ pv if v in a else a) for u, a in self.f.p.items() if u != v}
            order = self.f.order.restricted(h.vertices)
        path = self._settle(h, cand, order)
        self._push("z_delete", {"vertex": v}, path)

    def _lc_graph_labels(self, u: int) -> LabelledOpenGraph:
        g = self.g
        cliffs = {u: LC_CENTRE, **{w: LC_NEIGHBOUR for w in g.neighbours(u)}}
        return self._apply_cliffords(local_complement(g, u), cliffs)

    def _lc_flow(self, g: LabelledOpenGraph, u: int, h: LabelledOpenGraph) -> str | None:
        cand = None
        if self.f is not None:
            cand = {v: (a ^ {u} if u in odd_neighbourhood(g, a) else a) for v, a in self.f.p.items()}
        return self._settle(h, cand, self.f.order if self.f is not None else None)

    def lc(self, u: int) -> None:
        g = self.g
        g._require(u)
        if u in g.inputs:
            raise RewriteError(f"local complementation about input {u} is not supported")
        h = self._lc_graph_labels(u)
        path = self._lc_flow(g, u, h)
        self._push("lc", {"vertex": u}, path)

    def pivot(self, u: int, v: int) -> None:
        g = self.g
        g._require(u, v)
        if not g.has_edge(u, v):
            raise RewriteError(f"pivot needs adjacent vertices, {u} and {v} are not")
        if u in g.inputs or v in g.inputs:
            raise RewriteError(f"pivot about an input vertex ({u}, {v}) is not supported")
        paths = []
        for c in (u, v, u):
            before = self.g
            h = self._lc_graph_labels(c)
            paths.append(self._lc_flow(before, c, h))
        # Multiply by the stabiliser K_u K_v of the final graph: Y on u, v and
        # Z on their non-common neighbours, cancelling the Z left there.
        h = self.g
        nu, nv = h.neighbours(u) - {v}, h.neighbours(v) - {u}
        stab = {u: PAULI_Y, v: PAULI_Y, **{w: PAULI_Z for w in nu ^ nv}}
        self.g = self._apply_cliffords(h, stab)
        path = None if self.f is None else ("bruteforce" if "bruteforce" in paths else "constructed")
        self._push("pivot", {"u": u, "v": v}, path)

    def relabel(self, mapping: Mapping[int, int]) -> None:
        mapping = {int(a): int(b) for a, b in mapping.items()}
        ren = lambda v: mapping.get(v, v)  # noqa: E731
        self.g = relabel(self.g, mapping)
        self.frame = {ren(v): c for v, c in self.frame.items()}
        self.fresh = {k: ren(v) for k, v in self.fresh.items()}
        if self.f is not None:
            self.f = PauliFlow(
                {ren(u): frozenset(map(ren, a)) for u, a in self.f.p.items()},
                PartialOrder(frozenset((ren(a), ren(b)) for a, b in self.f.order.pairs)),
                self.f.flavour,
            )
        self._push("relabel", {"mapping": {str(a): b for a, b in sorted(mapping.items())}}, None)

    def gadget_fuse(self, leaf: int) -> None:
        """Absorb a YZ-measured leaf into its neighbour as a Z rotation."""
        g = self.g
        g._require(leaf)
        m = g.labels.get(leaf)
        if m is None or m.plane is not Plane.YZ:
            raise RewriteError(f"gadget_fuse needs a YZ-measured leaf, {leaf} is {m or 'an output'}")
        if len(g.neighbours(leaf)) != 1:
            raise RewriteError(f"gadget_fuse needs a leaf, {leaf} has degree {len(g.neighbours(leaf))}")
        (a,) = g.neighbours(leaf)
        if leaf in g.inputs:
            raise RewriteError(f"gadget leaf {leaf} is an input")
        target = g.labels.get(a)
        if target is None or target.plane not in (Plane.XY, Plane.X, Plane.Y):
            raise RewriteError(f"gadget_fuse needs an XY, X or Y-measured hub, {a} is {target or 'an output'}")
        base = {Plane.XY: target.angle, Plane.X: target.angle, Plane.Y: angles.add(target.angle, angles.HALF)}[target.plane]
        new = Measurement(Plane.XY, angles.sub(base, m.angle))
        h = remove_vertex(g, leaf).replace(labels={**{k: v for k, v in g.labels.items() if k != leaf}, a: new})
        cand = order = None
        if self.f is not None:
            pl = self.f.p[leaf]
            cand = {u: (s ^ pl if leaf in s else s) for u, s in self.f.p.items() if u != leaf}
            order = self.f.order.restricted(h.vertices)
        path = self._settle(h, cand, order)
        self._push("gadget_fuse", {"leaf": leaf, "hub": a}, path)

    def split(self, a: int, w: Iterable[int], alpha1: Angle, alpha2: Angle, *, x: int | None = None, a_prime: int | None = None) -> tuple[int, int]:
        g = self.g
        g._require(a)
        w = frozenset(w)
        bad = sorted(v for v, m in g.labels.items() if m.plane not in (Plane.XY, Plane.X, Plane.Y))
        if bad:
            raise RewriteError(f"split_vertex needs every label in XY, X, Y; {bad} are not")
        m = g.labels.get(a)
        if m is None or m.plane is not Plane.XY:
            raise RewriteError(f"split_vertex needs an XY-measured vertex, {a} is {m or 'an output'}")
        if not angles.equal(angles.add(alpha1, alpha2), m.angle):
            raise RewriteError(
                f"angles must add up: {angles.fmt(alpha1)} + {angles.fmt(alpha2)} != {angles.fmt(m.angle)}"
            )
        if not w <= g.neighbours(a):
            raise RewriteError(f"W must be a set of neighbours of {a}; {sorted(w - g.neighbours(a))} are not")
        if self.f is not None and not check_focused(g, self.f).ok:
            raise RewriteError("split_vertex needs a focused flow")
        x = g.fresh_id(0) if x is None else x
        ap = g.fresh_id(1) if a_prime is None else a_prime
        edges = (g.edges - {tuple(sorted((a, v))) for v in w}) | {tuple(sorted((ap, v))) for v in w} | {
            tuple(sorted((a, x))),
            tuple(sorted((x, ap))),
        }
        labels = {**g.labels, a: Measurement(Plane.XY, alpha1), ap: Measurement(Plane.XY, alpha2), x: Measurement(Plane.X)}
        h = LabelledOpenGraph(g.vertices | {x, ap}, frozenset(edges), g.inputs, g.outputs, labels)
        path = None
        if self.f is not None:
            p, order = split_flow(self.f, a, w, x, ap)
            f = PauliFlow(p, order, Flavour.PAULI)
            rep = check_pauli_flow(h, f)
            if not rep.ok:
                raise AssertionError(f"split_vertex construction failed: {rep.violations}")
            self.g, self.f, path = h, f, "constructed"
        else:
            self.g = h
        self._push(
            "split",
            {"a": a, "W": sorted(w), "alpha1": angles.fmt_json(alpha1), "alpha2": angles.fmt_json(alpha2), "x": x, "a_prime": ap},
            path,
        )
        return x, ap

    def focus(self) -> None:
        if self.f is None or check_focused(self.g, self.f).ok:
            return
        self.f = focus_flow(self.g, self.f)
        self._push("focus", {}, "constructed")


def split_flow(f: PauliFlow, a: int, w: VertexSet, x: int, ap: int) -> tuple[dict[int, VertexSet], PartialOrder]:
    """The corrections and order after splitting ``a`` towards ``W`` into ``a - x - a'``."""
    p: dict[int, VertexSet] = {}
    for u, s in f.p.items():
        extra = set()
        if a in s:
            extra.add(ap)
        if len(s & w) % 2 == 1:
            extra.add(x)
        p[u] = s | extra
    p[x] = frozenset({ap})
    p[ap] = p[a] ^ {x}
    gen = set(f.order.pairs)
    gen |= {(v, ap) for v in f.order.predecessors(a)}
    gen |= {(ap, v) for v in f.order.successors(a)}
    gen |= {(x, v) for v in w}
    gen.add((x, ap))
    return p, PartialOrder.generated_by(gen)


# --------------------------------------------------------------------------- rules


def z_delete(g: LabelledOpenGraph, f: PauliFlow | None, v: int) -> RewriteResult:
    """Delete a Z-measured vertex.

    With angle pi the deletion leaves a Pauli Z on each neighbour, which is
    absorbed into their labels (or the frame, for outputs).
    """
    s = _Session(g, f)
    s.z_delete(v)
    return s.result()


def z_insert(g: LabelledOpenGraph, f: PauliFlow | None, neighbours: Iterable[int], angle: Angle = 0) -> RewriteResult:
    """Insert a fresh Z-measured vertex adjacent to ``neighbours``; its correction set is itself."""
    s = _Session(g, f)
    s.fresh["v"] = s.z_insert(neighbours, angle)
    return s.result()


def lc_rewrite(g: LabelledOpenGraph, f: PauliFlow | None, u: int) -> RewriteResult:
    """Local complementation about a non-input ``u`` with label updates.

    Parameters
    ----------
    g, f
        Pattern and optional Pauli flow.
    u
        Centre vertex; must not be an input.

    Returns
    -------
    RewriteResult
        ``X -> X`` and ``Y <-> Z`` at ``u``, ``X <-> Y`` and ``Z -> Z`` at
        each neighbour; planes follow the same Bloch rotation.
    """
    s = _Session(g, f)
    s.lc(u)
    return s.result()


def pivot_rewrite(g: LabelledOpenGraph, f: PauliFlow | None, u: int, v: int) -> RewriteResult:
    """Pivot about the edge ``{u, v}`` (both non-inputs).

    The graph is ``G * u * v * u``; common neighbours of ``u`` and ``v``
    pick up a Pauli Z, while ``u`` and ``v`` get the composed local
    complementation Cliffords followed by a Pauli Y.
    """
    s = _Session(g, f)
    s.pivot(u, v)
    return s.result()


def _to_xy(g: LabelledOpenGraph, f: PauliFlow | None, x: int, plane: Plane) -> RewriteResult:
    m = g.labels.get(x)
    if m is None or m.plane is not plane:
        raise RewriteError(f"expected a {plane}-measured vertex, {x} is {m or 'an output'}")
    if x in g.inputs:
        raise RewriteError(f"{x} is an input; a {plane}-measured input has no flow")
    s = _Session(g, f)
    xp = s.z_insert({x})
    if plane is Plane.XZ:
        s.lc(xp)
    s.pivot(x, xp)
    # the hub now sits on the fresh id; swap so that x keeps its place in the pattern
    s.relabel({x: xp, xp: x})
    s.fresh["x_prime"] = xp
    return s.result()


def yz_to_xy(g: LabelledOpenGraph, f: PauliFlow | None, x: int) -> RewriteResult:
    """Replace a YZ-measured ``x`` by an X-measured hub ``x`` with an XY-measured leaf ``x'``."""
    return _to_xy(g, f, x, Plane.YZ)


def xz_to_xy(g: LabelledOpenGraph, f: PauliFlow | None, x: int) -> RewriteResult:
    """Replace an XZ-measured ``x`` by a Y-measured ``x`` with an XY-measured leaf ``x'``."""
    return _to_xy(g, f, x, Plane.XZ)


def normalize_to_xy(g: LabelledOpenGraph, f: PauliFlow | None) -> RewriteResult:
    """Remove every Z, YZ and XZ label so all labels lie in {X, Y, XY}."""
    s = _Session(g, f)
    for v in sorted(v for v, m in g.labels.items() if m.plane is Plane.Z):
        s.z_delete(v)
    for v in sorted(s.g.labels):
        m = s.g.labels[v]
        if m.plane not in (Plane.YZ, Plane.XZ):
            continue
        if v in s.g.inputs:
            raise RewriteError(f"{v} is a {m.plane}-measured input; such a pattern has no flow")
        xp = s.z_insert({v})
        if m.plane is Plane.XZ:
            s.lc(xp)
        s.pivot(v, xp)
        s.relabel({v: xp, xp: v})
    return s.result()


def subdivide_edge(g: LabelledOpenGraph, f: PauliFlow | None, v: int, w: int) -> RewriteResult:
    """Replace the edge ``v - w`` by the path ``v - w' - v' - w`` with ``w'``, ``v'`` X-measured."""
    if not g.has_edge(v, w):
        raise RewriteError(f"no edge between {v} and {w}")
    s = _Session(g, f)
    vp = s.z_insert({v})
    wp = s.z_insert({vp, w})
    s.pivot(wp, vp)
    s.fresh.update(v_prime=vp, w_prime=wp)
    return s.result()


def split_vertex(
    g: LabelledOpenGraph, f: PauliFlow | None, a: int, w: Iterable[int], alpha1: Angle, alpha2: Angle
) -> RewriteResult:
    """Split the XY-measured ``a`` into ``a - x - a'``, moving the edges to ``W`` onto ``a'``.

    ``a`` keeps angle ``alpha1``, ``a'`` gets ``alpha2`` and ``x`` is X-measured.
    The flow must be focused; the new flow is built explicitly (no search).
    """
    s = _Session(g, f)
    x, ap = s.split(a, w, alpha1, alpha2)
    s.fresh.update(x=x, a_prime=ap)
    return s.result()


def neighbour_unfuse(g: LabelledOpenGraph, f: PauliFlow | None, a: int, b: int, alpha1: Angle, alpha2: Angle) -> RewriteResult:
    """Split ``a`` towards its neighbour ``b``, giving the chain ``a - x - a' - b``.

    An unfocused flow is focused first (recorded as a ``focus`` step).
    """
    if not g.has_edge(a, b):
        raise RewriteError(f"{b} is not a neighbour of {a}")
    s = _Session(g, f)
    s.focus()
    x, ap = s.split(a, {b}, alpha1, alpha2)
    s.fresh.update(x=x, a_prime=ap)
    return s.result()


def inverse_neighbour_unfuse(g: LabelledOpenGraph, f: PauliFlow | None, x: int, xp: int) -> RewriteResult:
    """Undo neighbour unfusion on the chain ``a - x - x' - b``.

    Pivots about ``x - x'``, deletes the now Z-measured ``x`` and fuses the
    YZ-measured leaf ``x'`` into ``a``, adding its angle back.
    """
    g._require(x, xp)
    mx, mxp = g.labels.get(x), g.labels.get(xp)
    if mx is None or mx.plane is not Plane.X or mx.angle != 0:
        raise RewriteError(f"{x} must be X-measured with angle 0, it is {mx or 'an output'}")
    if mxp is None or mxp.plane is not Plane.XY:
        raise RewriteError(f"{xp} must be XY-measured, it is {mxp or 'an output'}")
    if len(g.neighbours(x)) != 2 or len(g.neighbours(xp)) != 2:
        raise RewriteError(f"{x} and {xp} must both have degree 2")
    if not g.has_edge(x, xp):
        raise RewriteError(f"{x} and {xp} must be adjacent")
    (a,) = g.neighbours(x) - {xp}
    (b,) = g.neighbours(xp) - {x}
    if a == b:
        raise RewriteError("chain ends coincide")
    if g.has_edge(a, b):
        raise RewriteError(f"chain ends {a} and {b} are already adjacent")
    if {x, xp} & g.inputs:
        raise RewriteError("chain interior must not contain inputs")
    s = _Session(g, f)
    s.pivot(x, xp)
    s.z_delete(x)
    s.gadget_fuse(xp)
    return s.result()


def gadget_fuse(g: LabelledOpenGraph, f: PauliFlow | None, leaf: int) -> RewriteResult:
    s = _Session(g, f)
    s.gadget_fuse(leaf)
    return s.result()


# --------------------------------------------------------------------------- gflow-specific unfusion


def _sufficient_order(gf: PauliFlow, a: int, b: int) -> tuple[PartialOrder | None, str]:
    """An order for ``gf`` meeting the sufficient condition, or ``None`` and the failed clause.

    The condition asks for ``w < b => w < a`` and ``a < w => b < w``.  Adding
    exactly those pairs keeps every gflow condition; it fails only when some
    ``w`` lies strictly between ``a`` and ``b``, making the extension cyclic.
    """
    o = gf.order
    others = {w for pair in o.pairs for w in pair} - {a, b}
    need1 = {(w, a) for w in others if o.precedes(w, b) and not o.precedes(w, a)}
    need2 = {(b, w) for w in others if o.precedes(a, w) and not o.precedes(b, w)}
    ext = o.extended(need1)
    if not ext.is_strict():
        return None, f"w < {b} => w < {a}"
    ext = ext.extended(need2)
    if not ext.is_strict():
        return None, f"{a} < w => {b} < w"
    return ext, ""


def neighbour_unfuse_gflow(
    g: LabelledOpenGraph, gf: PauliFlow, a: int, b: int, alpha1: Angle, alpha2: Angle
) -> RewriteResult:
    """Neighbour unfusion with an explicitly constructed focused gflow.

    Requires a focused gflow with ``b`` in the correction set of ``a`` such
    that, after adding only order pairs the condition itself demands, every
    ``w`` before ``b`` is before ``a`` and every ``w`` after ``a`` is after
    ``b``.  If that fails the roles of ``a`` and ``b`` are swapped.  The new
    vertex ``x`` is labelled ``XY(0)``, which is the same measurement as
    ``X(0)`` but keeps the pattern planar.
    """
    for v in (a, b):
        m = g.labels.get(v)
        if m is not None and m.plane is not Plane.XY:
            raise RewriteError(f"{v} must be XY-measured or an output, it is {m}")
    if a in g.outputs and b in g.outputs:
        raise RewriteError("at least one of the unfused vertices must be measured")
    if not g.has_edge(a, b):
        raise RewriteError(f"{a} and {b} are not adjacent")
    if not check_gflow(g, gf).ok:
        raise RewriteError("input is not a gflow")
    if not check_focused(g, gf).ok:
        raise RewriteError("input gflow is not focused")
    reasons = []
    for first, second in ((a, b), (b, a)):
        if first in g.outputs:
            reasons.append(f"{first} is an output, so it has no correction set")
            continue
        if second not in gf.p[first]:
            reasons.append(f"{second} is not in the correction set of {first}")
            continue
        order, clause = _sufficient_order(gf, first, second)
        if order is None:
            reasons.append(f"no order extension satisfies {clause}")
            continue
        return _unfuse_gflow(g, PauliFlow(gf.p, order, Flavour.GFLOW), a, b, first, second, alpha1, alpha2)
    raise RewriteError("sufficient condition fails: " + "; ".join(reasons))


def _unfuse_gflow(
    g: LabelledOpenGraph, gf: PauliFlow, a: int, b: int, first: int, second: int, alpha1: Angle, alpha2: Angle
) -> RewriteResult:
    ma = g.labels.get(a)
    if ma is None:
        raise RewriteError(f"{a} is an output; unfuse from the measured end")
    if not angles.equal(angles.add(alpha1, alpha2), ma.angle):
        raise RewriteError(f"angles must add up to {angles.fmt(ma.angle)}")
    x, ap = g.fresh_id(0), g.fresh_id(1)
    edges = (g.edges - {tuple(sorted((a, b)))}) | {tuple(sorted(e)) for e in ((a, x), (x, ap), (ap, b))}
    labels = {**g.labels, a: Measurement(Plane.XY, alpha1), ap: Measurement(Plane.XY, alpha2), x: Measurement(Plane.XY)}
    h = LabelledOpenGraph(g.vertices | {x, ap}, frozenset(edges), g.inputs, g.outputs, labels)
    # roles: correction chain runs first -> second; the chain is a - x - a' - b
    near, far = (x, ap) if first == a else (ap, x)
    p: dict[int, VertexSet] = {}
    for v, s in gf.p.items():
        extra = set()
        if first in s:
            extra.add(far)
        if second in s:
            extra.add(near)
        p[v] = s | extra
    p[near] = gf.p.get(second, EMPTY) | {far}
    p[far] = gf.p[first]
    order = gf.order.extended({(first, near), (near, far), (far, second)})
    f = PauliFlow(p, order, Flavour.GFLOW)
    rep = check_gflow(h, f)
    foc = check_focused(h, f)
    if not (rep.ok and foc.ok):
        raise AssertionError(f"gflow unfusion construction failed: {rep.violations + foc.violations}")
    step = Step(
        "split",
        {"a": a, "W": [b], "alpha1": angles.fmt_json(alpha1), "alpha2": angles.fmt_json(alpha2), "x": x, "a_prime": ap, "x_label": "XY", "flow": "constructed"},
    )
    return RewriteResult(h, f, {"x": x, "a_prime": ap}, (step,), {})


class UnfusionVerdict(str, enum.Enum):
    HOLDS_VIA_A = "holds_via_a"
    HOLDS_VIA_B = "holds_via_b"
    FAILS = "fails"


def unfusion_gflow_necessary(g: LabelledOpenGraph, a: int, b: int) -> str:
    """Search for a focused gflow with ``b`` in the correction set of ``a``, then vice versa.

    Returns ``"holds_via_a"``, ``"holds_via_b"`` or ``"fails"``.  ``fails``
    means no such gflow exists, so no gflow survives unfusing ``a`` and ``b``.
    """
    if len(g.inputs) != len(g.outputs):
        raise RewriteError(f"needs |I| = |O|, got {len(g.inputs)} and {len(g.outputs)}")
    for v in (a, b):
        m = g.labels.get(v)
        if m is not None and m.plane is not Plane.XY:
            raise RewriteError(f"{v} must be XY-measured or an output, it is {m}")
    if not g.has_edge(a, b):
        raise RewriteError(f"{a} and {b} are not adjacent")
    for first, second, verdict in ((a, b, UnfusionVerdict.HOLDS_VIA_A), (b, a, UnfusionVerdict.HOLDS_VIA_B)):
        if first in g.outputs or second in g.inputs:
            continue
        if find_pauli_flow_bruteforce(g, Flavour.GFLOW, focused=True, include={first: {second}}) is not None:
            return verdict
    return UnfusionVerdict.FAILS


# --------------------------------------------------------------------------- replay


def replay(g: LabelledOpenGraph, trace: Iterable[Step | Mapping], f: PauliFlow | None = None) -> RewriteResult:
    """Re-run a trace of elementary steps from ``g``."""
    s = _Session(g, f)
    for raw in trace:
        step = raw if isinstance(raw, Step) else Step(raw["step"], raw.get("args", {}))
        a = step.args
        if step.kind == "z_insert":
            s.z_insert(a["neighbours"], angles.parse_json(a["angle"]), vertex=a["vertex"])
        elif step.kind == "z_delete":
            s.z_delete(a["vertex"])
        elif step.kind == "lc":
            s.lc(a["vertex"])
        elif step.kind == "pivot":
            s.pivot(a["u"], a["v"])
        elif step.kind == "gadget_fuse":
            s.gadget_fuse(a["leaf"])
        elif step.kind == "relabel":
            s.relabel({int(k): v for k, v in a["mapping"].items()})
        elif step.kind == "focus":
            s.focus()
        elif step.kind == "split":
            if a.get("x_label") == "XY":
                res = _replay_gflow_split(s.g, a)
                s.g, s.f = res, None
                s.trace.append(step)
            else:
                s.split(a["a"], a["W"], angles.parse_json(a["alpha1"]), angles.parse_json(a["alpha2"]), x=a["x"], a_prime=a["a_prime"])
    return s.result()


def _replay_gflow_split(g: LabelledOpenGraph, a: Mapping) -> LabelledOpenGraph:
    av, (b,), x, ap = a["a"], a["W"], a["x"], a["a_prime"]
    edges = (g.edges - {tuple(sorted((av, b)))}) | {tuple(sorted(e)) for e in ((av, x), (x, ap), (ap, b))}
    labels = {
        **g.labels,
        av: Measurement(Plane.XY, angles.parse_json(a["alpha1"])),
        ap: Measurement(Plane.XY, angles.parse_json(a["alpha2"])),
        x: Measurement(Plane.XY),
    }
    return LabelledOpenGraph(g.vertices | {x, ap}, frozenset(edges), g.inputs, g.outputs, labels)


def same_pattern(g1: LabelledOpenGraph, g2: LabelledOpenGraph) -> bool:
    """Equality of graphs with angles compared modulo 2 pi (float-tolerant)."""
    if (g1.vertices, g1.edges, g1.inputs, g1.outputs) != (g2.vertices, g2.edges, g2.inputs, g2.outputs):
        return False
    return all(
        g1.labels[v].plane is g2.labels[v].plane and angles.equal(g1.labels[v].angle, g2.labels[v].angle) for v in g1.labels
    )


__all__ = [
    "LC_CENTRE",
    "LC_NEIGHBOUR",
    "RewriteError",
    "RewriteResult",
    "Step",
    "UnfusionVerdict",
    "gadget_fuse",
    "inverse_neighbour_unfuse",
    "lc_rewrite",
    "neighbour_unfuse",
    "neighbour_unfuse_gflow",
    "normalize_to_xy",
    "pivot_rewrite",
    "replay",
    "same_pattern",
    "split_flow",
    "split_vertex",
    "subdivide_edge",
    "unfusion_gflow_necessary",
    "xz_to_xy",
    "yz_to_xy",
    "z_delete",
    "z_insert",
]
