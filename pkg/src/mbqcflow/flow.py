"""Pauli flow and gflow: representation, verification, search and focusing.

A flow is a correction map ``p`` from non-outputs to sets of non-inputs plus a
strict partial order.  The checkers report every violated condition rather
than stopping at the first, keyed by the condition ids ``P1``..``P9`` (flow),
``F1``..``F3`` (focusing), ``order-irreflexive``, ``order-transitive`` and
``domain``.
"""

from __future__ import annotations

import enum
import os
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

from mbqcflow import gf2
from mbqcflow.graph import (
    EMPTY,
    LabelledOpenGraph,
    Measurement,
    Plane,
    VertexSet,
    odd_neighbourhood,
)

DEFAULT_MAX_BRUTE = 12
ENV_MAX_BRUTE = "MBQC_FLOW_MAX_BRUTE"


class Flavour(enum.Enum):
    PAULI = "pauli"
    GFLOW = "gflow"


class FlowError(ValueError):
    """A flow argument does not meet an operation's precondition."""


class SizeBoundError(FlowError):
    """The exhaustive search was asked to run above its size bound."""


def max_brute() -> int:
    return int(os.environ.get(ENV_MAX_BRUTE, DEFAULT_MAX_BRUTE))


# --------------------------------------------------------------------------- order


def transitive_closure(pairs: Iterable[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    succ: dict[int, set[int]] = {}
    for u, v in pairs:
        succ.setdefault(u, set()).add(v)
        succ.setdefault(v, set())
    closed: set[tuple[int, int]] = set()
    for start in succ:
        seen: set[int] = set()
        stack = list(succ[start])
        while stack:
            w = stack.pop()
            if w in seen:
                continue
            seen.add(w)
            stack.extend(succ[w])
        closed.update((start, w) for w in seen)
    return frozenset(closed)


@dataclass(frozen=True)
class PartialOrder:
    """A strict order stored as its full (transitively closed) relation."""

    pairs: frozenset[tuple[int, int]] = frozenset()

    @classmethod
    def generated_by(cls, pairs: Iterable[tuple[int, int]]) -> PartialOrder:
        return cls(transitive_closure((int(u), int(v)) for u, v in pairs))

    def precedes(self, u: int, v: int) -> bool:
        return (u, v) in self.pairs

    def successors(self, u: int) -> VertexSet:
        return frozenset(v for a, v in self.pairs if a == u)

    def predecessors(self, v: int) -> VertexSet:
        return frozenset(u for u, b in self.pairs if b == v)

    def is_strict(self) -> bool:
        return not any(u == v for u, v in self.pairs) and self.is_transitive()

    def is_transitive(self) -> bool:
        return transitive_closure(self.pairs) == self.pairs

    def extended(self, pairs: Iterable[tuple[int, int]]) -> PartialOrder:
        return PartialOrder.generated_by(self.pairs | set(pairs))

    def reversed(self) -> PartialOrder:
        return PartialOrder(frozenset((v, u) for u, v in self.pairs))

    def restricted(self, keep: Iterable[int]) -> PartialOrder:
        keep = frozenset(keep)
        return PartialOrder(frozenset((u, v) for u, v in self.pairs if u in keep and v in keep))

    def cover_relation(self) -> list[tuple[int, int]]:
        """Transitive reduction, the smallest generating relation."""
        out = []
        for u, v in sorted(self.pairs):
            if not any((u, w) in self.pairs and (w, v) in self.pairs for w in self.successors(u)):
                out.append((u, v))
        return out


# --------------------------------------------------------------------------- flows


@dataclass(frozen=True)
class PauliFlow:
    p: Mapping[int, VertexSet]
    order: PartialOrder = field(default_factory=PartialOrder)
    flavour: Flavour = Flavour.PAULI

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", MappingProxyType({int(u): frozenset(s) for u, s in dict(self.p).items()}))
        if not isinstance(self.flavour, Flavour):
            object.__setattr__(self, "flavour", Flavour(self.flavour))

    def correction(self, u: int) -> VertexSet:
        return self.p[u]

    def same_corrections(self, other: PauliFlow) -> bool:
        return dict(self.p) == dict(other.p)

    def replace(self, **changes) -> PauliFlow:
        data = {"p": dict(self.p), "order": self.order, "flavour": self.flavour}
        data.update(changes)
        return PauliFlow(**data)

    def __str__(self) -> str:
        body = ", ".join(f"{u}: {sorted(self.p[u])}" for u in sorted(self.p))
        return f"PauliFlow[{self.flavour.value}]({{{body}}}, order={self.order.cover_relation()})"


@dataclass(frozen=True)
class Violation:
    condition: str
    where: tuple[int, ...]
    message: str

    def as_dict(self) -> dict:
        return {"condition": self.condition, "where": list(self.where), "message": self.message}


@dataclass(frozen=True)
class FlowReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> set[str]:
        return {v.condition for v in self.violations}

    def __bool__(self) -> bool:
        return self.ok


_PAULI_XY = (Plane.X, Plane.Y)
_PAULI_YZ = (Plane.Y, Plane.Z)


def planar_reading(g: LabelledOpenGraph) -> LabelledOpenGraph:
    """Read Pauli labels as planes: X and Y as XY, Z as YZ.

    Gflow has no Pauli labels; this is the reading under which a pattern with
    Pauli measurements is asked whether it has a gflow.
    """
    table = {Plane.X: Plane.XY, Plane.Y: Plane.XY, Plane.Z: Plane.YZ}
    labels = {}
    for v, m in g.labels.items():
        if m.plane.is_pauli:
            angle = m.angle + Fraction(1, 2) if m.plane is Plane.Y else m.angle
            labels[v] = Measurement(table[m.plane], angle)
        else:
            labels[v] = m
    return g.replace(labels=labels)


def _labels_for(g: LabelledOpenGraph, flavour: Flavour) -> Mapping[int, Plane]:
    if flavour is Flavour.GFLOW:
        g = planar_reading(g)
    return {v: m.plane for v, m in g.labels.items()}


def _check(g: LabelledOpenGraph, f: PauliFlow, lam: Mapping[int, Plane]) -> list[Violation]:
    out: list[Violation] = []
    non_out = g.non_outputs
    if set(f.p) != set(non_out):
        missing = sorted(non_out - set(f.p))
        extra = sorted(set(f.p) - non_out)
        out.append(Violation("domain", tuple(missing + extra), f"correction map must be defined exactly on V\\O (missing {missing}, extra {extra})"))
    for u, v in sorted(f.order.pairs):
        if u == v:
            out.append(Violation("order-irreflexive", (u,), f"{u} precedes itself"))
    if not f.order.is_transitive():
        out.append(Violation("order-transitive", (), "order relation is not transitively closed"))
    prec = f.order.precedes
    y_vertices = sorted(v for v, pl in lam.items() if pl is Plane.Y)
    for u in sorted(set(f.p) & non_out):
        a = f.p[u]
        unknown = sorted(a - g.vertices)
        if unknown:
            out.append(Violation("domain", (u, *unknown), f"p({u}) contains unknown vertices {unknown}"))
            continue
        bad_inputs = sorted(a & g.inputs)
        if bad_inputs:
            out.append(Violation("domain", (u, *bad_inputs), f"p({u}) contains inputs {bad_inputs}"))
        odd = odd_neighbourhood(g, a)
        for v in sorted(a):
            if v != u and lam.get(v) not in _PAULI_XY and not prec(u, v):
                out.append(Violation("P1", (u, v), f"{v} in p({u}) is not X/Y-measured, so needs {u} < {v}"))
        for v in sorted(odd):
            if v != u and lam.get(v) not in _PAULI_YZ and not prec(u, v):
                out.append(Violation("P2", (u, v), f"{v} in Odd(p({u})) is not Y/Z-measured, so needs {u} < {v}"))
        for v in y_vertices:
            if v != u and not prec(u, v) and ((v in a) != (v in odd)):
                out.append(Violation("P3", (u, v), f"Y-measured {v} not after {u}: membership in p({u}) and Odd(p({u})) differ"))
        in_p, in_odd = u in a, u in odd
        pl = lam[u]
        if pl is Plane.XY and (in_p or not in_odd):
            out.append(Violation("P4", (u,), f"XY-measured {u} needs {u} not in p({u}) and {u} in Odd(p({u}))"))
        elif pl is Plane.XZ and not (in_p and in_odd):
            out.append(Violation("P5", (u,), f"XZ-measured {u} needs {u} in p({u}) and in Odd(p({u}))"))
        elif pl is Plane.YZ and not (in_p and not in_odd):
            out.append(Violation("P6", (u,), f"YZ-measured {u} needs {u} in p({u}) and not in Odd(p({u}))"))
        elif pl is Plane.X and not in_odd:
            out.append(Violation("P7", (u,), f"X-measured {u} needs {u} in Odd(p({u}))"))
        elif pl is Plane.Z and not in_p:
            out.append(Violation("P8", (u,), f"Z-measured {u} needs {u} in p({u})"))
        elif pl is Plane.Y and in_p == in_odd:
            out.append(Violation("P9", (u,), f"Y-measured {u} needs exactly one of {u} in p({u}), {u} in Odd(p({u}))"))
    return out


def check_pauli_flow(g: LabelledOpenGraph, f: PauliFlow) -> FlowReport:
    """Check all nine Pauli-flow conditions and the well-formedness of the order.

    A flow of flavour ``gflow`` is checked against :func:`planar_reading` of
    ``g``, so Pauli labels get no special treatment.
    """
    return FlowReport(tuple(_check(g, f, _labels_for(g, f.flavour))))


def check_gflow(g: LabelledOpenGraph, f: PauliFlow) -> FlowReport:
    """Check the gflow conditions; only meaningful when every label is a plane."""
    pauli = sorted(v for v, m in g.labels.items() if m.plane.is_pauli)
    if pauli:
        raise FlowError(f"gflow check is inapplicable: vertices {pauli} carry Pauli labels")
    return FlowReport(tuple(_check(g, f, _labels_for(g, Flavour.PAULI))))


_FOCUS_P = (Plane.XY, Plane.X, Plane.Y)
_FOCUS_ODD = (Plane.XZ, Plane.YZ, Plane.Y, Plane.Z)


def _focus_witnesses(g: LabelledOpenGraph, lam: Mapping[int, Plane], u: int, a: VertexSet) -> list[tuple[str, int]]:
    odd = odd_neighbourhood(g, a)
    out = []
    for v in sorted(g.non_outputs - {u}):
        if v in a and lam[v] not in _FOCUS_P:
            out.append(("F1", v))
        elif v in odd and lam[v] not in _FOCUS_ODD:
            out.append(("F2", v))
        elif lam[v] is Plane.Y and (v in a) != (v in odd):
            out.append(("F3", v))
    return out


def check_focused(g: LabelledOpenGraph, f: PauliFlow) -> FlowReport:
    """Check the three focusing conditions over ``S_u = V \\ (O u {u})``."""
    lam = _labels_for(g, f.flavour)
    msg = {
        "F1": "{v} in p({u}) must be XY/X/Y-measured",
        "F2": "{v} in Odd(p({u})) must be XZ/YZ/Y/Z-measured",
        "F3": "Y-measured {v}: membership in p({u}) and Odd(p({u})) must agree",
    }
    out = []
    for u in sorted(f.p):
        if u not in g.non_outputs or not f.p[u] <= g.vertices:
            continue
        for cond, v in _focus_witnesses(g, lam, u, f.p[u]):
            out.append(Violation(cond, (u, v), msg[cond].format(u=u, v=v)))
    return FlowReport(tuple(out))


def required_order(g: LabelledOpenGraph, p: Mapping[int, VertexSet], flavour: Flavour = Flavour.PAULI) -> set[tuple[int, int]]:
    """The pairs ``u < v`` that conditions P1-P3 force for the corrections ``p``."""
    lam = _labels_for(g, flavour)
    pairs = set()
    for u, a in p.items():
        odd = odd_neighbourhood(g, a)
        for v in a:
            if v != u and lam.get(v) not in _PAULI_XY:
                pairs.add((u, v))
        for v in odd:
            if v != u and lam.get(v) not in _PAULI_YZ:
                pairs.add((u, v))
        for v, pl in lam.items():
            if pl is Plane.Y and v != u and (v in a) != (v in odd):
                pairs.add((u, v))
    return pairs


def flow_from_corrections(
    g: LabelledOpenGraph, p: Mapping[int, Iterable[int]], flavour: Flavour = Flavour.PAULI
) -> PauliFlow | None:
    """Pair ``p`` with the least order it needs; ``None`` if that order is cyclic or ``p`` fails."""
    p = {u: frozenset(s) for u, s in p.items()}
    order = PartialOrder.generated_by(required_order(g, p, flavour))
    f = PauliFlow(p, order, flavour)
    return f if check_pauli_flow(g, f).ok else None


# --------------------------------------------------------------------------- search


def _candidate_sets(
    g: LabelledOpenGraph,
    lam: Mapping[int, Plane],
    u: int,
    solved: VertexSet,
    focused: bool,
    include: VertexSet,
    exclude: VertexSet,
) -> list[VertexSet]:
    """All admissible ``p(u)`` given that exactly the vertices in ``solved`` come after ``u``."""
    pool = sorted(v for v in g.non_inputs if v in solved or v == u or lam.get(v) in _PAULI_XY)
    col = {v: i for i, v in enumerate(pool)}
    adj = g.adjacency

    def odd_row(t: int) -> int:
        r = 0
        for w in adj[t]:
            if w in col:
                r |= 1 << col[w]
        return r

    def x_row(t: int) -> int:
        return 1 << col[t] if t in col else 0

    rows: list[int] = []
    rhs: list[int] = []

    def eq(row: int, b: int) -> None:
        rows.append(row)
        rhs.append(b)

    for t in sorted(g.vertices - {u}):
        pl = lam.get(t)
        if t not in solved and pl not in _PAULI_YZ:
            eq(odd_row(t), 0)  # P2
        if t not in solved and pl is Plane.Y:
            eq(odd_row(t) ^ x_row(t), 0)  # P3
        if focused and t not in g.outputs:
            if pl not in _FOCUS_P:
                eq(x_row(t), 0)
            if pl not in _FOCUS_ODD:
                eq(odd_row(t), 0)
            if pl is Plane.Y:
                eq(odd_row(t) ^ x_row(t), 0)
    xu, ou = x_row(u), odd_row(u)
    pl = lam[u]
    if pl is Plane.XY:
        eq(xu, 0), eq(ou, 1)
    elif pl is Plane.XZ:
        eq(xu, 1), eq(ou, 1)
    elif pl is Plane.YZ:
        eq(xu, 1), eq(ou, 0)
    elif pl is Plane.X:
        eq(ou, 1)
    elif pl is Plane.Z:
        eq(xu, 1)
    else:
        eq(xu ^ ou, 1)
    for v in include:
        eq(x_row(v), 1)
    for v in exclude:
        eq(x_row(v), 0)
    sol = gf2.solve(rows, rhs, len(pool))
    if sol is None:
        return []
    particular, basis = sol
    found = [frozenset(pool[i] for i in gf2.bits(x)) for x in gf2.solutions(particular, basis)]
    found.sort(key=lambda s: (len(s), sorted(s)))
    return found


def find_pauli_flow_bruteforce(
    g: LabelledOpenGraph,
    flavour: Flavour | str = Flavour.PAULI,
    *,
    focused: bool = False,
    include: Mapping[int, Iterable[int]] | None = None,
    exclude: Mapping[int, Iterable[int]] | None = None,
    max_size: int | None = None,
) -> PauliFlow | None:
    """Exhaustively search for a flow; ``None`` means none exists.

    Vertices are solved in layers from the outputs backwards.  At each layer
    every unsolved vertex is given the smallest admissible correction set
    (enumerated as the solution space of a GF(2) system) using only vertices
    already solved as successors.  Admissibility only grows as the solved set
    grows, so a vertex left unsolved when no layer makes progress has no
    correction set under any order and the search is exhaustive.

    ``include``/``exclude`` pin membership in individual correction sets and
    ``focused`` restricts to focused flows; both are per-vertex constraints,
    so the layered search stays exhaustive with them.
    """
    flavour = Flavour(flavour)
    bound = max_brute() if max_size is None else max_size
    if len(g.non_outputs) > bound:
        raise SizeBoundError(f"{len(g.non_outputs)} non-outputs exceeds the exhaustive-search bound {bound}")
    lam = _labels_for(g, flavour)
    include = {u: frozenset(s) for u, s in (include or {}).items()}
    exclude = {u: frozenset(s) for u, s in (exclude or {}).items()}
    solved: VertexSet = g.outputs
    unsolved = set(g.non_outputs)
    p: dict[int, VertexSet] = {}
    while unsolved:
        layer = {}
        for u in sorted(unsolved):
            cands = _candidate_sets(g, lam, u, solved, focused, include.get(u, EMPTY), exclude.get(u, EMPTY))
            if cands:
                layer[u] = cands[0]
        if not layer:
            return None
        p.update(layer)
        solved = solved | frozenset(layer)
        unsolved -= set(layer)
    f = flow_from_corrections(g, p, flavour)
    assert f is not None, "layered search produced an invalid flow"
    return f


# --------------------------------------------------------------------------- focusing


def focus_flow(g: LabelledOpenGraph, f: PauliFlow) -> PauliFlow:
    """Turn a Pauli flow into a focused one with the same order.

    While some ``p(u)`` has a focusing witness ``v`` (taken maximal in the
    order among ``u``'s witnesses), replace ``p(u)`` by ``p(u) Δ p(v)``.
    Every witness is a successor of ``u``, which is why the flow conditions
    survive each step.
    """
    if not check_pauli_flow(g, f).ok:
        raise FlowError("focus_flow needs a valid flow")
    lam = _labels_for(g, f.flavour)
    p = dict(f.p)
    cap = len(g.vertices) * 2 ** len(g.vertices) + 1
    for _ in range(cap):
        for u in sorted(p):
            witnesses = [v for _, v in _focus_witnesses(g, lam, u, p[u])]
            if witnesses:
                break
        else:
            out = PauliFlow(p, f.order, f.flavour)
            assert check_pauli_flow(g, out).ok and check_focused(g, out).ok
            return out
        top = [v for v in witnesses if not any(f.order.precedes(v, w) for w in witnesses)]
        v = max(top)
        p[u] = p[u] ^ p[v]
    raise FlowError("focusing did not terminate within its iteration cap")


# --------------------------------------------------------------------------- reversal and restriction


def reverse_pattern(g: LabelledOpenGraph) -> LabelledOpenGraph:
    """Swap inputs and outputs; every new non-output is measured in XY."""
    labels = {v: g.labels.get(v, Measurement(Plane.XY)) for v in g.vertices - g.inputs}
    return LabelledOpenGraph(g.vertices, g.edges, g.outputs, g.inputs, labels)


def reverse_focused_gflow(g: LabelledOpenGraph, f: PauliFlow) -> PauliFlow:
    """The focused gflow of :func:`reverse_pattern` obtained by transposing ``f``.

    ``u`` is in the reversed correction set of ``v`` iff ``v`` is in ``f``'s
    correction set of ``u``, and the order is reversed.
    """
    non_xy = sorted(v for v, m in g.labels.items() if m.plane is not Plane.XY)
    if non_xy:
        raise FlowError(f"reversal needs every non-output measured in XY; {non_xy} are not")
    if len(g.inputs) != len(g.outputs):
        raise FlowError(f"reversal needs |I| = |O|, got {len(g.inputs)} and {len(g.outputs)}")
    if not check_gflow(g, f).ok:
        raise FlowError("reversal needs a valid gflow")
    if not check_focused(g, f).ok:
        raise FlowError("reversal needs a focused gflow")
    rev = {v: frozenset(u for u, a in f.p.items() if v in a) for v in g.vertices - g.inputs}
    return PauliFlow(rev, f.order.reversed(), Flavour.GFLOW)


def induced_subpattern(g: LabelledOpenGraph, keep: Iterable[int]) -> LabelledOpenGraph:
    keep = frozenset(keep)
    return LabelledOpenGraph(
        keep,
        frozenset(e for e in g.edges if e[0] in keep and e[1] in keep),
        g.inputs & keep,
        g.outputs & keep,
        {v: m for v, m in g.labels.items() if v in keep},
    )


def restrict_to_xy(g: LabelledOpenGraph, f: PauliFlow) -> tuple[LabelledOpenGraph, PauliFlow]:
    """Restrict to the vertices that are outputs or XY-measured."""
    keep = g.outputs | {v for v, m in g.labels.items() if m.plane is Plane.XY}
    sub = induced_subpattern(g, keep)
    return sub, PauliFlow({u: f.p[u] & keep for u in sub.non_outputs}, f.order.restricted(keep), f.flavour)
