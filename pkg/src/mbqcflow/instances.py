"""Seeded random patterns and flow instances for tests and the CLI."""

from __future__ import annotations

import random
from collections.abc import Sequence
from fractions import Fraction

from mbqcflow.flow import Flavour, PartialOrder, PauliFlow, find_pauli_flow_bruteforce
from mbqcflow.graph import PAULIS, PLANES, LabelledOpenGraph, Measurement, Plane

ALL_PLANES: tuple[Plane, ...] = PLANES + PAULIS
XY_FAMILY: tuple[Plane, ...] = (Plane.XY, Plane.X, Plane.Y)


class GiveUp(RuntimeError):
    """Rejection sampling ran out of attempts."""


def random_angle(rng: random.Random, plane: Plane, float_prob: float = 0.1) -> Fraction | float:
    if plane.is_pauli:
        return Fraction(rng.randrange(2))
    if rng.random() < float_prob:
        return rng.uniform(0, 2)
    return Fraction(rng.randrange(8), 4)


def random_graph(
    rng: random.Random,
    n: int,
    *,
    n_inputs: int | None = None,
    n_outputs: int | None = None,
    edge_prob: float = 0.4,
    planes: Sequence[Plane] = ALL_PLANES,
    float_prob: float = 0.1,
) -> LabelledOpenGraph:
    """A random labelled open graph on vertices ``0..n-1``."""
    verts = list(range(n))
    if n_outputs is None:
        n_outputs = rng.randint(1, max(1, n // 2)) if n else 0
    if n_inputs is None:
        n_inputs = rng.randint(0, max(0, n // 3))
    outputs = set(rng.sample(verts, min(n_outputs, n)))
    inputs = set(rng.sample(verts, min(n_inputs, n)))
    edges = {(u, v) for u in verts for v in verts if u < v and rng.random() < edge_prob}
    labels = {}
    for v in verts:
        if v in outputs:
            continue
        pl = rng.choice(list(planes))
        labels[v] = Measurement(pl, random_angle(rng, pl, float_prob))
    return LabelledOpenGraph(frozenset(verts), frozenset(edges), frozenset(inputs), frozenset(outputs), labels)


def random_flow_instance(
    rng: random.Random,
    n: int,
    *,
    flavour: Flavour | str = Flavour.PAULI,
    attempts: int = 2000,
    focused: bool = False,
    **kwargs,
) -> tuple[LabelledOpenGraph, PauliFlow]:
    """Rejection-sample a graph until the exhaustive search finds a flow."""
    flavour = Flavour(flavour)
    if flavour is Flavour.GFLOW:
        kwargs.setdefault("planes", PLANES)
    for _ in range(attempts):
        g = random_graph(rng, n, **kwargs)
        f = find_pauli_flow_bruteforce(g, flavour, focused=focused)
        if f is not None:
            return g, f
    raise GiveUp(f"no flow instance with {n} vertices after {attempts} attempts")


def random_candidate_flow(rng: random.Random, g: LabelledOpenGraph, order_prob: float = 0.3) -> PauliFlow:
    """An arbitrary (usually invalid) correction map and relation, for checker tests.

    The relation is generated by random pairs and may be cyclic.
    """
    non_in = sorted(g.non_inputs)
    p = {u: frozenset(v for v in non_in if rng.random() < 0.4) for u in sorted(g.non_outputs)}
    verts = sorted(g.vertices)
    ranks = {v: rng.random() for v in verts}
    pairs = {(u, v) for u in verts for v in verts if u != v and ranks[u] < ranks[v] and rng.random() < order_prob}
    if rng.random() < 0.1 and len(verts) >= 2:
        u, v = rng.sample(verts, 2)
        pairs |= {(u, v), (v, u)}
    return PauliFlow(p, PartialOrder.generated_by(pairs), Flavour.PAULI)
