from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import graphs

from mbqcflow.graph import (
    GraphError,
    LabelledOpenGraph,
    Measurement,
    Plane,
    add_edge,
    add_vertex,
    local_complement,
    odd_neighbourhood,
    open_graph,
    pivot,
    relabel,
    remove_edge,
    remove_vertex,
    set_label,
    toggle_edges,
)

PATH = open_graph([(1, 2), (2, 3)], outputs=[3])
TRIANGLE = open_graph([(1, 2), (2, 3), (1, 3)], outputs=[3])


def test_odd_examples():
    assert odd_neighbourhood(PATH, []) == frozenset()
    assert odd_neighbourhood(PATH, [2]) == {1, 3}
    assert odd_neighbourhood(TRIANGLE, [1, 2]) == {1, 2}


def test_odd_unknown_vertex():
    with pytest.raises(GraphError):
        odd_neighbourhood(PATH, [9])


def test_lc_star_becomes_star_plus_triangle():
    star = open_graph([(0, 1), (0, 2), (0, 3)], outputs=[1, 2, 3])
    h = local_complement(star, 0)
    assert h.edges == star.edges | {(1, 2), (1, 3), (2, 3)}
    assert h.labels == star.labels


def test_lc_isolated_vertex():
    g = open_graph([], outputs=[0], vertices=[0, 1])
    assert local_complement(g, 1) == g


def test_pivot_examples():
    edge = open_graph([(0, 1)], outputs=[0, 1])
    assert pivot(edge, 0, 1) == edge
    path = open_graph([(0, 1), (1, 2)], outputs=[2])
    assert pivot(path, 0, 1).edges == {(0, 1), (0, 2)}


def test_pivot_needs_an_edge():
    with pytest.raises(GraphError):
        pivot(PATH, 1, 3)


@given(graphs(), st.data())
def test_odd_is_linear(g, data):
    vs = sorted(g.vertices)
    a = data.draw(st.sets(st.sampled_from(vs)))
    b = data.draw(st.sets(st.sampled_from(vs)))
    assert odd_neighbourhood(g, a ^ b) == odd_neighbourhood(g, a) ^ odd_neighbourhood(g, b)


@given(graphs(), st.data())
def test_odd_is_xor_of_neighbourhoods(g, data):
    a = data.draw(st.sets(st.sampled_from(sorted(g.vertices))))
    acc = frozenset()
    for w in a:
        acc ^= g.neighbours(w)
    assert odd_neighbourhood(g, a) == acc


@given(graphs(), st.data())
def test_lc_involution(g, data):
    u = data.draw(st.sampled_from(sorted(g.vertices)))
    assert local_complement(local_complement(g, u), u) == g


@given(graphs(min_vertices=2), st.data())
def test_pivot_involution_and_decomposition(g, data):
    if not g.edges:
        return
    u, v = data.draw(st.sampled_from(sorted(g.edges)))
    h = pivot(g, u, v)
    assert pivot(h, u, v) == g
    assert pivot(g, v, u) == h
    assert h == local_complement(local_complement(local_complement(g, u), v), u)
    assert all(a != b for a, b in h.edges)


@given(graphs(), st.data())
def test_add_remove_roundtrip(g, data):
    nb = data.draw(st.sets(st.sampled_from(sorted(g.vertices))))
    v = g.fresh_id()
    h = add_vertex(g, v, Measurement(Plane.XZ, Fraction(1, 3)), nb)
    assert h.neighbours(v) == nb
    assert remove_vertex(h, v) == g


@given(graphs(min_vertices=2), st.data())
def test_toggle_twice(g, data):
    vs = sorted(g.vertices)
    pairs = data.draw(st.lists(st.tuples(st.sampled_from(vs), st.sampled_from(vs)).filter(lambda e: e[0] != e[1])))
    assert toggle_edges(toggle_edges(g, pairs), pairs) == g


def test_remove_output_keeps_labels():
    g = open_graph([(0, 1), (1, 2)], inputs=[0], outputs=[2], labels={0: "XY", 1: ("YZ", Fraction(1, 4))})
    h = remove_vertex(g, 2)
    assert dict(h.labels) == dict(g.labels)


def test_structural_errors():
    g = open_graph([(0, 1)], outputs=[1])
    with pytest.raises(GraphError):
        add_vertex(g, 0, Measurement(Plane.XY))
    with pytest.raises(GraphError):
        add_edge(g, 0, 1)
    with pytest.raises(GraphError):
        remove_edge(g, 0, 0)
    with pytest.raises(GraphError):
        remove_vertex(g, 5)
    with pytest.raises(GraphError):
        set_label(g, 1, Measurement(Plane.XY))
    with pytest.raises(GraphError):
        relabel(g, {0: 1})


def test_construction_validates():
    with pytest.raises(GraphError):
        LabelledOpenGraph(frozenset({0}), frozenset({(0, 1)}))
    with pytest.raises(GraphError):
        LabelledOpenGraph(frozenset({0, 1}), frozenset(), outputs=frozenset({1}), labels={})
    with pytest.raises(GraphError):
        Measurement(Plane.X, Fraction(1, 2))


def test_self_loop_rejected():
    with pytest.raises(GraphError):
        open_graph([(0, 0)], outputs=[0])


def test_relabel_is_structural():
    g = open_graph([(0, 1), (1, 2)], inputs=[0], outputs=[2])
    h = relabel(g, {0: 10, 2: 12})
    assert h.edges == {(1, 10), (1, 12)}
    assert h.inputs == {10} and h.outputs == {12}


@pytest.mark.parametrize("plane", list(Plane))
def test_bloch_vectors_are_unit(plane):
    m = Measurement(plane, Fraction(1) if plane.is_pauli else Fraction(1, 3))
    assert sum(x * x for x in m.bloch()) == pytest.approx(1)
