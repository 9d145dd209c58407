from __future__ import annotations

import itertools
import random
from fractions import Fraction

import flow_oracle
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st
from strategies import flow_instances, graphs

from mbqcflow.fixtures import (
    MIYAZAKI,
    REMARK,
    UNFUSION,
    identity_wire,
    miyazaki,
    miyazaki_gflow,
    remark,
    remark_gflow,
)
from mbqcflow.flow import (
    Flavour,
    FlowError,
    PartialOrder,
    PauliFlow,
    SizeBoundError,
    check_focused,
    check_gflow,
    check_pauli_flow,
    find_pauli_flow_bruteforce,
    focus_flow,
    planar_reading,
    required_order,
    restrict_to_xy,
    reverse_focused_gflow,
    reverse_pattern,
    transitive_closure,
)
from mbqcflow.graph import EMPTY, LabelledOpenGraph, Measurement, Plane, open_graph
from mbqcflow.instances import random_candidate_flow, random_graph
from mbqcflow.rewrites import neighbour_unfuse, yz_to_xy

slow = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def _lam(g):
    return {v: m.plane.value for v, m in g.labels.items()}


def _oracle(g, f):
    return flow_oracle.violations(g.vertices, g.edges, g.inputs, g.outputs, _lam(g), dict(f.p), set(f.order.pairs))


def _remark_after():
    r = yz_to_xy(remark(Fraction(1, 3)), remark_gflow(), REMARK["x"])
    return r.graph, r.flow, r.fresh["x_prime"]


def _unfusion_after():
    from mbqcflow.fixtures import unfusion_example, unfusion_example_gflow

    n = UNFUSION
    r = neighbour_unfuse(unfusion_example(Fraction(1, 4)), unfusion_example_gflow(), n["a"], n["b"], Fraction(1, 4), 0)
    x, ap = r.fresh["x"], r.fresh["a_prime"]
    quoted = PauliFlow(
        {n["a"]: {n["c"]}, n["b"]: {n["d"]}, x: {n["d"], ap}, ap: {n["c"], x}},
        PartialOrder.generated_by(
            [(x, n["a"]), (x, n["b"]), (x, ap)] + [(u, o) for u in (n["a"], n["b"], ap) for o in (n["c"], n["d"])]
        ),
    )
    return r.graph, quoted, x, ap


# --------------------------------------------------------------------------- orders


def test_partial_order_basics():
    o = PartialOrder.generated_by([(1, 2), (2, 3)])
    assert o.precedes(1, 3)
    assert o.is_strict()
    assert o.cover_relation() == [(1, 2), (2, 3)]
    assert o.reversed().precedes(3, 1)
    assert o.successors(1) == {2, 3}
    assert not PartialOrder.generated_by([(1, 2), (2, 1)]).is_strict()


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6))))
def test_closure_is_transitive_and_cover_generates(pairs):
    c = transitive_closure(pairs)
    o = PartialOrder(c)
    assert o.is_transitive()
    if o.is_strict():
        assert PartialOrder.generated_by(o.cover_relation()) == o


# --------------------------------------------------------------------------- checker examples


def test_unfusion_quoted_pauli_flow_ok():
    h, quoted, _, _ = _unfusion_after()
    assert check_pauli_flow(h, quoted).ok


def test_unfusion_quoted_flow_as_gflow_needs_a_cycle():
    h, quoted, x, ap = _unfusion_after()
    report = check_pauli_flow(h, quoted.replace(flavour=Flavour.GFLOW))
    assert ("P1", (ap, x)) in {(v.condition, v.where) for v in report.violations}
    need = required_order(h, quoted.p, Flavour.GFLOW)
    assert (x, ap) in need and (ap, x) in need


def test_empty_graph_empty_flow():
    g = LabelledOpenGraph(EMPTY, frozenset())
    assert check_pauli_flow(g, PauliFlow({})).ok


def test_remark_gflow_ok():
    assert check_gflow(remark(), remark_gflow()).ok


def test_remark_after_rewrite_rejects_gflow_candidate():
    h, f, xp = _remark_after()
    x = REMARK["x"]
    need = required_order(h, f.p, Flavour.GFLOW)
    assert (x, xp) in need and (xp, x) in need
    assert not check_gflow(planar_reading(h), f.replace(flavour=Flavour.GFLOW)).ok


def test_single_xy_to_output():
    g = open_graph([(0, 1)], outputs=[1])
    f = PauliFlow({0: {1}}, PartialOrder.generated_by([(0, 1)]), Flavour.GFLOW)
    assert check_gflow(g, f).ok
    assert find_pauli_flow_bruteforce(g).p == {0: {1}}


def test_gflow_inapplicable_on_pauli_labels():
    g = open_graph([(0, 1)], outputs=[1], labels={0: "X"})
    with pytest.raises(FlowError):
        check_gflow(g, PauliFlow({0: {1}}, PartialOrder.generated_by([(0, 1)])))


def test_input_in_correction_set_is_a_domain_violation():
    g = open_graph([(0, 1)], inputs=[0], outputs=[1])
    r = check_pauli_flow(g, PauliFlow({0: {0, 1}}, PartialOrder.generated_by([(0, 1)])))
    assert "domain" in r.conditions()


def test_report_lists_every_violation():
    g = open_graph([(0, 2), (1, 2)], outputs=[2])
    r = check_pauli_flow(g, PauliFlow({0: set(), 1: set()}))
    assert {v.where for v in r.violations if v.condition == "P4"} == {(0,), (1,)}


def test_cyclic_order_reported():
    g = open_graph([(0, 1)], outputs=[1])
    bad = PauliFlow({0: {1}}, PartialOrder(frozenset({(0, 1), (1, 0)})))
    assert {"order-irreflexive", "order-transitive"} & check_pauli_flow(g, bad).conditions()


# --------------------------------------------------------------------------- focused


def test_miyazaki_gflow_is_a_gflow():
    assert check_gflow(miyazaki(), miyazaki_gflow()).ok


def test_xz_member_breaks_focus():
    g = open_graph([(0, 1), (1, 2), (0, 2)], outputs=[2], labels={0: "XY", 1: "XZ"})
    f = PauliFlow({0: {1}, 1: {1, 2}}, PartialOrder.generated_by([(0, 1), (1, 2)]))
    assert check_pauli_flow(g, f).ok
    assert "F1" in check_focused(g, f).conditions()


def test_output_only_corrections_are_focused():
    g = open_graph([(0, 2), (1, 3)], outputs=[2, 3])
    f = PauliFlow({0: {2}, 1: {3}}, PartialOrder.generated_by([(0, 2), (1, 3)]))
    assert check_focused(g, f).ok


def test_focus_fixed_point():
    g = open_graph([(0, 2), (1, 3)], outputs=[2, 3])
    f = PauliFlow({0: {2}, 1: {3}}, PartialOrder.generated_by([(0, 2), (1, 3)]))
    assert focus_flow(g, f).same_corrections(f)


def test_focus_repairs_miyazaki_gflow():
    g = miyazaki()
    ff = focus_flow(g, miyazaki_gflow())
    assert check_gflow(g, ff).ok and check_focused(g, ff).ok


def test_focus_rejects_invalid_flow():
    g = open_graph([(0, 1)], outputs=[1])
    with pytest.raises(FlowError):
        focus_flow(g, PauliFlow({0: set()}))


@slow
@given(flow_instances(max_vertices=7))
def test_focus_gives_valid_focused_flow(inst):
    g, f = inst
    ff = focus_flow(g, f)
    assert check_pauli_flow(g, ff).ok
    assert check_focused(g, ff).ok
    assert ff.order == f.order


# --------------------------------------------------------------------------- finder


def test_remark_finder_examples():
    h, _, _ = _remark_after()
    assert find_pauli_flow_bruteforce(h, Flavour.GFLOW) is None
    f = find_pauli_flow_bruteforce(h)
    assert f is not None and check_pauli_flow(h, f).ok


def test_size_bound(monkeypatch):
    g = random_graph(random.Random(0), 8, n_outputs=1)
    with pytest.raises(SizeBoundError):
        find_pauli_flow_bruteforce(g, max_size=3)
    monkeypatch.setenv("MBQC_FLOW_MAX_BRUTE", "2")
    with pytest.raises(SizeBoundError):
        find_pauli_flow_bruteforce(g)


def test_finder_is_deterministic():
    g = random_graph(random.Random(4), 7, n_outputs=2)
    assert find_pauli_flow_bruteforce(g) == find_pauli_flow_bruteforce(g)


def _exists_by_enumeration(g, flavour):
    lam = _lam(planar_reading(g)) if flavour is Flavour.GFLOW else _lam(g)
    us = sorted(g.non_outputs)
    pool = sorted(g.non_inputs)
    subsets = [frozenset(c) for k in range(len(pool) + 1) for c in itertools.combinations(pool, k)]
    for choice in itertools.product(subsets, repeat=len(us)):
        if flow_oracle.has_flow_for(g.vertices, g.edges, g.inputs, g.outputs, lam, dict(zip(us, choice))):
            return True
    return False


@pytest.mark.parametrize("seed", range(60))
def test_finder_matches_exhaustive_enumeration(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    g = random_graph(rng, n, n_outputs=rng.randint(0, 2), edge_prob=0.5)
    for flavour in (Flavour.PAULI, Flavour.GFLOW):
        if flavour is Flavour.GFLOW:
            g = planar_reading(g)
        f = find_pauli_flow_bruteforce(g, flavour)
        assert (f is not None) == _exists_by_enumeration(g, flavour)
        if f is not None:
            check = check_gflow if flavour is Flavour.GFLOW else check_pauli_flow
            assert check(g, f).ok


@slow
@given(graphs(max_vertices=7))
def test_finder_output_passes_checker(g):
    f = find_pauli_flow_bruteforce(g)
    if f is not None:
        assert check_pauli_flow(g, f).ok
        ff = find_pauli_flow_bruteforce(g, focused=True)
        assert ff is not None and check_focused(g, ff).ok


# --------------------------------------------------------------------------- checker vs straight-line oracle


@settings(max_examples=300, deadline=None)
@given(graphs(max_vertices=6), st.integers(0, 2**32 - 1))
def test_checker_agrees_with_oracle(g, seed):
    f = random_candidate_flow(random.Random(seed), g)
    mine = {(v.condition, v.where) for v in check_pauli_flow(g, f).violations}
    assert mine == _oracle(g, f)


@slow
@given(flow_instances(max_vertices=7))
def test_valid_flows_agree_with_oracle(inst):
    g, f = inst
    assert _oracle(g, f) == set()


# --------------------------------------------------------------------------- reversal and restriction


def test_identity_wire_reversal():
    g = identity_wire()
    f = PauliFlow({0: {1}}, PartialOrder.generated_by([(0, 1)]), Flavour.GFLOW)
    rev = reverse_focused_gflow(g, f)
    assert dict(rev.p) == {1: {0}} and rev.order.precedes(1, 0)
    assert check_gflow(reverse_pattern(g), rev).ok


def test_miyazaki_reversal():
    g = miyazaki()
    f = focus_flow(g, miyazaki_gflow())
    rg, rf = reverse_pattern(g), reverse_focused_gflow(g, f)
    assert check_gflow(rg, rf).ok and check_focused(rg, rf).ok
    assert reverse_focused_gflow(rg, rf).same_corrections(f)
    assert reverse_focused_gflow(rg, rf).order == f.order


def test_reversal_preconditions():
    g = open_graph([(0, 1), (1, 2)], inputs=[0], outputs=[1, 2])
    f = PauliFlow({0: {1}}, PartialOrder.generated_by([(0, 1)]), Flavour.GFLOW)
    with pytest.raises(FlowError, match=r"\|I\| = \|O\|"):
        reverse_focused_gflow(g, f)
    g2 = open_graph([(0, 1)], inputs=[0], outputs=[1], labels={0: "XZ"})
    with pytest.raises(FlowError, match="XY"):
        reverse_focused_gflow(g2, PauliFlow({0: {0, 1}}, PartialOrder.generated_by([(0, 1)]), Flavour.GFLOW))


@slow
@given(flow_instances(max_vertices=7, flavour=Flavour.GFLOW, focused=True))
def test_restriction_keeps_focused_gflow(inst):
    g, f = inst
    sub, sf = restrict_to_xy(g, f)
    assert check_gflow(sub, sf).ok
    assert check_focused(sub, sf).ok


@slow
@given(flow_instances(max_vertices=7, flavour=Flavour.GFLOW, focused=True, planes=(Plane.XY,)))
def test_reversal_involution(inst):
    g, f = inst
    if len(g.inputs) != len(g.outputs):
        return
    rg, rf = reverse_pattern(g), reverse_focused_gflow(g, f)
    assert check_gflow(rg, rf).ok and check_focused(rg, rf).ok
    back = reverse_focused_gflow(rg, rf)
    assert back.same_corrections(f) and back.order == f.order


def test_miyazaki_ids_match_fixture():
    g = miyazaki()
    assert g.inputs == {MIYAZAKI["i1"], MIYAZAKI["i2"]}
    assert g.outputs == {MIYAZAKI["o1"], MIYAZAKI["o2"]}
    assert all(m == Measurement(Plane.XY) for m in g.labels.values())
