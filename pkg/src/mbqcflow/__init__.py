"""Labelled open graphs, Pauli flow verification and flow-preserving rewrites."""

from mbqcflow.flow import (
    Flavour,
    FlowReport,
    PartialOrder,
    PauliFlow,
    check_focused,
    check_gflow,
    check_pauli_flow,
    find_pauli_flow_bruteforce,
    focus_flow,
    reverse_focused_gflow,
)
from mbqcflow.graph import LabelledOpenGraph, Measurement, Plane, local_complement, odd_neighbourhood, open_graph, pivot
from mbqcflow.semantics import TensorMap, equal_up_to_scalar, eval_pattern

__all__ = [
    "Flavour",
    "FlowReport",
    "LabelledOpenGraph",
    "Measurement",
    "PartialOrder",
    "PauliFlow",
    "Plane",
    "TensorMap",
    "check_focused",
    "check_gflow",
    "check_pauli_flow",
    "equal_up_to_scalar",
    "eval_pattern",
    "find_pauli_flow_bruteforce",
    "focus_flow",
    "local_complement",
    "odd_neighbourhood",
    "open_graph",
    "pivot",
    "reverse_focused_gflow",
]
