"""Desk-scale linear-map semantics of labelled open graphs.

Only the desired-outcome branch is evaluated: every non-output vertex is
post-selected onto ``<+_{lambda, alpha}|``.  The resulting map is compared
with others up to a nonzero scalar.
"""

from __future__ import annotations

import math
import os
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from mbqcflow.clifford import Clifford
from mbqcflow.graph import LabelledOpenGraph, Measurement, Plane

DEFAULT_MAX_VERTICES = 14
ENV_MAX_VERTICES = "MBQC_ORACLE_MAX_VERTICES"
ZERO_TOL = 1e-12

_CZ = np.array([[1, 1], [1, -1]], dtype=complex)
_PLUS = np.array([1, 1], dtype=complex) / math.sqrt(2)


class SemanticsError(ValueError):
    """The oracle cannot produce or compare a map."""


class OracleSizeError(SemanticsError):
    """Pattern above the oracle's vertex bound."""


class ZeroMapError(SemanticsError):
    """The post-selected map vanishes, so scalar comparison is meaningless."""


@dataclass(frozen=True)
class TensorMap:
    """Matrix from the input space to the output space.

    Rows index outputs and columns index inputs, each as a bit string in
    ascending vertex-id order (the smallest id is the most significant bit).
    """

    matrix: np.ndarray
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def is_zero(self, tol: float = ZERO_TOL) -> bool:
        return float(np.max(np.abs(self.matrix), initial=0.0)) < tol


def effect(m: Measurement) -> np.ndarray:
    """Coefficients of ``<+_{m}|`` in the computational basis."""
    a = m.radians
    if m.plane is Plane.XY:
        return np.array([1, np.exp(-1j * a)], dtype=complex) / math.sqrt(2)
    if m.plane is Plane.XZ:
        return np.array([math.cos(a / 2), math.sin(a / 2)], dtype=complex)
    if m.plane is Plane.YZ:
        return np.array([math.cos(a / 2), -1j * math.sin(a / 2)], dtype=complex)
    flip = m.angle == 1
    if m.plane is Plane.X:
        return effect(Measurement(Plane.XY, 1 if flip else 0))
    if m.plane is Plane.Y:
        return effect(Measurement(Plane.XY, Fraction(3, 2) if flip else Fraction(1, 2)))
    return np.array([0, 1] if flip else [1, 0], dtype=complex)


def max_vertices() -> int:
    return int(os.environ.get(ENV_MAX_VERTICES, DEFAULT_MAX_VERTICES))


def eval_pattern(
    g: LabelledOpenGraph,
    *,
    frame: Mapping[int, Clifford] | None = None,
    operand_order: Sequence[int] | None = None,
    max_size: int | None = None,
) -> TensorMap:
    """Evaluate ``g`` as a linear map from inputs to outputs.

    Parameters
    ----------
    g
        Pattern to evaluate.
    frame
        Optional single-qubit Cliffords applied to output qubits after the
        pattern, keyed by output vertex.
    operand_order
        A permutation of the tensor-network factors, to vary the contraction.
    max_size
        Vertex bound; defaults to 14 or ``MBQC_ORACLE_MAX_VERTICES``.

    Returns
    -------
    TensorMap
        The ``2^|O| x 2^|I|`` matrix.
    """
    bound = max_vertices() if max_size is None else max_size
    if len(g.vertices) > bound:
        raise OracleSizeError(f"{len(g.vertices)} vertices exceeds the oracle bound {bound}")
    frame = dict(frame or {})
    for v in frame:
        if v not in g.outputs:
            raise SemanticsError(f"frame Clifford on non-output {v}")
    ins = tuple(sorted(g.inputs))
    outs = tuple(sorted(g.outputs))
    # one einsum index per vertex, plus a separate index per input leg
    idx = {v: i for i, v in enumerate(sorted(g.vertices))}
    in_idx = {v: len(idx) + k for k, v in enumerate(ins)}
    out_idx = {v: len(idx) + len(ins) + k for k, v in enumerate(outs)}
    operands: list[tuple[np.ndarray, list[int]]] = []
    for v in ins:
        operands.append((np.eye(2, dtype=complex), [idx[v], in_idx[v]]))
    for v in sorted(g.vertices - g.inputs):
        operands.append((_PLUS, [idx[v]]))
    for u, v in sorted(g.edges):
        operands.append((_CZ, [idx[u], idx[v]]))
    for v, m in sorted(g.labels.items()):
        operands.append((effect(m), [idx[v]]))
    for v in outs:
        u = frame[v].unitary() if v in frame else np.eye(2, dtype=complex)
        operands.append((u, [out_idx[v], idx[v]]))
    if operand_order is not None:
        if sorted(operand_order) != list(range(len(operands))):
            raise SemanticsError("operand_order must permute the factors")
        operands = [operands[i] for i in operand_order]
    args: list = []
    for t, ix in operands:
        args += [t, ix]
    result_ix = [out_idx[v] for v in outs] + [in_idx[v] for v in ins]
    if not operands:
        mat = np.ones((1, 1), dtype=complex)
    else:
        t = np.einsum(*args, result_ix, optimize="greedy")
        mat = np.asarray(t, dtype=complex).reshape(2 ** len(outs), 2 ** len(ins))
    return TensorMap(mat, ins, outs)


def operand_count(g: LabelledOpenGraph) -> int:
    return len(g.inputs) + len(g.vertices - g.inputs) + len(g.edges) + len(g.labels) + len(g.outputs)


def equal_up_to_scalar(m1: TensorMap | np.ndarray, m2: TensorMap | np.ndarray, tol: float = 1e-9) -> bool:
    """Whether ``m1 = z m2`` for some nonzero ``z``, within relative tolerance ``tol``.

    The scalar is read off at the largest-magnitude entry of ``m2``.  Raises
    :class:`ZeroMapError` if either map vanishes.
    """
    a = m1.matrix if isinstance(m1, TensorMap) else np.asarray(m1)
    b = m2.matrix if isinstance(m2, TensorMap) else np.asarray(m2)
    if a.shape != b.shape:
        raise SemanticsError(f"shape mismatch {a.shape} vs {b.shape}")
    na, nb = np.max(np.abs(a), initial=0.0), np.max(np.abs(b), initial=0.0)
    if na < ZERO_TOL or nb < ZERO_TOL:
        raise ZeroMapError("cannot compare a zero map up to scalar")
    k = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    z = a[k] / b[k]
    if abs(z) < ZERO_TOL:
        return False
    return bool(np.max(np.abs(a - z * b)) <= tol * na)


def equivalent(g1: LabelledOpenGraph, g2: LabelledOpenGraph, tol: float = 1e-9, *, frame2: Mapping[int, Clifford] | None = None) -> bool:
    """``eval(g2)`` composed with ``frame2`` equals ``eval(g1)`` up to scalar."""
    return equal_up_to_scalar(eval_pattern(g1), eval_pattern(g2, frame=frame2), tol)
