"""Affine systems over GF(2) with rows packed into Python ints."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from itertools import combinations


def popcount(x: int) -> int:
    return bin(x).count("1")


def bits(x: int) -> Iterator[int]:
    i = 0
    while x:
        if x & 1:
            yield i
        x >>= 1
        i += 1


def solve(rows: Sequence[int], rhs: Sequence[int], nvars: int) -> tuple[int, list[int]] | None:
    """Solve ``rows . x = rhs`` for ``x`` in GF(2)^nvars.

    Returns ``(particular, nullspace_basis)`` or ``None`` if inconsistent.
    Bit ``j`` of a row is the coefficient of variable ``j``.
    """
    pivots: list[tuple[int, int, int]] = []  # (pivot column, row, rhs)
    for r, b in zip(rows, rhs):
        for col, prow, pb in pivots:
            if r >> col & 1:
                r ^= prow
                b ^= pb
        if r == 0:
            if b:
                return None
            continue
        col = r.bit_length() - 1
        # keep the reduced form: clear the new pivot column from existing rows
        reduced = []
        for c2, prow, pb in pivots:
            if prow >> col & 1:
                prow ^= r
                pb ^= b
            reduced.append((c2, prow, pb))
        pivots = reduced + [(col, r, b)]
    pivot_cols = {c for c, _, _ in pivots}
    particular = 0
    for col, _, b in pivots:
        if b:
            particular |= 1 << col
    basis = []
    for free in range(nvars):
        if free in pivot_cols:
            continue
        v = 1 << free
        for col, prow, _ in pivots:
            if prow >> free & 1:
                v |= 1 << col
        basis.append(v)
    return particular, basis


def solutions(particular: int, basis: Sequence[int]) -> Iterator[int]:
    """Every element of the affine space ``particular + span(basis)``."""
    for k in range(len(basis) + 1):
        for combo in combinations(basis, k):
            x = particular
            for v in combo:
                x ^= v
            yield x
