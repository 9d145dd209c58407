"""Single-qubit Clifford unitaries, modulo global phase.

A Clifford is stored as the signed permutation of Bloch-sphere axes it
induces by conjugation.  This is enough to push Cliffords through
measurement labels exactly; :meth:`Clifford.unitary` recovers a 2x2 matrix
for the tensor oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

X_AXIS, Y_AXIS, Z_AXIS = 0, 1, 2
AXIS_NAMES = "xyz"

# SignedAxis: (axis index, +1 | -1)
SignedAxis = tuple[int, int]


@dataclass(frozen=True)
class Clifford:
    """Bloch rotation by a single-qubit Clifford.

    ``images[i]`` is the signed axis that axis ``i`` is mapped to.
    """

    images: tuple[SignedAxis, SignedAxis, SignedAxis] = ((0, 1), (1, 1), (2, 1))

    def __post_init__(self) -> None:
        axes = sorted(a for a, _ in self.images)
        if axes != [0, 1, 2] or any(s not in (1, -1) for _, s in self.images):
            raise ValueError(f"not a signed permutation: {self.images}")
        if round(np.linalg.det(self.matrix())) != 1:
            raise ValueError(f"not a proper rotation: {self.images}")

    @classmethod
    def identity(cls) -> Clifford:
        return cls()

    @classmethod
    def rx(cls, quarter_turns: int = 1) -> Clifford:
        """Rotation by ``quarter_turns * pi/2`` about X, i.e. the spider X_{k pi/2}."""
        return _power(cls(((0, 1), (2, 1), (1, -1))), quarter_turns)

    @classmethod
    def ry(cls, quarter_turns: int = 1) -> Clifford:
        return _power(cls(((2, -1), (1, 1), (0, 1))), quarter_turns)

    @classmethod
    def rz(cls, quarter_turns: int = 1) -> Clifford:
        """Rotation by ``quarter_turns * pi/2`` about Z, i.e. the spider Z_{k pi/2}."""
        return _power(cls(((1, 1), (0, -1), (2, 1))), quarter_turns)

    @classmethod
    def hadamard(cls) -> Clifford:
        return cls(((2, 1), (1, -1), (0, 1)))

    def apply(self, axis: int, sign: int = 1) -> SignedAxis:
        a, s = self.images[axis]
        return a, s * sign

    def then(self, other: Clifford) -> Clifford:
        """The Clifford that applies ``self`` first and ``other`` second."""
        return Clifford(tuple(other.apply(a, s) for a, s in self.images))  # type: ignore[arg-type]

    def inverse(self) -> Clifford:
        inv: list[SignedAxis] = [(0, 1)] * 3
        for i, (a, s) in enumerate(self.images):
            inv[a] = (i, s)
        return Clifford(tuple(inv))  # type: ignore[arg-type]

    @property
    def is_identity(self) -> bool:
        return self.images == ((0, 1), (1, 1), (2, 1))

    @property
    def is_diagonal(self) -> bool:
        """True iff the Clifford commutes with Z (a Z-phase up to global phase)."""
        return self.images[Z_AXIS] == (Z_AXIS, 1)

    def matrix(self) -> np.ndarray:
        m = np.zeros((3, 3), dtype=int)
        for i, (a, s) in enumerate(self.images):
            m[a, i] = s
        return m

    def unitary(self) -> np.ndarray:
        return _unitaries()[self.images].copy()

    def __repr__(self) -> str:
        body = ", ".join(
            f"{AXIS_NAMES[i]}->{'-' if s < 0 else '+'}{AXIS_NAMES[a]}" for i, (a, s) in enumerate(self.images)
        )
        return f"Clifford({body})"


def _power(c: Clifford, k: int) -> Clifford:
    out = Clifford()
    for _ in range(k % 4):
        out = out.then(c)
    return out


def _rotation_unitary(axis: int, theta: float) -> np.ndarray:
    pauli = [
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ][axis]
    return np.cos(theta / 2) * np.eye(2) - 1j * np.sin(theta / 2) * pauli


@lru_cache(maxsize=1)
def _unitaries() -> dict[tuple[SignedAxis, ...], np.ndarray]:
    # Breadth-first closure of <Rx(pi/2), Rz(pi/2)>: all 24 single-qubit Cliffords.
    gens = [(Clifford.rx(1), _rotation_unitary(X_AXIS, np.pi / 2)), (Clifford.rz(1), _rotation_unitary(Z_AXIS, np.pi / 2))]
    table = {Clifford().images: np.eye(2, dtype=complex)}
    frontier = [(Clifford(), np.eye(2, dtype=complex))]
    while frontier:
        nxt = []
        for c, u in frontier:
            for g, gu in gens:
                c2 = c.then(g)
                if c2.images not in table:
                    u2 = gu @ u
                    table[c2.images] = u2
                    nxt.append((c2, u2))
        frontier = nxt
    assert len(table) == 24
    return table
