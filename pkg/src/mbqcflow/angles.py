"""Measurement angles as multiples of pi.

An angle is stored as its coefficient of pi, normalised to ``[0, 2)``.  A
:class:`~fractions.Fraction` coefficient is exact, so Pauli and Clifford
cases (multiples of 1/2) are decided without rounding.  A ``float``
coefficient is the escape hatch for irrational angles; arithmetic that mixes
the two falls back to floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Angle = Union[Fraction, float]

#: Equality tolerance (radians) on the floating point path.
FLOAT_TOL = 1e-12

ZERO = Fraction(0)
HALF = Fraction(1, 2)
ONE = Fraction(1)


def normalize(a: Angle | int) -> Angle:
    """Reduce ``a`` (a coefficient of pi) into ``[0, 2)``."""
    if isinstance(a, bool):
        raise TypeError("angle must be a number, not bool")
    if isinstance(a, int):
        a = Fraction(a)
    if isinstance(a, Fraction):
        return a % 2
    r = math.fmod(float(a), 2.0)
    if r < 0:
        r += 2.0
    if r >= 2.0 or 2.0 - r < FLOAT_TOL / math.pi:
        r = 0.0
    return r


def add(a: Angle, b: Angle) -> Angle:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return normalize(a + b)
    return normalize(float(a) + float(b))


def neg(a: Angle) -> Angle:
    return normalize(-a)


def sub(a: Angle, b: Angle) -> Angle:
    return add(a, neg(b))


def to_radians(a: Angle) -> float:
    return float(a) * math.pi


def from_radians(x: float) -> Angle:
    return normalize(x / math.pi)


def is_exact(a: Angle) -> bool:
    return isinstance(a, Fraction)


def equal(a: Angle, b: Angle, tol: float = FLOAT_TOL) -> bool:
    """Compare two angles modulo 2 pi."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return normalize(a) == normalize(b)
    d = to_radians(normalize(float(a) - float(b)))
    return min(d, 2 * math.pi - d) <= tol


def parse(text: str) -> Fraction:
    """Parse ``"num/den"`` or ``"num"`` as an exact multiple of pi."""
    return normalize(Fraction(text.strip()))


def fmt(a: Angle) -> str:
    if isinstance(a, Fraction):
        if a == 0:
            return "0"
        if a.denominator == 1:
            return f"{a.numerator}π"
        return f"{a.numerator}π/{a.denominator}"
    return f"{to_radians(a):.12g}rad"


def fmt_json(a: Angle) -> dict:
    """``{"num", "den"}`` for exact angles, ``{"float"}`` (coefficient of pi) otherwise."""
    a = normalize(a)
    if isinstance(a, Fraction):
        return {"num": a.numerator, "den": a.denominator}
    return {"float": a}


def parse_json(d: dict | str | int | float) -> Angle:
    if isinstance(d, dict):
        if "float" in d:
            return normalize(float(d["float"]))
        return normalize(Fraction(int(d["num"]), int(d["den"])))
    if isinstance(d, str):
        return parse(d)
    return normalize(d)
