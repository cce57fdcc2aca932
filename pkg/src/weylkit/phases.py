"""Exact circle arithmetic: elements of Q/Z standing for e^{2*pi*i*q}.

All cocycle and character values in this package are phases.  Keeping them
as reduced rationals mod 1 makes every identity check exact; floats only
appear at the matrix-algebra boundary via :meth:`Phase.to_complex`.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction

from .errors import SchemaError


@dataclass(frozen=True, order=True)
class Phase:
    """A reduced rational q in [0, 1), meaning the circle element e^{2*pi*i*q}.

    Addition is the circle product, negation is complex conjugation.
    """

    q: Fraction

    def __post_init__(self):
        if not (0 <= self.q < 1):
            object.__setattr__(self, "q", self.q % 1)

    @staticmethod
    def of(num: int, den: int = 1) -> "Phase":
        return Phase(Fraction(num, den))

    @staticmethod
    def parse(text: str) -> "Phase":
        """Parse a serialized phase "a/b" (b >= 1) or a bare integer."""
        try:
            if "/" in text:
                a, b = text.split("/")
                num, den = int(a), int(b)
            else:
                num, den = int(text), 1
        except ValueError as exc:
            raise SchemaError(f"bad phase string {text!r}") from exc
        if den < 1:
            raise SchemaError(f"bad phase string {text!r}: denominator must be >= 1")
        return Phase(Fraction(num, den))

    def __add__(self, other: "Phase") -> "Phase":
        return Phase(self.q + other.q)

    def __sub__(self, other: "Phase") -> "Phase":
        return Phase(self.q - other.q)

    def __neg__(self) -> "Phase":
        return Phase(-self.q)

    def times(self, n: int) -> "Phase":
        """n-fold sum of self (the n-th power on the circle)."""
        return Phase(self.q * n)

    @property
    def is_zero(self) -> bool:
        return self.q == 0

    def to_complex(self) -> complex:
        return cmath.exp(2j * cmath.pi * float(self.q))

    def __str__(self) -> str:
        return f"{self.q.numerator}/{self.q.denominator}"

    def __repr__(self) -> str:
        return f"Phase({self})"


ZERO = Phase(Fraction(0))
HALF = Phase(Fraction(1, 2))
