"""Dimension vectors over the seven SI base dimensions.

Fixed exponent order: length L, mass M, time T, electric current I,
thermodynamic temperature Th, amount of substance N, luminous intensity J.
Two unit expressions are interconvertible exactly when their dimension
vectors are equal.
"""

from __future__ import annotations

from dataclasses import dataclass

BASE_SYMBOLS = ("L", "M", "T", "I", "Th", "N", "J")


@dataclass(frozen=True)
class Dimension:
    """Immutable 7-vector of integer exponents; the all-zero vector is
    dimensionless."""

    exponents: tuple[int, int, int, int, int, int, int] = (0,) * 7

    def __post_init__(self) -> None:
        if len(self.exponents) != 7:
            raise ValueError("dimension requires exactly 7 exponents")
        if not all(isinstance(e, int) for e in self.exponents):
            raise ValueError("dimension exponents must be integers")

    @classmethod
    def dimensionless(cls) -> "Dimension":
        return cls()

    @classmethod
    def base(cls, index: int) -> "Dimension":
        """Unit vector for one base dimension (0=L .. 6=J)."""
        exps = [0] * 7
        exps[index] = 1
        return cls(tuple(exps))

    @property
    def is_dimensionless(self) -> bool:
        return all(e == 0 for e in self.exponents)

    def __add__(self, other: "Dimension") -> "Dimension":
        """Dimension of a product: element-wise sum."""
        return Dimension(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def __sub__(self, other: "Dimension") -> "Dimension":
        """Dimension of a quotient: element-wise difference."""
        return Dimension(tuple(a - b for a, b in zip(self.exponents, other.exponents)))

    def __mul__(self, power: int) -> "Dimension":
        """Dimension of a power: element-wise scalar multiple."""
        return Dimension(tuple(e * power for e in self.exponents))

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.is_dimensionless:
            return "1"
        parts = []
        for sym, exp in zip(BASE_SYMBOLS, self.exponents):
            if exp == 1:
                parts.append(sym)
            elif exp != 0:
                parts.append(f"{sym}^{exp}")
        return "·".join(parts)


DIMENSIONLESS = Dimension.dimensionless()
LENGTH = Dimension.base(0)
MASS = Dimension.base(1)
TIME = Dimension.base(2)
CURRENT = Dimension.base(3)
TEMPERATURE = Dimension.base(4)
AMOUNT = Dimension.base(5)
LUMINOSITY = Dimension.base(6)
