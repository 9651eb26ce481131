"""Exact rotation angles, measured in turns.

An :class:`Angle` is a rational number plus integer (or rational) multiples
of named irrational constants.  Distinct names are taken to be rationally
independent of each other and of 1, so whether a difference of two angles is
rational is decided symbolically, never from floating-point values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Tuple

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Angle:
    rational_part: Fraction = Fraction(0)
    # sorted tuple of (name, coefficient); coefficients are never zero
    surds: Tuple[Tuple[str, Fraction], ...] = ()
    # float value of each named constant
    values: Tuple[Tuple[str, float], ...] = field(default=(), compare=False)

    @classmethod
    def rational(cls, p: int, q: int = 1) -> "Angle":
        if q == 0:
            raise ValueError("denominator must be nonzero")
        return cls(Fraction(p, q))

    @classmethod
    def irrational(cls, name: str, value: float) -> "Angle":
        """An angle equal to the irrational constant ``name`` (numerically ``value``)."""
        if not math.isfinite(value):
            raise ValueError("irrational angle value must be finite")
        return cls(Fraction(0), ((name, Fraction(1)),), ((name, float(value)),))

    @classmethod
    def golden(cls) -> "Angle":
        return cls.irrational("golden", GOLDEN)

    @property
    def is_rational(self) -> bool:
        return not self.surds

    @property
    def p(self) -> int:
        self._need_rational()
        return self.rational_part.numerator

    @property
    def q(self) -> int:
        self._need_rational()
        return self.rational_part.denominator

    def _need_rational(self):
        if not self.is_rational:
            raise ValueError(f"{self} is irrational")

    def _value_map(self) -> Dict[str, float]:
        return dict(self.values)

    def __float__(self) -> float:
        vals = self._value_map()
        return float(self.rational_part) + sum(float(c) * vals[n] for n, c in self.surds)

    def _combine(self, other: "Angle", sign: int) -> "Angle":
        if isinstance(other, (int, Fraction)):
            other = Angle(Fraction(other))
        coefs: Dict[str, Fraction] = dict(self.surds)
        vals = self._value_map()
        for name, value in other.values:
            if name in vals and not math.isclose(vals[name], value, rel_tol=1e-12, abs_tol=1e-15):
                raise ValueError(f"constant {name!r} has two different values")
            vals[name] = value
        for name, c in other.surds:
            coefs[name] = coefs.get(name, Fraction(0)) + sign * c
        surds = tuple(sorted((n, c) for n, c in coefs.items() if c != 0))
        used = {n for n, _ in surds}
        return Angle(
            self.rational_part + sign * other.rational_part,
            surds,
            tuple(sorted((n, v) for n, v in vals.items() if n in used)),
        )

    def __add__(self, other):
        return self._combine(other, +1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return Angle(-self.rational_part, tuple((n, -c) for n, c in self.surds), self.values)

    def __mul__(self, k: int) -> "Angle":
        k = Fraction(k)
        if k == 0:
            return Angle()
        return Angle(self.rational_part * k, tuple((n, c * k) for n, c in self.surds), self.values)

    __rmul__ = __mul__

    def turns_mod1(self, n: int) -> float:
        """Fractional part of ``n * angle`` in turns, exact in the rational part."""
        r = (self.rational_part * n) % 1
        vals = self._value_map()
        irr = sum(math.fmod(float(c) * n * vals[name], 1.0) for name, c in self.surds)
        return math.fmod(float(r) + irr, 1.0)

    def __str__(self):
        parts = []
        if self.rational_part or not self.surds:
            parts.append(str(self.rational_part))
        for name, c in self.surds:
            parts.append(name if c == 1 else f"{c}*{name}")
        return " + ".join(parts)

    def to_dict(self) -> dict:
        return {
            "rational": str(self.rational_part),
            "irrational": {n: str(c) for n, c in self.surds},
            "value": float(self),
        }
