"""Analytic angles for rotations z -> alpha z of the unit disk under the Szego kernel."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .angles import Angle


def _check_disk(z, what):
    if not abs(z) < 1.0:
        raise ValueError(f"{what} must lie in the open unit disk, got |{what}| = {abs(z)!r}")


def _check_mod(m, what):
    if not (0.0 < m <= 1.0):
        raise ValueError(f"{what} modulus must be in (0, 1], got {m!r}")


def analytic_A1(alpha_mod: float, beta_mod: float, relative_angle: Angle, z: complex, w: complex) -> float:
    """Limit angle between single orbits from ``z`` under ``alpha`` and from ``w`` under ``beta``.

    ``relative_angle`` is the angle of ``alpha * conj(beta)`` in turns; it is
    only used when both moduli equal 1.
    """
    _check_mod(alpha_mod, "alpha")
    _check_mod(beta_mod, "beta")
    _check_disk(z, "z")
    _check_disk(w, "w")
    az, aw = 1 - abs(z) ** 2, 1 - abs(w) ** 2
    unit_a, unit_b = alpha_mod == 1.0, beta_mod == 1.0
    if unit_a and unit_b:
        if relative_angle.is_rational:
            q = relative_angle.q
            return az * aw / abs(1 - (z * w.conjugate()) ** q) ** 2
        return az * aw
    if unit_a:
        return az
    if unit_b:
        return aw
    return 1.0


INF = math.inf


def mu(a: Angle, b: Angle) -> Union[int, float]:
    """Order of vanishing for two unit-modulus rotations by ``a`` and ``b`` turns.

    Returns ``math.inf`` when the angles differ by an irrational amount.
    """
    if not (a.is_rational and b.is_rational):
        d = a - b
        if not d.is_rational:
            return INF
        return d.rational_part.denominator
    ra, rb = a.rational_part, b.rational_part
    # p = den(a), q = 0 always works, so the search is bounded
    limit = min(ra.denominator, rb.denominator)
    for s in range(1, limit + 1):
        for p in range(s + 1):
            q = s - p
            if (ra * p - rb * q).denominator == 1:
                return s
    return limit


@dataclass(frozen=True)
class Zero:
    """The limit is exactly 0."""

    def to_dict(self):
        return {"kind": "zero", "value": 0.0}


@dataclass(frozen=True)
class LeadingTerm:
    """``value`` plus a remainder of order ``remainder_order`` (= |z conj(w)|^2; constant unknown)."""

    value: float
    remainder_order: float

    def to_dict(self):
        return {"kind": "leading_term", "value": self.value, "remainder_order": self.remainder_order}


@dataclass(frozen=True)
class OrderBound:
    """The limit is O(|z w|^exponent); ``exponent`` may be infinite."""

    exponent: float
    zw: float

    @property
    def scale(self) -> float:
        return 0.0 if math.isinf(self.exponent) else self.zw**self.exponent

    def to_dict(self):
        e = self.exponent
        return {"kind": "order_bound", "exponent": "inf" if math.isinf(e) else e, "scale": self.scale}


def analytic_A2_exact_branches(
    alpha_mod: float,
    alpha_angle: Angle,
    beta_mod: float,
    beta_angle: Angle,
    z: complex,
    w: complex,
) -> Union[Zero, LeadingTerm, OrderBound]:
    """Degree-2 limit angle between orbit pairs ``(z, alpha z)`` and ``(w, beta w)``."""
    _check_mod(alpha_mod, "alpha")
    _check_mod(beta_mod, "beta")
    _check_disk(z, "z")
    _check_disk(w, "w")
    unit_a, unit_b = alpha_mod == 1.0, beta_mod == 1.0
    if unit_a and unit_b:
        return OrderBound(2 * mu(alpha_angle, beta_angle), abs(z * w))
    if unit_a or unit_b:
        return Zero()
    alpha = alpha_mod * complex(math.cos(2 * math.pi * float(alpha_angle)), math.sin(2 * math.pi * float(alpha_angle)))
    beta = beta_mod * complex(math.cos(2 * math.pi * float(beta_angle)), math.sin(2 * math.pi * float(beta_angle)))
    ab = alpha * beta.conjugate()
    a2, b2 = alpha_mod**2, beta_mod**2
    val = (1 - a2) * (1 - b2) / abs(1 - ab) ** 2 * abs(1 + ab) ** 2 / ((1 + a2) * (1 + b2))
    return LeadingTerm(val, abs(z * w.conjugate()) ** 2)
