"""Quantum momentum function at infinity.

With ``y = 1/x`` the Riccati equation ``q^2 - i q' = 2(E - V)`` becomes
``q~^2 + i y^2 q~' = 2(E - V(1/y))``. Inserting ``q~ = sum_{k>=-3} a_k y^k``
and matching the powers ``y^-6 .. y^-2`` fixes ``a_-3 .. a_1``. Every
coefficient is purely imaginary, so we store ``r_k`` with ``a_k = i r_k``
and the whole computation stays in exact rationals.

``2 pi i a_1`` is the integral of ``q`` around a large circle, i.e. ``2 pi``
times the total number of zeros of the wave function in the complex plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .qes import QesParams, potential_coefficients

ORDERS = (-3, -2, -1, 0, 1)
MATCHED_POWERS = (-6, -5, -4, -3, -2)

__all__ = [
    "InversePotential",
    "LaurentBranch",
    "inverse_potential",
    "match_laurent",
    "matching_residuals",
    "physical_branch",
    "residue_level_count",
    "reflection_budget",
    "residue_report",
]


@dataclass(frozen=True)
class InversePotential:
    """``V(1/y) = c6/y^6 + c4/y^4 + c2/y^2 + c0``."""

    c6: Fraction
    c4: Fraction
    c2: Fraction
    c0: Fraction

    def coefficient(self, power: int) -> Fraction:
        """Coefficient of ``y**power`` in ``V(1/y)``."""
        return {-6: self.c6, -4: self.c4, -2: self.c2, 0: self.c0}.get(power, Fraction(0))


@dataclass(frozen=True)
class LaurentBranch:
    """Imaginary parts ``r_k`` of ``a_k = i r_k`` for ``k = -3..1``."""

    coeffs: Mapping[int, Fraction]
    physical: bool = False

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k]

    def a(self, k: int) -> complex:
        return 1j * float(self.coeffs[k])


def _exact(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("Laurent matching needs rational nu and mu")
    return Fraction(v)


def inverse_potential(p: QesParams) -> InversePotential:
    return InversePotential(*(_exact(c) for c in potential_coefficients(p)))


def _sqrt_rational(q: Fraction) -> Fraction:
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num != q.numerator or den * den != q.denominator:
        raise ArithmeticError(f"{q} is not the square of a rational")
    return Fraction(num, den)


def _equation_lhs(r: Mapping[int, Fraction], power: int) -> Fraction:
    """Coefficient of ``y**power`` in ``q~^2 + i y^2 q~'`` divided by -1.

    ``a_k a_l = -r_k r_l`` and ``i y^2 (a_k y^k)' = -k r_k y^(k+1)``.
    """
    total = Fraction(0)
    for k in ORDERS:
        l = power - k
        if l in r and k in r:
            total += r[k] * r[l]
    k = power - 1
    if k in r:
        total += k * r[k]
    return total


def matching_residuals(p: QesParams, branch: LaurentBranch) -> dict[int, Fraction]:
    """Residual of each matched power; all zero for a genuine solution."""
    inv = inverse_potential(p)
    # q~^2 + i y^2 q~' + 2 V(1/y) = 2E, and E only enters at y^0
    return {
        power: -_equation_lhs(branch.coeffs, power) + 2 * inv.coefficient(power)
        for power in MATCHED_POWERS
    }


def _solve_branch(inv: InversePotential, leading: Fraction) -> dict[int, Fraction]:
    r = {-3: leading}
    for power in MATCHED_POWERS[1:]:
        unknown = power + 3
        # the unknown enters only through 2 r_-3 r_unknown
        known = _equation_lhs(r, power)
        r[unknown] = (2 * inv.coefficient(power) - known) / (2 * leading)
    return r


def match_laurent(p: QesParams) -> tuple[LaurentBranch, LaurentBranch]:
    """Both solutions of the matching system, ``a_-3 = -i nu/2`` first."""
    inv = inverse_potential(p)
    root = _sqrt_rational(2 * inv.c6)
    return (
        LaurentBranch(_solve_branch(inv, -root)),
        LaurentBranch(_solve_branch(inv, root)),
    )


def physical_branch(branches: tuple[LaurentBranch, LaurentBranch]) -> LaurentBranch:
    """The branch with ``psi ~ exp(i a_-3 x^4 / 4)`` decaying at large ``|x|``."""
    chosen = [b for b in branches if b[-3] > 0]
    if len(chosen) != 1:
        raise ValueError("expected exactly one branch with Im(a_-3) > 0")
    return LaurentBranch(dict(chosen[0].coeffs), physical=True)


def residue_level_count(p: QesParams) -> int:
    """``(1/2pi) * oint q dx = i a_1 = -r_1`` for the physical branch."""
    r1 = physical_branch(match_laurent(p))[1]
    count = -r1
    if count.denominator != 1:
        raise ArithmeticError(f"non-integer level count {count}")
    return int(count)


def reflection_budget(p: QesParams, m: int) -> int:
    """Dual-side level paired with the ``m``-th algebraic level of ``p``.

    The large-contour total minus twice the inner contour count ``2m``
    (even) or ``2m + 1`` for the odd potential counted from level 1.
    """
    if m < 0 or 2 * m + p.parity.offset > p.top_level:
        raise ValueError(f"m={m} outside the algebraic sector of {p}")
    return residue_level_count(p) - 2 * m


def residue_report(p: QesParams) -> dict:
    branches = match_laurent(p)
    phys = physical_branch(branches)
    return {
        "params": p.to_json(),
        "branches": [
            {
                "imag_coeffs": {str(k): str(b[k]) for k in ORDERS},
                "physical": b[-3] == phys[-3],
            }
            for b in branches
        ],
        "level_count": residue_level_count(p),
        "top_level": p.top_level,
    }
