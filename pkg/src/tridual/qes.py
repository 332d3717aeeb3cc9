"""Sextic quasi-exactly-solvable potentials and their algebraic blocks.

A potential is fixed by ``nu > 0``, ``mu``, the spin ``j`` (stored as the
integer ``twice_j = 2j``) and a parity. Its lowest ``J = 2j + 1`` levels of
that parity are the eigenvalues of a ``J x J`` tridiagonal block whose
diagonal is proportional to ``mu``; flipping ``mu`` therefore negates the
diagonal and reflects the algebraic spectrum through zero.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import numpy as np

from .tridiag import EigenvalueSet, TridiagonalMatrix, eigenvalues

Number = Union[int, Fraction, float]

__all__ = [
    "Parity",
    "QesParams",
    "AlgebraicSpectrum",
    "GeneratorRep",
    "ReflectionRow",
    "ReflectionReport",
    "potential_coefficients",
    "potential_value",
    "duality_check_potential",
    "generators",
    "build_block",
    "build_from_generators",
    "algebraic_spectrum",
    "check_reflection",
]


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @property
    def offset(self) -> int:
        """Parity of the physical level numbers (0 for even, 1 for odd)."""
        return 0 if self is Parity.EVEN else 1


def _number(v) -> Number:
    if isinstance(v, bool):
        raise TypeError("boolean is not a valid parameter value")
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, Rational):
        return Fraction(v)
    return float(v)


@dataclass(frozen=True)
class QesParams:
    nu: Number
    mu: Number
    twice_j: int
    parity: Parity = Parity.EVEN

    def __post_init__(self):
        object.__setattr__(self, "nu", _number(self.nu))
        object.__setattr__(self, "mu", _number(self.mu))
        object.__setattr__(self, "parity", Parity(self.parity))
        if not isinstance(self.twice_j, (int, np.integer)) or isinstance(self.twice_j, bool):
            raise TypeError("twice_j must be an integer")
        object.__setattr__(self, "twice_j", int(self.twice_j))
        if self.twice_j < 1:
            raise ValueError("twice_j must be >= 1 (j >= 1/2)")
        if not self.nu > 0:
            raise ValueError("nu must be positive")

    @property
    def j(self) -> Fraction:
        return Fraction(self.twice_j, 2)

    @property
    def dim(self) -> int:
        """Block dimension J = 2j + 1."""
        return self.twice_j + 1

    @property
    def top_level(self) -> int:
        """Highest algebraic level: N = 4j (even) or N~ = 4j + 1 (odd)."""
        return 2 * self.twice_j + self.parity.offset

    @property
    def level_indices(self) -> tuple[int, ...]:
        return tuple(range(self.parity.offset, self.top_level + 1, 2))

    @property
    def exact(self) -> bool:
        return isinstance(self.nu, Fraction) and isinstance(self.mu, Fraction)

    def dual(self) -> "QesParams":
        return QesParams(self.nu, -self.mu, self.twice_j, self.parity)

    @classmethod
    def from_json(cls, doc: dict) -> "QesParams":
        """Parse ``{"nu": "...", "mu": "...", "twice_j": int, "parity": ...}``."""
        return cls(
            nu=doc["nu"],
            mu=doc["mu"],
            twice_j=doc["twice_j"],
            parity=Parity(str(doc.get("parity", "even")).lower()),
        )

    def to_json(self) -> dict:
        return {
            "nu": str(self.nu),
            "mu": str(self.mu),
            "twice_j": self.twice_j,
            "parity": self.parity.value,
        }


def potential_coefficients(p: QesParams) -> tuple[Number, Number, Number, Number]:
    """``(c6, c4, c2, c0)`` with ``V(x) = c6 x^6 + c4 x^4 + c2 x^2 + c0``."""
    if p.parity is Parity.EVEN:
        s, t = Fraction(3, 8), Fraction(1, 4)
    else:
        s, t = Fraction(5, 8), Fraction(3, 4)
    nu, mu, j = p.nu, p.mu, p.j
    return (
        nu * nu / 8,
        mu * nu / 4,
        mu * mu / 8 - 2 * nu * (j + s),
        -mu * (j + t),
    )


def potential_value(p: QesParams, x):
    """Evaluate the sextic potential; ``x`` may be real, complex or an array."""
    c6, c4, c2, c0 = potential_coefficients(p)
    if isinstance(x, np.ndarray):
        c6, c4, c2, c0 = (float(c) for c in (c6, c4, c2, c0))
    elif not isinstance(x, Rational):
        c6, c4, c2, c0 = (float(c) for c in (c6, c4, c2, c0))
    x2 = x * x
    return c6 * x2 * x2 * x2 + c4 * x2 * x2 + c2 * x2 + c0


def duality_check_potential(p: QesParams, x: complex) -> float:
    """``|V_mu(x) + V_{-mu}(i x)|``; zero for every complex ``x``."""
    x = complex(x)
    return abs(potential_value(p, x) + potential_value(p.dual(), 1j * x))


@dataclass(frozen=True)
class GeneratorRep:
    """sl(2) generators acting on polynomials ``xi^0 .. xi^(2j)``.

    Column ``k`` of each matrix holds the image of ``xi^k``.
    """

    twice_j: int
    t_plus: np.ndarray
    t_zero: np.ndarray
    t_minus: np.ndarray

    def commutators(self) -> dict[str, np.ndarray]:
        """Defects of the three commutation relations; all zero."""
        tp, t0, tm = self.t_plus, self.t_zero, self.t_minus
        return {
            "[T+,T-]-2T0": tp @ tm - tm @ tp - 2 * t0,
            "[T+,T0]+T+": tp @ t0 - t0 @ tp + tp,
            "[T-,T0]-T-": tm @ t0 - t0 @ tm - tm,
        }


def generators(twice_j: int) -> GeneratorRep:
    dim = twice_j + 1
    j = Fraction(twice_j, 2)
    tp = np.full((dim, dim), Fraction(0), dtype=object)
    t0 = np.full((dim, dim), Fraction(0), dtype=object)
    tm = np.full((dim, dim), Fraction(0), dtype=object)
    for k in range(dim):
        t0[k, k] = k - j
        if k > 0:
            tm[k - 1, k] = Fraction(k)
        if k < dim - 1:
            tp[k + 1, k] = Fraction(twice_j - k)
    return GeneratorRep(twice_j, tp, t0, tm)


def build_block(p: QesParams) -> TridiagonalMatrix:
    """The ``J x J`` algebraic Hamiltonian block, entries given in closed form."""
    j, nu, mu = p.j, p.nu, p.mu
    dim = p.dim
    shift = -1 if p.parity is Parity.EVEN else 1
    diag = [mu * (k - j - 1) for k in range(1, dim + 1)]
    sup = [-k * (2 * k + shift) for k in range(1, dim)]
    # H_{k,k-1} for k = 2..J
    sub = [(k - 2) * nu - 2 * j * nu for k in range(2, dim + 1)]
    return TridiagonalMatrix(tuple(diag), tuple(sup), tuple(sub))


def build_from_generators(p: QesParams) -> TridiagonalMatrix:
    """The same block assembled from the generator form of the Hamiltonian."""
    g = generators(p.twice_j)
    tp, t0, tm = g.t_plus, g.t_zero, g.t_minus
    h = -2 * (t0 @ tm) - (p.twice_j + 1) * tm - p.nu * tp + p.mu * t0
    if p.parity is Parity.ODD:
        h = h - 2 * tm
    return TridiagonalMatrix.from_dense(h.tolist())


@dataclass(frozen=True)
class AlgebraicSpectrum:
    params: QesParams
    energies: tuple
    level_indices: tuple

    def energy(self, level: int) -> float:
        return self.energies[self.level_indices.index(level)]

    def rows(self) -> list[tuple[int, float]]:
        return list(zip(self.level_indices, self.energies))


def algebraic_spectrum(p: QesParams, tol: float = 1e-12) -> AlgebraicSpectrum:
    ev: EigenvalueSet = eigenvalues(build_block(p), tol=tol)
    return AlgebraicSpectrum(p, ev.values, p.level_indices)


@dataclass(frozen=True)
class ReflectionRow:
    level: int
    energy: float
    dual_level: int
    dual_energy: float
    residual: float


@dataclass(frozen=True)
class ReflectionReport:
    params: QesParams
    rows: tuple
    tol: float

    @property
    def max_residual(self) -> float:
        return max(r.residual for r in self.rows)

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def check_reflection(p: QesParams, tol: float = 1e-10) -> ReflectionReport:
    """Compare ``E_{mu,n}`` with ``-E_{-mu,n'}`` under the level map
    ``n' = N - n`` (even) or ``n' = N~ + 1 - n`` (odd)."""
    own = algebraic_spectrum(p, tol=1e-13)
    dual = algebraic_spectrum(p.dual(), tol=1e-13)
    # N - n for even; N~ + 1 - n for odd, both equal 4j + 2*offset - n
    total = p.top_level + p.parity.offset
    rows = []
    for level, energy in own.rows():
        dual_level = total - level
        dual_energy = dual.energy(dual_level)
        rows.append(
            ReflectionRow(level, energy, dual_level, dual_energy, abs(energy + dual_energy))
        )
    return ReflectionReport(p, tuple(rows), tol)
