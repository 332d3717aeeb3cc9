"""General tridiagonal matrices: exact determinants, characteristic
polynomials, diagonal negation, symmetrization and eigenvalues.

Entries are either exact (``int`` / ``fractions.Fraction``) or ``float``;
the kind is uniform per matrix. Identities about determinants and
characteristic polynomials are evaluated in exact arithmetic whenever the
entries allow it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

import numpy as np

from . import _kernels

Scalar = Union[int, Fraction, float]

__all__ = [
    "ConvergenceError",
    "TridiagonalMatrix",
    "CharacteristicPolynomial",
    "EigenvalueSet",
    "determinant",
    "char_poly",
    "negate_diagonal",
    "is_symmetrizable",
    "symmetrize",
    "eigenvalues_symmetric",
    "eigenvalues",
]


class ConvergenceError(RuntimeError):
    """An iterative eigensolver failed to reach the requested tolerance."""


def _coerce(values: Iterable, exact: bool) -> tuple:
    out = []
    for v in values:
        if exact:
            if not _is_exact_value(v):
                raise TypeError(f"exact matrix entries must be rational, got {v!r}")
            v = Fraction(v)
            out.append(int(v) if v.denominator == 1 else v)
        else:
            v = float(v)
            if not math.isfinite(v):
                raise ValueError("matrix entries must be finite")
            out.append(v)
    return tuple(out)


def _is_exact_value(v) -> bool:
    return isinstance(v, Rational) and not isinstance(v, bool)


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Tridiagonal matrix with diagonal ``a``, super-diagonal ``b`` and
    sub-diagonal ``c``.

    Row ``k`` holds ``c[k-1], a[k], b[k]``. Inputs containing any float are
    stored entirely as floats, otherwise as ints/Fractions.
    """

    diag: tuple
    sup: tuple
    sub: tuple

    def __post_init__(self):
        diag, sup, sub = tuple(self.diag), tuple(self.sup), tuple(self.sub)
        n = len(diag)
        if n < 1:
            raise ValueError("matrix dimension must be at least 1")
        if len(sup) != n - 1 or len(sub) != n - 1:
            raise ValueError(
                f"off-diagonals must have length {n - 1}, got {len(sup)} and {len(sub)}"
            )
        exact = all(_is_exact_value(v) for v in diag + sup + sub)
        object.__setattr__(self, "diag", _coerce(diag, exact))
        object.__setattr__(self, "sup", _coerce(sup, exact))
        object.__setattr__(self, "sub", _coerce(sub, exact))

    @property
    def n(self) -> int:
        return len(self.diag)

    @property
    def exact(self) -> bool:
        return not self.diag or not isinstance(self.diag[0], float)

    @property
    def is_symmetric(self) -> bool:
        return self.sup == self.sub

    @classmethod
    def symmetric(cls, diag: Sequence, off: Sequence) -> "TridiagonalMatrix":
        return cls(tuple(diag), tuple(off), tuple(off))

    @classmethod
    def from_dense(cls, a) -> "TridiagonalMatrix":
        a = [list(row) for row in a]
        n = len(a)
        for i in range(n):
            for k in range(n):
                if abs(i - k) > 1 and a[i][k] != 0:
                    raise ValueError("matrix is not tridiagonal")
        return cls(
            tuple(a[i][i] for i in range(n)),
            tuple(a[i][i + 1] for i in range(n - 1)),
            tuple(a[i + 1][i] for i in range(n - 1)),
        )

    def to_dense(self) -> list[list]:
        zero = 0 if self.exact else 0.0
        a = [[zero] * self.n for _ in range(self.n)]
        for i, v in enumerate(self.diag):
            a[i][i] = v
        for i, (b, c) in enumerate(zip(self.sup, self.sub)):
            a[i][i + 1] = b
            a[i + 1][i] = c
        return a

    def as_float(self) -> "TridiagonalMatrix":
        return TridiagonalMatrix(
            tuple(float(v) for v in self.diag),
            tuple(float(v) for v in self.sup),
            tuple(float(v) for v in self.sub),
        )

    @classmethod
    def from_json(cls, doc: dict, exact: bool = True) -> "TridiagonalMatrix":
        """Build from ``{"diag": [...], "sup": [...], "sub": [...]}``.

        Entries are decimal strings (or numbers). With ``exact`` they are
        parsed as Fractions, so ``"0.1"`` is exactly 1/10.
        """
        def parse(v):
            if exact:
                if isinstance(v, float):
                    v = repr(v)
                return Fraction(v)
            return float(v)

        try:
            fields = [doc[key] for key in ("diag", "sup", "sub")]
        except KeyError as exc:
            raise ValueError(f"matrix document is missing {exc.args[0]!r}") from None
        return cls(*(tuple(parse(v) for v in f) for f in fields))

    def to_json(self) -> dict:
        return {
            "diag": [str(v) for v in self.diag],
            "sup": [str(v) for v in self.sup],
            "sub": [str(v) for v in self.sub],
        }


@dataclass(frozen=True)
class CharacteristicPolynomial:
    """``P(lam) = det(M - lam*I) = sum(coeffs[k] * lam**k)``."""

    coeffs: tuple

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, lam):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * lam + c
        return acc

    def reflected(self) -> "CharacteristicPolynomial":
        """Coefficients of ``(-1)**n * P(-lam)``."""
        n = self.degree
        return CharacteristicPolynomial(
            tuple(c if (n + k) % 2 == 0 else -c for k, c in enumerate(self.coeffs))
        )


@dataclass(frozen=True)
class EigenvalueSet:
    """Eigenvalues sorted ascending, repeated according to multiplicity."""

    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted(float(v) for v in self.values)))

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i):
        return self.values[i]

    def negated(self) -> "EigenvalueSet":
        return EigenvalueSet(tuple(-v for v in self.values))

    def as_array(self) -> np.ndarray:
        return np.array(self.values)


def determinant(m: TridiagonalMatrix) -> Scalar:
    """Determinant by the three-term continuant recurrence."""
    d_prev, d = 1, m.diag[0]
    for k in range(1, m.n):
        d_prev, d = d, m.diag[k] * d - m.sup[k - 1] * m.sub[k - 1] * d_prev
    return d


def _poly_sub(p: list, q: list) -> list:
    out = list(p) + [0] * (len(q) - len(p))
    for i, v in enumerate(q):
        out[i] -= v
    return out


def char_poly(m: TridiagonalMatrix) -> CharacteristicPolynomial:
    """Exact coefficients of ``det(M - lam*I)`` in the monomial basis."""
    if not m.exact:
        raise ValueError("char_poly requires exact (rational) entries")
    p_prev = [1]
    p = [m.diag[0], -1]
    for k in range(1, m.n):
        a = m.diag[k]
        bc = m.sup[k - 1] * m.sub[k - 1]
        # (a - lam) * p
        nxt = [a * c for c in p] + [0]
        for i, c in enumerate(p):
            nxt[i + 1] -= c
        if bc:
            nxt = _poly_sub(nxt, [bc * c for c in p_prev])
        p_prev, p = p, nxt
    return CharacteristicPolynomial(tuple(Fraction(c) for c in p))


def negate_diagonal(m: TridiagonalMatrix) -> TridiagonalMatrix:
    return TridiagonalMatrix(tuple(-v for v in m.diag), m.sup, m.sub)


def is_symmetrizable(m: TridiagonalMatrix) -> bool:
    """True when every product ``b_k * c_k`` is non-negative.

    Strictly positive products give a positive diagonal similarity to a
    symmetric matrix; a zero product splits the matrix into blocks whose
    spectra are still real, so it is accepted too.
    """
    return all(b * c >= 0 for b, c in zip(m.sup, m.sub))


def _exact_sqrt(q: Fraction):
    q = Fraction(q)
    if q < 0:
        return None
    num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        r = Fraction(num, den)
        return int(r) if r.denominator == 1 else r
    return None


def symmetrize(m: TridiagonalMatrix) -> TridiagonalMatrix:
    """Symmetric matrix with off-diagonals ``sqrt(b_k * c_k)``.

    Exact input stays exact when every product is a perfect rational square;
    otherwise the result is floating point.
    """
    if not is_symmetrizable(m):
        bad = [k for k, (b, c) in enumerate(zip(m.sup, m.sub)) if b * c < 0]
        raise ValueError(
            f"matrix is not symmetrizable: b_k*c_k < 0 at off-diagonal index {bad}"
        )
    products = [b * c for b, c in zip(m.sup, m.sub)]
    if m.exact:
        roots = [_exact_sqrt(p) for p in products]
        if all(r is not None for r in roots):
            return TridiagonalMatrix.symmetric(m.diag, roots)
    off = [math.sqrt(float(p)) for p in products]
    return TridiagonalMatrix.symmetric([float(v) for v in m.diag], off)


def eigenvalues_symmetric(
    m: TridiagonalMatrix,
    tol: float = 1e-12,
    method: str = "bisection",
    indices: tuple[int, int] | None = None,
) -> EigenvalueSet:
    """Eigenvalues of a real symmetric tridiagonal matrix.

    ``method`` is ``"bisection"`` (Sturm sign counts, default) or ``"ql"``
    (implicit QL with Wilkinson shifts). ``indices=(lo, hi)`` restricts the
    output to the eigenvalues with ascending indices ``lo <= k < hi``.
    ``tol`` is an absolute accuracy target for bisection.
    """
    if not m.is_symmetric:
        raise ValueError("eigenvalues_symmetric requires sup == sub")
    if tol <= 0:
        raise ValueError("tol must be positive")
    n = m.n
    lo, hi = (0, n) if indices is None else indices
    if not 0 <= lo <= hi <= n:
        raise ValueError(f"index range {indices} out of bounds for n={n}")
    d = np.array(m.diag, dtype=float)
    e = np.array(m.sup, dtype=float)
    if method == "bisection":
        vals, status = _kernels.bisect_range(d, e, lo, hi, float(tol), 400)
        if status == _kernels.STALLED:
            raise ConvergenceError(
                f"bisection stalled: tol={tol:g} is below the floating-point "
                "resolution of the spectrum"
            )
        if status != _kernels.OK:
            raise ConvergenceError("bisection did not converge within 400 iterations")
    elif method == "ql":
        vals, status = _kernels.ql_implicit(d, e, 60)
        if status != _kernels.OK:
            raise ConvergenceError("implicit QL did not converge within 60 sweeps")
        vals = np.sort(vals)[lo:hi]
    else:
        raise ValueError(f"unknown method {method!r}")
    return EigenvalueSet(tuple(vals))


def eigenvalues(
    m: TridiagonalMatrix, tol: float = 1e-12, method: str = "bisection"
) -> EigenvalueSet:
    """Real spectrum of a symmetrizable (generally non-symmetric) matrix."""
    return eigenvalues_symmetric(symmetrize(m).as_float(), tol=tol, method=method)
