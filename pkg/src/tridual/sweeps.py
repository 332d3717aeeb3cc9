"""Randomised checks of the diagonal-negation identities."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .tridiag import (
    TridiagonalMatrix,
    char_poly,
    determinant,
    eigenvalues,
    negate_diagonal,
)

ENTRY_RANGE = (-9, 9)


def random_tridiagonal(
    rng: random.Random, n: int, symmetrizable: bool = False, zeros: str | None = None
) -> TridiagonalMatrix:
    """Integer entries in [-9, 9].

    ``zeros`` forces degenerate cases: ``"offdiag"`` zeroes one product
    ``b_k c_k``, ``"diag"`` zeroes the whole diagonal.
    """
    lo, hi = ENTRY_RANGE
    diag = [rng.randint(lo, hi) for _ in range(n)]
    sup = [rng.randint(lo, hi) for _ in range(n - 1)]
    if symmetrizable:
        sub = []
        for b in sup:
            mag = rng.randint(1, hi)
            sub.append(0 if b == 0 else (mag if b > 0 else -mag))
    else:
        sub = [rng.randint(lo, hi) for _ in range(n - 1)]
    if zeros == "offdiag" and n > 1:
        k = rng.randrange(n - 1)
        sup[k] = 0
    elif zeros == "diag":
        diag = [0] * n
    return TridiagonalMatrix(tuple(diag), tuple(sup), tuple(sub))


def lemma_holds(m: TridiagonalMatrix) -> bool:
    return determinant(negate_diagonal(m)) == (-1) ** m.n * determinant(m)


def char_poly_reflection_holds(m: TridiagonalMatrix) -> bool:
    return char_poly(negate_diagonal(m)) == char_poly(m).reflected()


def spectrum_negation_residual(m: TridiagonalMatrix, tol: float = 1e-13) -> float:
    """``max_i |lam~_i + lam_{n-1-i}|`` over the sorted spectra."""
    ev = eigenvalues(m, tol=tol).values
    ev_neg = eigenvalues(negate_diagonal(m), tol=tol).values
    n = len(ev)
    return max(abs(ev_neg[i] + ev[n - 1 - i]) for i in range(n))


def _zero_mode(trial: int) -> str | None:
    return {1: "offdiag", 2: "diag"}.get(trial % 5)


@dataclass
class SweepResult:
    exact_total: int = 0
    exact_passed: int = 0
    numeric_total: int = 0
    numeric_passed: int = 0
    max_numeric_residual: float = 0.0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def theorem_sweep(
    trials: int, n_max: int, seed: int, tol: float = 1e-10
) -> SweepResult:
    """Exact identities on ``trials`` general matrices and the numerical
    set negation on as many symmetrizable ones; ``n`` cycles ``1..n_max``."""
    rng = random.Random(seed)
    res = SweepResult()
    for t in range(trials):
        n = 1 + t % n_max
        m = random_tridiagonal(rng, n, zeros=_zero_mode(t))
        ok_det, ok_poly = lemma_holds(m), char_poly_reflection_holds(m)
        res.exact_total += 1
        if ok_det and ok_poly:
            res.exact_passed += 1
        else:
            res.failures.append(
                {"trial": t, "check": "exact", "lemma": ok_det, "char_poly": ok_poly,
                 "matrix": m.to_json()}
            )
    for t in range(trials):
        n = 1 + t % n_max
        m = random_tridiagonal(rng, n, symmetrizable=True, zeros=_zero_mode(t))
        r = spectrum_negation_residual(m)
        res.numeric_total += 1
        res.max_numeric_residual = max(res.max_numeric_residual, r)
        if r <= tol:
            res.numeric_passed += 1
        else:
            res.failures.append(
                {"trial": t, "check": "set_negation", "residual": r, "matrix": m.to_json()}
            )
    return res
