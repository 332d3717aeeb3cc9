import random
from fractions import Fraction
from functools import lru_cache

import pytest
import sympy as sp

from tridual.tridiag import TridiagonalMatrix


def cofactor_det(a):
    """Laplace expansion along the first row (exact, n <= 8)."""
    n = len(a)

    @lru_cache(maxsize=None)
    def minor(row, cols):
        if row == n:
            return 1
        total, sign = 0, 1
        for idx, c in enumerate(cols):
            if a[row][c] != 0:
                rest = cols[:idx] + cols[idx + 1:]
                total += sign * a[row][c] * minor(row + 1, rest)
            sign = -sign
        return total

    return minor(0, tuple(range(n)))


def sympy_char_poly(m: TridiagonalMatrix):
    """Coefficients p_0..p_n of det(M - lam I) from a dense symbolic determinant."""
    lam = sp.Symbol("lam")
    dense = sp.Matrix([[sp.Rational(str(v)) if isinstance(v, Fraction) else sp.Integer(v)
                        for v in row] for row in m.to_dense()])
    poly = sp.Poly((dense - lam * sp.eye(m.n)).det(method="berkowitz"), lam)
    coeffs = [Fraction(int(sp.fraction(c)[0]), int(sp.fraction(c)[1]))
              for c in reversed(poly.all_coeffs())]
    return tuple(coeffs + [Fraction(0)] * (m.n + 1 - len(coeffs)))


def random_rational_matrix(rng: random.Random, n: int, den: int = 5) -> TridiagonalMatrix:
    def q():
        return Fraction(rng.randint(-20, 20), rng.randint(1, den))

    return TridiagonalMatrix(
        tuple(q() for _ in range(n)),
        tuple(q() for _ in range(n - 1)),
        tuple(q() for _ in range(n - 1)),
    )


@pytest.fixture
def rng():
    return random.Random(20261016)


# ---- acceptance reporting: one pass/fail line per criterion ----

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    label = str(marker.args[0])
    ok = call.excinfo is None
    prev = _CRITERIA.get(label)
    _CRITERIA[label] = (marker.args[1], ok and (prev is None or prev[1]))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: (int("".join(ch for ch in s if ch.isdigit())), s)):
        text, ok = _CRITERIA[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {label}: {text}")
