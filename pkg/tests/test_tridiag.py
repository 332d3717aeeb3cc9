import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh_tridiagonal

from conftest import cofactor_det, random_rational_matrix, sympy_char_poly
from tridual.tridiag import (
    ConvergenceError,
    EigenvalueSet,
    TridiagonalMatrix,
    char_poly,
    determinant,
    eigenvalues,
    eigenvalues_symmetric,
    is_symmetrizable,
    negate_diagonal,
    symmetrize,
)
from tridual.sweeps import random_tridiagonal

small_ints = st.integers(-9, 9)


@st.composite
def int_tridiagonals(draw, n_min=1, n_max=12):
    n = draw(st.integers(n_min, n_max))
    return TridiagonalMatrix(
        tuple(draw(st.lists(small_ints, min_size=n, max_size=n))),
        tuple(draw(st.lists(small_ints, min_size=n - 1, max_size=n - 1))),
        tuple(draw(st.lists(small_ints, min_size=n - 1, max_size=n - 1))),
    )


@st.composite
def symmetrizable_floats(draw, n_max=30):
    n = draw(st.integers(1, n_max))
    elems = st.floats(-10, 10, allow_nan=False)
    diag = draw(st.lists(elems, min_size=n, max_size=n))
    sup = draw(st.lists(st.floats(0.05, 10), min_size=n - 1, max_size=n - 1))
    ratio = draw(st.lists(st.floats(0.1, 10), min_size=n - 1, max_size=n - 1))
    signs = draw(st.lists(st.sampled_from([-1.0, 1.0]), min_size=n - 1, max_size=n - 1))
    return TridiagonalMatrix(
        tuple(diag),
        tuple(s * b for s, b in zip(signs, sup)),
        tuple(s * b * r for s, b, r in zip(signs, sup, ratio)),
    )


class TestConstruction:
    def test_shape_validation(self):
        with pytest.raises(ValueError):
            TridiagonalMatrix((), (), ())
        with pytest.raises(ValueError):
            TridiagonalMatrix((1, 2), (1, 2), (1,))

    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            TridiagonalMatrix((1.0, math.inf), (1.0,), (1.0,))

    def test_mixed_kinds_become_float(self):
        m = TridiagonalMatrix((1, 0.5), (Fraction(1, 3),), (2,))
        assert not m.exact
        assert all(isinstance(v, float) for v in m.diag + m.sup + m.sub)

    def test_exact_kind_preserved(self):
        m = TridiagonalMatrix((1, Fraction(1, 2)), (3,), (Fraction(4, 2),))
        assert m.exact
        assert m.sub == (2,)

    def test_dense_round_trip(self, rng):
        m = random_rational_matrix(rng, 5)
        assert TridiagonalMatrix.from_dense(m.to_dense()) == m

    def test_from_dense_rejects_full(self):
        with pytest.raises(ValueError):
            TridiagonalMatrix.from_dense([[1, 0, 2], [0, 1, 0], [0, 0, 1]])

    def test_json_exact_decimal(self):
        m = TridiagonalMatrix.from_json({"diag": ["0.1", "-2"], "sup": ["1.5"], "sub": ["3"]})
        assert m.diag == (Fraction(1, 10), -2)
        assert m.sup == (Fraction(3, 2),)
        assert TridiagonalMatrix.from_json(m.to_json()) == m

    def test_json_float_mode(self):
        m = TridiagonalMatrix.from_json({"diag": ["0.1"], "sup": [], "sub": []}, exact=False)
        assert m.diag == (0.1,)

    def test_json_missing_key(self):
        with pytest.raises(ValueError, match="sub"):
            TridiagonalMatrix.from_json({"diag": ["1"], "sup": []})


class TestDeterminant:
    def test_one_by_one(self):
        assert determinant(TridiagonalMatrix((-5,), (), ())) == -5

    def test_two_by_two_negated(self):
        a1, a2, b1, c1 = 3, -7, 2, 5
        m = TridiagonalMatrix((-a1, -a2), (b1,), (c1,))
        assert determinant(m) == a1 * a2 - b1 * c1
        assert determinant(m) == determinant(TridiagonalMatrix((a1, a2), (b1,), (c1,)))

    @pytest.mark.parametrize("n", range(1, 9))
    def test_matches_cofactor_oracle(self, rng, n):
        for _ in range(5):
            m = random_tridiagonal(rng, n)
            assert determinant(m) == cofactor_det(m.to_dense())

    def test_six_by_six_rational(self, rng):
        m = random_rational_matrix(rng, 6)
        assert determinant(m) == cofactor_det(m.to_dense())

    @settings(max_examples=200, deadline=None)
    @given(int_tridiagonals())
    def test_negation_lemma(self, m):
        assert determinant(negate_diagonal(m)) == (-1) ** m.n * determinant(m)

    def test_negation_lemma_rational(self, rng):
        for n in range(1, 13):
            m = random_rational_matrix(rng, n)
            assert determinant(negate_diagonal(m)) == (-1) ** n * determinant(m)


class TestCharPoly:
    def test_degree_one(self):
        assert char_poly(TridiagonalMatrix((3,), (), ())).coeffs == (3, -1)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 6, 8])
    def test_matches_symbolic_oracle(self, rng, n):
        m = random_rational_matrix(rng, n)
        assert char_poly(m).coeffs == sympy_char_poly(m)

    def test_leading_coefficient(self, rng):
        for n in range(1, 10):
            p = char_poly(random_tridiagonal(rng, n))
            assert p.degree == n
            assert p.coeffs[-1] == (-1) ** n

    def test_value_at_zero_is_determinant(self, rng):
        for n in range(1, 10):
            m = random_rational_matrix(rng, n)
            assert char_poly(m)(0) == determinant(m)

    def test_value_at_point_matches_shifted_determinant(self, rng):
        m = random_rational_matrix(rng, 7)
        lam = Fraction(-3, 7)
        shifted = TridiagonalMatrix(tuple(a - lam for a in m.diag), m.sup, m.sub)
        assert char_poly(m)(lam) == determinant(shifted)

    def test_float_rejected(self):
        with pytest.raises(ValueError):
            char_poly(TridiagonalMatrix((1.0,), (), ()))

    @settings(max_examples=300, deadline=None)
    @given(int_tridiagonals())
    def test_reflection_identity(self, m):
        p, q = char_poly(m), char_poly(negate_diagonal(m))
        n = m.n
        assert all(q.coeffs[k] == (-1) ** (n + k) * p.coeffs[k] for k in range(n + 1))

    def test_reflection_with_zero_blocks(self):
        m = TridiagonalMatrix((0, 0, 0, 0), (1, 0, 2), (3, 5, 0))
        assert char_poly(negate_diagonal(m)) == char_poly(m).reflected()


class TestNegateDiagonal:
    def test_definition(self):
        m = TridiagonalMatrix((1, 2), (5,), (7,))
        assert negate_diagonal(m) == TridiagonalMatrix((-1, -2), (5,), (7,))

    def test_involution(self, rng):
        m = random_rational_matrix(rng, 6)
        assert negate_diagonal(negate_diagonal(m)) == m


class TestSymmetrize:
    def test_qes_block_symmetrizable(self):
        # even block for j = 1/2, nu = 2, mu = 1
        m = TridiagonalMatrix((Fraction(-1, 2), Fraction(1, 2)), (-1,), (-2,))
        assert is_symmetrizable(m)

    def test_negative_product(self):
        assert not is_symmetrizable(TridiagonalMatrix((0, 0), (1,), (-1,)))

    def test_diagonal(self):
        assert is_symmetrizable(TridiagonalMatrix((4,), (), ()))

    def test_perfect_square(self):
        m = TridiagonalMatrix((0, 0), (-1,), (-4,))
        s = symmetrize(m)
        assert s.exact and s.diag == (0, 0) and s.sup == s.sub == (2,)

    def test_symmetric_fixed_point(self):
        m = TridiagonalMatrix((1, 2, 3), (-2, 3), (-2, 3))
        s = symmetrize(m)
        assert s.diag == m.diag
        assert s.sup == s.sub == (2, 3)

    def test_rejects_non_symmetrizable(self):
        with pytest.raises(ValueError, match="not symmetrizable"):
            symmetrize(TridiagonalMatrix((0, 0), (1,), (-1,)))

    def test_char_poly_preserved(self, rng):
        for _ in range(50):
            n = rng.randint(1, 10)
            sup, sub = [], []
            for _ in range(n - 1):
                r = Fraction(rng.randint(1, 6), rng.randint(1, 4))
                s = rng.choice([-1, 1])
                k = Fraction(rng.randint(1, 5), rng.randint(1, 3))
                sup.append(s * r * k)
                sub.append(s * r / k)
            m = TridiagonalMatrix(tuple(Fraction(rng.randint(-9, 9)) for _ in range(n)),
                                  tuple(sup), tuple(sub))
            s = symmetrize(m)
            assert s.exact
            assert char_poly(s) == char_poly(m)

    def test_zero_product_becomes_zero_offdiag(self):
        s = symmetrize(TridiagonalMatrix((1, 2), (3,), (0,)))
        assert s.sup == (0,)


class TestEigenvaluesSymmetric:
    @pytest.mark.parametrize("method", ["bisection", "ql"])
    def test_toeplitz_closed_form(self, method):
        n = 4
        m = TridiagonalMatrix.symmetric([0.0] * n, [1.0] * (n - 1))
        expected = sorted(2 * math.cos(k * math.pi / (n + 1)) for k in range(1, n + 1))
        got = eigenvalues_symmetric(m, tol=1e-13, method=method)
        assert np.allclose(got.values, expected, atol=1e-12, rtol=0)

    @pytest.mark.parametrize("n", [1, 7, 60])
    def test_toeplitz_larger(self, n):
        m = TridiagonalMatrix.symmetric([0.0] * n, [1.0] * (n - 1))
        expected = sorted(2 * math.cos(k * math.pi / (n + 1)) for k in range(1, n + 1))
        assert np.allclose(eigenvalues_symmetric(m, tol=1e-13).values, expected, atol=1e-12)

    @pytest.mark.parametrize("method", ["bisection", "ql"])
    def test_diagonal(self, method):
        m = TridiagonalMatrix.symmetric([3.0, -1.0, 2.0, -1.0], [0.0, 0.0, 0.0])
        assert eigenvalues_symmetric(m, method=method).values == pytest.approx([-1, -1, 2, 3], abs=1e-12)

    def test_symmetrized_qes_block(self):
        m = symmetrize(TridiagonalMatrix((0, 0), (-1,), (-4,))).as_float()
        assert eigenvalues_symmetric(m).values == pytest.approx([-2, 2], abs=1e-12)

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError):
            eigenvalues_symmetric(TridiagonalMatrix((0.0, 0.0), (1.0,), (2.0,)))

    def test_index_selection(self, rng):
        m = TridiagonalMatrix.symmetric([float(i) for i in range(10)], [0.5] * 9)
        full = eigenvalues_symmetric(m).values
        # each run is within tol of exact, so they agree to 2*tol
        assert eigenvalues_symmetric(m, indices=(3, 6)).values == pytest.approx(full[3:6], abs=2e-12)
        assert eigenvalues_symmetric(m, method="ql", indices=(3, 6)).values == pytest.approx(full[3:6], abs=1e-12)

    def test_tolerance_below_resolution_reported(self):
        m = TridiagonalMatrix.symmetric([1e6, 2e6], [1.0])
        with pytest.raises(ConvergenceError):
            eigenvalues_symmetric(m, tol=1e-14)

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            eigenvalues_symmetric(TridiagonalMatrix((1.0,), (), ()), method="qr")

    @settings(max_examples=150, deadline=None)
    @given(symmetrizable_floats())
    def test_bisection_and_ql_agree(self, m):
        s = symmetrize(m)
        tol = 1e-11
        a = eigenvalues_symmetric(s, tol=tol).as_array()
        b = eigenvalues_symmetric(s, tol=tol, method="ql").as_array()
        assert np.max(np.abs(a - b)) <= 10 * tol

    def test_against_lapack(self, rng):
        for _ in range(20):
            n = rng.randint(1, 80)
            d = [rng.uniform(-5, 5) for _ in range(n)]
            e = [rng.uniform(-3, 3) for _ in range(n - 1)]
            ref = eigh_tridiagonal(np.array(d), np.array(e), eigvals_only=True)
            got = eigenvalues_symmetric(TridiagonalMatrix.symmetric(d, e), tol=1e-12)
            assert np.allclose(got.values, ref, atol=1e-11, rtol=0)

    def test_repeated_eigenvalues_keep_multiplicity(self):
        m = TridiagonalMatrix.symmetric([1.0, 1.0, 5.0, 1.0], [0.0, 0.0, 0.0])
        assert eigenvalues_symmetric(m).values == pytest.approx([1, 1, 1, 5], abs=1e-12)


class TestEigenvalues:
    def test_qes_block_closed_form(self):
        m = TridiagonalMatrix((-1, 1), (-1,), (-4,))  # mu = 2, nu = 4
        assert eigenvalues(m).values == pytest.approx([-math.sqrt(5), math.sqrt(5)], abs=1e-12)

    def test_one_by_one(self):
        assert eigenvalues(TridiagonalMatrix((Fraction(7, 3),), (), ())).values == pytest.approx([7 / 3])

    def test_non_symmetrizable_rejected(self):
        with pytest.raises(ValueError):
            eigenvalues(TridiagonalMatrix((0, 0), (1,), (-1,)))

    def test_matches_dense_eig(self, rng):
        for _ in range(20):
            m = random_tridiagonal(rng, rng.randint(1, 15), symmetrizable=True)
            ref = np.sort(np.linalg.eigvals(np.array(m.to_dense(), dtype=float)).real)
            assert np.allclose(eigenvalues(m).values, ref, atol=1e-8)

    @settings(max_examples=150, deadline=None)
    @given(symmetrizable_floats())
    def test_set_negation(self, m):
        ev = eigenvalues(m, tol=1e-13).as_array()
        ev_neg = eigenvalues(negate_diagonal(m), tol=1e-13).as_array()
        assert np.max(np.abs(ev_neg + ev[::-1])) <= 1e-10

    def test_individual_roots_do_not_negate(self):
        # the set negates, but the i-th root is not minus the i-th root
        m = TridiagonalMatrix((1, 3), (1,), (1,))
        ev = eigenvalues(m).values
        ev_neg = eigenvalues(negate_diagonal(m)).values
        assert ev_neg[0] != pytest.approx(-ev[0])
        assert ev_neg[0] == pytest.approx(-ev[1], abs=1e-12)


def test_eigenvalue_set_sorts():
    s = EigenvalueSet((3.0, -1.0, 2.0))
    assert s.values == (-1.0, 2.0, 3.0)
    assert s.negated().values == (-3.0, -2.0, 1.0)
