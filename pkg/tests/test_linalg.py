import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from walkmult.linalg import (
    DEFAULT_TOL,
    FLOAT,
    Matrix,
    char_poly,
    cluster_eigenvalues,
    eigenspace_projector,
    null_space_basis,
    power_sequence,
    symmetric_eigen,
)

P3 = Matrix([[F(0), F(1), F(0)], [F(1), F(0), F(1)], [F(0), F(1), F(0)]])


def rand_sym(n, seed, lo=-4, hi=4):
    rng = random.Random(seed)
    rows = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            w = F(rng.randint(lo, hi), rng.randint(1, 3))
            rows[i][j] = rows[j][i] = w
    return Matrix(rows)


class TestPowerSequence:
    def test_scalar_powers(self):
        m = Matrix([[F(2)]])
        seq = power_sequence(m, 3)
        assert [s[0, 0] for s in seq] == [F(1), F(2), F(4), F(8)]

    def test_p3_square_diagonal(self):
        seq = power_sequence(P3, 2)
        assert seq[2].diagonal() == (F(1), F(2), F(1))

    def test_matches_naive_multiplication(self):
        m = rand_sym(5, seed=7)
        seq = power_sequence(m, 4)
        acc = Matrix.identity(5)
        for k in range(5):
            assert seq[k] == acc
            acc = acc @ m

    def test_power_additivity(self):
        m = rand_sym(4, seed=3)
        seq = power_sequence(m, 6)
        for a in range(4):
            for b in range(4 - a):
                assert seq[a] @ seq[b] == seq[a + b]

    def test_zero_matrix_power_zero_is_identity(self):
        m = Matrix.zeros(3, 3)
        assert power_sequence(m, 1)[0] == Matrix.identity(3)


class TestCharPoly:
    def test_identity_2x2(self):
        assert char_poly(Matrix.identity(2)) == [F(1), F(-2), F(1)]

    def test_p3(self):
        assert char_poly(P3) == [F(1), F(0), F(-2), F(0)]

    def test_cross_mode_agreement(self):
        m = rand_sym(6, seed=11, lo=-2, hi=2)
        exact = [float(c) for c in char_poly(m)]
        approx = char_poly(Matrix(m.to_float_array(), mode=FLOAT))
        scale = max(1.0, max(abs(c) for c in exact))
        assert max(abs(a - b) for a, b in zip(exact, approx)) <= 1e-8 * scale

    def test_permutation_invariance(self):
        m = rand_sym(5, seed=2)
        perm = [2, 4, 0, 1, 3]
        rows = [[m[perm[i], perm[j]] for j in range(5)] for i in range(5)]
        assert char_poly(Matrix(rows)) == char_poly(m)


class TestNullSpace:
    def test_identity_has_trivial_null_space(self):
        assert null_space_basis(Matrix.identity(3)) == []

    def test_one_by_two(self):
        basis = null_space_basis(Matrix([[F(1), F(-1)]]))
        assert basis == [(F(1), F(1))]

    def test_rank_nullity_and_annihilation(self):
        for seed in range(5):
            rng = random.Random(seed)
            rows = [[F(rng.randint(-3, 3)) for _ in range(5)]
                    for _ in range(3)]
            m = Matrix(rows)
            basis = null_space_basis(m)
            for vec in basis:
                assert all(x == 0 for x in m.matvec(vec))

    def test_canonical_leading_one(self):
        m = Matrix([[F(2), F(-2), F(0)]])
        for vec in null_space_basis(m):
            lead = next(x for x in vec if x != 0)
            assert lead == 1

    def test_float_matches_exact_dimension(self):
        m = rand_sym(5, seed=9)
        exact = null_space_basis(m)
        approx = null_space_basis(Matrix(m.to_float_array(), mode=FLOAT))
        assert len(exact) == len(approx)


class TestSymmetricEigen:
    def test_diagonal(self):
        m = Matrix([[F(3), F(0), F(0)], [F(0), F(1), F(0)],
                    [F(0), F(0), F(2)]])
        evals, _ = symmetric_eigen(m)
        assert np.allclose(evals, [1, 2, 3])

    def test_p3_spectrum(self):
        evals, _ = symmetric_eigen(P3)
        assert np.allclose(evals, [-np.sqrt(2), 0, np.sqrt(2)])

    def test_reconstruction(self):
        m = rand_sym(8, seed=5)
        evals, vecs = symmetric_eigen(m)
        arr = m.to_float_array()
        recon = vecs @ np.diag(evals) @ vecs.T
        assert np.max(np.abs(arr - recon)) <= 1e-10 * max(
            1.0, np.max(np.abs(arr)))
        assert np.max(np.abs(vecs.T @ vecs - np.eye(8))) <= 1e-12

    def test_asymmetric_rejected(self):
        m = Matrix(np.array([[0.0, 1.0], [0.5, 0.0]]), mode=FLOAT)
        with pytest.raises(ValueError):
            symmetric_eigen(m)


class TestEigenspaceProjector:
    def test_rank_one(self):
        evals, vecs = symmetric_eigen(P3)
        p = eigenspace_projector(evals, vecs, [0])
        assert np.allclose(p, np.outer(vecs[:, 0], vecs[:, 0]))

    def test_resolution_of_identity(self):
        m = rand_sym(4, seed=1)
        evals, vecs = symmetric_eigen(m)
        total = sum(eigenspace_projector(evals, vecs, c)
                    for c in cluster_eigenvalues(evals))
        assert np.allclose(total, np.eye(4))

    def test_degenerate_cycle4_cluster(self):
        c4 = Matrix([[F(0), F(1), F(0), F(1)], [F(1), F(0), F(1), F(0)],
                     [F(0), F(1), F(0), F(1)], [F(1), F(0), F(1), F(0)]])
        evals, vecs = symmetric_eigen(c4)
        clusters = cluster_eigenvalues(evals)
        mid = next(c for c in clusters if len(c) == 2)
        p = eigenspace_projector(evals, vecs, mid)
        assert abs(np.trace(p) - 2) <= 1e-10
        assert np.allclose(p @ p, p)

    def test_mixed_cluster_rejected(self):
        evals, vecs = symmetric_eigen(P3)
        with pytest.raises(ValueError):
            eigenspace_projector(evals, vecs, [0, 2])


@given(st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_power_charpoly_properties(seed):
    m = rand_sym(4, seed=seed, lo=-2, hi=2)
    # Cayley-Hamilton: the matrix annihilates its own char poly
    coeffs = char_poly(m)
    seq = power_sequence(m, 4)
    acc = Matrix.zeros(4, 4)
    for c, p in zip(coeffs, reversed(seq)):
        acc = acc + p.scale(c)
    assert acc == Matrix.zeros(4, 4)
