import random
from fractions import Fraction

import pytest

from conftest import random_rational_matrix
from oracles import naive_det, naive_rank
from psdbounds import (
    ExactMatrix,
    Subspace,
    det,
    generate_sn,
    image,
    inverse,
    kernel,
    projection_matrix,
    rank,
    row_space,
    sqrt_embed,
    trace_product,
)


def test_rank_examples():
    assert rank(generate_sn(6)) == 3
    assert rank(ExactMatrix.identity(3)) == 3
    assert rank(ExactMatrix.zeros(2, 3)) == 0


def test_rank_matches_naive_oracle():
    rng = random.Random(99)
    for _ in range(200):
        m = random_rational_matrix(rng, max_rows=5, max_cols=5, zero_density=0.4)
        assert rank(m) == naive_rank(m)


def test_rank_multiquad():
    r2, r3, r6 = sqrt_embed(2), sqrt_embed(3), sqrt_embed(6)
    zero = r2 - r2
    # second row is sqrt(2) times the first: rank 1
    m = ExactMatrix.from_rows([[1, r2], [r2, 2]])
    assert rank(m) == 1
    assert rank(ExactMatrix.from_rows([[r2, r3], [r3, r2]])) == 2
    assert rank(ExactMatrix.from_rows([[zero, zero]])) == 0
    assert rank(ExactMatrix.from_rows([[r2, r3], [r6, 3]])) == 1  # row2 = sqrt(3)*row1


def test_det_examples():
    assert det(ExactMatrix.identity(4)) == 1
    assert det(ExactMatrix.from_rows([[0, 1], [1, 0]])) == -1
    assert det(ExactMatrix.diagonal([sqrt_embed(2), sqrt_embed(3)])) == sqrt_embed(6)
    with pytest.raises(ValueError):
        det(ExactMatrix.zeros(2, 3))


def test_det_matches_permutation_expansion():
    rng = random.Random(4)
    for _ in range(60):
        n = rng.randint(1, 4)
        m = ExactMatrix(
            n, n, [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n * n)]
        )
        assert det(m) == naive_det(m)


def test_kernel_image_examples():
    assert kernel(ExactMatrix.identity(3)).dim == 0
    assert image(ExactMatrix.zeros(3, 3)).dim == 0
    k = kernel(ExactMatrix.from_rows([[1, 1]]))
    assert k.dim == 1
    assert k.contains_vector([1, -1])


def test_rank_nullity():
    rng = random.Random(12)
    for _ in range(80):
        m = random_rational_matrix(rng, max_rows=5, max_cols=5, zero_density=0.4)
        assert kernel(m).dim + rank(m) == m.cols
        assert image(m).dim == rank(m)


def test_subspace_contains_and_sum():
    full = Subspace.full(2)
    e1 = Subspace.from_vectors(2, [[1, 0]])
    e2 = Subspace.from_vectors(2, [[0, 1]])
    assert full.contains(e1) and full.contains(e2) and full.contains(full)
    assert not e1.contains(e2)
    assert e1.sum(e2) == full
    assert e1.sum(Subspace.zero(2)) == e1
    with pytest.raises(ValueError):
        e1.contains(Subspace.zero(3))
    with pytest.raises(ValueError):
        e1.sum(Subspace.zero(3))


def test_mutual_containment_is_basis_identity():
    rng = random.Random(31)
    for _ in range(60):
        q = rng.randint(1, 4)
        vecs = [
            [Fraction(rng.randint(-3, 3)) for _ in range(q)]
            for _ in range(rng.randint(0, 3))
        ]
        a = Subspace.from_vectors(q, vecs)
        # same space from scaled + permuted + summed generators
        scrambled = [
            [v * 3 for v in row] for row in reversed(vecs)
        ]
        if len(vecs) >= 2:
            scrambled.append([x + y for x, y in zip(vecs[0], vecs[1])])
        b = Subspace.from_vectors(q, scrambled)
        assert a.contains(b) and b.contains(a)
        assert a == b and a.basis == b.basis


def test_projection_examples():
    e1 = Subspace.from_vectors(2, [[1, 0]])
    assert projection_matrix(e1) == ExactMatrix.from_rows([[1, 0], [0, 0]])
    assert projection_matrix(Subspace.zero(3)) == ExactMatrix.zeros(3, 3)
    diag = Subspace.from_vectors(2, [[1, 1]])
    half = Fraction(1, 2)
    assert projection_matrix(diag) == ExactMatrix.from_rows([[half, half], [half, half]])


def test_projection_properties():
    rng = random.Random(8)
    for _ in range(40):
        q = rng.randint(1, 4)
        u = Subspace.from_vectors(
            q,
            [
                [Fraction(rng.randint(-3, 3)) for _ in range(q)]
                for _ in range(rng.randint(0, q))
            ],
        )
        p = projection_matrix(u)
        assert p == p.transpose()
        assert p @ p == p
        assert row_space(p) == u  # symmetric, so row space equals image


def test_matrix_basics():
    m = ExactMatrix.from_rows([[1, 2], [3, 4]])
    assert m.transpose() == ExactMatrix.from_rows([[1, 3], [2, 4]])
    assert m.trace() == 5
    assert (m @ inverse(m)) == ExactMatrix.identity(2)
    assert trace_product(m, m) == (m @ m).trace()
    assert m.submatrix([1], [0, 1]) == ExactMatrix.from_rows([[3, 4]])
    assert (m * 2)[1, 1] == 8
    assert (m - m) == ExactMatrix.zeros(2, 2)
    with pytest.raises(ValueError):
        m @ ExactMatrix.zeros(3, 3)
    with pytest.raises(ValueError):
        inverse(ExactMatrix.from_rows([[1, 1], [1, 1]]))
    with pytest.raises(ValueError):
        ExactMatrix(2, 2, [1, 2, 3])
    with pytest.raises(IndexError):
        m[2, 0]


def test_mixed_entries_promote():
    m = ExactMatrix.from_rows([[1, sqrt_embed(2)]])
    assert not m.is_rational
    assert m[0, 0] * m[0, 1] == sqrt_embed(2)
