import numpy as np
import pytest

from psdbounds import (
    FloatPsdMatrix,
    ReductionError,
    barvinok_reduce,
    embedding_from_rank_factorization,
    factorization_to_float,
    generate_sn,
    psd_from_embedding,
    reduce_factor_ranks,
)


def random_psd(rng, n):
    g = rng.normal(size=(n, n))
    return g @ g.T


def test_trace_one_reduces_to_rank_one():
    x = FloatPsdMatrix(np.eye(3) / 3.0)
    out = barvinok_reduce(x, [(np.eye(3), 1.0)])
    assert out.numerical_rank() == 1
    assert abs(np.trace(out.entries) - 1.0) < 1e-9
    assert out.min_eigenvalue() >= -1e-9


def test_rank_one_input_unchanged():
    v = np.array([1.0, -2.0, 0.5])
    x = FloatPsdMatrix(np.outer(v, v))
    cons = [(np.eye(3), float(v @ v))]
    out = barvinok_reduce(x, cons)
    assert np.allclose(out.entries, x.entries)


def test_random_order6_reductions():
    rng = np.random.default_rng(2024)
    for _ in range(10):
        x = FloatPsdMatrix(random_psd(rng, 6))
        cons = []
        for _ in range(3):
            a = rng.normal(size=(6, 6))
            a = (a + a.T) / 2
            cons.append((a, float(np.tensordot(a, x.entries))))
        out = barvinok_reduce(x, cons, tol=1e-9)
        assert out.numerical_rank() <= 2
        assert out.min_eigenvalue() >= -1e-8
        for a, alpha in cons:
            assert abs(float(np.tensordot(a, out.entries)) - alpha) <= 1e-6


def test_rejects_bad_input():
    not_psd = FloatPsdMatrix(np.diag([1.0, -1.0]))
    with pytest.raises(ReductionError):
        barvinok_reduce(not_psd, [(np.eye(2), 0.0)])
    x = FloatPsdMatrix(np.eye(2))
    with pytest.raises(ReductionError):
        barvinok_reduce(x, [(np.eye(2), 5.0)])  # constraint not satisfied


def test_float_psd_matrix_accessors():
    with pytest.raises(ValueError):
        FloatPsdMatrix(np.zeros((2, 3)))
    x = FloatPsdMatrix(np.array([[1.0, 2.0], [0.0, 1.0]]))
    assert np.allclose(x.entries, x.entries.T)  # symmetrized on entry
    assert FloatPsdMatrix(np.diag([1.0, 0.0])).numerical_rank() == 1
    assert FloatPsdMatrix(np.eye(2)).is_certified_psd()
    assert not FloatPsdMatrix(np.diag([1.0, -1.0])).is_certified_psd()


def test_inflated_identity_factorization_reduces():
    # order-3 factors of the 2x2 identity with inflated ranks
    a = [np.diag([1.0, 1.0, 0.0]), np.diag([0.0, 0.0, 1.0])]
    b = [np.diag([1.0, 0.0, 0.0]), np.diag([0.0, 0.0, 1.0])]
    report = reduce_factor_ranks(a, b)
    assert all(r <= 1 for r in report.a_ranks)
    assert all(r <= 1 for r in report.b_ranks)
    assert report.max_residual <= 1e-8


def test_minimal_factors_unchanged():
    a = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    b = [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])]
    report = reduce_factor_ranks(a, b)
    assert report.a_ranks == (1, 1) and report.b_ranks == (1, 1)
    for old, new in zip(a + b, list(report.a_factors) + list(report.b_factors)):
        assert np.allclose(old, new.entries)


def test_s6_factorization_ranks_bounded():
    f, _ = psd_from_embedding(embedding_from_rank_factorization(generate_sn(6)))
    a, b = factorization_to_float(f)
    report = reduce_factor_ranks(a, b)
    assert all(r <= 3 for r in report.a_ranks + report.b_ranks)
    assert report.max_residual <= 1e-8
    assert report.min_eigenvalue >= -1e-8
