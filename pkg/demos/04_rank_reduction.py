"""Walkthrough: walking a psd solution down to low rank.

A psd matrix satisfying m linear trace constraints can always be replaced
by one of rank r with r(r+1)/2 <= m.  Each step moves along a direction
that keeps every constraint value and lands exactly on the psd boundary,
so the rank drops by at least one per step.
"""

import numpy as np

from psdbounds import (
    FloatPsdMatrix,
    barvinok_reduce,
    embedding_from_rank_factorization,
    factorization_to_float,
    generate_sn,
    psd_from_embedding,
    reduce_factor_ranks,
)

rng = np.random.default_rng(1)

g = rng.normal(size=(6, 6))
x = FloatPsdMatrix(g @ g.T)
constraints = []
for _ in range(3):
    a = rng.normal(size=(6, 6))
    a = (a + a.T) / 2
    constraints.append((a, float(np.tensordot(a, x.entries))))

print("start: order 6, rank", x.numerical_rank(), "with 3 constraints")
out = barvinok_reduce(x, constraints)
print("after reduction: rank", out.numerical_rank(), "(bound: r(r+1)/2 <= 3)")
worst = max(abs(float(np.tensordot(a, out.entries)) - t) for a, t in constraints)
print(f"worst constraint drift: {worst:.2e}")
print(f"smallest eigenvalue:    {out.min_eigenvalue():.2e}")

print("\nfactor-wise reduction of the band-matrix factorization:")
f, _ = psd_from_embedding(embedding_from_rank_factorization(generate_sn(6)))
a_factors, b_factors = factorization_to_float(f)
report = reduce_factor_ranks(a_factors, b_factors)
print("A-side ranks:", report.a_ranks)
print("B-side ranks:", report.b_ranks)
print(f"max residual {report.max_residual:.2e}, "
      f"min eigenvalue {report.min_eigenvalue:.2e}")
