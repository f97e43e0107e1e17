"""Walkthrough: the conversion chain between rank factorizations,
subspace embeddings and psd factorizations.

Every matrix gives an embedding of its support in dimension rank(S); every
embedding gives a psd factorization by orthogonal projections; every psd
factorization gives an embedding back (images and kernels of the factors).
All three run in exact rational arithmetic, so the verifications are
equalities, not tolerances.
"""

from fractions import Fraction

from psdbounds import (
    ExactMatrix,
    embedding_from_psd,
    embedding_from_rank_factorization,
    psd_from_embedding,
    rank,
    realize_support,
    support,
    verify_embedding,
    verify_psd_factorization,
)

s = ExactMatrix.from_rows(
    [
        [2, 0, Fraction(1, 2), 0],
        [0, 3, 0, 0],
        [2, 3, Fraction(1, 2), 0],
        [0, 0, 5, 1],
    ]
)
print("S:")
for i in range(s.rows):
    print("   ", " ".join(f"{str(v):>4}" for v in s.row(i)))
print("rank:", rank(s))

emb = embedding_from_rank_factorization(s)
print("\nembedding in dimension", emb.ambient_dim)
for k, u in enumerate(emb.U):
    print(f"  U_{k + 1}: dim {u.dim}")
for l, v in enumerate(emb.V):
    print(f"  V_{l + 1}: dim {v.dim}")
print("U_k <= V_l exactly at the zeros:", verify_embedding(emb, support(s)))

factorization, t = psd_from_embedding(emb)
print("\nprojection factorization of order", factorization.order)
report = verify_psd_factorization(factorization, t)
print("psd certificates + trace identities:", report.summary())
print("supp(T) == supp(S):", support(t) == support(s))

back = embedding_from_psd(factorization)
print("\nembedding recovered from the factorization verifies:",
      verify_embedding(back, support(t)))

realized = realize_support(factorization, seed=0)
print("\nrandomized realization with the same support:")
for i in range(realized.rows):
    print("   ", " ".join(f"{str(v):>8}" for v in realized.row(i)))
print("rank of the realization:", rank(realized), "<= order", factorization.order)
