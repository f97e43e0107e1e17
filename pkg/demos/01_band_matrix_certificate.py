"""Walkthrough: why the 6x6 band matrix has psd rank at least 4.

The matrix S with S(i,j) = (i-j-1)(i-j-2)/2 has rank 3 no matter how large
it is, so every support-based bound tops out at 3.  The sign-enumeration
certificate pushes past that: in an order-3 factorization the factors on
the banded rows/columns would be rank one, forcing an entrywise square
root of a 4x4 block to have rank at most 3 -- and all 512 square roots
have rank 4.
"""

from psdbounds import (
    boolean_rank,
    embrkl_bounds,
    generate_sn,
    min_sqrt_rank,
    order3_exclusion,
    rank,
    support,
    triangular_rank,
)

s = generate_sn(6)
print("S_6:")
for i in range(6):
    print("   ", " ".join(f"{str(v):>2}" for v in s.row(i)))

pat = support(s)
print("\nrank:           ", rank(s))
print("triangular rank:", triangular_rank(pat))
print("boolean rank:   ", boolean_rank(pat))
print("embedding dim:  ", embrkl_bounds(s))

cert = order3_exclusion(s, fix_global_sign=False)
print("\norder-3 exclusion:", cert.claim)
print("  block rows (1-based):", [k + 1 for k in cert.rows])
print("  block cols (1-based):", [l + 1 for l in cert.cols])
print("  sign assignments checked:", cert.assignments_checked)
print("  minimum square-root rank:", cert.min_rank)

block = min_sqrt_rank(s, cert.rows, cert.cols)
witness = block.witness
print("\none square root achieving the minimum (signs on nonzeros):")
print("  positions:", [(i + 1, j + 1) for i, j in witness.positions])
print("  signs:    ", witness.signs)

print("\nthe same certificate transfers to every larger member of the family:")
for n in (8, 10, 12):
    cert = order3_exclusion(generate_sn(n))
    print(f"  n={n:2d}: rank {rank(generate_sn(n))}, {cert.claim}")
