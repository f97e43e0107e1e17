"""Exact positive semidefinite factorizations and sign-enumeration bounds.

Everything here is rational arithmetic: psd-ness is certified by an LDL^T
elimination with diagonal pivoting (no eigenvalues), support realization
samples rational vectors, and the square-root enumeration computes matrix
ranks over multi-quadratic field extensions.  The floating-point rank
reduction lives in :mod:`psdbounds.reduction` instead.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice
from math import comb

from .linalg import ExactMatrix, rank, trace_product
from .pattern import SupportPattern, support
from .scalars import MultiQuadScalar, sqrt_embed

DEFAULT_SIGN_CAP = 24


class RealizationError(Exception):
    """Sampling failed to hit a support-realizing point within the retry cap."""


@dataclass(frozen=True)
class PsdFactorization:
    """Symmetric factor lists A_1..A_m, B_1..B_n of a common order.

    The factored matrix has entries tr(A_k B_l); psd-ness of the factors is
    certified on demand, not at construction.
    """

    order: int
    A: tuple[ExactMatrix, ...]
    B: tuple[ExactMatrix, ...]

    def __post_init__(self):
        for mat in self.A + self.B:
            if mat.rows != self.order or mat.cols != self.order:
                raise ValueError("factor order mismatch")
            if not mat.is_rational:
                raise ValueError("factors must have rational entries")
            if not mat.is_symmetric():
                raise ValueError("factors must be symmetric")

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.B)

    def product_matrix(self) -> ExactMatrix:
        """The matrix tr(A_k B_l) this factorization factors."""
        return ExactMatrix(
            self.m, self.n, [trace_product(a, b) for a in self.A for b in self.B]
        )


@dataclass(frozen=True)
class PsdCertificate:
    """Outcome of the exact LDL^T test on one symmetric rational matrix."""

    is_psd: bool
    pivots: tuple[Fraction, ...]
    reason: str = ""


def psd_certificate(m: ExactMatrix) -> PsdCertificate:
    """Exact psd test by symmetric elimination with diagonal pivoting.

    A symmetric rational matrix is psd iff the elimination only ever meets
    nonnegative diagonal pivots, and whenever the remaining diagonal is all
    zero the remaining block is entirely zero.
    """
    if not m.is_symmetric():
        return PsdCertificate(False, (), "matrix is not symmetric")
    n = m.rows
    work = [[Fraction(v) for v in m.row(i)] for i in range(n)]
    active = list(range(n))
    pivots: list[Fraction] = []
    while active:
        diag = [(work[i][i], i) for i in active]
        if any(d < 0 for d, _ in diag):
            bad = next(i for d, i in diag if d < 0)
            return PsdCertificate(
                False, tuple(pivots), f"negative diagonal entry at index {bad}"
            )
        pos = [i for d, i in diag if d > 0]
        if not pos:
            # all remaining diagonal entries are zero: psd iff block is zero
            for i in active:
                for j in active:
                    if work[i][j]:
                        return PsdCertificate(
                            False,
                            tuple(pivots),
                            f"zero diagonal with nonzero entry at ({i}, {j})",
                        )
            break
        p = pos[0]
        piv = work[p][p]
        pivots.append(piv)
        active.remove(p)
        pivot_row = {j: work[p][j] for j in active}
        for i in active:
            f = work[i][p] / piv
            if f:
                for j in active:
                    work[i][j] -= f * pivot_row[j]
            work[i][p] = Fraction(0)
            work[p][i] = Fraction(0)
    return PsdCertificate(True, tuple(pivots))


@dataclass(frozen=True)
class FactorizationReport:
    """Per-factor psd certificates plus exact trace-equality results."""

    psd_ok: bool
    a_certificates: tuple[PsdCertificate, ...]
    b_certificates: tuple[PsdCertificate, ...]
    traces_ok: bool
    mismatches: tuple[tuple[int, int], ...] = ()

    @property
    def passed(self) -> bool:
        return self.psd_ok and self.traces_ok

    def summary(self) -> str:
        bad_a = [i for i, c in enumerate(self.a_certificates) if not c.is_psd]
        bad_b = [i for i, c in enumerate(self.b_certificates) if not c.is_psd]
        parts = []
        if bad_a:
            parts.append(f"non-psd A factors {bad_a}")
        if bad_b:
            parts.append(f"non-psd B factors {bad_b}")
        if self.mismatches:
            parts.append(f"trace mismatches at {list(self.mismatches)}")
        return "; ".join(parts) if parts else "ok"


def verify_psd_factorization(
    f: PsdFactorization, s: ExactMatrix | None = None
) -> FactorizationReport:
    """Certify each factor psd and check tr(A_k B_l) = S(k,l) exactly.

    With ``s`` omitted only the psd part is checked (the trace identities
    are vacuous against the factorization's own product matrix).
    """
    a_certs = tuple(psd_certificate(a) for a in f.A)
    b_certs = tuple(psd_certificate(b) for b in f.B)
    psd_ok = all(c.is_psd for c in a_certs) and all(c.is_psd for c in b_certs)
    mismatches: list[tuple[int, int]] = []
    if s is not None:
        if s.rows != f.m or s.cols != f.n:
            raise ValueError(
                f"factorization is {f.m}x{f.n} but the matrix is {s.rows}x{s.cols}"
            )
        for k in range(f.m):
            for l in range(f.n):
                if trace_product(f.A[k], f.B[l]) != s[k, l]:
                    mismatches.append((k, l))
    return FactorizationReport(
        psd_ok, a_certs, b_certs, not mismatches, tuple(mismatches)
    )


def realize_support(
    f: PsdFactorization, seed: int = 0, max_tries: int = 5
) -> ExactMatrix:
    """A rational matrix T with supp(T) = supp(tr(A_k B_l)) and rank <= order.

    Samples xi_k, eta_l with integer entries uniform over {-B..B} and sets
    T(k,l) = <A_k xi_k, B_l eta_l>.  Entries that must vanish do so
    automatically (there A_k B_l = 0); nonzero entries survive outside a
    measure-zero set, so a few retries suffice.  Deterministic per seed.
    """
    report = verify_psd_factorization(f)
    if not report.psd_ok:
        raise ValueError(f"factors are not positive semidefinite: {report.summary()}")
    s = f.product_matrix()
    pattern = support(s)
    rng = random.Random(seed)
    amplitude = max(17, f.m * f.n)
    q = f.order
    for _ in range(max_tries):
        xs = [
            _mat_vec(f.A[k], _random_vector(rng, q, amplitude)) for k in range(f.m)
        ]
        ys = [
            _mat_vec(f.B[l], _random_vector(rng, q, amplitude)) for l in range(f.n)
        ]
        entries = [
            sum((xk[i] * yl[i] for i in range(q)), Fraction(0))
            for xk in xs
            for yl in ys
        ]
        t = ExactMatrix(f.m, f.n, entries)
        if support(t) == pattern:
            return t
    raise RealizationError(
        f"no support-realizing sample in {max_tries} tries (seed {seed})"
    )


def _random_vector(rng: random.Random, q: int, amplitude: int) -> list[Fraction]:
    return [Fraction(rng.randint(-amplitude, amplitude)) for _ in range(q)]


def _mat_vec(m: ExactMatrix, v: list[Fraction]) -> list[Fraction]:
    return [
        sum((m[i, j] * v[j] for j in range(m.cols)), Fraction(0))
        for i in range(m.rows)
    ]


# -- square-root sign enumeration ---------------------------------------------


@dataclass(frozen=True)
class SignAssignment:
    """Signs for the nonzero entries of a submatrix, in row-major order."""

    positions: tuple[tuple[int, int], ...]
    signs: tuple[int, ...]

    def __post_init__(self):
        if len(self.positions) != len(self.signs):
            raise ValueError("one sign per position")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")


@dataclass(frozen=True)
class SqrtRankResult:
    min_rank: int
    witness: SignAssignment | None
    assignments_checked: int


def min_sqrt_rank(
    s: ExactMatrix,
    row_set,
    col_set,
    fix_global_sign: bool = True,
    cap: int = DEFAULT_SIGN_CAP,
    threads: int = 1,
) -> SqrtRankResult:
    """Minimum exact rank over all entrywise square roots of a submatrix.

    Every matrix Y with Y(k,l)^2 = S(k,l) on the selected block arises from
    one of 2^z sign choices on the z nonzero entries (zeros stay zero); the
    rank is computed exactly over the multi-quadratic field generated by
    the square-free parts.  Since Y and -Y have equal rank, the first sign
    is fixed unless ``fix_global_sign`` is false.
    """
    rows = list(row_set)
    cols = list(col_set)
    sub = s.submatrix(rows, cols)
    if not sub.is_rational or not sub.is_nonnegative():
        raise ValueError("selected submatrix must be rational and nonnegative")
    positions = [
        (rows[i], cols[j])
        for i in range(sub.rows)
        for j in range(sub.cols)
        if sub[i, j]
    ]
    z = len(positions)
    if z > cap:
        raise ValueError(f"{z} nonzero entries exceed the enumeration cap {cap}")
    if z == 0:
        return SqrtRankResult(0, SignAssignment((), ()), 1)

    roots = [sqrt_embed(s[p]) for p in positions]
    local = [
        (rows.index(p[0]), cols.index(p[1])) for p in positions
    ]
    zero = MultiQuadScalar.zero()
    n_free = z - 1 if fix_global_sign else z
    total = 1 << n_free

    def rank_of(code: int) -> int:
        signs = _signs_from_code(code, z, fix_global_sign)
        entries = [[zero] * sub.cols for _ in range(sub.rows)]
        for t, (i, j) in enumerate(local):
            entries[i][j] = roots[t] if signs[t] > 0 else -roots[t]
        return rank(ExactMatrix.from_rows(entries))

    def scan(chunk: range) -> tuple[int, int]:
        best_rank, best_code = sub.rows + sub.cols + 1, -1
        for code in chunk:
            r = rank_of(code)
            if r < best_rank:
                best_rank, best_code = r, code
        return best_rank, best_code

    if threads > 1 and total > 1:
        bounds = [total * i // threads for i in range(threads + 1)]
        chunks = [range(a, b) for a, b in zip(bounds, bounds[1:]) if a < b]
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(scan, chunks))
        best_rank, best_code = min(results)
    else:
        best_rank, best_code = scan(range(total))

    witness = SignAssignment(
        tuple(positions), _signs_from_code(best_code, z, fix_global_sign)
    )
    return SqrtRankResult(best_rank, witness, total)


def _signs_from_code(code: int, z: int, fixed_first: bool) -> tuple[int, ...]:
    if fixed_first:
        bits = [0] + [(code >> t) & 1 for t in range(z - 1)]
    else:
        bits = [(code >> t) & 1 for t in range(z)]
    return tuple(1 if b == 0 else -1 for b in bits)


def check_sign_square(s: ExactMatrix, assignment: SignAssignment) -> bool:
    """Entrywise: (sign * sqrt(S(k,l)))^2 equals S(k,l) exactly."""
    for (i, j), sign in zip(assignment.positions, assignment.signs):
        y = sqrt_embed(s[i, j]) * sign
        if (y * y) != MultiQuadScalar.from_rational(s[i, j]):
            return False
    return True


# -- the order-3 exclusion certificate ----------------------------------------


@dataclass(frozen=True)
class Order3Certificate:
    """Result of the dimension-forcing + sign-enumeration argument.

    When ``conclusive``, no order-3 psd factorization of the matrix exists,
    i.e. its psd rank is at least ``bound`` (= 4).  The hypothesis fields
    record which rows/columns had their subspace dimensions pinned; column
    distinctness is checked at support level only (distinct zero patterns),
    which is the machine-checkable form of the underlying argument.
    """

    conclusive: bool
    bound: int | None
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    min_rank: int | None
    assignments_checked: int
    witness: SignAssignment | None
    pinned_rows: tuple[int, ...]
    pinned_cols: tuple[int, ...]
    reason: str = ""
    column_distinctness: str = "support-level"

    @property
    def claim(self) -> str:
        return "psd rank >= 4" if self.conclusive else "inconclusive"


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _pinned_sets(pat: SupportPattern) -> tuple[list[int], list[int]]:
    """Rows forced to 1-dimensional lines and columns forced to planes.

    In any order-3 factorization, via the induced embedding with
    U_k = img A_k and V_l = ker B_l:

    * a row with a nonzero entry has dim U_k >= 1; if it also has two zeros
      in columns of distinct zero pattern (each column containing some
      nonzero entry, so dim V <= 2 there), dim U_k = 2 or 3 would force two
      distinct columns to share their V, hence dim U_k = 1;
    * a column with a nonzero entry has dim V_l <= 2; two zeros at rows of
      distinct zero pattern (each row containing a nonzero) rule out
      dim V_l <= 1, hence dim V_l = 2.
    """
    col_bits = pat.col_bits()
    full_rows = (1 << pat.rows) - 1
    full_cols = (1 << pat.cols) - 1
    nonzero_rows = [k for k in range(pat.rows) if pat.row_bits[k]]
    nonzero_cols = [l for l in range(pat.cols) if col_bits[l]]

    pinned_rows = []
    for k in nonzero_rows:
        zero_cols = [
            l for l in _bits(full_cols ^ pat.row_bits[k]) if col_bits[l]
        ]
        patterns = {col_bits[l] for l in zero_cols}
        if len(patterns) >= 2:
            pinned_rows.append(k)
    pinned_cols = []
    for l in nonzero_cols:
        zero_rows = [
            k for k in _bits(full_rows ^ col_bits[l]) if pat.row_bits[k]
        ]
        patterns = {pat.row_bits[k] for k in zero_rows}
        if len(patterns) >= 2:
            pinned_cols.append(l)
    return pinned_rows, pinned_cols


def order3_exclusion(
    s: ExactMatrix,
    fix_global_sign: bool = True,
    cap: int = DEFAULT_SIGN_CAP,
    max_attempts: int = 64,
    threads: int = 1,
) -> Order3Certificate:
    """Certificate that a nonnegative matrix has psd rank at least 4.

    If an order-3 factorization existed, the pinned rows would carry rank-1
    A factors and the pinned columns rank-1 B factors, making the selected
    block an entrywise square of a rank <= 3 matrix.  Enumerating all sign
    choices of the square roots and finding every rank >= 4 refutes that.
    Returns an inconclusive certificate (not an error) when the hypothesis
    fails or every tried block admits a low-rank square root.
    """
    if not s.is_rational or not s.is_nonnegative():
        raise ValueError("order-3 exclusion needs a nonnegative rational matrix")
    pat = support(s)
    pinned_rows, pinned_cols = _pinned_sets(pat)

    def inconclusive(reason: str) -> Order3Certificate:
        return Order3Certificate(
            False, None, (), (), None, 0, None,
            tuple(pinned_rows), tuple(pinned_cols), reason,
        )

    if len(pinned_rows) < 4 or len(pinned_cols) < 4:
        return inconclusive(
            "fewer than four rows or columns have forced subspace dimensions"
        )

    # 4x4 blocks of pinned rows x pinned cols, cheapest enumerations first;
    # lexicographic generation order caps huge inputs deterministically
    scan_limit = 200_000
    pairs = (
        (kr, lc)
        for kr in combinations(pinned_rows, 4)
        for lc in combinations(pinned_cols, 4)
    )
    if comb(len(pinned_rows), 4) * comb(len(pinned_cols), 4) > scan_limit:
        pairs = islice(pairs, scan_limit)
    candidates = []
    for krows, lcols in pairs:
        mask = 0
        for l in lcols:
            mask |= 1 << l
        z = sum((pat.row_bits[k] & mask).bit_count() for k in krows)
        if z <= cap:
            candidates.append((z, krows, lcols))
    if not candidates:
        return inconclusive("every candidate block exceeds the enumeration cap")
    candidates.sort()

    attempts = 0
    for z, krows, lcols in candidates:
        if attempts >= max_attempts:
            break
        attempts += 1
        result = min_sqrt_rank(
            s, krows, lcols,
            fix_global_sign=fix_global_sign, cap=cap, threads=threads,
        )
        if result.min_rank >= 4:
            return Order3Certificate(
                True, 4, tuple(krows), tuple(lcols),
                result.min_rank, result.assignments_checked, result.witness,
                tuple(pinned_rows), tuple(pinned_cols),
            )
    return inconclusive(
        f"all {attempts} candidate blocks admit a square root of rank <= 3"
    )


def generate_sn(n: int) -> ExactMatrix:
    """The n x n matrix with entry (i, j) = (i-j-1)(i-j-2)/2, 1-indexed.

    Nonnegative, of rank 3 for n >= 3, with a diagonal band of zeros; the
    canonical example whose psd rank exceeds what any support-based bound
    can certify.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    return ExactMatrix(
        n,
        n,
        [
            Fraction((i - j - 1) * (i - j - 2), 2)
            for i in range(1, n + 1)
            for j in range(1, n + 1)
        ],
    )
