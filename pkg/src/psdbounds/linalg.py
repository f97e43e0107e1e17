"""Dense exact linear algebra over Q and its multi-quadratic extensions.

:class:`ExactMatrix` keeps every entry either as a :class:`~fractions.Fraction`
or as a :class:`~psdbounds.scalars.MultiQuadScalar` (a matrix never mixes the
two kinds).  Rank, determinant, kernel, image and subspace operations are all
exact; there is no floating point anywhere in this module.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .scalars import MultiQuadScalar


def _normalize_entries(entries):
    """Coerce to all-Fraction or, if any multi-quad value occurs, all-MultiQuad."""
    vals = list(entries)
    if any(isinstance(v, MultiQuadScalar) for v in vals):
        return tuple(
            v if isinstance(v, MultiQuadScalar) else MultiQuadScalar.from_rational(v)
            for v in vals
        )
    return tuple(Fraction(v) for v in vals)


class ExactMatrix:
    """Immutable dense matrix with exact scalar entries."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, rows: int, cols: int, entries):
        if rows < 0 or cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        e = _normalize_entries(entries)
        if len(e) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(e)}")
        self.rows = rows
        self.cols = cols
        self._e = e

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows) -> "ExactMatrix":
        rows = [list(r) for r in rows]
        m = len(rows)
        n = len(rows[0]) if rows else 0
        if any(len(r) != n for r in rows):
            raise ValueError("ragged rows")
        return cls(m, n, [v for r in rows for v in r])

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls(n, n, [Fraction(int(i == j)) for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls(rows, cols, [Fraction(0)] * (rows * cols))

    @classmethod
    def diagonal(cls, values) -> "ExactMatrix":
        vals = list(values)
        n = len(vals)
        return cls.from_rows(
            [[vals[i] if i == j else 0 for j in range(n)] for i in range(n)]
        )

    # -- access ------------------------------------------------------------

    def __getitem__(self, key):
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
        return self._e[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self._e[i * self.cols : (i + 1) * self.cols]

    def column(self, j: int) -> tuple:
        return tuple(self._e[i * self.cols + j] for i in range(self.rows))

    def row_lists(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def submatrix(self, row_idx, col_idx) -> "ExactMatrix":
        rows = list(row_idx)
        cols = list(col_idx)
        return ExactMatrix(
            len(rows), len(cols), [self[i, j] for i in rows for j in cols]
        )

    @property
    def entries(self) -> tuple:
        return self._e

    @property
    def is_rational(self) -> bool:
        return not self._e or isinstance(self._e[0], Fraction)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i)
        )

    def is_nonnegative(self) -> bool:
        if not self.is_rational:
            raise ValueError("sign test requires rational entries")
        return all(v >= 0 for v in self._e)

    # -- arithmetic ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self._e == other._e
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self._e))

    def __neg__(self) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [-v for v in self._e])

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._require_same_shape(other)
        return ExactMatrix(
            self.rows, self.cols, [a + b for a, b in zip(self._e, other._e)]
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._require_same_shape(other)
        return ExactMatrix(
            self.rows, self.cols, [a - b for a, b in zip(self._e, other._e)]
        )

    def __mul__(self, scalar) -> "ExactMatrix":
        return ExactMatrix(self.rows, self.cols, [v * scalar for v in self._e])

    __rmul__ = __mul__

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = Fraction(0)
                for k in range(self.cols):
                    acc = acc + ri[k] * other[k, j]
                out.append(acc)
        return ExactMatrix(self.rows, other.cols, out)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(
            self.cols,
            self.rows,
            [self[i, j] for j in range(self.cols) for i in range(self.rows)],
        )

    def trace(self):
        if not self.is_square:
            raise ValueError("trace of a non-square matrix")
        acc = Fraction(0)
        for i in range(self.rows):
            acc = acc + self[i, i]
        return acc

    def __repr__(self) -> str:
        body = "; ".join(
            " ".join(str(v) for v in self.row(i)) for i in range(self.rows)
        )
        return f"ExactMatrix({self.rows}x{self.cols}: {body})"

    def _require_same_shape(self, other: "ExactMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError(
                f"shape mismatch: {self.rows}x{self.cols} vs {other.rows}x{other.cols}"
            )


def trace_product(a: ExactMatrix, b: ExactMatrix):
    """tr(a @ b) without forming the product."""
    if a.cols != b.rows or a.rows != b.cols:
        raise ValueError("trace product needs compatible shapes")
    acc = Fraction(0)
    for i in range(a.rows):
        for k in range(a.cols):
            acc = acc + a[i, k] * b[k, i]
    return acc


# -- rank and determinant ----------------------------------------------------


def _integer_rows(m: ExactMatrix) -> list[list[int]]:
    # Row scaling preserves rank; clearing denominators lets Bareiss run on
    # plain integers.
    out = []
    for i in range(m.rows):
        row = m.row(i)
        den = lcm(*(v.denominator for v in row)) if row else 1
        out.append([int(v * den) for v in row])
    return out


def _rank_bareiss_int(a: list[list[int]], rows: int, cols: int) -> int:
    prev = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                num = a[i][j] * a[r][c] - a[i][c] * a[r][j]
                quot, rem = divmod(num, prev)
                if rem:  # Bareiss division is exact; anything else is a bug
                    raise AssertionError("inexact division in Bareiss elimination")
                a[i][j] = quot
            a[i][c] = 0
        prev = a[r][c]
        r += 1
    return r


def _quad_rows_as_int_dicts(m: ExactMatrix) -> list[list[dict[int, int]]]:
    out = []
    for i in range(m.rows):
        row = [v.terms for v in m.row(i)]
        dens = [c.denominator for t in row for c in t.values()]
        den = lcm(*dens) if dens else 1
        out.append(
            [{r: int(c * den) for r, c in t.items()} for t in row]
        )
    return out


def _dict_mul(x: dict[int, int], y: dict[int, int]) -> dict[int, int]:
    acc: dict[int, int] = {}
    for s, a in x.items():
        for t, b in y.items():
            g = gcd(s, t)
            r = (s // g) * (t // g)
            v = acc.get(r, 0) + a * b * g
            if v:
                acc[r] = v
            else:
                acc.pop(r, None)
    return acc


def _dict_combine(p, xi, q, yi):
    # p*xi - q*yi over radicand->int dicts
    acc = _dict_mul(p, xi)
    for r, v in _dict_mul(q, yi).items():
        w = acc.get(r, 0) - v
        if w:
            acc[r] = w
        else:
            acc.pop(r, None)
    return acc


def _rank_division_free_quad(m: ExactMatrix) -> int:
    # Two-row cross-multiplication elimination: needs only ring operations,
    # so it is exact over the multi-quadratic extension.
    a = _quad_rows_as_int_dicts(m)
    rows, cols = m.rows, m.cols
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, rows):
            if not a[i][c]:
                continue
            q = a[i][c]
            new = [_dict_combine(p, a[i][j], q, a[r][j]) for j in range(cols)]
            coeffs = [v for d in new for v in d.values()]
            if coeffs:
                g = gcd(*coeffs)
                if g > 1:
                    new = [{rad: v // g for rad, v in d.items()} for d in new]
            a[i] = new
        r += 1
    return r


def rank(m: ExactMatrix) -> int:
    """Exact rank, by fraction-free (Bareiss) elimination.

    Rational matrices are row-scaled to integers first; multi-quadratic
    matrices use a division-free variant of the same elimination.
    """
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.is_rational:
        return _rank_bareiss_int(_integer_rows(m), m.rows, m.cols)
    return _rank_division_free_quad(m)


def det(m: ExactMatrix):
    """Exact determinant (Bareiss elimination; works in both scalar kinds)."""
    if not m.is_square:
        raise ValueError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return Fraction(1)
    a = m.row_lists()
    one = Fraction(1)
    prev = one
    sign = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0) * a[0][0]  # zero in the matrix's scalar kind
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) / prev
            a[i][c] = a[i][c] * 0
        prev = a[c][c]
    value = a[n - 1][n - 1]
    return -value if sign < 0 else value


# -- reduced row echelon form and subspaces ---------------------------------


def _rref(rows: list[list]) -> tuple[list[list], list[int]]:
    """In-place RREF; returns (nonzero rows, pivot column indices)."""
    if not rows:
        return [], []
    n = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == len(rows):
            break
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c] if isinstance(rows[r][c], Fraction) else rows[r][c].inverse()
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


class Subspace:
    """A linear subspace of Q^q, held as a canonical RREF row basis.

    Two equal subspaces always carry identical basis matrices, so set
    containment and equality are plain entry comparisons.
    """

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: ExactMatrix):
        if basis.cols != ambient_dim:
            raise ValueError("basis width must equal the ambient dimension")
        self.ambient_dim = ambient_dim
        self.basis = basis

    @classmethod
    def from_vectors(cls, ambient_dim: int, vectors) -> "Subspace":
        rows = [list(v) for v in vectors]
        if any(len(r) != ambient_dim for r in rows):
            raise ValueError("vector length must equal the ambient dimension")
        rows = [[Fraction(v) for v in r] for r in rows]
        reduced, _ = _rref(rows)
        return cls(ambient_dim, ExactMatrix.from_rows(reduced) if reduced
                   else ExactMatrix.zeros(0, ambient_dim))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ExactMatrix.zeros(0, ambient_dim))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, ExactMatrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        vecs = ", ".join(
            "(" + ", ".join(str(v) for v in self.basis.row(i)) + ")"
            for i in range(self.dim)
        )
        return f"Subspace(dim {self.dim} of Q^{self.ambient_dim}: {vecs})"

    def _reduce_vector(self, vec: list[Fraction]) -> list[Fraction]:
        v = list(vec)
        for i in range(self.basis.rows):
            row = self.basis.row(i)
            lead = next(j for j in range(self.ambient_dim) if row[j])
            if v[lead]:
                f = v[lead]  # leading entries are 1 in RREF
                v = [a - f * b for a, b in zip(v, row)]
        return v

    def contains_vector(self, vec) -> bool:
        v = [Fraction(x) for x in vec]
        if len(v) != self.ambient_dim:
            raise ValueError("vector length must equal the ambient dimension")
        return not any(self._reduce_vector(v))

    def contains(self, other: "Subspace") -> bool:
        """Exact set containment: ``other`` is a subspace of ``self``."""
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        return all(
            self.contains_vector(other.basis.row(i)) for i in range(other.dim)
        )

    def sum(self, other: "Subspace") -> "Subspace":
        """Span of the union of both bases."""
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimension mismatch")
        vectors = [self.basis.row(i) for i in range(self.dim)]
        vectors += [other.basis.row(i) for i in range(other.dim)]
        return Subspace.from_vectors(self.ambient_dim, vectors)


def kernel(m: ExactMatrix) -> Subspace:
    """Null space {x : m @ x = 0} as a canonical subspace of Q^cols."""
    if not m.is_rational:
        raise ValueError("kernel requires rational entries")
    reduced, pivots = _rref(m.row_lists())
    free = [c for c in range(m.cols) if c not in pivots]
    vectors = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -reduced[i][f]
        vectors.append(v)
    return Subspace.from_vectors(m.cols, vectors)


def image(m: ExactMatrix) -> Subspace:
    """Column space of ``m`` as a canonical subspace of Q^rows."""
    if not m.is_rational:
        raise ValueError("image requires rational entries")
    return Subspace.from_vectors(m.rows, [m.column(j) for j in range(m.cols)])


def row_space(m: ExactMatrix) -> Subspace:
    if not m.is_rational:
        raise ValueError("row space requires rational entries")
    return Subspace.from_vectors(m.cols, [m.row(i) for i in range(m.rows)])


def inverse(m: ExactMatrix) -> ExactMatrix:
    """Exact inverse of a square rational matrix (Gauss-Jordan)."""
    if not m.is_square:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    a = [list(m.row(i)) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    reduced, pivots = _rref(a)
    if len(pivots) < n or pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return ExactMatrix.from_rows([row[n:] for row in reduced])


def projection_matrix(u: Subspace) -> ExactMatrix:
    """Orthogonal projection onto ``u`` (standard inner product).

    For a basis-row matrix B this is B^T (B B^T)^{-1} B: symmetric,
    idempotent, rational, with image exactly ``u``.
    """
    if not u.basis.is_rational:
        raise ValueError("projection requires a rational basis")
    q = u.ambient_dim
    if u.dim == 0:
        return ExactMatrix.zeros(q, q)
    b = u.basis
    gram_inv = inverse(b @ b.transpose())
    return b.transpose() @ gram_inv @ b
