"""Rank reduction of psd solutions to linear trace constraints (floats).

Given a psd matrix satisfying m linear constraints tr(A_j X) = alpha_j,
there is always one of rank r with r(r+1)/2 <= m; this module walks the
input down to such a solution by repeated null-space steps that stay on
the constraint set and land exactly on the psd boundary.  This is the one
floating-point corner of the package; everything exact stays elsewhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9


class ReductionError(Exception):
    """A reduction step could not make progress; carries diagnostics."""


@dataclass(frozen=True)
class FloatPsdMatrix:
    """Symmetric float matrix with the tolerance used to certify it psd."""

    entries: np.ndarray
    tolerance: float = DEFAULT_TOL

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("matrix must be square")
        object.__setattr__(self, "entries", (arr + arr.T) / 2.0)

    @property
    def order(self) -> int:
        return self.entries.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues()[0])

    def is_certified_psd(self) -> bool:
        return self.min_eigenvalue() >= -self.tolerance

    def numerical_rank(self) -> int:
        return int(np.sum(self.eigenvalues() > self.tolerance))


def _svec_rows(mats: list[np.ndarray], r: int) -> np.ndarray:
    """Rows <M_j, .> over the r(r+1)/2 coordinates of symmetric matrices."""
    iu = np.triu_indices(r)
    rows = []
    for m in mats:
        row = np.where(iu[0] == iu[1], m[iu], 2.0 * m[iu])
        rows.append(row)
    return np.array(rows)


def _sym_from_vec(vec: np.ndarray, r: int) -> np.ndarray:
    out = np.zeros((r, r))
    iu = np.triu_indices(r)
    out[iu] = vec
    out = out + out.T - np.diag(np.diag(out))
    return out


def barvinok_reduce(
    x: FloatPsdMatrix,
    constraints: list[tuple[np.ndarray, float]],
    tol: float = DEFAULT_TOL,
) -> FloatPsdMatrix:
    """Reduce a psd solution of tr(A_j X) = alpha_j to rank r(r+1)/2 <= m.

    Each step factors X = G G^T on its numerical range, finds a symmetric
    direction D with <G^T A_j G, D> = 0 for all j (possible whenever
    r(r+1)/2 exceeds the constraint count), and moves to G(I + tD)G^T with
    t chosen so the smallest eigenvalue of I + tD is exactly zero: the
    constraints are untouched and the rank drops by at least one.
    """
    mats = [np.asarray(a, dtype=float) for a, _ in constraints]
    targets = np.array([float(alpha) for _, alpha in constraints])
    m = len(constraints)
    x = FloatPsdMatrix(x.entries, tol)
    if not x.is_certified_psd():
        raise ReductionError(
            f"input is not psd within tolerance (min eig {x.min_eigenvalue():.3e})"
        )
    _check_residuals(x.entries, mats, targets, tol, "input")

    while True:
        vals, vecs = np.linalg.eigh(x.entries)
        big = vals > tol
        r = int(np.sum(big))
        if m >= r * (r + 1) // 2 or r == 0:
            return x
        g = vecs[:, big] * np.sqrt(vals[big])
        reduced = [g.T @ a @ g for a in mats]
        system = _svec_rows(reduced, r)
        _, _, vt = np.linalg.svd(system, full_matrices=True)
        # more unknowns than equations here, so a null vector exists
        null = vt[-1]
        drift = float(np.linalg.norm(system @ null))
        if drift > 1e-8 * max(1.0, float(np.linalg.norm(system))):
            raise ReductionError(
                f"no constraint-preserving direction at rank {r} "
                f"(null-vector residual {drift:.3e})"
            )
        delta = _sym_from_vec(null, r)
        delta /= np.linalg.norm(delta)
        dvals = np.linalg.eigvalsh(delta)
        if dvals[0] < -1e-9:
            t = -1.0 / dvals[0]
        else:
            delta = -delta
            t = 1.0 / dvals[-1]
        step = np.eye(r) + t * delta
        new = FloatPsdMatrix(g @ step @ g.T, tol)
        if new.numerical_rank() >= r:
            raise ReductionError(
                f"step failed to reduce the rank below {r}"
            )
        _check_residuals(new.entries, mats, targets, tol, "step")
        x = new


def _check_residuals(entries, mats, targets, tol, stage: str):
    if not mats:
        return
    residuals = np.array(
        [abs(float(np.tensordot(a, entries)) - t) for a, t in zip(mats, targets)]
    )
    scale = max(1.0, float(np.abs(targets).max()))
    if residuals.max() > max(tol, 1e-7 * scale):
        raise ReductionError(
            f"constraint residual {residuals.max():.3e} too large after {stage}"
        )


@dataclass(frozen=True)
class FactorReductionReport:
    a_factors: tuple[FloatPsdMatrix, ...]
    b_factors: tuple[FloatPsdMatrix, ...]
    a_ranks: tuple[int, ...]
    b_ranks: tuple[int, ...]
    max_residual: float
    min_eigenvalue: float


def reduce_factor_ranks(
    a_factors,
    b_factors,
    targets: np.ndarray | None = None,
    tol: float = DEFAULT_TOL,
) -> FactorReductionReport:
    """Reduce each factor of a float psd factorization in turn.

    First every A_k is reduced against the constraints tr(A_k B_l) = S(k,l)
    with B fixed, then every B_l against the updated A side.  The final
    ranks r obey r(r+1)/2 <= n for the A side and <= m for the B side.
    """
    a_mats = [np.asarray(a, dtype=float) for a in a_factors]
    b_mats = [np.asarray(b, dtype=float) for b in b_factors]
    if targets is None:
        targets = np.array(
            [[float(np.tensordot(a, b)) for b in b_mats] for a in a_mats]
        )
    else:
        targets = np.asarray(targets, dtype=float)

    new_a = []
    for k, a in enumerate(a_mats):
        cons = [(b_mats[l], targets[k, l]) for l in range(len(b_mats))]
        new_a.append(barvinok_reduce(FloatPsdMatrix(a, tol), cons, tol))
    new_b = []
    for l, b in enumerate(b_mats):
        cons = [(new_a[k].entries, targets[k, l]) for k in range(len(new_a))]
        new_b.append(barvinok_reduce(FloatPsdMatrix(b, tol), cons, tol))

    residual = 0.0
    for k, a in enumerate(new_a):
        for l, b in enumerate(new_b):
            residual = max(
                residual, abs(float(np.tensordot(a.entries, b.entries)) - targets[k, l])
            )
    min_eig = min(
        min(f.min_eigenvalue() for f in new_a),
        min(f.min_eigenvalue() for f in new_b),
    )
    return FactorReductionReport(
        tuple(new_a),
        tuple(new_b),
        tuple(f.numerical_rank() for f in new_a),
        tuple(f.numerical_rank() for f in new_b),
        residual,
        min_eig,
    )


def factorization_to_float(f) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Cast an exact psd factorization to float factor lists."""
    a = [
        np.array([[float(mat[i, j]) for j in range(mat.cols)] for i in range(mat.rows)])
        for mat in f.A
    ]
    b = [
        np.array([[float(mat[i, j]) for j in range(mat.cols)] for i in range(mat.rows)])
        for mat in f.B
    ]
    return a, b
