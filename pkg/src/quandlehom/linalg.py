"""Exact linear algebra over prime fields and over the integers.

Prime-field elimination is dense numpy with a dtype narrow enough that a
single row operation ``a - f*b`` cannot overflow before reduction mod p.
The Smith normal form works on arbitrary-precision Python integers after
an int64 fast path; the pivot rule picks the nonzero entry of smallest
absolute value, breaking ties by lowest column index, then lowest row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "EliminationResult",
    "SNFResult",
    "eliminate_fp",
    "rank_fp",
    "kernel_basis_fp",
    "solve_fp",
    "SpanFP",
    "smith_normal_form",
]

_INT64_GUARD = np.int64(1) << 60


def _check_prime(p: int) -> None:
    if p < 2 or any(p % k == 0 for k in range(2, int(p**0.5) + 1)):
        raise ValueError(f"modulus {p} is not prime")


def _fp_dtype(p: int):
    # after reduction entries lie in [0, p); a row update touches values
    # bounded by (p-1) + (p-1)^2 which must fit the dtype
    bound = (p - 1) + (p - 1) ** 2
    if bound <= 127:
        return np.int8
    if bound <= 32767:
        return np.int16
    return np.int64

def as_fp_array(a, p: int) -> np.ndarray:
    arr = np.asarray(a)
    if arr.dtype == object:
        arr = np.array([[int(v) % p for v in row] for row in arr], dtype=np.int64)
    return np.ascontiguousarray(arr.astype(np.int64) % p).astype(_fp_dtype(p))


def _forward_eliminate(A: np.ndarray, p: int) -> list[tuple[int, int]]:
    """In-place row echelon form; returns (row, col) pivot positions."""
    m, n = A.shape
    pivots: list[tuple[int, int]] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        sub = A[r:, c]
        nz = np.nonzero(sub)[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        piv = int(A[r, c])
        if piv != 1:
            inv = pow(piv, p - 2, p)
            A[r] = (A[r] * inv) % p
        col = A[r + 1 :, c]
        rows = np.nonzero(col)[0]
        if rows.size:
            idx = rows + r + 1
            A[idx] = (A[idx] - col[rows][:, None] * A[r]) % p
        pivots.append((r, c))
        r += 1
    return pivots


def rank_fp(a, p: int) -> int:
    """Exact rank of a matrix over F_p."""
    _check_prime(p)
    A = as_fp_array(a, p)
    if A.size == 0:
        return 0
    return len(_forward_eliminate(A, p))


@dataclass
class EliminationResult:
    """RREF data of a matrix over F_p.

    ``kernel_basis`` columns span ker A; ``image_basis`` columns (taken
    from A itself) span the column space; ``pivot_cols`` are the pivot
    column indices of the reduced form.
    """

    p: int
    rank: int
    rref: np.ndarray
    pivot_cols: tuple[int, ...]
    kernel_basis: np.ndarray  # shape (ncols, ncols - rank)
    image_basis: np.ndarray  # shape (nrows, rank)


def eliminate_fp(a, p: int) -> EliminationResult:
    """Full Gauss-Jordan elimination mod p with kernel and image bases."""
    _check_prime(p)
    A0 = as_fp_array(a, p)
    m, n = A0.shape if A0.ndim == 2 else (A0.shape[0], 1)
    A = A0.reshape(m, n).copy()
    pivots = _forward_eliminate(A, p)
    # back substitution to reach reduced echelon form
    for r, c in reversed(pivots):
        col = A[:r, c]
        rows = np.nonzero(col)[0]
        if rows.size:
            A[rows] = (A[rows] - col[rows][:, None] * A[r]) % p
    pivot_cols = tuple(c for _, c in pivots)
    rank = len(pivots)
    free_cols = [c for c in range(n) if c not in set(pivot_cols)]
    kernel = np.zeros((n, len(free_cols)), dtype=A.dtype)
    for j, fc in enumerate(free_cols):
        kernel[fc, j] = 1
        for (r, c) in pivots:
            kernel[c, j] = (-int(A[r, fc])) % p
    image = A0.reshape(m, n)[:, list(pivot_cols)].copy()
    return EliminationResult(
        p=p,
        rank=rank,
        rref=A,
        pivot_cols=pivot_cols,
        kernel_basis=kernel,
        image_basis=image,
    )


def kernel_basis_fp(a, p: int) -> np.ndarray:
    return eliminate_fp(a, p).kernel_basis


def solve_fp(a, b, p: int) -> Optional[np.ndarray]:
    """A particular solution of A x = b mod p, or None when inconsistent."""
    _check_prime(p)
    A = as_fp_array(a, p)
    m = A.shape[0]
    bv = as_fp_array(np.asarray(b).reshape(m, -1), p)
    aug = np.concatenate([A, bv], axis=1)
    n = A.shape[1]
    pivots = _forward_eliminate(aug, p)
    for r, c in reversed(pivots):
        col = aug[:r, c]
        rows = np.nonzero(col)[0]
        if rows.size:
            aug[rows] = (aug[rows] - col[rows][:, None] * aug[r]) % p
    if any(c >= n for _, c in pivots):
        return None
    k = bv.shape[1]
    x = np.zeros((n, k), dtype=aug.dtype)
    for r, c in pivots:
        x[c] = aug[r, n:]
    return x if np.asarray(b).ndim == 2 else x[:, 0]


class SpanFP:
    """Incrementally maintained row space over F_p.

    Vectors are reduced against stored echelon rows with one
    matrix-vector product per insertion, so membership queries stay cheap
    while the span grows.
    """

    def __init__(self, dim: int, p: int):
        _check_prime(p)
        self.dim = dim
        self.p = p
        self._rows = np.zeros((0, dim), dtype=np.int64)
        self._pivots: list[int] = []

    @classmethod
    def from_matrix_rows(cls, mat, p: int) -> "SpanFP":
        """Bulk constructor: one dense elimination instead of row inserts."""
        A = as_fp_array(mat, p)
        span = cls(A.shape[1], p)
        if A.size == 0:
            return span
        pivots = _forward_eliminate(A, p)
        for r, c in reversed(pivots):
            col = A[:r, c]
            rows = np.nonzero(col)[0]
            if rows.size:
                A[rows] = (A[rows] - col[rows][:, None] * A[r]) % p
        span._rows = A[: len(pivots)].astype(np.int64)
        span._pivots = [c for _, c in pivots]
        return span

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def reduce(self, vec) -> np.ndarray:
        v = np.asarray(vec, dtype=np.int64).copy() % self.p
        if self._pivots:
            coeffs = v[self._pivots]
            if coeffs.any():
                v = (v - coeffs @ self._rows) % self.p
        return v

    def add(self, vec) -> bool:
        """Insert a vector; returns True when the span grew."""
        v = self.reduce(vec)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        inv = pow(int(v[piv]), self.p - 2, self.p)
        v = (v * inv) % self.p
        # keep stored rows reduced at the new pivot position
        if self._rows.shape[0]:
            col = self._rows[:, piv].copy()
            hit = np.nonzero(col)[0]
            if hit.size:
                self._rows[hit] = (self._rows[hit] - col[hit][:, None] * v) % self.p
        self._rows = np.vstack([self._rows, v])
        self._pivots.append(piv)
        return True

    def add_all(self, mat) -> int:
        added = 0
        for col in np.asarray(mat, dtype=np.int64).T:
            if self.add(col):
                added += 1
        return added

    def contains(self, vec) -> bool:
        return not self.reduce(vec).any()


# ---------------------------------------------------------------------------
# Smith normal form over Z
# ---------------------------------------------------------------------------


@dataclass
class SNFResult:
    invariant_factors: tuple[int, ...]
    rank: int
    U: Optional[np.ndarray] = None  # U @ A @ V has the factors on the diagonal
    V: Optional[np.ndarray] = None


class _Overflow(Exception):
    pass


def _select_pivot(A: np.ndarray, t: int) -> Optional[tuple[int, int]]:
    # smallest |value|, ties by lowest column index, then lowest row index
    sub = A[t:, t:]
    if sub.size == 0:
        return None
    mags = abs(sub)
    if A.dtype == object:
        nz = mags[mags != 0]
        if nz.size == 0:
            return None
        best = nz.min()
    else:
        masked = np.where(mags == 0, np.iinfo(np.int64).max, mags)
        best = masked.min()
        if best == np.iinfo(np.int64).max:
            return None
    hits = mags == best
    j = int(np.nonzero(hits.any(axis=0))[0][0])
    i = int(np.nonzero(hits[:, j])[0][0])
    return t + i, t + j


def _snf_core(A: np.ndarray, with_transforms: bool, guard: bool) -> SNFResult:
    m, n = A.shape
    U = np.eye(m, dtype=A.dtype) if with_transforms else None
    V = np.eye(n, dtype=A.dtype) if with_transforms else None

    def axpy_rows(M: np.ndarray, idx: np.ndarray, q: np.ndarray, t: int) -> None:
        # rows[idx] -= q * row[t]; pre-checks that no intermediate exceeds int64
        if guard:
            bound = int(abs(M[idx]).max(initial=0)) + int(abs(q).max()) * int(
                abs(M[t]).max(initial=0)
            )
            if bound > (1 << 62):
                raise _Overflow
        M[idx] -= q[:, None] * M[t]

    def axpy_cols(M: np.ndarray, idx: np.ndarray, q: np.ndarray, t: int) -> None:
        if guard:
            bound = int(abs(M[:, idx]).max(initial=0)) + int(abs(q).max()) * int(
                abs(M[:, t]).max(initial=0)
            )
            if bound > (1 << 62):
                raise _Overflow
        M[:, idx] -= M[:, t : t + 1] * q[None, :]

    t = 0
    while True:
        pos = _select_pivot(A, t)
        if pos is None:
            break
        i, j = pos
        if i != t:
            A[[t, i]] = A[[i, t]]
            if U is not None:
                U[[t, i]] = U[[i, t]]
        if j != t:
            A[:, [t, j]] = A[:, [j, t]]
            if V is not None:
                V[:, [t, j]] = V[:, [j, t]]
        if A[t, t] < 0:
            A[t] = -A[t]
            if U is not None:
                U[t] = -U[t]
        while True:
            piv = int(A[t, t])
            col = A[t + 1 :, t]
            rows = np.nonzero(col)[0]
            if rows.size:
                q = col[rows] // piv
                idx = rows + t + 1
                axpy_rows(A, idx, q, t)
                if U is not None:
                    axpy_rows(U, idx, q, t)
                if A[t + 1 :, t].any():
                    # a residue smaller than the pivot appeared: promote it
                    r = t + 1 + int(np.nonzero(A[t + 1 :, t])[0][0])
                    A[[t, r]] = A[[r, t]]
                    if U is not None:
                        U[[t, r]] = U[[r, t]]
                    continue
            row = A[t, t + 1 :]
            cols = np.nonzero(row)[0]
            if cols.size:
                q = row[cols] // piv
                idx = cols + t + 1
                axpy_cols(A, idx, q, t)
                if V is not None:
                    axpy_cols(V, idx, q, t)
                if A[t, t + 1 :].any():
                    c = t + 1 + int(np.nonzero(A[t, t + 1 :])[0][0])
                    A[:, [t, c]] = A[:, [c, t]]
                    if V is not None:
                        V[:, [t, c]] = V[:, [c, t]]
                    continue
            break
        piv = int(A[t, t])
        if piv != 1:
            # pivot must divide the remaining block for the divisibility chain
            rem = A[t + 1 :, t + 1 :] % piv
            bad = np.nonzero(rem.any(axis=1))[0]
            if bad.size:
                r = t + 1 + int(bad[0])
                if guard and int(abs(A[t]).max(initial=0)) + int(
                    abs(A[r]).max(initial=0)
                ) > (1 << 62):
                    raise _Overflow
                A[t] += A[r]
                if U is not None:
                    U[t] += U[r]
                continue
        t += 1
        if t == m or t == n:
            break

    factors = []
    for k in range(min(m, n)):
        v = abs(int(A[k, k]))
        if v == 0:
            break
        factors.append(v)
    for k in range(1, len(factors)):
        if factors[k] % factors[k - 1]:
            raise AssertionError("invariant factors violate divisibility")
    return SNFResult(invariant_factors=tuple(factors), rank=len(factors), U=U, V=V)


def smith_normal_form(a, with_transforms: bool = False) -> SNFResult:
    """Diagonalize an integer matrix by unimodular row/column operations.

    Returns the invariant factors d_1 | d_2 | ... (all positive, ones
    included) and optionally the transforms with ``U @ A @ V`` diagonal.
    Runs on int64 with a growth guard and retries with arbitrary-precision
    integers when entries threaten to overflow.
    """
    arr = np.asarray(a)
    if arr.ndim != 2:
        arr = arr.reshape(len(arr), -1)
    if arr.size == 0:
        return SNFResult(invariant_factors=(), rank=0)
    if arr.dtype != object and np.abs(arr.astype(np.int64)).max(initial=0) < (1 << 60):
        try:
            return _snf_core(arr.astype(np.int64).copy(), with_transforms, guard=True)
        except _Overflow:
            pass
    big = np.empty(arr.shape, dtype=object)
    for i, row in enumerate(arr):
        for j, v in enumerate(row):
            big[i, j] = int(v)
    return _snf_core(big, with_transforms, guard=False)
