"""Cubical chain complexes of rack spaces and their structure maps.

Degree-n cells of the space built from an X-set Y are the tuples
``(y; x_1, ..., x_n)``, ordered lexicographically.  The two face families
are

    face0_i : drop x_i
    face1_i : (y*x_i; x_1*x_i, ..., x_{i-1}*x_i, x_{i+1}, ..., x_n)

and the boundary is ``d = d0 - d1`` with ``d_eps = sum_i (-1)^i face_eps_i``,
the index i running from 1.  All matrices are exact integer (or mod-p)
data; compositions such as d0*d0, d0*d1 + d1*d0 and d*d must vanish as
matrices, not up to tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Literal, Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .quandles import InvalidStructureError, XSetAction, check_axioms

__all__ = [
    "Ring",
    "ZZ",
    "GF",
    "CellCapExceededError",
    "TupleBasis",
    "SubBasis",
    "SparseMatrix",
    "SparseVector",
    "ComplexSlice",
    "boundary_matrices",
    "quandle_quotient",
    "degenerate_indices",
    "face_tuple",
    "psi_matrix",
    "p_matrix",
    "d_matrix",
    "structure_maps",
    "mu_tuple",
    "mu_index_table",
    "mu_chain",
    "verify_chain_map",
    "RackSpace",
]

DEFAULT_CELL_CAP = 10_000_000


class CellCapExceededError(RuntimeError):
    """A requested degree would allocate more cells than the configured cap."""


@dataclass(frozen=True)
class Ring:
    """Coefficient ring: the integers (p=0) or the prime field F_p."""

    p: int = 0

    def __post_init__(self) -> None:
        if self.p < 0:
            raise ValueError("p must be 0 (integers) or a prime")
        if self.p and any(self.p % k == 0 for k in range(2, int(self.p**0.5) + 1)):
            raise ValueError(f"{self.p} is not prime")

    @property
    def is_field(self) -> bool:
        return self.p != 0

    def normalize(self, v: int) -> int:
        return v % self.p if self.p else v

    def __str__(self) -> str:
        return f"F{self.p}" if self.p else "Z"

    @staticmethod
    def parse(text: str) -> "Ring":
        t = text.strip().lower()
        if t in ("z", "int", "integers"):
            return ZZ
        if t.startswith("f"):
            return Ring(int(t[1:]))
        raise ValueError(f"unknown ring {text!r}")


ZZ = Ring(0)


def GF(p: int) -> Ring:
    return Ring(p)


@dataclass(frozen=True)
class TupleBasis:
    """The cells ``(y; x_1..x_n)`` in lexicographic order by (y, x_1, ..., x_n)."""

    y_size: int
    x_size: int
    degree: int

    def __len__(self) -> int:
        return self.y_size * self.x_size**self.degree

    def index_of(self, tup: Sequence[int]) -> int:
        if len(tup) != self.degree + 1:
            raise ValueError(f"tuple length {len(tup)} != degree+1 = {self.degree + 1}")
        idx = tup[0]
        for v in tup[1:]:
            idx = idx * self.x_size + v
        return idx

    def tuple_of(self, index: int) -> tuple[int, ...]:
        coords = []
        for _ in range(self.degree):
            index, r = divmod(index, self.x_size)
            coords.append(r)
        coords.append(index)
        return tuple(reversed(coords))

    def tuples(self) -> Iterator[tuple[int, ...]]:
        for i in range(len(self)):
            yield self.tuple_of(i)

    def array(self) -> np.ndarray:
        """All cells as an (N, degree+1) array, row i = tuple_of(i)."""
        n = self.degree
        N = len(self)
        out = np.empty((N, n + 1), dtype=np.int64)
        idx = np.arange(N)
        for j in range(n, 0, -1):
            idx, out[:, j] = np.divmod(idx, self.x_size)
        out[:, 0] = idx
        return out

    def encode(self, cols: Sequence[np.ndarray]) -> np.ndarray:
        """Vectorized index_of: cols = [y, x_1, ..., x_n] as equal-shape arrays."""
        if len(cols) != self.degree + 1:
            raise ValueError("wrong number of coordinate columns")
        idx = np.asarray(cols[0], dtype=np.int64).copy()
        for c in cols[1:]:
            idx *= self.x_size
            idx += c
        return idx


@dataclass(frozen=True)
class SubBasis:
    """A sub-list of a TupleBasis, e.g. the degenerate cells."""

    parent: TupleBasis
    indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.indices)

    def tuple_of(self, i: int) -> tuple[int, ...]:
        return self.parent.tuple_of(self.indices[i])

    def tuples(self) -> Iterator[tuple[int, ...]]:
        for i in self.indices:
            yield self.parent.tuple_of(i)

    @property
    def degree(self) -> int:
        return self.parent.degree


class SparseMatrix:
    """Column-major sparse matrix with exact integer (or mod-p) entries."""

    def __init__(
        self,
        shape: tuple[int, int],
        rows: np.ndarray,
        cols: np.ndarray,
        vals: np.ndarray,
        ring: Ring = ZZ,
    ):
        self.shape = (int(shape[0]), int(shape[1]))
        order = np.lexsort((rows, cols))
        self.rows = np.asarray(rows, dtype=np.int64)[order]
        self.cols = np.asarray(cols, dtype=np.int64)[order]
        self.vals = np.asarray(vals, dtype=np.int64)[order]
        self.ring = ring
        self._csc: Optional[sp.csc_matrix] = None

    # -- constructors -------------------------------------------------

    @classmethod
    def from_triplets(cls, shape, triplets, ring: Ring = ZZ) -> "SparseMatrix":
        trip = list(triplets)
        if not trip:
            z = np.zeros(0, dtype=np.int64)
            return cls(shape, z, z, z, ring)
        r, c, v = zip(*trip)
        m = sp.coo_matrix(
            (np.array(v, dtype=np.int64), (np.array(r), np.array(c))), shape=shape
        ).tocsc()
        return cls.from_csc(m, ring)

    @classmethod
    def from_csc(cls, m: sp.spmatrix, ring: Ring = ZZ) -> "SparseMatrix":
        m = m.tocsc()
        m.sum_duplicates()
        if ring.is_field:
            m.data %= ring.p
        m.eliminate_zeros()
        coo = m.tocoo()
        out = cls(m.shape, coo.row, coo.col, coo.data, ring)
        return out

    @classmethod
    def from_dense(cls, arr, ring: Ring = ZZ) -> "SparseMatrix":
        a = np.asarray(arr, dtype=np.int64)
        if ring.is_field:
            a = a % ring.p
        r, c = np.nonzero(a)
        return cls(a.shape, r, c, a[r, c], ring)

    @classmethod
    def zeros(cls, shape, ring: Ring = ZZ) -> "SparseMatrix":
        z = np.zeros(0, dtype=np.int64)
        return cls(shape, z, z, z, ring)

    # -- views ---------------------------------------------------------

    def tocsc(self) -> sp.csc_matrix:
        if self._csc is None:
            self._csc = sp.csc_matrix(
                (self.vals, (self.rows, self.cols)), shape=self.shape, dtype=np.int64
            )
        return self._csc

    def todense(self) -> np.ndarray:
        return np.asarray(self.tocsc().todense(), dtype=np.int64)

    def column(self, j: int) -> list[tuple[int, int]]:
        mask = self.cols == j
        return list(zip(self.rows[mask].tolist(), self.vals[mask].tolist()))

    def columns(self) -> Iterator[list[tuple[int, int]]]:
        for j in range(self.shape[1]):
            yield self.column(j)

    @property
    def nnz(self) -> int:
        return len(self.vals)

    # -- algebra --------------------------------------------------------

    def _wrap(self, m: sp.spmatrix) -> "SparseMatrix":
        return SparseMatrix.from_csc(m, self.ring)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return self._wrap(self.tocsc() @ other.tocsc())

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._wrap(self.tocsc() + other.tocsc())

    def __sub__(self, other: "SparseMatrix") -> "SparseMatrix":
        return self._wrap(self.tocsc() - other.tocsc())

    def scaled(self, c: int) -> "SparseMatrix":
        return self._wrap(self.tocsc() * int(c))

    def transpose(self) -> "SparseMatrix":
        return SparseMatrix(
            (self.shape[1], self.shape[0]), self.cols, self.rows, self.vals, self.ring
        )

    def apply(self, vec: np.ndarray) -> np.ndarray:
        out = self.tocsc() @ np.asarray(vec, dtype=np.int64)
        return out % self.ring.p if self.ring.is_field else out

    def restrict(self, row_indices, col_indices) -> "SparseMatrix":
        """Submatrix on the given index lists (in their given order)."""
        m = self.tocsc()[np.asarray(row_indices)][:, np.asarray(col_indices)]
        return SparseMatrix.from_csc(m, self.ring)

    def is_zero(self) -> bool:
        return self.nnz == 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    def __repr__(self) -> str:
        return f"SparseMatrix({self.shape[0]}x{self.shape[1]}, nnz={self.nnz}, {self.ring})"

    # -- interchange -----------------------------------------------------

    def to_sms(self) -> str:
        """Sparse triplet text: header "rows cols ring", then 1-based "i j v" lines."""
        lines = [f"{self.shape[0]} {self.shape[1]} {self.ring}"]
        for r, c, v in zip(self.rows, self.cols, self.vals):
            lines.append(f"{r + 1} {c + 1} {v}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_sms(cls, text: str) -> "SparseMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        rows_s, cols_s, ring_s = lines[0].split()
        ring = Ring.parse(ring_s)
        trip = []
        for ln in lines[1:]:
            i, j, v = ln.split()
            trip.append((int(i) - 1, int(j) - 1, int(v)))
        return cls.from_triplets((int(rows_s), int(cols_s)), trip, ring)


@dataclass(frozen=True)
class SparseVector:
    """Mapping position -> nonzero coefficient, tagged with its ring."""

    dim: int
    entries: dict[int, int]
    ring: Ring = ZZ

    @classmethod
    def from_dense(cls, vec, ring: Ring = ZZ) -> "SparseVector":
        v = np.asarray(vec)
        entries = {}
        for i in np.nonzero(v)[0]:
            val = ring.normalize(int(v[i]))
            if val:
                entries[int(i)] = val
        return cls(dim=len(v), entries=entries, ring=ring)

    def todense(self) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for i, v in self.entries.items():
            out[i] = v
        return out


Variant = Literal["full", "rack", "degenerate", "quandle"]


@dataclass(frozen=True)
class ComplexSlice:
    """One degree of a complex: basis plus the boundary matrices into degree n-1."""

    xset: XSetAction
    degree: int
    basis: TupleBasis | SubBasis
    d0: SparseMatrix
    d1: SparseMatrix
    d: SparseMatrix
    variant: Variant = "full"


def _face_targets(xset: XSetAction, cells: np.ndarray, i: int, eps: int) -> np.ndarray:
    """Vectorized face map on an (N, n+1) cell array; returns (N, n) targets."""
    n = cells.shape[1] - 1
    if not 1 <= i <= n:
        raise ValueError(f"face index {i} out of range 1..{n}")
    if eps == 0:
        keep = [0] + [j for j in range(1, n + 1) if j != i]
        return cells[:, keep]
    star = np.asarray(xset.star, dtype=np.int64)
    op = np.asarray(xset.quandle.table, dtype=np.int64)
    xi = cells[:, i]
    out = np.empty((cells.shape[0], n), dtype=np.int64)
    out[:, 0] = star[cells[:, 0], xi]
    for j in range(1, i):
        out[:, j] = op[cells[:, j], xi]
    for j in range(i + 1, n + 1):
        out[:, j - 1] = cells[:, j]
    return out


def face_tuple(xset: XSetAction, tup: Sequence[int], i: int, eps: int) -> tuple[int, ...]:
    """Single-cell face map; the workhorse for triangulation and spot checks."""
    arr = np.asarray([tup], dtype=np.int64)
    return tuple(int(v) for v in _face_targets(xset, arr, i, eps)[0])


def boundary_matrices(
    xset: XSetAction,
    n: int,
    ring: Ring = ZZ,
    cell_cap: int = DEFAULT_CELL_CAP,
) -> ComplexSlice:
    """Build the degree-n slice with its three boundary matrices."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    X = xset.quandle
    basis = TupleBasis(xset.y_size, X.size, n)
    if len(basis) > cell_cap:
        raise CellCapExceededError(
            f"degree {n} needs {len(basis)} cells, above the cap {cell_cap}"
        )
    lower = TupleBasis(xset.y_size, X.size, n - 1) if n > 0 else None
    N = len(basis)
    if n == 0:
        shape = (0, N)
        return ComplexSlice(
            xset=xset,
            degree=n,
            basis=basis,
            d0=SparseMatrix.zeros(shape, ring),
            d1=SparseMatrix.zeros(shape, ring),
            d=SparseMatrix.zeros(shape, ring),
            variant="rack" if xset.tag == "point" else "full",
        )
    cells = basis.array()
    cols = np.arange(N, dtype=np.int64)
    parts0, parts1 = [], []
    for i in range(1, n + 1):
        sign = -1 if i % 2 else 1
        t0 = lower.encode(list(_face_targets(xset, cells, i, 0).T))
        t1 = lower.encode(list(_face_targets(xset, cells, i, 1).T))
        parts0.append((t0, sign))
        parts1.append((t1, sign))

    def assemble(parts) -> SparseMatrix:
        rows = np.concatenate([t for t, _ in parts])
        vals = np.concatenate(
            [np.full(N, s, dtype=np.int64) for _, s in parts]
        )
        ccols = np.tile(cols, len(parts))
        m = sp.coo_matrix((vals, (rows, ccols)), shape=(len(lower), N)).tocsc()
        return SparseMatrix.from_csc(m, ring)

    d0 = assemble(parts0)
    d1 = assemble(parts1)
    d = d0 - d1
    return ComplexSlice(
        xset=xset,
        degree=n,
        basis=basis,
        d0=d0,
        d1=d1,
        d=d,
        variant="rack" if xset.tag == "point" else "full",
    )


def degenerate_indices(basis: TupleBasis) -> np.ndarray:
    """Indices of cells with x_i == x_{i+1} for some i."""
    if basis.degree < 2:
        return np.zeros(0, dtype=np.int64)
    cells = basis.array()
    xs = cells[:, 1:]
    mask = (xs[:, :-1] == xs[:, 1:]).any(axis=1)
    return np.nonzero(mask)[0]


def quandle_quotient(
    slice_full: ComplexSlice, variant: Literal["quandle", "degenerate"] = "quandle"
) -> ComplexSlice:
    """Restrict a point-space slice to the degenerate cells or their complement.

    The degenerate cells span a subcomplex only when the operation is a
    quandle, which is checked both via the axioms and by verifying closure
    of each boundary family; the quandle variant projects boundary entries
    onto the non-degenerate cells.
    """
    if slice_full.variant not in ("full", "rack") or slice_full.xset.tag != "point":
        raise InvalidStructureError("quotient is defined for the point-space complex")
    if not check_axioms(slice_full.xset.quandle).is_quandle:
        raise InvalidStructureError(
            "degeneracy subcomplex requires a quandle; not closed for general racks"
        )
    basis = slice_full.basis
    assert isinstance(basis, TupleBasis)
    n = slice_full.degree
    lower = TupleBasis(basis.y_size, basis.x_size, n - 1) if n > 0 else None
    deg_idx = degenerate_indices(basis)
    deg_lower = degenerate_indices(lower) if lower is not None else np.zeros(0, np.int64)
    all_idx = np.arange(len(basis))
    q_idx = np.setdiff1d(all_idx, deg_idx, assume_unique=True)
    q_lower = (
        np.setdiff1d(np.arange(len(lower)), deg_lower, assume_unique=True)
        if lower is not None
        else np.zeros(0, np.int64)
    )

    if variant == "degenerate":
        keep_cols, keep_rows = deg_idx, deg_lower
        # closure: boundary entries of degenerate cells must stay degenerate
        other_rows = q_lower
        for mat, name in ((slice_full.d0, "d0"), (slice_full.d1, "d1")):
            if len(deg_idx) and lower is not None:
                leak = mat.restrict(other_rows, deg_idx)
                if not leak.is_zero():
                    raise InvalidStructureError(
                        f"degenerate cells are not closed under {name}"
                    )
    else:
        keep_cols, keep_rows = q_idx, q_lower

    if lower is None:
        d0 = SparseMatrix.zeros((0, len(keep_cols)), slice_full.d0.ring)
        d1 = SparseMatrix.zeros((0, len(keep_cols)), slice_full.d0.ring)
    else:
        d0 = slice_full.d0.restrict(keep_rows, keep_cols)
        d1 = slice_full.d1.restrict(keep_rows, keep_cols)
    return ComplexSlice(
        xset=slice_full.xset,
        degree=n,
        basis=SubBasis(basis, tuple(int(i) for i in keep_cols)),
        d0=d0,
        d1=d1,
        d=d0 - d1,
        variant=variant,
    )


# ---------------------------------------------------------------------------
# psi / P / D
# ---------------------------------------------------------------------------


def _index_map_matrix(
    targets: np.ndarray, sign: int, rows: int, ring: Ring
) -> SparseMatrix:
    N = len(targets)
    return SparseMatrix.from_csc(
        sp.coo_matrix(
            (np.full(N, sign, dtype=np.int64), (targets, np.arange(N))),
            shape=(rows, N),
        ).tocsc(),
        ring,
    )


def psi_matrix(self_xset: XSetAction, n: int, ring: Ring = ZZ) -> SparseMatrix:
    """The degree-shift isomorphism C_n(point) -> C_{n-1}(X;X).

    Sends ``(x_1,...,x_n)`` to ``(-1)^(n-1) (x_1; x_2,...,x_n)``; with the
    lexicographic indexing this is a signed identity.
    """
    if n < 1:
        raise ValueError("the shift map needs degree >= 1")
    d = self_xset.quandle.size
    N = d**n
    sign = 1 if (n - 1) % 2 == 0 else -1
    return _index_map_matrix(np.arange(N), sign, N, ring)


def p_matrix(self_xset: XSetAction, n: int, ring: Ring = ZZ) -> SparseMatrix:
    """The shift-projection P: C_n(X;X) -> C_{n-1}(X;X), zero in degree 0.

    ``(y; z_1, ..., z_n) -> (-1)^(n+1) (z_1; z_2, ..., z_n)``.
    """
    d = self_xset.quandle.size
    N = d ** (n + 1)
    if n == 0:
        return SparseMatrix.zeros((0, N), ring)
    targets = np.arange(N) % (d**n)
    sign = 1 if (n + 1) % 2 == 0 else -1
    return _index_map_matrix(targets, sign, d**n, ring)


def d_matrix(self_xset: XSetAction, n: int, ring: Ring = ZZ) -> SparseMatrix:
    """The diagonal insertion D: C_n(X;X) -> C_{n+1}(X;X), quandles only.

    ``(y; z_1, ..., z_n) -> (-1)^n (y; y, z_1, ..., z_n)``; P D = identity.
    """
    if not check_axioms(self_xset.quandle).is_quandle:
        raise InvalidStructureError("the diagonal insertion map requires a quandle")
    d = self_xset.quandle.size
    N = d ** (n + 1)
    idx = np.arange(N)
    ys, rest = np.divmod(idx, d**n)
    targets = ys * (d ** (n + 1)) + ys * (d**n) + rest
    sign = 1 if n % 2 == 0 else -1
    return _index_map_matrix(targets, sign, d ** (n + 2), ring)


def structure_maps(self_xset: XSetAction, n: int, ring: Ring = ZZ) -> dict[str, SparseMatrix]:
    """psi, P and D in degree n (D only when the operation is a quandle)."""
    if self_xset.tag != "self":
        raise InvalidStructureError("structure maps live on the self-action complex")
    out = {
        "psi": psi_matrix(self_xset, max(n, 1), ring),
        "P": p_matrix(self_xset, n, ring),
    }
    if check_axioms(self_xset.quandle).is_quandle:
        out["D"] = d_matrix(self_xset, n, ring)
    return out


# ---------------------------------------------------------------------------
# the pairing mu
# ---------------------------------------------------------------------------


def _require_same_aug(y_xset: XSetAction, g_xset: XSetAction) -> None:
    if g_xset.tag != "group" or g_xset.aug is None:
        raise InvalidStructureError("the right factor must live on the group X-set")
    if y_xset.aug is None or y_xset.aug is not g_xset.aug:
        raise InvalidStructureError("both factors must share one augmentation")


def mu_tuple(
    y_xset: XSetAction,
    g_xset: XSetAction,
    a: Sequence[int],
    b: Sequence[int],
) -> tuple[int, ...]:
    """mu((y; x_1..x_m) (x) (g; x'_1..x'_k)) = (y.g; x_1 g, ..., x_m g, x'_1..x'_k)."""
    _require_same_aug(y_xset, g_xset)
    aug = g_xset.aug
    g = b[0]
    head = y_xset.y_group_action(a[0], g)
    acted = tuple(aug.action[x][g] for x in a[1:])
    return (head,) + acted + tuple(b[1:])


def mu_index_table(
    y_xset: XSetAction, g_xset: XSetAction, k: int, m: int
) -> np.ndarray:
    """Index table of mu on basis cells: entry [i, j] is the target index.

    Left factor from C_k(Y;X), right from C_m(G;X); vectorized over all
    pairs at once.
    """
    _require_same_aug(y_xset, g_xset)
    aug = g_xset.aug
    X = y_xset.quandle
    A = TupleBasis(y_xset.y_size, X.size, k).array()
    B = TupleBasis(g_xset.y_size, X.size, m).array()
    out_basis = TupleBasis(y_xset.y_size, X.size, k + m)
    gcol = B[:, 0]
    if y_xset.tag == "point":
        head = np.zeros((A.shape[0], B.shape[0]), dtype=np.int64)
    elif y_xset.tag == "self":
        act = np.asarray(aug.action, dtype=np.int64)
        head = act[A[:, 0][:, None], gcol[None, :]]
    else:
        mul = np.asarray(aug.g.mul, dtype=np.int64)
        head = mul[A[:, 0][:, None], gcol[None, :]]
    act = np.asarray(aug.action, dtype=np.int64)
    cols = [head]
    for j in range(1, k + 1):
        cols.append(act[A[:, j][:, None], gcol[None, :]])
    for j in range(1, m + 1):
        cols.append(np.broadcast_to(B[:, j][None, :], head.shape))
    return out_basis.encode(cols)


def mu_chain(
    y_xset: XSetAction,
    g_xset: XSetAction,
    a_vec: np.ndarray,
    b_vec: np.ndarray,
    k: int,
    m: int,
    ring: Ring = ZZ,
) -> np.ndarray:
    """Bilinear extension of mu to chain vectors."""
    table = mu_index_table(y_xset, g_xset, k, m)
    out = np.zeros(y_xset.y_size * y_xset.quandle.size ** (k + m), dtype=np.int64)
    a = np.asarray(a_vec, dtype=np.int64)
    b = np.asarray(b_vec, dtype=np.int64)
    ai = np.nonzero(a)[0]
    bi = np.nonzero(b)[0]
    for i in ai:
        np.add.at(out, table[i, bi], a[i] * b[bi])
    return out % ring.p if ring.is_field else out


def verify_chain_map(
    maps: dict[int, SparseMatrix],
    src: dict[int, ComplexSlice],
    dst: dict[int, ComplexSlice],
    degree_shift: int = 0,
    sign: int = 1,
) -> tuple[bool, Optional[tuple[int, int]]]:
    """Check dst.d o f = sign * f o src.d at every degree carrying both maps.

    Returns (ok, witness) where the witness is (degree, basis index) of
    the first failing column.
    """
    for n, f_n in sorted(maps.items()):
        f_prev = maps.get(n - 1)
        if f_prev is None or n not in src:
            continue
        m = n + degree_shift
        if m not in dst:
            continue
        lhs = dst[m].d @ f_n
        rhs = (f_prev @ src[n].d).scaled(sign)
        diff = lhs - rhs
        if not diff.is_zero():
            col = int(diff.cols[0])
            return False, (n, col)
    return True, None


class RackSpace:
    """Cached bases and boundary matrices of one space B(Y;X)."""

    def __init__(self, xset: XSetAction, cell_cap: int = DEFAULT_CELL_CAP):
        self.xset = xset
        self.cell_cap = cell_cap
        self._slices: dict[int, ComplexSlice] = {}

    @property
    def quandle(self):
        return self.xset.quandle

    def cells(self, n: int) -> int:
        return self.xset.y_size * self.quandle.size**n

    def basis(self, n: int) -> TupleBasis:
        return TupleBasis(self.xset.y_size, self.quandle.size, n)

    def slice(self, n: int) -> ComplexSlice:
        if n not in self._slices:
            self._slices[n] = boundary_matrices(self.xset, n, ZZ, self.cell_cap)
        return self._slices[n]

    def boundary(self, n: int) -> SparseMatrix:
        return self.slice(n).d

    def slices_up_to(self, n: int) -> dict[int, ComplexSlice]:
        return {k: self.slice(k) for k in range(n + 1)}
