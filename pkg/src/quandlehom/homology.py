"""Homology and cohomology of a complex slice sequence, plus the Bockstein.

Field homology comes from exact Gaussian elimination, integral homology
from the Smith normal form of consecutive boundaries; both return
representatives where meaningful.  The Bockstein is implemented at chain
level: lift a mod-p cycle to integer coefficients in [0, p), take the
integral boundary, divide by p exactly, reduce mod p.  The cochain
version is the transpose and may differ from the classical operator by a
global sign.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .complexes import ComplexSlice, Ring, SparseMatrix, SparseVector, ZZ
from .linalg import SpanFP, eliminate_fp, rank_fp, smith_normal_form, solve_fp

__all__ = [
    "HomologyResult",
    "ClassRep",
    "homology_fp",
    "cohomology_fp",
    "homology_z",
    "bockstein_chain",
    "bockstein_cochain",
    "FpQuotientBasis",
]


@dataclass(frozen=True)
class HomologyResult:
    """Free rank, invariant-factor torsion, and cycle representatives."""

    degree: int
    free_rank: int
    torsion: tuple[int, ...]
    ring: Ring
    cycle_reps: tuple[SparseVector, ...] = ()

    @property
    def field_dim(self) -> Optional[int]:
        return self.free_rank if self.ring.is_field else None

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "rank": self.free_rank,
            "torsion": list(self.torsion),
            "field_dim": self.field_dim,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def __str__(self) -> str:
        if self.ring.is_field:
            return f"H_{self.degree}(F{self.ring.p}) dim {self.free_rank}"
        parts = ["Z"] * self.free_rank + [f"Z/{t}" for t in self.torsion]
        return f"H_{self.degree}(Z) = " + (" + ".join(parts) if parts else "0")


@dataclass(frozen=True)
class ClassRep:
    """A (co)cycle representative of a homology class."""

    degree: int
    vector: SparseVector
    ring: Ring


def _check_compatible(d_n: SparseMatrix, d_np1: SparseMatrix, degree: int) -> None:
    if d_n.shape[1] != d_np1.shape[0]:
        raise ValueError(
            f"incompatible slices at degree {degree}: d_n has {d_n.shape[1]} columns "
            f"but d_(n+1) has {d_np1.shape[0]} rows"
        )
    if not (d_n @ d_np1).is_zero():
        raise ValueError(f"boundary composition is nonzero entering degree {degree}")


def homology_fp(
    d_n: SparseMatrix,
    d_np1: SparseMatrix,
    p: int,
    degree: int = 0,
    want_reps: bool = False,
    check: bool = True,
) -> HomologyResult:
    """dim H_n = dim ker d_n - rank d_(n+1), with reps completing the image."""
    if check:
        _check_compatible(d_n, d_np1, degree)
    ring = Ring(p)
    n_cols = d_n.shape[1]
    rank_dn = rank_fp(d_n.todense(), p) if d_n.shape[0] else 0
    rank_dnp1 = rank_fp(d_np1.todense(), p) if d_np1.shape[1] else 0
    dim = n_cols - rank_dn - rank_dnp1
    reps: tuple[SparseVector, ...] = ()
    if want_reps:
        span = SpanFP(n_cols, p)
        if d_np1.shape[1]:
            span.add_all(d_np1.todense() % p)
        found = []
        if d_n.shape[0]:
            kernel = eliminate_fp(d_n.todense(), p).kernel_basis
        else:
            kernel = np.eye(n_cols, dtype=np.int64)
        for v in kernel.T:
            if span.add(v):
                found.append(SparseVector.from_dense(np.asarray(v) % p, ring))
        if len(found) != dim:
            raise AssertionError("cycle representative count disagrees with dimension")
        reps = tuple(found)
    return HomologyResult(
        degree=degree, free_rank=dim, torsion=(), ring=ring, cycle_reps=reps
    )


def cohomology_fp(
    d_n: SparseMatrix,
    d_np1: SparseMatrix,
    p: int,
    degree: int = 0,
    want_reps: bool = False,
    check: bool = True,
) -> HomologyResult:
    """H^n of the dual complex: transpose both boundaries and swap roles."""
    if check:
        _check_compatible(d_n, d_np1, degree)
    return homology_fp(
        d_np1.transpose(), d_n.transpose(), p, degree=degree, want_reps=want_reps,
        check=False,
    )


def homology_z(
    d_n: SparseMatrix,
    d_np1: SparseMatrix,
    degree: int = 0,
    check: bool = True,
) -> HomologyResult:
    """Integral homology via Smith normal form of both boundaries."""
    if check:
        _check_compatible(d_n, d_np1, degree)
    n_cols = d_n.shape[1]
    rank_dn = (
        smith_normal_form(d_n.todense()).rank if d_n.shape[0] and d_n.nnz else 0
    )
    if d_np1.shape[1] and d_np1.nnz:
        snf = smith_normal_form(d_np1.todense())
        rank_dnp1 = snf.rank
        torsion = tuple(v for v in snf.invariant_factors if v > 1)
    else:
        rank_dnp1 = 0
        torsion = ()
    return HomologyResult(
        degree=degree,
        free_rank=n_cols - rank_dn - rank_dnp1,
        torsion=torsion,
        ring=ZZ,
    )


def universal_coefficients_dim(z_results: Sequence[HomologyResult], p: int, n: int) -> int:
    """Predicted dim H_n(F_p) from integral data: rank + t_n + t_(n-1)."""
    by_degree = {r.degree: r for r in z_results}
    t = lambda k: sum(1 for v in by_degree[k].torsion if v % p == 0) if k in by_degree else 0
    return by_degree[n].free_rank + t(n) + t(n - 1)


def bockstein_chain(z_modp: np.ndarray, d_int: SparseMatrix, p: int) -> np.ndarray:
    """Connecting map on chains: lift, integral boundary, exact division by p.

    ``z_modp`` must be a cycle mod p; its lift with coefficients in [0, p)
    has an integral boundary divisible by p, and the quotient reduced mod
    p is an integral-Bockstein representative one degree down.
    """
    lift = np.asarray(z_modp, dtype=np.int64) % p
    bd = d_int.tocsc() @ lift
    if np.any(bd % p):
        raise ValueError("input is not a cycle mod p")
    return (bd // p) % p


def bockstein_cochain(f_modp: np.ndarray, d_int_above: SparseMatrix, p: int) -> np.ndarray:
    """Cochain Bockstein: same recipe through the transposed boundary."""
    return bockstein_chain(f_modp, d_int_above.transpose(), p)


class FpQuotientBasis:
    """Basis bookkeeping for H = ker(d_n) / im(d_(n+1)) over F_p.

    Holds cycle representatives and answers coordinate queries: a cycle is
    reduced against the boundary span and then resolved against the
    representative span; ``coords`` fails loudly for non-classes.
    """

    def __init__(self, d_n: SparseMatrix, d_np1: SparseMatrix, p: int, degree: int = 0):
        self.p = p
        self.degree = degree
        self.dim_chains = d_n.shape[1]
        res = homology_fp(d_n, d_np1, p, degree=degree, want_reps=True)
        self.result = res
        self.reps = np.array(
            [rep.todense() for rep in res.cycle_reps], dtype=np.int64
        ).reshape(len(res.cycle_reps), self.dim_chains)
        self._bspan = SpanFP(self.dim_chains, p)
        if d_np1.shape[1]:
            self._bspan.add_all(d_np1.todense() % p)
        self._d_n = d_n

    @property
    def dim(self) -> int:
        return len(self.reps)

    def is_cycle(self, vec: np.ndarray) -> bool:
        if self._d_n.shape[0] == 0:
            return True
        return not (self._d_n.apply(np.asarray(vec, dtype=np.int64) % self.p) % self.p).any()

    def is_boundary(self, vec: np.ndarray) -> bool:
        return self._bspan.contains(vec)

    def coords(self, vec: np.ndarray) -> np.ndarray:
        """Coordinates of [vec] in the representative basis."""
        if not self.is_cycle(vec):
            raise ValueError("vector is not a cycle")
        if self.dim == 0:
            if not self.is_boundary(vec):
                raise ValueError("nonzero class in a zero-dimensional quotient")
            return np.zeros(0, dtype=np.int64)
        # solve [reps | boundaries] * x = vec and keep the rep block
        sol = solve_fp(
            np.concatenate(
                [self.reps.T, self._bspan._rows.T], axis=1
            )
            if self._bspan.rank
            else self.reps.T,
            np.asarray(vec, dtype=np.int64) % self.p,
            self.p,
        )
        if sol is None:
            raise ValueError("cycle is not expressible in the given basis")
        return np.asarray(sol[: self.dim], dtype=np.int64) % self.p
