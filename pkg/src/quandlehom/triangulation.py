"""Triangulation of the cubical space and the simplicial cup comparison.

A k-simplex is a pair (cell, S) of an ambient n-cell and an ordered
partition of [1..n] into k nonempty blocks.  Faces either act on the
cell through a whole block (first and last face) or merge two adjacent
blocks; the alternating-sum map over permutations embeds cubical chains
into simplicial ones, and under it the cubical cup product agrees with
the front-face/back-face product.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, Optional, Sequence

import numpy as np

from .complexes import RackSpace, TupleBasis, face_tuple
from .quandles import XSetAction

__all__ = ["DeltaSimplex", "Triangulation", "triangulate_compare", "TriangulationReport"]


@dataclass(frozen=True, order=True)
class DeltaSimplex:
    """(ambient cell, ordered partition); the simplicial degree is len(blocks)."""

    ambient_degree: int
    cell: tuple[int, ...]
    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = self.ambient_degree
        seen: set[int] = set()
        for blk in self.blocks:
            if not blk:
                raise ValueError("empty partition block")
            if any(not 1 <= v <= n for v in blk):
                raise ValueError(f"block {blk} escapes [1..{n}]")
            if seen & set(blk):
                raise ValueError("partition blocks overlap")
            seen |= set(blk)
        if len(seen) != n:
            raise ValueError("partition does not cover the coordinate set")

    @property
    def degree(self) -> int:
        return len(self.blocks)


def _relabel(blocks: Sequence[tuple[int, ...]], removed: Iterable[int]) -> tuple:
    """Order-preserving relabeling of [n] - removed onto [n - #removed]."""
    removed = set(removed)
    mapping: dict[int, int] = {}
    nxt = 1
    top = max((max(b) for b in blocks), default=0)
    for v in range(1, top + max(len(removed), 1) + 1):
        if v in removed:
            continue
        mapping[v] = nxt
        nxt += 1
    return tuple(tuple(mapping[v] for v in blk) for blk in blocks)


def _face_through_block(
    xset: XSetAction, cell: tuple[int, ...], block: tuple[int, ...], eps: int
) -> tuple[int, ...]:
    out = cell
    for b in sorted(block, reverse=True):
        out = face_tuple(xset, out, b, eps)
    return out


class Triangulation:
    """All simplices over the cells of one space up to an ambient degree."""

    def __init__(self, space: RackSpace, max_ambient: int):
        self.space = space
        self.max_ambient = max_ambient
        self.simplices: dict[int, list[DeltaSimplex]] = {}
        self.index: dict[DeltaSimplex, int] = {}
        for n in range(max_ambient + 1):
            basis = space.basis(n)
            for ci in range(len(basis)):
                cell = basis.tuple_of(ci)
                for blocks in _ordered_partitions(n):
                    s = DeltaSimplex(n, cell, blocks)
                    self.simplices.setdefault(s.degree, []).append(s)
        for k, lst in self.simplices.items():
            lst.sort()
            for i, s in enumerate(lst):
                self.index[s] = i

    def count(self, k: int) -> int:
        return len(self.simplices.get(k, []))

    def face(self, s: DeltaSimplex, i: int) -> DeltaSimplex:
        """The i-th simplicial face, 0 <= i <= degree."""
        k = s.degree
        if not 0 <= i <= k:
            raise ValueError(f"face index {i} out of range 0..{k}")
        if i == 0:
            blk = s.blocks[0]
            cell = _face_through_block(self.space.xset, s.cell, blk, 1)
            rest = _relabel(s.blocks[1:], blk)
            return DeltaSimplex(s.ambient_degree - len(blk), cell, rest)
        if i == k:
            blk = s.blocks[-1]
            cell = _face_through_block(self.space.xset, s.cell, blk, 0)
            rest = _relabel(s.blocks[:-1], blk)
            return DeltaSimplex(s.ambient_degree - len(blk), cell, rest)
        merged = tuple(sorted(s.blocks[i - 1] + s.blocks[i]))
        blocks = s.blocks[: i - 1] + (merged,) + s.blocks[i + 1 :]
        return DeltaSimplex(s.ambient_degree, s.cell, blocks)

    def check_relations(self) -> Optional[tuple]:
        """delta_(j-1) delta_i == delta_i delta_j for i < j; None when clean."""
        for k, lst in self.simplices.items():
            if k < 2:
                continue
            for s in lst:
                for j in range(1, k + 1):
                    for i in range(j):
                        lhs = self.face(self.face(s, j), i)
                        rhs = self.face(self.face(s, i), j - 1)
                        if lhs != rhs:
                            return (s, i, j)
        return None

    def tau_terms(self, cell: tuple[int, ...], n: int) -> list[tuple[DeltaSimplex, int]]:
        """The signed top-simplices of one n-cell, one per permutation."""
        out = []
        for perm in permutations(range(1, n + 1)):
            sign = _perm_sign(perm)
            blocks = tuple((v,) for v in perm)
            out.append((DeltaSimplex(n, cell, blocks), sign))
        return out

    def tau_matrix(self, n: int) -> np.ndarray:
        """Dense matrix of tau: C_n(cubical) -> C_n(simplicial)."""
        basis = self.space.basis(n)
        mat = np.zeros((self.count(n), len(basis)), dtype=np.int64)
        for ci in range(len(basis)):
            for s, sign in self.tau_terms(basis.tuple_of(ci), n):
                mat[self.index[s], ci] += sign
        return mat

    def boundary_matrix(self, k: int) -> np.ndarray:
        """Simplicial boundary sum_i (-1)^i delta_i restricted to the store."""
        lo = self.simplices.get(k - 1, [])
        hi = self.simplices.get(k, [])
        mat = np.zeros((len(lo), len(hi)), dtype=np.int64)
        for j, s in enumerate(hi):
            for i in range(k + 1):
                f = self.face(s, i)
                mat[self.index[f], j] += -1 if i % 2 else 1
        return mat

    def front_face(self, s: DeltaSimplex, k: int) -> DeltaSimplex:
        """delta_(k+1) ... delta_n applied right to left."""
        out = s
        for i in range(s.degree, k, -1):
            out = self.face(out, i)
        return out

    def back_face(self, s: DeltaSimplex, k: int) -> DeltaSimplex:
        out = s
        for _ in range(k):
            out = self.face(out, 0)
        return out

    def aw_cup(self, f: np.ndarray, k: int, g: np.ndarray, m: int) -> np.ndarray:
        """(f u g)(y) = (-1)^(km) f(front_(k)(y)) g(back_(k)(y)) on (k+m)-simplices."""
        sign = -1 if (k * m) % 2 else 1
        out = np.zeros(self.count(k + m), dtype=np.int64)
        for j, s in enumerate(self.simplices.get(k + m, [])):
            fv = int(f[self.index[self.front_face(s, k)]])
            gv = int(g[self.index[self.back_face(s, k)]])
            out[j] = sign * fv * gv
        return out

    def pullback(self, f: np.ndarray, n: int) -> np.ndarray:
        """tau^* f: a simplicial n-cochain restricted to cubical chains."""
        basis = self.space.basis(n)
        out = np.zeros(len(basis), dtype=np.int64)
        for ci in range(len(basis)):
            total = 0
            for s, sign in self.tau_terms(basis.tuple_of(ci), n):
                total += sign * int(f[self.index[s]])
            out[ci] = total
        return out


def _perm_sign(perm: Sequence[int]) -> int:
    inv = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _ordered_partitions(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """All ordered partitions of [1..n] into nonempty blocks (none for n=0 is the empty one)."""
    if n == 0:
        return [()]
    out: list[tuple[tuple[int, ...], ...]] = []

    def rec(remaining: frozenset, prefix: tuple) -> None:
        if not remaining:
            out.append(prefix)
            return
        items = sorted(remaining)
        # iterate nonempty subsets of the remaining coordinates
        for mask in range(1, 1 << len(items)):
            blk = tuple(items[i] for i in range(len(items)) if mask >> i & 1)
            rec(remaining - set(blk), prefix + (blk,))

    rec(frozenset(range(1, n + 1)), ())
    return out


@dataclass
class TriangulationReport:
    max_ambient: int
    relations_ok: bool
    chain_map_ok: bool
    cup_trials: int
    cup_failures: int
    counts: dict[int, int]

    @property
    def ok(self) -> bool:
        return self.relations_ok and self.chain_map_ok and self.cup_failures == 0

    def to_json_dict(self) -> dict:
        return {
            "max_ambient": self.max_ambient,
            "relations_ok": self.relations_ok,
            "chain_map_ok": self.chain_map_ok,
            "cup_trials": self.cup_trials,
            "cup_failures": self.cup_failures,
            "simplex_counts": {str(k): v for k, v in sorted(self.counts.items())},
            "ok": self.ok,
        }


def triangulate_compare(
    space: RackSpace,
    max_ambient: int,
    p: int,
    trials: int = 20,
    seed: int = 0,
) -> TriangulationReport:
    """Verify the triangulation against the cubical structure, exactly.

    Checks the simplicial face relations, that the alternating-sum map is
    a chain map, and that the cubical cup of pulled-back cochains equals
    the pullback of the front/back-face cup, on random cochains over F_p.
    """
    if max_ambient > 5:
        raise ValueError("ambient degree above 5 is blocked by the factorial blowup")
    from .cup import CupCalculus

    tri = Triangulation(space, max_ambient)
    relations_ok = tri.check_relations() is None

    chain_map_ok = True
    for n in range(1, max_ambient + 1):
        tau_n = tri.tau_matrix(n)
        tau_prev = tri.tau_matrix(n - 1)
        simp_d = tri.boundary_matrix(n)
        cub_d = space.slice(n).d.todense()
        if not np.array_equal(simp_d @ tau_n, tau_prev @ cub_d):
            chain_map_ok = False
            break

    calc = CupCalculus(space, p)
    rng = np.random.default_rng(seed)
    cup_trials = 0
    cup_failures = 0
    for k in range(0, max_ambient + 1):
        for m in range(0, max_ambient + 1 - k):
            for _ in range(trials):
                cup_trials += 1
                f = rng.integers(0, p, tri.count(k), dtype=np.int64)
                g = rng.integers(0, p, tri.count(m), dtype=np.int64)
                aw = tri.aw_cup(f, k, g, m)
                lhs = tri.pullback(aw, k + m) % p
                rhs = calc.cup(tri.pullback(f, k), k, tri.pullback(g, m), m)
                if not np.array_equal(lhs % p, rhs % p):
                    cup_failures += 1
    return TriangulationReport(
        max_ambient=max_ambient,
        relations_ok=relations_ok,
        chain_map_ok=chain_map_ok,
        cup_trials=cup_trials,
        cup_failures=cup_failures,
        counts={k: tri.count(k) for k in sorted(tri.simplices)},
    )
