"""Cochain cup products and the degree-shift operator calculus.

Cochains are total functions on the cell basis, stored as dense mod-p
vectors.  The cup product of f in C^k and g in C^m evaluates on an
(k+m)-cell by summing over the m-element subsets A of the coordinate
positions:

    (f u g)(x) = (-1)^(km) sum_A eps(A) f(face0_A x) g(face1_B x)

where B is the complement, faces compose from the highest index down,
and eps(A) is the shuffle sign separating A from B.  Operators acting on
cochains are the transposes of their chain-level namesakes, so P raises
cochain degree, D lowers it, and D P = identity on cochains.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from . import nodes as node_mod
from .complexes import (
    RackSpace,
    Ring,
    SparseMatrix,
    TupleBasis,
    _face_targets,
    mu_index_table,
    p_matrix,
    psi_matrix,
    d_matrix,
)
from .homology import FpQuotientBasis, bockstein_cochain
from .linalg import eliminate_fp, solve_fp
from .quandles import AugmentedQuandle, InvalidStructureError, XSetAction, make_xset

__all__ = [
    "subset_sign",
    "Cochain",
    "CupCalculus",
    "OperatorCalculus",
    "MGenerators",
    "IdentityCheck",
    "SuiteReport",
    "identity_suite",
    "class_cup",
    "coproduct_pairing",
    "operation_chain",
    "homology_operation",
]


def subset_sign(subset: Iterable[int], n: int) -> int:
    """Sign of the shuffle moving the subset behind its complement.

    For A inside [1..n] with complement B, this is the parity of the
    permutation sending (1..n) to (B ascending, A ascending), i.e. the
    parity of #{(a,b) in A x B : a < b}.
    """
    A = sorted(set(subset))
    if A and (A[0] < 1 or A[-1] > n):
        raise ValueError(f"subset {A} not contained in [1..{n}]")
    in_a = [False] * (n + 2)
    for a in A:
        in_a[a] = True
    inversions = 0
    b_seen_above = 0
    for v in range(n, 0, -1):
        if in_a[v]:
            inversions += b_seen_above
        else:
            b_seen_above += 1
    return -1 if inversions % 2 else 1


@dataclass(frozen=True)
class Cochain:
    """A total cochain on the degree-k cells of one space."""

    degree: int
    values: np.ndarray
    p: int
    xset_tag: str

    def __call__(self, tup: Sequence[int], basis: TupleBasis) -> int:
        return int(self.values[basis.index_of(tup)])

    def to_json_dict(self, basis: TupleBasis) -> dict:
        vals = [
            [list(basis.tuple_of(i)), int(v)]
            for i, v in enumerate(self.values)
            if v % self.p
        ]
        return {
            "degree": self.degree,
            "xset": {"point": "point", "self": "self", "group": "group"}[self.xset_tag],
            "p": self.p,
            "values": vals,
        }

    def to_json(self, basis: TupleBasis) -> str:
        return json.dumps(self.to_json_dict(basis), sort_keys=True)


class CupCalculus:
    """Cup products and coboundaries over F_p on one space B(Y;X)."""

    def __init__(self, space: RackSpace, p: int):
        self.space = space
        self.p = p
        self._tables: dict[tuple[int, int], tuple[np.ndarray, np.ndarray, np.ndarray]] = {}

    def ncells(self, k: int) -> int:
        return self.space.cells(k)

    def basis(self, k: int) -> TupleBasis:
        return self.space.basis(k)

    def zero(self, k: int) -> np.ndarray:
        return np.zeros(self.ncells(k), dtype=np.int64)

    def one(self) -> np.ndarray:
        return np.ones(self.ncells(0), dtype=np.int64)

    def lam(self) -> np.ndarray:
        """The constant 1-cochain, value 1 on every 1-cell."""
        return np.ones(self.ncells(1), dtype=np.int64)

    def random_cochain(self, k: int, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.p, self.ncells(k), dtype=np.int64)

    def delta_int(self, k: int) -> SparseMatrix:
        """Integral transposed boundary C^k -> C^(k+1), no sign twist."""
        return self.space.slice(k + 1).d.transpose()

    def delta(self, k: int, f: np.ndarray) -> np.ndarray:
        """Coboundary with the classical sign: (delta f)(c) = (-1)^(k+1) f(dc).

        The twist is what makes delta(f u g) = delta f u g + (-1)^k f u delta g
        hold for the cup product; kernels and images agree with the bare
        transpose, so cocycles and coboundaries are unaffected.
        """
        sign = -1 if (k + 1) % 2 else 1
        return (sign * self.delta_int(k).apply(f)) % self.p

    def delta_face(self, k: int, f: np.ndarray, eps: int) -> np.ndarray:
        """Transpose of the signed face family d0 or d1 alone."""
        s = self.space.slice(k + 1)
        mat = s.d0 if eps == 0 else s.d1
        return mat.transpose().apply(f) % self.p

    def cup_table(self, k: int, m: int):
        key = (k, m)
        if key not in self._tables:
            n = k + m
            basis_n = self.basis(n)
            cells = basis_n.array()
            basis_k = self.basis(k)
            basis_m = self.basis(m)
            sign_km = -1 if (k * m) % 2 else 1
            signs, fidx, gidx = [], [], []
            for A in combinations(range(1, n + 1), m):
                B = [i for i in range(1, n + 1) if i not in A]
                keep = [0] + B
                fi = basis_k.encode(list(cells[:, keep].T))
                arr = cells
                for b in sorted(B, reverse=True):
                    arr = _face_targets(self.space.xset, arr, b, 1)
                gi = basis_m.encode(list(arr.T))
                signs.append(sign_km * subset_sign(A, n))
                fidx.append(fi.astype(np.int32))
                gidx.append(gi.astype(np.int32))
            self._tables[key] = (
                np.array(signs, dtype=np.int64),
                np.stack(fidx) if fidx else np.zeros((0, len(basis_n)), np.int32),
                np.stack(gidx) if gidx else np.zeros((0, len(basis_n)), np.int32),
            )
        return self._tables[key]

    def cup(self, f: np.ndarray, k: int, g: np.ndarray, m: int) -> np.ndarray:
        """The product cochain in C^(k+m), exact mod p."""
        signs, fidx, gidx = self.cup_table(k, m)
        f64 = np.asarray(f, dtype=np.int64) % self.p
        g64 = np.asarray(g, dtype=np.int64) % self.p
        acc = (signs[:, None] * f64[fidx] * g64[gidx]).sum(axis=0)
        return acc % self.p

    def cohomology_basis(self, k: int) -> FpQuotientBasis:
        """ker(delta_k) / im(delta_(k-1)) with representative bookkeeping."""
        up = self.delta_int(k)
        down = (
            self.delta_int(k - 1)
            if k > 0
            else SparseMatrix.zeros((self.ncells(0), 0), Ring(self.p))
        )
        return FpQuotientBasis(up, down, self.p, degree=k)


@dataclass
class MGenerators:
    """Normalized multiplicative generators of the monoid-space cohomology."""

    p: int
    a_vec: np.ndarray  # degree-2 cocycle on the self-action space
    b_vec: np.ndarray  # degree-3 cocycle, the connecting image of A
    metadata: dict


class OperatorCalculus:
    """The full cochain calculus of one augmented quandle at one prime.

    Bundles the three spaces (point, self-action, group), the shift
    operators, the pairing with the group space, and the normalized
    generator cocycles.
    """

    def __init__(self, aug: AugmentedQuandle, p: int, cell_cap: int = 10_000_000):
        self.aug = aug
        self.p = p
        self.point_xset = make_xset(aug, "point")
        self.self_xset = make_xset(aug, "self")
        self.group_xset = make_xset(aug, "group")
        self.point_space = RackSpace(self.point_xset, cell_cap)
        self.self_space = RackSpace(self.self_xset, cell_cap)
        self.group_space = RackSpace(self.group_xset, cell_cap)
        self.point = CupCalculus(self.point_space, p)
        self.selfc = CupCalculus(self.self_space, p)
        self.group = CupCalculus(self.group_space, p)
        self.base_point = 0
        self._mu_tables: dict[tuple[str, int, int], np.ndarray] = {}
        self._chain_maps: dict[tuple[str, int], tuple[np.ndarray, np.ndarray]] = {}
        self._kernels: dict[int, np.ndarray] = {}
        self._generators: Optional[MGenerators] = None

    def calculus(self, tag: str) -> CupCalculus:
        return {"point": self.point, "self": self.selfc, "group": self.group}[tag]

    # -- chain-level index maps (target, sign) ---------------------------

    def _chain_map(self, name: str, n: int) -> tuple[np.ndarray, np.ndarray]:
        key = (name, n)
        if key not in self._chain_maps:
            if name == "P":
                mat = p_matrix(self.self_xset, n)
            elif name == "D":
                mat = d_matrix(self.self_xset, n)
            elif name == "psi":
                mat = psi_matrix(self.self_xset, n)
            else:
                raise KeyError(name)
            ncols = mat.shape[1]
            tgt = np.zeros(ncols, dtype=np.int64)
            sgn = np.zeros(ncols, dtype=np.int64)
            tgt[mat.cols] = mat.rows
            sgn[mat.cols] = mat.vals
            self._chain_maps[key] = (tgt, sgn)
        return self._chain_maps[key]

    # -- cochain operators on the self-action space ----------------------

    def p_op(self, f: np.ndarray, k: int) -> np.ndarray:
        """Cochain P: C^k(X;X) -> C^(k+1)(X;X)."""
        return p_matrix(self.self_xset, k + 1).transpose().apply(f) % self.p

    def d_op(self, f: np.ndarray, k: int) -> np.ndarray:
        """Cochain D: C^k(X;X) -> C^(k-1)(X;X)."""
        return d_matrix(self.self_xset, k - 1).transpose().apply(f) % self.p

    def psi_op(self, f: np.ndarray, k: int) -> np.ndarray:
        """Cochain shift C^k(X;X) -> C^(k+1) of the point space."""
        return psi_matrix(self.self_xset, k + 1).transpose().apply(f) % self.p

    def q_op(self, f: np.ndarray, k: int) -> np.ndarray:
        """Q(F) = P(F) + (-1)^(k+1) F u Lambda; squares to zero."""
        sign = -1 if (k + 1) % 2 else 1
        out = self.p_op(f, k) + sign * self.selfc.cup(f, k, self.selfc.lam(), 1)
        return out % self.p

    def chi_indices(self, k: int) -> np.ndarray:
        """Index map of chi: C_k(G;X) -> C_k(X;X), (g; xs) -> (y0 . g; xs)."""
        d = self.aug.x.size
        gb = self.group_space.basis(k).array()
        heads = np.asarray(self.aug.action, dtype=np.int64)[self.base_point][gb[:, 0]]
        cols = [heads] + [gb[:, j] for j in range(1, k + 1)]
        return self.self_space.basis(k).encode(cols)

    def chi_pullback(self, f_self: np.ndarray, k: int) -> np.ndarray:
        """Pull a self-space cochain back to the group space along chi."""
        return np.asarray(f_self, dtype=np.int64)[self.chi_indices(k)] % self.p

    # -- mu ----------------------------------------------------------------

    def mu_table(self, left_tag: str, k: int, m: int) -> np.ndarray:
        key = (left_tag, k, m)
        if key not in self._mu_tables:
            left = {"point": self.point_xset, "self": self.self_xset, "group": self.group_xset}[
                left_tag
            ]
            self._mu_tables[key] = mu_index_table(left, self.group_xset, k, m)
        return self._mu_tables[key]

    def mu_vec(
        self, left_tag: str, a: np.ndarray, k: int, b: np.ndarray, m: int
    ) -> np.ndarray:
        table = self.mu_table(left_tag, k, m)
        out = np.zeros(self.calculus(left_tag).ncells(k + m), dtype=np.int64)
        ai = np.nonzero(np.asarray(a) % self.p)[0]
        bv = np.asarray(b, dtype=np.int64) % self.p
        bi = np.nonzero(bv)[0]
        for i in ai:
            np.add.at(out, table[i, bi], int(a[i]) * bv[bi])
        return out % self.p

    # -- cocycles ------------------------------------------------------------

    def cocycle_kernel(self, k: int, max_cells: int = 4_000_000) -> Optional[np.ndarray]:
        """Kernel basis of delta_k on the self space, or None when too large."""
        if k in self._kernels:
            return self._kernels[k]
        delta = self.selfc.delta_int(k)
        if delta.shape[0] * delta.shape[1] > max_cells:
            return None
        kb = eliminate_fp(delta.todense(), self.p).kernel_basis
        self._kernels[k] = kb
        return kb

    def sample_cocycle(self, k: int, rng: np.random.Generator) -> np.ndarray:
        """A random element of ker(delta_k) on the self space.

        Small degrees draw uniformly from an explicit kernel basis; large
        degrees draw a coboundary plus a random combination of the
        word-indexed generator cocycles, which is checked closed before
        being returned.
        """
        kb = self.cocycle_kernel(k)
        if kb is not None:
            if kb.shape[1] == 0:
                return self.selfc.zero(k)
            coeffs = rng.integers(0, self.p, kb.shape[1], dtype=np.int64)
            return (kb.astype(np.int64) @ coeffs) % self.p
        g = self.selfc.random_cochain(k - 1, rng)
        out = self.selfc.delta(k - 1, g)
        for node in node_mod.enumerate_m_basis(k):
            coeff = int(rng.integers(0, self.p))
            if coeff:
                out = (out + coeff * self.node_cocycle(node)) % self.p
        if (self.selfc.delta(k, out) % self.p).any():
            raise AssertionError("sampled cochain is not closed")
        return out

    # -- generators -----------------------------------------------------------

    def generators(self) -> MGenerators:
        if self._generators is None:
            self._generators = identify_generators(self)
        return self._generators

    def a_power(self, m: int) -> np.ndarray:
        """A_m = A^m / m! on the self space (m < p)."""
        if m >= self.p:
            raise InvalidStructureError("divided power A_m only available for m < p")
        gen = self.generators()
        if m == 0:
            return self.selfc.one()
        out = gen.a_vec.copy()
        deg = 2
        for _ in range(m - 1):
            out = self.selfc.cup(out, deg, gen.a_vec, 2)
            deg += 2
        inv_fact = 1
        for i in range(2, m + 1):
            inv_fact = (inv_fact * pow(i, self.p - 2, self.p)) % self.p
        return (out * inv_fact) % self.p

    def node_cocycle(self, node: node_mod.Node) -> np.ndarray:
        """The cocycle A_m u B^e u P^j(...) attached to a canonical word."""
        vec = self.selfc.one()
        deg = 0
        gen = self.generators()
        for m, e, j in reversed(node.blocks()):
            for _ in range(j):
                vec = self.p_op(vec, deg)
                deg += 1
            if e:
                vec = self.selfc.cup(gen.b_vec, 3, vec, deg)
                deg += 3
            if m:
                vec = self.selfc.cup(self.a_power(m), 2 * m, vec, deg)
                deg += 2 * m
        if deg != node.weight:
            raise AssertionError("degree bookkeeping failed in node cocycle")
        return vec


def identify_generators(calc: OperatorCalculus) -> MGenerators:
    """Pin down the degree-1/2/3 generator cocycles on the self space.

    The degree-2 generator is chosen outside the image of P, shifted by a
    multiple of P^2(1) so that its D-image is null-cohomologous, corrected
    by a coboundary to vanish on every cell (y; a, b) with y == a or
    a == b, and scaled to evaluate to 1 on the first homology
    representative that pairs nontrivially with it.  Its connecting image
    under the mod-p lift is the degree-3 generator.
    """
    p = calc.p
    sc = calc.selfc
    h1 = sc.cohomology_basis(1)
    h2 = sc.cohomology_basis(2)
    if h2.dim != 2:
        raise InvalidStructureError(
            f"expected a 2-dimensional degree-2 cohomology, found {h2.dim}"
        )
    lam = sc.lam()
    lam_coords = h1.coords(lam)
    if not lam_coords.any():
        raise InvalidStructureError("constant 1-cochain is null-cohomologous")
    p2one = calc.p_op(lam, 1)
    p2_coords = h2.coords(p2one)
    # pick the representative not lying in the line spanned by [P^2(1)]
    a0 = None
    for i in range(h2.dim):
        e = np.zeros(h2.dim, dtype=np.int64)
        e[i] = 1
        if not _parallel(e, p2_coords, p):
            a0 = h2.reps[i].astype(np.int64)
            break
    if a0 is None:
        raise InvalidStructureError("degree-2 cohomology is spanned by the image of P")
    # normalize the D-image: [D a0] = lambda1 [Lambda]; subtract lambda1 P^2(1)
    da0 = calc.d_op(a0, 2)
    lam1 = _ratio(h1.coords(da0), lam_coords, p)
    a1 = (a0 - lam1 * p2one) % p
    # representative correction: vanish on degenerate cells (y;a,b), y==a or a==b
    deg_cells = _degenerate_two_cells(calc)
    delta1 = sc.delta_int(1).todense() % p
    sol = solve_fp(delta1[deg_cells], (-a1[deg_cells]) % p, p)
    if sol is None:
        raise InvalidStructureError("no coboundary correction vanishing on diagonals")
    a2 = (a1 + delta1 @ np.asarray(sol, dtype=np.int64)) % p
    # scale against the first pairing homology cycle
    chain_h2 = FpQuotientBasis(
        calc.self_space.slice(2).d, calc.self_space.slice(3).d, p, degree=2
    )
    scale = None
    ref = None
    for idx, rep in enumerate(chain_h2.reps):
        val = int(a2 @ rep) % p
        if val:
            scale = pow(val, p - 2, p)
            ref = idx
            break
    if scale is None:
        raise InvalidStructureError("degree-2 generator pairs to zero with all cycles")
    a_vec = (a2 * scale) % p
    b_vec = bockstein_cochain(a_vec, calc.self_space.slice(3).d, p)
    h3 = sc.cohomology_basis(3)
    if not h3.coords(b_vec).any():
        raise InvalidStructureError("connecting image of the degree-2 generator vanishes")
    meta = {
        "lambda1": int(lam1),
        "scale": int(scale),
        "reference_cycle_index": ref,
        "reference_cycle": sorted(
            chain_h2.result.cycle_reps[ref].entries.items()
        ),
    }
    return MGenerators(p=p, a_vec=a_vec, b_vec=b_vec, metadata=meta)


def _parallel(u: np.ndarray, v: np.ndarray, p: int) -> bool:
    """Are u and v linearly dependent over F_p?"""
    m = np.stack([u % p, v % p])
    from .linalg import rank_fp

    return rank_fp(m, p) < 2


def _ratio(u: np.ndarray, v: np.ndarray, p: int) -> int:
    """Solve u = c v for vectors on a line; u must be a multiple of v."""
    vi = np.nonzero(v % p)[0]
    if vi.size == 0:
        if (u % p).any():
            raise ValueError("no ratio: v is zero but u is not")
        return 0
    c = (int(u[vi[0]]) * pow(int(v[vi[0]]), p - 2, p)) % p
    if ((u - c * v) % p).any():
        raise ValueError("vectors are not proportional")
    return c


def _degenerate_two_cells(calc: OperatorCalculus) -> np.ndarray:
    """Indices of self-space 2-cells (y; a, b) with y == a or a == b."""
    basis = calc.self_space.basis(2)
    cells = basis.array()
    mask = (cells[:, 0] == cells[:, 1]) | (cells[:, 1] == cells[:, 2])
    return np.nonzero(mask)[0]


# ---------------------------------------------------------------------------
# identity suite
# ---------------------------------------------------------------------------


@dataclass
class IdentityCheck:
    name: str
    trials: int
    failures: int
    witness: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.failures == 0


@dataclass
class SuiteReport:
    p: int
    seed: int
    max_degree: int
    trials: int
    checks: list[IdentityCheck]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def to_json_dict(self) -> dict:
        return {
            "p": self.p,
            "seed": self.seed,
            "max_degree": self.max_degree,
            "trials": self.trials,
            "ok": self.ok,
            "checks": [
                {
                    "name": c.name,
                    "trials": c.trials,
                    "failures": c.failures,
                    "witness": c.witness,
                }
                for c in self.checks
            ],
        }


def _first_nonzero(vec: np.ndarray) -> Optional[int]:
    nz = np.nonzero(vec)[0]
    return int(nz[0]) if nz.size else None


def identity_suite(
    calc: OperatorCalculus,
    max_degree: int = 4,
    trials: int = 100,
    seed: int = 0,
) -> SuiteReport:
    """Exact randomized verification of the cochain operator identities.

    Every named identity is evaluated as an equality of dense cochain
    vectors over F_p on every basis cell; a nonzero difference is a
    failure and is reported with the offending degrees, trial and cell.
    """
    p = calc.p
    rng_root = np.random.default_rng(seed)
    checks: list[IdentityCheck] = []

    def run(name: str, degree_pairs, fn) -> None:
        failures = 0
        witness = None
        count = 0
        rng = np.random.default_rng(rng_root.integers(0, 2**63))
        for t in range(trials):
            for degs in degree_pairs:
                count += 1
                diff, tag = fn(rng, *degs)
                bad = _first_nonzero(diff % p)
                if bad is not None:
                    failures += 1
                    if witness is None:
                        witness = {"degrees": list(degs), "trial": t, "cell": bad, "side": tag}
        checks.append(IdentityCheck(name=name, trials=count, failures=failures, witness=witness))

    pairs_cup = [(k, m) for k in range(max_degree + 1) for m in range(max_degree + 1 - k)]
    pairs_pos = [(k, m) for k, m in pairs_cup]
    singles = [(k,) for k in range(max_degree + 1)]

    sc, pc, gc = calc.selfc, calc.point, calc.group

    # shift map versus cup: psiF u psiG = psi(F u PG) + (-1)^(k+1) psi(PF u G)
    def shift_cup(rng, k, m):
        F = sc.random_cochain(k, rng)
        G = sc.random_cochain(m, rng)
        lhs = pc.cup(calc.psi_op(F, k), k + 1, calc.psi_op(G, m), m + 1)
        sgn = -1 if (k + 1) % 2 else 1
        rhs = (
            calc.psi_op(sc.cup(F, k, calc.p_op(G, m), m + 1), k + m + 1)
            + sgn * calc.psi_op(sc.cup(calc.p_op(F, k), k + 1, G, m), k + m + 1)
        )
        return lhs - rhs, "shift_cup"

    run("shift_vs_cup", pairs_cup, shift_cup)

    # P is a Rota-Baxter operator: PF u PG = P(F u PG) + (-1)^(k+1) P(PF u G)
    def rota(rng, k, m):
        F = sc.random_cochain(k, rng)
        G = sc.random_cochain(m, rng)
        lhs = sc.cup(calc.p_op(F, k), k + 1, calc.p_op(G, m), m + 1)
        sgn = -1 if (k + 1) % 2 else 1
        rhs = (
            calc.p_op(sc.cup(F, k, calc.p_op(G, m), m + 1), k + m + 1)
            + sgn * calc.p_op(sc.cup(calc.p_op(F, k), k + 1, G, m), k + m + 1)
        )
        return lhs - rhs, "rota"

    run("p_rota_baxter", pairs_cup, rota)

    # D is a derivation: D(F u G) = DF u G + (-1)^k F u DG
    def derivation(rng, k, m):
        F = sc.random_cochain(k, rng)
        G = sc.random_cochain(m, rng)
        lhs = calc.d_op(sc.cup(F, k, G, m), k + m)
        sgn = -1 if k % 2 else 1
        parts = []
        if k > 0:
            parts.append(sc.cup(calc.d_op(F, k), k - 1, G, m))
        if m > 0:
            parts.append(sgn * sc.cup(F, k, calc.d_op(G, m), m - 1))
        rhs = sum(parts) if parts else np.zeros(0, dtype=np.int64)
        if k + m == 0:
            return np.zeros(0, dtype=np.int64), "derivation"
        return lhs - rhs, "derivation"

    run("d_derivation", [(k, m) for (k, m) in pairs_cup if k + m >= 1], derivation)

    # face transposes against the constant 1-cochain, on every space
    def lambda_faces(rng, k, tag):
        cc = calc.calculus(tag)
        F = cc.random_cochain(k, rng)
        d0F = cc.delta_face(k, F, 0)
        d1F = cc.delta_face(k, F, 1)
        lhs0 = d0F + cc.cup(F, k, cc.lam(), 1)
        sgn = -1 if (k + 1) % 2 else 1
        lhs1 = d1F - sgn * cc.cup(cc.lam(), 1, F, k)
        return np.concatenate([lhs0, lhs1]), f"lambda_faces:{tag}"

    run(
        "lambda_face_identities",
        [(k, tag) for k in range(max_degree + 1) for tag in ("point", "self", "group")],
        lambda_faces,
    )

    # Lambda u Lambda = 0 and Q squared
    def q_squared(rng, k):
        F = sc.random_cochain(k, rng)
        return calc.q_op(calc.q_op(F, k), k + 1), "q_squared"

    run("q_squared", singles, q_squared)

    def lam_square(rng, tag):
        cc = calc.calculus(tag)
        return cc.cup(cc.lam(), 1, cc.lam(), 1), "lambda_squared"

    run("lambda_squared", [("point",), ("self",), ("group",)], lam_square)

    # Q is conjugate to the 0-face family: psi(QF) = (-1)^k face0(psi F).
    # With bare transposes the sign alternates with the degree; on odd
    # degrees this is the classical minus sign.
    def q_conjugate(rng, k):
        F = sc.random_cochain(k, rng)
        lhs = calc.psi_op(calc.q_op(F, k), k + 1)
        sgn = -1 if k % 2 else 1
        rhs = sgn * pc.delta_face(k + 1, calc.psi_op(F, k), 0)
        return lhs - rhs, "q_conjugate"

    run("q_conjugate_face", singles, q_conjugate)

    # Q Rota-Baxter on closed G
    def q_rota(rng, k, m):
        F = sc.random_cochain(k, rng)
        G = calc.sample_cocycle(m, rng)
        lhs = sc.cup(calc.q_op(F, k), k + 1, calc.q_op(G, m), m + 1)
        sgn = -1 if (k + 1) % 2 else 1
        rhs = (
            calc.q_op(sc.cup(F, k, calc.q_op(G, m), m + 1), k + m + 1)
            + sgn * calc.q_op(sc.cup(calc.q_op(F, k), k + 1, G, m), k + m + 1)
        )
        return lhs - rhs, "q_rota"

    run("q_rota_baxter_on_cocycles", pairs_cup, q_rota)

    # pairing formulas: F(P mu(a,b)) = (-1)^m F(mu(Pa, b)) + [k=0] F(P chi(b))
    def mu_p(rng, j):
        F = sc.random_cochain(j, rng).astype(np.int64)
        diffs = []
        for k in range(j + 2):
            m = j + 1 - k
            table = calc.mu_table("self", k, m)
            ptgt, psgn = calc._chain_map("P", k + m)
            lhs = psgn[table] * F[ptgt[table]]
            if k > 0:
                patgt, pasgn = calc._chain_map("P", k)
                tab2 = calc.mu_table("self", k - 1, m)
                rhs = pasgn[:, None] * F[tab2[patgt, :]]
                sgn = -1 if m % 2 else 1
                diffs.append((lhs - sgn * rhs) % p)
            else:
                chi = calc.chi_indices(m)
                pc_tgt, pc_sgn = calc._chain_map("P", m)
                rhs = (pc_sgn[chi] * F[pc_tgt[chi]])[None, :]
                diffs.append((lhs - rhs) % p)
        return np.concatenate([d.ravel() for d in diffs]), "mu_p"

    run("mu_p_formula", singles, mu_p)

    def mu_d(rng, j):
        F = sc.random_cochain(j, rng).astype(np.int64)
        diffs = []
        for k in range(j):
            m = j - 1 - k
            table = calc.mu_table("self", k, m)
            dtgt, dsgn = calc._chain_map("D", k + m)
            lhs = dsgn[table] * F[dtgt[table]]
            datgt, dasgn = calc._chain_map("D", k)
            tab2 = calc.mu_table("self", k + 1, m)
            rhs = dasgn[:, None] * F[tab2[datgt, :]]
            sgn = -1 if m % 2 else 1
            diffs.append((lhs - sgn * rhs) % p)
        if not diffs:
            return np.zeros(0, dtype=np.int64), "mu_d"
        return np.concatenate([d.ravel() for d in diffs]), "mu_d"

    run("mu_d_formula", [(k,) for k in range(1, max_degree + 1)], mu_d)

    return SuiteReport(
        p=p, seed=seed, max_degree=max_degree, trials=trials, checks=checks
    )


# ---------------------------------------------------------------------------
# class-level operations
# ---------------------------------------------------------------------------


def class_cup(
    calc: CupCalculus,
    c1: np.ndarray,
    k1: int,
    c2: np.ndarray,
    k2: int,
    basis: FpQuotientBasis,
) -> np.ndarray:
    """Coordinates of [c1 u c2] in a cohomology basis, mod coboundaries.

    Raises when the product lies outside the span, signalling an
    incomplete basis rather than truncating.
    """
    prod = calc.cup(c1, k1, c2, k2)
    return basis.coords(prod)


def coproduct_pairing(
    calc: OperatorCalculus,
    f_group: np.ndarray,
    n: int,
    left_classes: Sequence[tuple[np.ndarray, int]],
    right_classes: Sequence[tuple[np.ndarray, int]],
) -> np.ndarray:
    """The matrix <mu F, a_i (x) b_j> over the given group-space cycles.

    Entry (i, j) is (-1)^(k m) F(mu(a_i (x) b_j)) with k, m the degrees of
    the two cycles; only pairs with k + m = n contribute.
    """
    out = np.zeros((len(left_classes), len(right_classes)), dtype=np.int64)
    for i, (a, k) in enumerate(left_classes):
        if not _is_group_cycle(calc, a, k):
            raise ValueError(f"left input {i} is not a cycle")
        for j, (b, m) in enumerate(right_classes):
            if k + m != n:
                continue
            if not _is_group_cycle(calc, b, m):
                raise ValueError(f"right input {j} is not a cycle")
            prod = calc.mu_vec("group", a, k, b, m)
            val = int(np.asarray(f_group, dtype=np.int64) @ prod) % calc.p
            if (k * m) % 2:
                val = (-val) % calc.p
            out[i, j] = val
    return out


def _is_group_cycle(calc: OperatorCalculus, vec: np.ndarray, k: int) -> bool:
    if k == 0:
        return True
    bd = calc.group_space.slice(k).d.apply(np.asarray(vec, dtype=np.int64))
    return not (bd % calc.p).any()


def operation_chain(calc: OperatorCalculus, name: str, a: int = 0) -> tuple[np.ndarray, int]:
    """The degree-1 and degree-2 operation cycles in the group space.

    "h_prime": (e_a; a) + (1; a); "h_s": sum_j (1; j, j+1) over Z/p rows.
    Raises when the chain fails to be a cycle, which would be a
    construction bug.
    """
    aug = calc.aug
    G = aug.g
    if name == "h_prime":
        basis = calc.group_space.basis(1)
        vec = np.zeros(len(basis), dtype=np.int64)
        vec[basis.index_of((aug.eta[a], a))] += 1
        vec[basis.index_of((G.identity, a))] += 1
        deg = 1
    elif name == "h_s":
        d = aug.x.size
        basis = calc.group_space.basis(2)
        vec = np.zeros(len(basis), dtype=np.int64)
        for j in range(d):
            vec[basis.index_of((G.identity, j, (j + 1) % d))] += 1
        deg = 2
    else:
        raise ValueError(f"unknown operation {name!r}")
    bd = calc.group_space.slice(deg).d.apply(vec)
    if (bd % calc.p).any():
        raise AssertionError(f"operation chain {name} is not a cycle")
    return vec, deg


def homology_operation(
    calc: OperatorCalculus,
    op_chain: np.ndarray,
    op_degree: int,
    cycle: np.ndarray,
    degree: int,
) -> np.ndarray:
    """Right multiplication by an operation cycle on point-space chains."""
    bd = calc.point_space.slice(degree).d.apply(np.asarray(cycle, dtype=np.int64))
    if (bd % calc.p).any():
        raise ValueError("input chain is not a cycle")
    return calc.mu_vec("point", cycle, degree, op_chain, op_degree)
