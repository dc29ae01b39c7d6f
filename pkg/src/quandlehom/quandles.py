"""Finite racks and quandles given by explicit operation tables.

Elements are 0-based indices.  A rack is a set with a binary operation
``a * b`` whose right translations ``sigma_b : a -> a * b`` are bijective
and satisfy ``(a * b) * c == (a * c) * (b * c)``; a quandle additionally
has ``a * a == a``.  The inner automorphism group is the permutation
group generated by the ``sigma_b``, and an X-set is a set carrying a
compatible right action of the rack.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations
from math import gcd
from pathlib import Path
from typing import Literal, Optional, Sequence

__all__ = [
    "FiniteQuandle",
    "FiniteGroup",
    "AugmentedQuandle",
    "XSetAction",
    "AxiomReport",
    "Classification",
    "InvalidStructureError",
    "build_dihedral",
    "build_alexander",
    "build_trivial",
    "build_conjugation",
    "check_axioms",
    "inner_group",
    "classify",
    "make_xset",
    "load_quandle",
    "quandle_to_json",
]

DEFAULT_GROUP_CAP = 10_000


class InvalidStructureError(ValueError):
    """Raised when a table fails the axioms of the structure it claims to be."""


def _normalize_table(table: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    d = len(table)
    rows = []
    for a, row in enumerate(table):
        if len(row) != d:
            raise InvalidStructureError(f"row {a} has length {len(row)}, expected {d}")
        r = tuple(int(v) for v in row)
        for b, v in enumerate(r):
            if not 0 <= v < d:
                raise InvalidStructureError(f"entry table[{a}][{b}]={v} out of range 0..{d-1}")
        rows.append(r)
    return tuple(rows)


@dataclass(frozen=True)
class FiniteQuandle:
    """A finite rack/quandle with operation table ``table[a][b] = a * b``."""

    size: int
    table: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self) -> None:
        if self.size <= 0:
            raise InvalidStructureError("size must be positive")
        if len(self.table) != self.size:
            raise InvalidStructureError("table size does not match element count")
        object.__setattr__(self, "table", _normalize_table(self.table))

    def op(self, a: int, b: int) -> int:
        return self.table[a][b]

    def column(self, b: int) -> tuple[int, ...]:
        """The right translation sigma_b as a one-line permutation (if it is one)."""
        return tuple(self.table[a][b] for a in range(self.size))

    @property
    def is_quandle(self) -> bool:
        return check_axioms(self).is_quandle

    @property
    def is_rack(self) -> bool:
        return check_axioms(self).is_rack


@dataclass(frozen=True)
class AxiomReport:
    is_rack: bool
    is_quandle: bool
    failures: tuple[str, ...]


def check_axioms(q: FiniteQuandle) -> AxiomReport:
    """Exhaustively verify the rack axioms, then idempotence.

    Checks bijectivity of every right translation and right
    self-distributivity before idempotence, and reports concrete witnesses
    for every failure instead of raising.
    """
    failures: list[str] = []
    d = q.size
    rack = True
    for b in range(d):
        col = q.column(b)
        if len(set(col)) != d:
            rack = False
            failures.append(f"column b={b} is not a permutation: {col}")
    for a in range(d):
        for b in range(d):
            ab = q.table[a][b]
            for c in range(d):
                lhs = q.table[ab][c]
                rhs = q.table[q.table[a][c]][q.table[b][c]]
                if lhs != rhs:
                    rack = False
                    failures.append(
                        f"self-distributivity fails at (a,b,c)=({a},{b},{c}): "
                        f"(a*b)*c={lhs} but (a*c)*(b*c)={rhs}"
                    )
    quandle = rack
    for a in range(d):
        if q.table[a][a] != a:
            quandle = False
            failures.append(f"idempotence fails at a={a}: a*a={q.table[a][a]}")
    return AxiomReport(is_rack=rack, is_quandle=quandle, failures=tuple(failures))


def build_dihedral(p: int) -> FiniteQuandle:
    """The dihedral quandle on Z/p with ``a * b = 2b - a (mod p)``."""
    if p < 1:
        raise InvalidStructureError("p must be >= 1")
    table = tuple(tuple((2 * b - a) % p for b in range(p)) for a in range(p))
    return FiniteQuandle(p, table, name=f"R{p}")


def build_alexander(n: int, t: int) -> FiniteQuandle:
    """The Alexander quandle on Z/n with ``a * b = t*a + (1-t)*b (mod n)``.

    ``t`` must be invertible mod ``n`` so that right translations are
    automorphisms.
    """
    if n < 1:
        raise InvalidStructureError("n must be >= 1")
    t = t % n
    if gcd(t, n) != 1:
        raise InvalidStructureError(f"t={t} is not invertible mod {n}")
    table = tuple(tuple((t * a + (1 - t) * b) % n for b in range(n)) for a in range(n))
    return FiniteQuandle(n, table, name=f"Alex({n},{t})")


def build_trivial(d: int) -> FiniteQuandle:
    """The trivial quandle: ``a * b = a``."""
    if d < 1:
        raise InvalidStructureError("d must be >= 1")
    table = tuple(tuple(a for _ in range(d)) for a in range(d))
    return FiniteQuandle(d, table, name=f"T{d}")


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as an explicit multiplication table.

    ``mul[g][h]`` is the product of ``g`` and ``h`` read left to right;
    when elements are permutations this means "apply ``g``, then ``h``".
    """

    order: int
    mul: tuple[tuple[int, ...], ...]
    inv: tuple[int, ...]
    identity: int
    element_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "mul", _normalize_table(self.mul))
        if len(self.inv) != self.order:
            raise InvalidStructureError("inverse table length mismatch")

    def check(self) -> None:
        """Exhaustively verify the group axioms."""
        n = self.order
        e = self.identity
        for a in range(n):
            if self.mul[a][e] != a or self.mul[e][a] != a:
                raise InvalidStructureError(f"{e} is not an identity at element {a}")
            if self.mul[a][self.inv[a]] != e or self.mul[self.inv[a]][a] != e:
                raise InvalidStructureError(f"inverse fails at element {a}")
        for a in range(n):
            for b in range(n):
                ab = self.mul[a][b]
                for c in range(n):
                    if self.mul[ab][c] != self.mul[a][self.mul[b][c]]:
                        raise InvalidStructureError(f"associativity fails at ({a},{b},{c})")

    @property
    def is_abelian(self) -> bool:
        return all(
            self.mul[a][b] == self.mul[b][a]
            for a in range(self.order)
            for b in range(self.order)
        )


def build_conjugation(g: FiniteGroup, subset: Sequence[int]) -> FiniteQuandle:
    """The conjugation quandle ``a * b = b^-1 a b`` on a conjugation-closed subset."""
    elems = list(dict.fromkeys(int(x) for x in subset))
    pos = {x: i for i, x in enumerate(elems)}
    table = []
    for a in elems:
        row = []
        for b in elems:
            # left-to-right mul: b^-1 then a then b
            conj = g.mul[g.mul[g.inv[b]][a]][b]
            if conj not in pos:
                raise InvalidStructureError(
                    f"subset not closed under conjugation: {b}^-1*{a}*{b} = {conj}"
                )
            row.append(pos[conj])
        table.append(tuple(row))
    return FiniteQuandle(len(elems), tuple(table), name="Conj")


@dataclass(frozen=True)
class AugmentedQuandle:
    """A rack together with a group acting on it from the right.

    Carries ``eta : X -> G`` with ``eta(rho(a,g)) = g^-1 eta(a) g`` and a
    right action ``rho`` of ``G`` on ``X`` by rack automorphisms; for
    quandles also ``rho(a, eta(a)) = a``.
    """

    x: FiniteQuandle
    g: FiniteGroup
    eta: tuple[int, ...]
    action: tuple[tuple[int, ...], ...]  # action[a][g] = rho(a, g)

    def rho(self, a: int, gi: int) -> int:
        return self.action[a][gi]

    def check(self) -> None:
        """Exhaustively verify the augmentation identities."""
        X, G = self.x, self.g
        for a in range(X.size):
            for gi in range(G.order):
                lhs = self.eta[self.action[a][gi]]
                rhs = G.mul[G.mul[G.inv[gi]][self.eta[a]]][gi]
                if lhs != rhs:
                    raise InvalidStructureError(
                        f"eta(rho({a},{gi})) = {lhs} but g^-1 eta(a) g = {rhs}"
                    )
        for gi in range(G.order):
            img = [self.action[a][gi] for a in range(X.size)]
            if len(set(img)) != X.size:
                raise InvalidStructureError(f"rho(.,{gi}) is not a bijection")
            for a in range(X.size):
                for b in range(X.size):
                    if self.action[X.table[a][b]][gi] != X.table[img[a]][img[b]]:
                        raise InvalidStructureError(
                            f"rho(.,{gi}) is not a rack homomorphism at ({a},{b})"
                        )
        if check_axioms(self.x).is_quandle:
            for a in range(X.size):
                if self.action[a][self.eta[a]] != a:
                    raise InvalidStructureError(f"rho(a, eta(a)) != a at a={a}")


def inner_group(q: FiniteQuandle, cap: int = DEFAULT_GROUP_CAP) -> AugmentedQuandle:
    """Close the right translations into the inner automorphism group.

    Builds the permutation group generated by the maps ``sigma_b``, with
    elements canonicalized as one-line permutations in lexicographic
    order, and returns the rack augmented by it (``eta(b) = sigma_b``,
    ``rho(a, g) = g(a)``).  Raises when the closure exceeds ``cap``.
    """
    report = check_axioms(q)
    if not report.is_rack:
        raise InvalidStructureError("inner_group requires a rack: " + "; ".join(report.failures[:3]))
    d = q.size
    ident = tuple(range(d))
    gens = [q.column(b) for b in range(d)]
    gen_inverses = []
    for g in gens:
        inv = [0] * d
        for a, v in enumerate(g):
            inv[v] = a
        gen_inverses.append(tuple(inv))
    elems = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for perm in frontier:
            for g in gens + gen_inverses:
                # "perm then g" as a function: a -> g(perm(a))
                comp = tuple(g[perm[a]] for a in range(d))
                if comp not in elems:
                    elems.add(comp)
                    nxt.append(comp)
        if len(elems) > cap:
            raise InvalidStructureError(f"inner automorphism group exceeds cap {cap}")
        frontier = nxt
    ordered = sorted(elems)
    index = {perm: i for i, perm in enumerate(ordered)}
    order = len(ordered)
    mul = tuple(
        tuple(index[tuple(h[g[a]] for a in range(d))] for h in ordered) for g in ordered
    )
    inv_tab = [0] * order
    for i, perm in enumerate(ordered):
        pinv = [0] * d
        for a, v in enumerate(perm):
            pinv[v] = a
        inv_tab[i] = index[tuple(pinv)]
    group = FiniteGroup(
        order=order,
        mul=mul,
        inv=tuple(inv_tab),
        identity=index[ident],
        element_names=tuple(str(list(p)) for p in ordered),
    )
    eta = tuple(index[q.column(b)] for b in range(d))
    action = tuple(tuple(ordered[gi][a] for gi in range(order)) for a in range(d))
    return AugmentedQuandle(x=q, g=group, eta=eta, action=action)


@dataclass(frozen=True)
class Classification:
    connected: bool
    faithful: bool
    regular: bool
    orbits: tuple[tuple[int, ...], ...]
    inner_order: int


def classify(q: FiniteQuandle, aug: Optional[AugmentedQuandle] = None) -> Classification:
    """Orbit structure under inner automorphisms plus the three standard flags.

    ``connected``: the inner group acts transitively.  ``faithful``: the
    right translations are pairwise distinct.  ``regular``: the sizes of
    the rack and of the stabilizer of element 0 are relatively prime.
    """
    if aug is None:
        aug = inner_group(q)
    d = q.size
    seen = [False] * d
    orbits = []
    for start in range(d):
        if seen[start]:
            continue
        orbit = sorted({aug.action[start][gi] for gi in range(aug.g.order)})
        for v in orbit:
            seen[v] = True
        orbits.append(tuple(orbit))
    connected = len(orbits) == 1
    faithful = len({q.column(b) for b in range(d)}) == d
    stab = sum(1 for gi in range(aug.g.order) if aug.action[0][gi] == 0)
    regular = gcd(d, stab) == 1
    return Classification(
        connected=connected,
        faithful=faithful,
        regular=regular,
        orbits=tuple(orbits),
        inner_order=aug.g.order,
    )


XSetKind = Literal["point", "self", "group"]


@dataclass(frozen=True)
class XSetAction:
    """A finite set Y with a right action of the rack, ``star[y][b] = y * b``.

    The action must satisfy ``(a*b)*c = (a*c)*(b*c)`` against the rack
    operation, with every ``y -> y*b`` a bijection of Y.
    """

    quandle: FiniteQuandle
    y_size: int
    star: tuple[tuple[int, ...], ...]
    tag: XSetKind
    aug: Optional[AugmentedQuandle] = None

    def act(self, y: int, b: int) -> int:
        return self.star[y][b]

    def y_group_action(self, y: int, gi: int) -> int:
        """The right G-action on Y underlying the star pairing."""
        if self.tag == "point":
            return 0
        if self.aug is None:
            raise InvalidStructureError("group action data missing")
        if self.tag == "self":
            return self.aug.action[y][gi]
        return self.aug.g.mul[y][gi]

    def check(self) -> None:
        """Exhaustively verify the X-set axioms."""
        X = self.quandle
        for b in range(X.size):
            col = [self.star[y][b] for y in range(self.y_size)]
            if len(set(col)) != self.y_size:
                raise InvalidStructureError(f"y -> y*b is not a bijection for b={b}")
        for a in range(self.y_size):
            for b in range(X.size):
                ab = self.star[a][b]
                for c in range(X.size):
                    if self.star[ab][c] != self.star[self.star[a][c]][X.table[b][c]]:
                        raise InvalidStructureError(
                            f"X-set compatibility fails at (a,b,c)=({a},{b},{c})"
                        )


def make_xset(aug: AugmentedQuandle, kind: XSetKind) -> XSetAction:
    """The three canonical X-sets: a point, the rack on itself, the group.

    For the group action the pairing is ``g * x = g . eta(x)`` by right
    multiplication.
    """
    X = aug.x
    if kind == "point":
        star = ((0,) * X.size,)
        return XSetAction(quandle=X, y_size=1, star=star, tag="point", aug=aug)
    if kind == "self":
        return XSetAction(quandle=X, y_size=X.size, star=X.table, tag="self", aug=aug)
    if kind == "group":
        G = aug.g
        star = tuple(
            tuple(G.mul[g][aug.eta[x]] for x in range(X.size)) for g in range(G.order)
        )
        return XSetAction(quandle=X, y_size=G.order, star=star, tag="group", aug=aug)
    raise InvalidStructureError(f"unknown X-set kind {kind!r}")


def quandle_to_json(q: FiniteQuandle) -> str:
    return json.dumps({"size": q.size, "table": [list(row) for row in q.table]})


def load_quandle(source: str | Path | dict) -> FiniteQuandle:
    """Load ``{"size": d, "table": [[...], ...]}`` and validate the axioms."""
    if isinstance(source, dict):
        data = source
    else:
        data = json.loads(Path(source).read_text())
    if not isinstance(data, dict) or "size" not in data or "table" not in data:
        raise InvalidStructureError('quandle JSON must have "size" and "table" keys')
    q = FiniteQuandle(int(data["size"]), tuple(tuple(row) for row in data["table"]))
    report = check_axioms(q)
    if not report.is_rack:
        raise InvalidStructureError("table is not a rack: " + "; ".join(report.failures[:3]))
    return q


def find_isomorphism(q1: FiniteQuandle, q2: FiniteQuandle) -> Optional[tuple[int, ...]]:
    """Brute-force isomorphism search; intended for sizes <= 6."""
    if q1.size != q2.size:
        return None
    if q1.size > 6:
        raise InvalidStructureError("brute-force isomorphism limited to size <= 6")
    for perm in permutations(range(q1.size)):
        if all(
            perm[q1.table[a][b]] == q2.table[perm[a]][perm[b]]
            for a in range(q1.size)
            for b in range(q1.size)
        ):
            return perm
    return None
