"""Words over {R, S, T} indexing (co)homology basis elements.

A word is canonical when it matches blocks ``S^m T^e R^j`` with e in
{0,1} and j > 0 except in the final block, equivalently when it contains
neither "TT" nor "TS".  Weights are R=1, S=2, T=3; the canonical words of
weight n count the degree-n cohomology of the monoid space, and the
Q-words (no "RR", no trailing "R") count quandle cohomology one degree
up.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Literal, Optional

__all__ = [
    "Node",
    "QNode",
    "BettiTable",
    "SYMBOL_WEIGHTS",
    "enumerate_m_basis",
    "enumerate_q_nodes",
    "betti_recursion",
    "loop_space_dims",
    "predicted_torsion_counts",
    "predicted_quandle_dims",
    "node_compare",
]

SYMBOL_WEIGHTS = {"R": 1, "S": 2, "T": 3}


def _check_word(word: str) -> str:
    for ch in word:
        if ch not in SYMBOL_WEIGHTS:
            raise ValueError(f"invalid symbol {ch!r} in node word {word!r}")
    return word


@dataclass(frozen=True, order=True)
class Node:
    """A finite word over {R, S, T}."""

    word: str

    def __post_init__(self) -> None:
        _check_word(self.word)

    @property
    def weight(self) -> int:
        return sum(SYMBOL_WEIGHTS[c] for c in self.word)

    @property
    def is_canonical(self) -> bool:
        return "TT" not in self.word and "TS" not in self.word

    def blocks(self) -> list[tuple[int, int, int]]:
        """Canonical decomposition into (m, e, j) blocks of S^m T^e R^j."""
        if not self.is_canonical:
            raise ValueError(f"{self.word!r} is not canonical")
        out = []
        i, w = 0, self.word
        while i < len(w):
            m = 0
            while i < len(w) and w[i] == "S":
                m += 1
                i += 1
            e = 0
            if i < len(w) and w[i] == "T":
                e = 1
                i += 1
            j = 0
            while i < len(w) and w[i] == "R":
                j += 1
                i += 1
            out.append((m, e, j))
            if j == 0 and i < len(w):
                raise AssertionError("canonical scan stalled")
        return out or [(0, 0, 0)]

    def s_value(self) -> int:
        """Number of pairs (S ... R) with the S to the left of the R."""
        count, rs_seen = 0, 0
        for ch in reversed(self.word):
            if ch == "R":
                rs_seen += 1
            elif ch == "S":
                count += rs_seen
        return count

    def t_value(self) -> int:
        count, rs_seen = 0, 0
        for ch in reversed(self.word):
            if ch == "R":
                rs_seen += 1
            elif ch == "T":
                count += rs_seen
        return count

    def __str__(self) -> str:
        return self.word or "1"


@dataclass(frozen=True, order=True)
class QNode:
    """A canonical node without "RR" and without a trailing "R"."""

    node: Node

    def __post_init__(self) -> None:
        w = self.node.word
        if not self.node.is_canonical:
            raise ValueError(f"{w!r} is not canonical")
        if "RR" in w or w.endswith("R"):
            raise ValueError(f"{w!r} is not a Q-node")

    @property
    def weight(self) -> int:
        return self.node.weight


def enumerate_m_basis(n: int) -> list[Node]:
    """All canonical words of weight n, in lexicographic order."""
    if n < 0:
        raise ValueError("weight must be >= 0")
    words: list[str] = []

    def rec(prefix: str, remaining: int, at_start: bool) -> None:
        if remaining == 0:
            words.append(prefix)
            return
        # first block: S^m T^e R^j (j > 0 unless the block ends the word)
        max_m = remaining // 2
        for m in range(max_m + 1):
            for e in (0, 1):
                used = 2 * m + 3 * e
                if used > remaining:
                    continue
                rest = remaining - used
                if rest == 0:
                    if m or e or at_start:
                        words.append(prefix + "S" * m + "T" * e)
                    continue
                for j in range(1, rest + 1):
                    rec(prefix + "S" * m + "T" * e + "R" * j, rest - j, False)

    rec("", n, True)
    uniq = sorted(set(words))
    return [Node(w) for w in uniq]


def enumerate_q_nodes(weight: int) -> list[QNode]:
    """All Q-nodes of the given weight, in lexicographic order."""
    out = []
    for node in enumerate_m_basis(weight):
        w = node.word
        if "RR" not in w and not w.endswith("R"):
            out.append(QNode(node))
    return out


def loop_space_dims(max_k: int) -> list[int]:
    """c_k = #{(k', e) : 2k' + 3e = k, e in {0,1}} = 1,0,1,1,1,1,..."""
    out = []
    for k in range(max_k + 1):
        c = 0
        if k % 2 == 0:
            c += 1
        if k >= 3 and (k - 3) % 2 == 0:
            c += 1
        out.append(c)
    return out


@dataclass
class BettiTable:
    """Predicted (and optionally computed) dimensions per degree."""

    kind: Literal["rack_space", "monoid", "quandle", "torsion_count"]
    rows: dict[int, dict]
    p: Optional[int] = None

    def set_computed(self, degree: int, value: int) -> None:
        self.rows.setdefault(degree, {"predicted": None})["computed"] = value

    def all_match(self) -> bool:
        return all(
            r.get("computed") is None or r.get("predicted") is None
            or r["computed"] == r["predicted"]
            for r in self.rows.values()
        )

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "p": self.p,
            "rows": {
                str(k): {kk: v for kk, v in row.items()}
                for k, row in sorted(self.rows.items())
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    def to_text(self) -> str:
        header = f"{'degree':>6}  {'predicted':>9}  {'computed':>9}"
        lines = [header]
        for k in sorted(self.rows):
            row = self.rows[k]
            pred = row.get("predicted")
            comp = row.get("computed")
            pred_s = "-" if pred is None else str(pred)
            comp_s = "-" if comp is None else str(comp)
            lines.append(f"{k:>6}  {pred_s:>9}  {comp_s:>9}")
        return "\n".join(lines)


def betti_recursion(max_n: int) -> tuple[BettiTable, BettiTable]:
    """Dimensions of the point-space and monoid-space cohomology.

    b_0 = 1 and b_{n+1} = sum_k c_k b_{n-k}; the monoid dimension in
    degree n is b_{n+1}.  Must agree with the canonical-word counts.
    """
    c = loop_space_dims(max_n + 1)
    b = [1]
    for n in range(max_n + 1):
        b.append(sum(c[k] * b[n - k] for k in range(n + 1)))
    rack = BettiTable(
        kind="rack_space",
        rows={n: {"predicted": b[n]} for n in range(max_n + 1)},
    )
    monoid = BettiTable(
        kind="monoid",
        rows={n: {"predicted": b[n + 1]} for n in range(max_n + 1)},
    )
    for n in range(max_n + 1):
        count = len(enumerate_m_basis(n))
        if count != b[n + 1]:
            raise AssertionError(
                f"word count {count} disagrees with recursion {b[n + 1]} at weight {n}"
            )
    return rack, monoid


def predicted_torsion_counts(max_n: int) -> BettiTable:
    """Torsion ranks t_n solving dim_F H_n = 1 + t_n + t_{n-1}, t_0 = 0."""
    rack, _ = betti_recursion(max_n)
    t_prev = 0
    rows = {}
    for n in range(max_n + 1):
        b_n = rack.rows[n]["predicted"]
        t_n = b_n - 1 - t_prev
        if t_n < 0:
            raise ValueError(f"inconsistent dimension table at degree {n}")
        rows[n] = {"predicted": t_n}
        t_prev = t_n
    return BettiTable(kind="torsion_count", rows=rows)


def predicted_quandle_dims(max_n: int) -> BettiTable:
    """dim H^Q in degree n equals the Q-node count of weight n-1."""
    rows = {}
    for n in range(1, max_n + 1):
        rows[n] = {"predicted": len(enumerate_q_nodes(n - 1))}
    return BettiTable(kind="quandle", rows=rows)


# ---------------------------------------------------------------------------
# the partial order
# ---------------------------------------------------------------------------

_REDUCTIONS = (("SR", "RS"), ("TR", "RT"))
_EQUIVALENCES = (("ST", "TS"), ("TS", "ST"))


def _tt_free(word: str) -> bool:
    # TT-free as a class: no R-free run carries two T's
    for run in word.split("R"):
        if run.count("T") >= 2:
            return False
    return True


def equivalence_class_key(node: Node) -> str:
    """Words modulo adjacent ST<->TS swaps: sort letters inside R-free runs."""
    return "R".join("".join(sorted(run)) for run in node.word.split("R"))


def _moves(word: str) -> Iterable[str]:
    for pat, rep in _REDUCTIONS + _EQUIVALENCES:
        start = 0
        while True:
            i = word.find(pat, start)
            if i < 0:
                break
            yield word[:i] + rep + word[i + 2 :]
            start = i + 1


def _reachable(src: Node, dst: Node, cap: int) -> bool:
    """Can dst be reached from src by reductions and equivalences?"""
    if sorted(src.word) != sorted(dst.word):
        return False
    if dst.s_value() > src.s_value() or dst.t_value() > src.t_value():
        return False
    target = equivalence_class_key(dst)
    seen = {src.word}
    queue = deque([src.word])
    while queue:
        w = queue.popleft()
        if equivalence_class_key(Node(w)) == target:
            return True
        for nxt in _moves(w):
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > cap:
                    raise RuntimeError(f"node comparison exceeded search cap {cap}")
                queue.append(nxt)
    return False


def node_compare(
    n1: Node, n2: Node, cap: int = 1_000_000
) -> Literal["greater", "less", "equivalent", "incomparable"]:
    """Decide the order between two TT-free nodes.

    Reductions move an R left past an S or a T; equivalences swap
    adjacent S and T.  "greater" means n1 reduces to n2.
    """
    for nd in (n1, n2):
        if not _tt_free(nd.word):
            raise ValueError(f"{nd.word!r} contains a TT pair (class is excluded)")
    if equivalence_class_key(n1) == equivalence_class_key(n2):
        return "equivalent"
    if _reachable(n1, n2, cap):
        return "greater"
    if _reachable(n2, n1, cap):
        return "less"
    return "incomparable"
