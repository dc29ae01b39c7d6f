from __future__ import annotations

import json
from itertools import permutations

import pytest

from quandlehom import (
    FiniteQuandle,
    InvalidStructureError,
    build_alexander,
    build_conjugation,
    build_dihedral,
    build_trivial,
    check_axioms,
    classify,
    inner_group,
    load_quandle,
    make_xset,
)
from quandlehom.quandles import find_isomorphism, quandle_to_json


def test_dihedral_table_values():
    q = build_dihedral(3)
    assert q.op(0, 1) == 2  # 2*1 - 0 mod 3
    assert q.op(2, 2) == 2  # idempotence
    assert check_axioms(build_dihedral(5)).is_quandle


def test_alexander_values_and_dihedral_coincidence():
    q = build_alexander(5, 2)
    assert q.op(1, 0) == 2  # 2*1 + (1-2)*0 mod 5
    assert build_alexander(3, -1).table == build_dihedral(3).table
    with pytest.raises(InvalidStructureError):
        build_alexander(4, 2)


def test_trivial_and_conjugation():
    t = build_trivial(3)
    assert t.op(0, 2) == 0
    assert check_axioms(t).is_quandle

    # the three reflections of the inner group of R_3 close under conjugation
    aug = inner_group(build_dihedral(3))
    g = aug.g
    reflections = [aug.eta[b] for b in range(3)]
    conj = build_conjugation(g, reflections)
    assert check_axioms(conj).is_quandle
    # oracle: exhaustive isomorphism search over all 3! bijections
    r3 = build_dihedral(3)
    found = None
    for perm in permutations(range(3)):
        if all(
            perm[conj.table[a][b]] == r3.table[perm[a]][perm[b]]
            for a in range(3)
            for b in range(3)
        ):
            found = perm
            break
    assert found is not None
    assert find_isomorphism(conj, r3) is not None

    # a subset that is not closed under conjugation must be rejected
    not_closed = [g.identity, reflections[0]]
    with pytest.raises(InvalidStructureError):
        build_conjugation(g, not_closed)


def test_check_axioms_reports_witnesses():
    assert check_axioms(build_dihedral(7)).is_quandle
    bad = FiniteQuandle(2, ((0, 0), (0, 1)))
    rep = check_axioms(bad)
    assert not rep.is_rack
    assert any("not a permutation" in f for f in rep.failures)


def test_two_part_union_quandle():
    # Z/2 u Z/2 with a*b = a inside a part and a+1 across parts
    def op(a, b):
        pa, pb = a // 2, b // 2
        if pa == pb:
            return a
        return pa * 2 + (a + 1) % 2

    q = FiniteQuandle(4, tuple(tuple(op(a, b) for b in range(4)) for a in range(4)))
    assert check_axioms(q).is_quandle


def test_inner_group_orders():
    assert inner_group(build_dihedral(3)).g.order == 6
    assert inner_group(build_trivial(3)).g.order == 1
    g5 = inner_group(build_dihedral(5)).g
    assert g5.order == 10
    assert not g5.is_abelian


def test_inner_group_invariants_exhaustive(aug3):
    aug3.check()
    aug3.g.check()


def test_classify():
    c3 = classify(build_dihedral(3))
    assert (c3.connected, c3.faithful, c3.regular) == (True, True, True)
    assert classify(build_trivial(3)).connected is False
    # connected iff 1 - T invertible
    assert classify(build_alexander(5, 2)).connected is True


def test_classify_dihedral_primes():
    for p in (3, 5, 7, 11, 13):
        c = classify(build_dihedral(p))
        assert c.connected and c.faithful and c.regular
        assert c.inner_order == 2 * p


def test_make_xsets(aug3):
    pt = make_xset(aug3, "point")
    assert pt.y_size == 1
    pt.check()
    sf = make_xset(aug3, "self")
    assert sf.star == aug3.x.table
    sf.check()
    gr = make_xset(aug3, "group")
    assert gr.y_size == 6
    gr.check()
    # identity * x acts as the inner automorphism eta(x)
    e = aug3.g.identity
    for x in range(3):
        assert gr.star[e][x] == aug3.eta[x]


def test_xset_axiom_exhaustive_for_alexander():
    aug = inner_group(build_alexander(5, 2))
    for kind in ("point", "self", "group"):
        make_xset(aug, kind).check()


def test_json_round_trip(tmp_path):
    q = build_dihedral(5)
    path = tmp_path / "q.json"
    path.write_text(quandle_to_json(q))
    q2 = load_quandle(path)
    assert q2.table == q.table

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"size": 2, "table": [[0, 0], [0, 0]]}))
    with pytest.raises(InvalidStructureError):
        load_quandle(bad)


def test_constructor_outputs_are_racks():
    for q in (
        build_dihedral(4),
        build_dihedral(7),
        build_alexander(7, 3),
        build_trivial(5),
    ):
        assert check_axioms(q).is_rack
