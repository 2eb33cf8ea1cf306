import itertools
import json

import pytest

from lmodcalc.l2 import micro_support_both
from lmodcalc.parabolic import Parabolic, ParabolicLattice
from lmodcalc.realform import MissingEntry, entry_from_json, load_entry, split_entry
from lmodcalc.rootdata import build_root_datum

SPLIT = split_entry()


def top(rd):
    return Parabolic(range(rd.rank))


def test_dim_d_examples():
    a1, a2 = build_root_datum("A1"), build_root_datum("A2")
    assert SPLIT.dim_D(a1, top(a1)) == 2
    assert SPLIT.dim_D(a2, top(a2)) == 5
    assert SPLIT.dim_D(a2, Parabolic()) == 0
    c2 = build_root_datum("C2")
    assert SPLIT.dim_D(c2, top(c2)) == 6


def test_dim_dv_examples():
    a2 = build_root_datum("A2")
    G = top(a2)
    assert SPLIT.dim_DV(a2, G, a2.zero_weight()) == 5
    assert SPLIT.dim_DV(a2, G, a2.weight([1, 1])) == 2
    assert SPLIT.dim_DV(a2, G, a2.weight([1, 0])) == 3
    assert split_entry("none").dim_DV(a2, G, a2.weight([1, 1])) == 0
    with pytest.raises(ValueError):
        split_entry("half")


@pytest.mark.parametrize("t", ["A2", "A3", "B2", "G2", "B3"])
def test_dim_dv_bounded(t):
    rd = build_root_datum(t)
    for P in ParabolicLattice(rd):
        assert SPLIT.dim_DV(rd, P, rd.zero_weight()) == SPLIT.dim_D(rd, P)
        for c in itertools.product(range(2), repeat=rd.rank):
            assert SPLIT.dim_DV(rd, P, rd.weight(c)) <= SPLIT.dim_D(rd, P)


def test_selfduality_examples():
    a1 = build_root_datum("A1")
    for c in range(4):
        assert SPLIT.conj_selfdual(a1, top(a1), a1.weight([c]))
    a2 = build_root_datum("A2")
    assert not SPLIT.conj_selfdual(a2, top(a2), a2.weight([1, 0]))
    assert SPLIT.conj_selfdual(a2, top(a2), a2.weight([1, 1]))
    assert SPLIT.conj_selfdual(a2, top(a2), a2.zero_weight())
    # an SL2 Levi factor with a nontrivial split part: only the semisimple part matters
    assert SPLIT.conj_selfdual(a2, Parabolic([0]), a2.weight([3, -4]))


def test_involution_makes_standard_rep_selfconjugate():
    a2 = build_root_datum("A2")
    e = entry_from_json(a2, {"involution": [1, 0]})
    assert e.conj_selfdual(a2, top(a2), a2.weight([1, 0]))
    with pytest.raises(ValueError):
        entry_from_json(a2, {"involution": [0, 0]})
    b2 = build_root_datum("B2")
    with pytest.raises(ValueError):
        entry_from_json(b2, {"involution": [1, 0]})


@pytest.mark.parametrize(
    "t,want",
    [("A1", True), ("B2", True), ("C2", True), ("C3", True), ("G2", True), ("F4", True), ("D4", True), ("E7", True),
     ("A2", False), ("A3", False), ("D5", False), ("E6", False)],
)
def test_equal_rank_table(t, want):
    assert SPLIT.equal_rank(build_root_datum(t)) is want


def test_fundamental_predicate():
    a2 = build_root_datum("A2")
    got = {P for P in ParabolicLattice(a2) if SPLIT.fundamental(a2, P)}
    assert got == {Parabolic([0]), Parabolic([1]), top(a2)}
    a3 = build_root_datum("A3")
    got = {P for P in ParabolicLattice(a3) if SPLIT.fundamental(a3, P)}
    assert got == {P for P in ParabolicLattice(a3) if {0, 2} <= P.levi}
    for t in ["A1", "B2", "G2", "A3"]:
        rd = build_root_datum(t)
        assert SPLIT.fundamental(rd, top(rd))


def test_user_table(tmp_path):
    a2 = build_root_datum("A2")
    data = {"levis": {"G": {"dim_D": 5, "equal_rank": False}, "0": {"dim_D": 1}}, "fundamental": [[0], [1]]}
    path = tmp_path / "rf.json"
    path.write_text(json.dumps(data))
    e = load_entry(a2, path)
    assert e.dim_D(a2, top(a2)) == 5 and e.dim_D(a2, Parabolic([0])) == 1
    assert not e.equal_rank(a2)
    assert e.fundamental(a2, Parabolic([0])) and not e.fundamental(a2, Parabolic())
    with pytest.raises(MissingEntry):
        e.dim_D(a2, Parabolic())
    with pytest.raises(MissingEntry):
        entry_from_json(a2, {}).equal_rank(a2)
    assert load_entry(a2, None).mode == "split_default"


@pytest.mark.parametrize("t", ["C2", "B2", "G2", "C3"])
def test_equal_rank_micropurity(t):
    rd = build_root_datum(t)
    assert SPLIT.equal_rank(rd)
    for c in itertools.product(range(2), repeat=rd.rank):
        lam = rd.weight(c)
        sigma = micro_support_both(rd, lam)
        assert [(x.P, x.mu) for x in sigma] == [(top(rd), lam)]


@pytest.mark.parametrize("t", ["A2", "A3"])
def test_boundary_classes_only_at_fundamental(t):
    rd = build_root_datum(t)
    for c in itertools.product(range(3), repeat=rd.rank):
        for x in micro_support_both(rd, rd.weight(c)):
            assert SPLIT.fundamental(rd, x.P)
