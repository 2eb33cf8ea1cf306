import json
import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmodcalc import linalg
from lmodcalc.lmodule import (
    InvalidModule,
    IsotypicComplex,
    IsotypicSummand,
    LModule,
    NotAComplex,
    NotInSupport,
    gauge,
    is_locally_closed,
    mapping_cone,
    micro_support_generic,
    module_from_json,
    random_module,
    ses_check,
    vanishing_bounds,
)
from lmodcalc.parabolic import Parabolic, ParabolicLattice
from lmodcalc.rootdata import build_root_datum

FIXTURES = Path(__file__).parent / "fixtures"
A1 = build_root_datum("A1")
B, G = Parabolic(), Parabolic([0])
ZERO = A1.zero_weight()
NEG = -A1.simple_roots[0]


def S(w, k, m=1):
    return IsotypicSummand(w, k, m)


def single_stratum(pieces, d=None):
    morph = {(G, G): d} if d else {}
    return LModule(A1, [G], {G: pieces}, morph)


def test_single_stratum_complex():
    M = single_stratum([S(ZERO, 0), S(ZERO, 1)], {(ZERO, 0): [[1]]})
    assert M.validate() == (True, [])
    assert M.local_functor(G, "shriek").cohomology() == {}
    assert micro_support_generic(M) == []
    assert vanishing_bounds(M) is None


def test_single_stratum_not_a_complex():
    M = single_stratum([S(ZERO, 0), S(ZERO, 1), S(ZERO, 2)], {(ZERO, 0): [[1]], (ZERO, 1): [[1]]})
    ok, v = M.validate()
    assert not ok
    assert (v[0]["P"], v[0]["R"]) == (G, G)


def test_trivial_at_g_bounds():
    M = single_stratum([S(ZERO, 0)])
    sigma = micro_support_generic(M)
    assert [(x.P, x.weight) for x in sigma] == [(G, ZERO)]
    assert vanishing_bounds(M) == (0, 2)
    M1 = single_stratum([S(ZERO, 1)])
    assert vanishing_bounds(M1) == (1, 3)


def two_stratum(f):
    pieces = {G: [S(ZERO, 0)], B: [S(NEG, 2)]}
    return LModule(A1, [B, G], pieces, {(B, G): {(NEG, 1): [[f]]}})


def test_two_stratum_always_valid():
    for f in (0, 1, Fraction(-3, 2)):
        assert two_stratum(f).validate()[0]


def test_two_stratum_micro_support():
    # the boundary class survives exactly when the attaching map vanishes
    killed = micro_support_generic(two_stratum(1))
    assert [(x.P, x.weight) for x in killed] == [(G, ZERO)]
    kept = micro_support_generic(two_stratum(0))
    assert [(x.P, x.weight) for x in kept] == [(B, NEG), (G, ZERO)]
    el = kept[0]
    assert el.types == {G: {1: 1, 2: 1}}
    assert vanishing_bounds(two_stratum(0), sigma=kept) == (0, 2)


def test_local_functor_examples():
    M = two_stratum(1)
    shriek = M.local_functor(B, "shriek")
    assert shriek.terms() == [(2, NEG, 1)]
    star = M.local_functor(B, "star")
    assert star.terms() == [(0, ZERO, 1), (1, NEG, 1), (2, NEG, 1)]
    assert star.cohomology() == {0: {ZERO: 1}}
    assert M.local_functor(B, "link").cohomology() == {0: {ZERO: 1}, 1: {NEG: 1}}
    assert M.local_functor(B, "star_istar", B).terms() == star.terms()
    assert M.local_functor(G, "star").terms() == M.local_functor(G, "shriek").terms()
    with pytest.raises(NotInSupport):
        single_stratum([S(ZERO, 0)]).local_functor(B, "star")
    with pytest.raises(NotInSupport):
        M.local_functor(G, "star_shriek", B)


def test_invalid_modules():
    rd = build_root_datum("A2")
    lat = ParabolicLattice(rd)
    assert not is_locally_closed(lat, [Parabolic(), Parabolic([0, 1])])
    with pytest.raises(InvalidModule):
        LModule(rd, [Parabolic(), Parabolic([0, 1])], {}, {})
    with pytest.raises(InvalidModule):
        LModule(A1, [G], {G: [S(NEG, 0)]}, {})
    with pytest.raises(InvalidModule):
        LModule(A1, [G], {G: [S(ZERO, 0), S(ZERO, 1)]}, {(G, G): {(ZERO, 0): [[1, 2]]}})


def test_complex_basics():
    w = ZERO
    C = IsotypicComplex({w: (["a", "b"], [0, 1], [[0, 0], [1, 0]])})
    assert C.cohomology() == {}
    Z = IsotypicComplex({w: (["a", "b", "c"], [0, 1, 1], [[0] * 3] * 3)})
    assert Z.cohomology() == {0: {w: 1}, 1: {w: 2}}
    with pytest.raises(NotAComplex):
        IsotypicComplex({w: (["a", "b"], [0, 0], [[0, 0], [1, 0]])})
    with pytest.raises(NotAComplex):
        IsotypicComplex({w: (["a", "b", "c"], [0, 1, 2], [[0, 0, 0], [1, 0, 0], [0, 1, 0]])})


def test_three_term_euler():
    w = ZERO
    d = [[0] * 5 for _ in range(5)]
    d[2][0] = d[3][1] = 1  # degree 0 (2-dim) -> degree 1 (2-dim), rank 2
    C = IsotypicComplex({w: (list("abcde"), [0, 0, 1, 1, 2], d)})
    H = C.cohomology()
    assert H == {2: {w: 1}}
    assert sum((-1) ** k * c[w] for k, c in H.items()) == C.euler()[w]


def test_mapping_cone_of_identity_is_acyclic():
    w = ZERO
    C = IsotypicComplex({w: (["a", "b"], [0, 1], [[0, 0], [1, 0]])})
    D = IsotypicComplex({w: (["x"], [0], [[0]])})
    assert mapping_cone(D, D, {w: [[1]]}).cohomology() == {}
    cone = mapping_cone(C, C, {w: [[1, 0], [0, 1]]})
    assert cone.cohomology() == {}


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.integers(0, 10**6))
def test_shift_commutes_with_cohomology(k, seed):
    rng = random.Random(seed)
    M = random_module(rng, build_root_datum("A2"))
    P = rng.choice(M.support)
    C = M.local_functor(P, "star")
    H, Hk = C.cohomology(), C.shift(k).cohomology()
    assert Hk == {i - k: v for i, v in H.items()}
    C.shift(k).check()


@pytest.mark.parametrize("t", ["A1", "A2", "B2", "A3", "A1xA1"])
def test_random_modules_validate_and_split(t):
    rd = build_root_datum(t)
    rng = random.Random(t)
    for _ in range(8):
        M = random_module(rng, rd)
        assert M.validate()[0]
        for P in M.support:
            for Q in M.support:
                if P <= Q:
                    assert ses_check(M, P, Q)["ok"]


def test_corrupted_block_detected():
    rng = random.Random(5)
    rd = build_root_datum("A2")
    hits = 0
    for _ in range(30):
        M = random_module(rng, rd)
        for P in M.support:
            for Q in M.support:
                if not P <= Q:
                    continue
                for mu, d in sorted(M.types(P, Q)):
                    nr, nc = M.shape(P, Q, mu, d)
                    if not nr or not nc:
                        continue
                    bad = {pq: dict(b) for pq, b in M.morphisms.items()}
                    bad.setdefault((P, Q), {})[(mu, d)] = [[Fraction(rng.randint(1, 3)) for _ in range(nc)] for _ in range(nr)]
                    N = LModule(rd, M.support, {p: list(s) for p, s in M.pieces.items()}, bad)
                    ok, v = N.validate()
                    if not ok:
                        hits += 1
                        assert all(x["P"] <= x["R"] for x in v)
                        assert any(x["P"] == P or x["R"] == Q for x in v)
    assert hits > 0


def test_gauge_invariance():
    rng = random.Random(11)
    for t in ("A1", "A2", "B2"):
        rd = build_root_datum(t)
        for _ in range(5):
            M = random_module(rng, rd)
            N = gauge(rng, M)
            assert N.validate()[0]
            a = [(x.P, x.weight, x.types) for x in micro_support_generic(M, weak=True)]
            b = [(x.P, x.weight, x.types) for x in micro_support_generic(N, weak=True)]
            assert a == b


def test_json_roundtrip():
    rng = random.Random(3)
    rd = build_root_datum("B2")
    M = random_module(rng, rd)
    text = json.dumps(M.to_json())
    N = module_from_json(rd, json.loads(text))
    assert N.to_json() == M.to_json()
    assert N.validate()[0]


def test_fixtures():
    good = json.loads((FIXTURES / "good.json").read_text())
    bad = json.loads((FIXTURES / "bad.json").read_text())
    assert module_from_json(A1, good).validate()[0]
    ok, v = module_from_json(A1, bad).validate()
    assert not ok
    assert [(x["P"], x["R"]) for x in v] == [(B, G)]
    del bad["morphisms"][0]["degree"]
    with pytest.raises(InvalidModule):
        module_from_json(A1, bad)


def test_linalg_rank_nullity():
    rng = random.Random(1)
    for _ in range(20):
        m = [[Fraction(rng.randint(-2, 2)) for _ in range(4)] for _ in range(3)]
        r = linalg.rank(m)
        ns = linalg.nullspace(m, 4)
        assert r + len(ns) == 4
        for v in ns:
            assert all(sum(row[j] * v[j] for j in range(4)) == 0 for row in m)
