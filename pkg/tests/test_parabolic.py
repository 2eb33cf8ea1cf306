import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lmodcalc.parabolic import (
    VARIANTS,
    InternalInconsistency,
    NotComparable,
    Parabolic,
    ParabolicLattice,
    cone_test,
    delta,
    geometric_lemma,
    geometric_lemma_scan,
    project_weight,
    restrict_xi,
    restricted_root,
    split_basis,
)
from lmodcalc.rootdata import build_root_datum, pairing

TYPES = ["A1", "A2", "A3", "B2", "C2", "G2", "B3", "C3", "A1xA1", "A1xA2"]


def P(*idx):
    return Parabolic(idx)


def test_complement_examples():
    rd = build_root_datum("A2")
    lat = ParabolicLattice(rd)
    assert lat.complement(P(), P(0)) == P(1)
    for Q in lat:
        assert lat.complement(Q, Q) == lat.top
        assert lat.complement(Q, lat.top) == Q
    assert len(ParabolicLattice(build_root_datum("A3"))) == 8
    assert len(ParabolicLattice(build_root_datum("A3")).elements()) == 8


def test_not_comparable():
    rd = build_root_datum("A2")
    with pytest.raises(NotComparable):
        delta(rd, P(0), P(1))
    with pytest.raises(NotComparable):
        ParabolicLattice(rd).complement(P(0), P(1))
    with pytest.raises(NotComparable):
        ParabolicLattice(rd).interval(P(0), P(1))


def test_order_is_partial():
    assert not P(0) <= P(1) and not P(1) <= P(0)
    assert P() < P(0) < P(0, 1)
    assert sorted([P(0, 1), P(1), P(), P(0)], key=Parabolic.sort_key) == [P(), P(0), P(1), P(0, 1)]


def test_a1_split_basis():
    rd = build_root_datum("A1")
    sb = split_basis(rd, P())
    beta = sb.dual_coweights[P(0)][0]
    assert beta == rd.coroot_basis(0) * Fraction(1, 2)
    assert pairing(rd.rho, beta) == Fraction(1, 2)


def test_a2_rho_p():
    rd = build_root_datum("A2")
    sb = split_basis(rd, P())
    assert pairing(sb.rho_P, sb.dual_coweights[P(0, 1)][0]) == 1
    assert pairing(sb.rho_P, sb.dual_coweights[P(0, 1)][1]) == 1


def test_split_basis_at_g_is_empty():
    for t in TYPES:
        rd = build_root_datum(t)
        sb = split_basis(rd, ParabolicLattice(rd).top)
        assert sb.delta_P == () and sb.coroots == {}
        assert sb.dual_coweights[ParabolicLattice(rd).top] == {}


def test_restrict_xi_examples():
    rd = build_root_datum("A1")
    assert restrict_xi(rd, P(), rd.zero_weight()).xi == rd.zero_weight()
    mu = -rd.simple_roots[0]
    sb = split_basis(rd, P())
    assert pairing(restrict_xi(rd, P(), mu).xi + sb.rho_P, sb.coroots[0]) == -1
    # at G with no central torus nothing survives
    assert restrict_xi(rd, P(0), rd.weight([3])).xi.is_zero()


def test_central_torus_survives_at_g():
    rd = build_root_datum("A1+t1")
    xi = restrict_xi(rd, P(0), rd.weight([3], [Fraction(1, 2)])).xi
    assert xi.coords == (0,) and xi.central == (Fraction(1, 2),)


@pytest.mark.parametrize("t", TYPES)
def test_split_basis_invariants(t):
    rd = build_root_datum(t)
    lat = ParabolicLattice(rd)
    for Pp in lat:
        sb = split_basis(rd, Pp)
        for g in sb.delta_P:
            assert pairing(sb.rho_P, sb.coroots[g]) > 0
        assert cone_test(rd, Pp, lat.top, sb.rho_P, "dominant+")
        for Q in ParabolicLattice(rd, Pp):
            dPQ = delta(rd, Pp, Q)
            for a in dPQ:
                for b in dPQ:
                    want = 1 if a == b else 0
                    assert pairing(restricted_root(rd, a, Pp), sb.dual_coweights[Q][b]) == want
                    assert pairing(sb.dual_weights[Q][a], sb.coroots[b]) == want
                assert pairing(sb.tau[Q], sb.coroots[a]) == 1
            # rho_P restricted to a_Q is rho_Q
            assert project_weight(rd, sb.rho_P, Q) == split_basis(rd, Q).rho_P
            # roots outside the interval restrict into minus the closed dominant cone of a_P^Q
            for a in set(sb.delta_P) - set(dPQ):
                r = restricted_root(rd, a, Pp)
                rq = r - project_weight(rd, r, Q)
                assert cone_test(rd, Pp, Q, -rq, "dominant_closure")


@pytest.mark.parametrize("t", ["A2", "A3", "B3"])
def test_lattice_axioms(t):
    rd = build_root_datum(t)
    for Pp in ParabolicLattice(rd):
        lat = ParabolicLattice(rd, Pp)
        for Q in lat:
            assert lat.complement(Pp, lat.complement(Pp, Q)) == Q
            assert set(delta(rd, Pp, lat.complement(Pp, Q))) == set(delta(rd, Pp)) - set(delta(rd, Pp, Q))
            for R in lat:
                c = lat.complement
                assert c(Pp, lat.join(Q, R)) == lat.meet(c(Pp, Q), c(Pp, R))
                assert c(Pp, lat.meet(Q, R)) == lat.join(c(Pp, Q), c(Pp, R))


def test_cone_edges():
    rd = build_root_datum("B2")
    z = rd.zero_weight()
    G = P(0, 1)
    assert cone_test(rd, P(), G, z, "dominant_closure")
    assert cone_test(rd, P(), G, z, "dual_closure")
    assert not cone_test(rd, P(), G, z, "dominant+")


@settings(max_examples=80, deadline=None)
@given(st.sampled_from(TYPES), st.data())
def test_dominant_cone_inside_dual_cone(t, data):
    rd = build_root_datum(t)
    Pp = Parabolic(data.draw(st.sets(st.integers(0, rd.rank - 1))))
    lat = ParabolicLattice(rd, Pp)
    Q = data.draw(st.sampled_from(lat.elements()))
    sb = split_basis(rd, Pp)
    xi = rd.zero_weight()
    for g in delta(rd, Pp, Q):
        xi = xi + sb.dual_weights[Q][g] * data.draw(st.fractions(min_value=Fraction(1, 10), max_value=5))
    assert cone_test(rd, Pp, Q, xi, "dominant+")
    assert cone_test(rd, Pp, Q, xi, "dual+")


def test_geometric_lemma_examples():
    rd = build_root_datum("A1")
    sb = split_basis(rd, P())
    assert geometric_lemma(rd, P(), sb.rho_P, verify=True) == P(0)
    xi = -sb.rho_P
    assert pairing(xi, sb.coroots[0]) == -1
    assert geometric_lemma(rd, P(), xi, verify=True) == P()
    for v in VARIANTS:
        assert geometric_lemma_scan(rd, P(), xi, v) == [P()]


def random_xi(rng, rd, P):
    w = rd.weight([Fraction(rng.randint(-12, 12), rng.randint(1, 4)) for _ in range(rd.rank)])
    return project_weight(rd, w, P)


@pytest.mark.parametrize("t", TYPES)
def test_geometric_lemma_matches_scan(t):
    rng = random.Random(17)
    rd = build_root_datum(t)
    for Pp in ParabolicLattice(rd):
        for _ in range(30):
            xi = random_xi(rng, rd, Pp)
            for v in VARIANTS:
                geometric_lemma(rd, Pp, xi, v, verify=True)


def test_bad_variant():
    rd = build_root_datum("A2")
    with pytest.raises(ValueError):
        geometric_lemma(rd, P(), rd.zero_weight(), "sideways")


def test_inconsistency_is_reported(monkeypatch):
    import lmodcalc.parabolic as par

    rd = build_root_datum("A2")
    xi = split_basis(rd, P()).rho_P
    monkeypatch.setattr(par, "geometric_lemma_scan", lambda *a: [P()])
    with pytest.raises(InternalInconsistency):
        par.geometric_lemma(rd, P(), xi, verify=True)
