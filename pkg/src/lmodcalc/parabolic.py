"""Standard parabolics, the Boolean lattice [P, G], and split-component bases.

A standard parabolic is identified with its Levi subset ``I_P`` of simple-root
indices.  For ``P <= Q`` the relative roots ``Delta_P^Q`` are indexed by
``I_Q - I_P``; an index ``g`` outside ``I_P`` stands for the restriction of the
simple root ``alpha_g`` to ``a_P``.

Vectors in ``a_P`` are :class:`Coweight` objects annihilated by the roots of
``I_P``; functionals on ``a_P`` are :class:`Weight` objects whose coordinates
on ``I_P`` vanish.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from . import linalg
from .rootdata import Coweight, RootDatum, Weight, pairing


class NotComparable(ValueError):
    pass


class InternalInconsistency(AssertionError):
    pass


@dataclass(frozen=True)
class Parabolic:
    levi: frozenset

    def __init__(self, levi: Iterable[int] = ()):
        object.__setattr__(self, "levi", frozenset(int(i) for i in levi))

    def __le__(self, other: "Parabolic") -> bool:
        return self.levi <= other.levi

    def __lt__(self, other: "Parabolic") -> bool:
        return self.levi < other.levi

    def __ge__(self, other: "Parabolic") -> bool:
        return self.levi >= other.levi

    def __gt__(self, other: "Parabolic") -> bool:
        return self.levi > other.levi

    def __repr__(self) -> str:
        return f"P{sorted(self.levi)}"

    def to_json(self) -> list[int]:
        return sorted(self.levi)

    def sort_key(self) -> tuple:
        """Total order refining inclusion (``<`` is only partial)."""
        return (len(self.levi), sorted(self.levi))

    def label(self, rank: int) -> str:
        if len(self.levi) == rank:
            return "G"
        return "[" + ",".join(str(i) for i in sorted(self.levi)) + "]"


def borel(rd: RootDatum) -> Parabolic:
    return Parabolic(())


def whole(rd: RootDatum) -> Parabolic:
    return Parabolic(range(rd.rank))


def delta(rd: RootDatum, P: Parabolic, Q: Parabolic | None = None) -> tuple[int, ...]:
    """``Delta_P^Q`` as sorted simple-root indices (``Delta_P`` if ``Q`` is None)."""
    top = set(range(rd.rank)) if Q is None else set(Q.levi)
    if not P.levi <= top:
        raise NotComparable(f"{P} is not below {Q}")
    return tuple(sorted(top - P.levi))


class ParabolicLattice:
    """The Boolean lattice ``[P, G]`` (all standard parabolics when ``P`` is minimal)."""

    def __init__(self, rd: RootDatum, bottom: Parabolic | None = None):
        self.rd = rd
        self.bottom = bottom if bottom is not None else Parabolic(())
        self.top = whole(rd)

    def __iter__(self) -> Iterator[Parabolic]:
        return iter(self.elements())

    def __len__(self) -> int:
        return 2 ** len(delta(self.rd, self.bottom))

    def elements(self) -> list[Parabolic]:
        return self.interval(self.bottom, self.top)

    def interval(self, R: Parabolic, S: Parabolic) -> list[Parabolic]:
        if not R <= S:
            raise NotComparable(f"{R} is not below {S}")
        free = sorted(S.levi - R.levi)
        out = []
        for k in range(len(free) + 1):
            for sub in itertools.combinations(free, k):
                out.append(Parabolic(R.levi | set(sub)))
        return out

    def join(self, Q: Parabolic, R: Parabolic) -> Parabolic:
        return Parabolic(Q.levi | R.levi)

    def meet(self, Q: Parabolic, R: Parabolic) -> Parabolic:
        return Parabolic(Q.levi & R.levi)

    def complement(self, P: Parabolic, Q: Parabolic) -> Parabolic:
        """``(P, Q)``: the element of ``[P, G]`` with ``Delta_P^(P,Q) = Delta_P - Delta_P^Q``."""
        if not P <= Q:
            raise NotComparable(f"{P} is not below {Q}")
        return Parabolic(P.levi | (set(range(self.rd.rank)) - Q.levi))

    def delta(self, P: Parabolic, Q: Parabolic | None = None) -> tuple[int, ...]:
        return delta(self.rd, P, Q)


def lattice(rd: RootDatum) -> ParabolicLattice:
    return ParabolicLattice(rd)


# ---------------------------------------------------------------------------
# Projections of weights and coroots


def project_weight(rd: RootDatum, lam: Weight, P: Parabolic) -> Weight:
    """Component of ``lam`` in ``a_P^*`` (subtract the span of roots in ``I_P``)."""
    idx = sorted(P.levi)
    if not idx or not any(lam.coords[i] for i in idx):
        return lam if not idx else _zero_on(lam, idx)
    a = rd.cartan_matrix
    # find c with lam_j - sum_i c_i A[j][i] = 0 for j in idx
    m = [[Fraction(a[j][i]) for i in idx] for j in idx]
    c = linalg.solve(m, [lam.coords[j] for j in idx])
    out = lam
    for ci, i in zip(c, idx):
        if ci:
            out = out - rd.simple_roots[i] * ci
    assert all(out.coords[j] == 0 for j in idx)
    return out


def _zero_on(lam: Weight, idx) -> Weight:
    # coords already vanish on idx
    return lam


def project_coroot(rd: RootDatum, g: int, P: Parabolic) -> Coweight:
    """Orthogonal projection of the simple coroot ``alpha_g^vee`` to ``a_P``."""
    return _project_coweight(rd, rd.coroot_basis(g), P)


def _project_coweight(rd: RootDatum, cv: Coweight, P: Parabolic) -> Coweight:
    idx = sorted(P.levi)
    if not idx:
        return cv
    a = rd.cartan_matrix
    # <alpha_j, H> = sum_k A[k][j] h_k ; want <alpha_j, H - sum_i c_i alpha_i^vee> = 0
    lhs = [[Fraction(a[i][j]) for i in idx] for j in idx]
    rhs = [sum((a[k][j] * cv.coords[k] for k in range(rd.rank)), Fraction(0)) for j in idx]
    c = linalg.solve(lhs, rhs)
    out = cv
    for ci, i in zip(c, idx):
        if ci:
            out = out - rd.coroot_basis(i) * ci
    return out


def root_pairing(rd: RootDatum, g: int, cv: Coweight) -> Fraction:
    """``<alpha_g, cv>``."""
    return pairing(rd.simple_roots[g], cv)


@dataclass(frozen=True)
class SplitBasis:
    """Split-component linear algebra attached to a parabolic ``P``.

    ``coroots[g]`` is the coroot in ``a_P`` of the restricted root indexed by
    ``g``.  ``dual_coweights[Q][g]`` is ``beta_g^Q vee`` (basis of ``a_P^Q``
    dual to ``Delta_P^Q``) and ``dual_weights[Q][g]`` is ``beta_g^Q`` (basis of
    ``a_P^{Q*}`` dual to the coroots).
    """

    owner: Parabolic
    delta_P: tuple[int, ...]
    coroots: dict
    dual_weights: dict
    dual_coweights: dict
    rho_P: Weight
    tau: dict
    tau_vee: dict

    def to_json(self) -> dict:
        def cw(d):
            return {str(g): v.to_json() for g, v in d.items()}

        return {
            "owner": self.owner.to_json(),
            "delta_P": list(self.delta_P),
            "coroots": cw(self.coroots),
            "rho_P": self.rho_P.to_json(),
            "dual_coweights": {str(Q.to_json()): cw(d) for Q, d in self.dual_coweights.items()},
            "dual_weights": {str(Q.to_json()): cw(d) for Q, d in self.dual_weights.items()},
        }


def restricted_root(rd: RootDatum, g: int, P: Parabolic) -> Weight:
    return project_weight(rd, rd.simple_roots[g], P)


@lru_cache(maxsize=None)
def split_basis(rd: RootDatum, P: Parabolic) -> SplitBasis:
    lat = ParabolicLattice(rd, P)
    dP = delta(rd, P)
    coroots = {g: project_coroot(rd, g, P) for g in dP}
    roots = {g: restricted_root(rd, g, P) for g in dP}
    dual_w, dual_cw, tau, tau_v = {}, {}, {}, {}
    for Q in lat.elements():
        dPQ = delta(rd, P, Q)
        # M[e][d] = <alpha_e, d^vee>
        m = [[root_pairing(rd, e, coroots[d]) for d in dPQ] for e in dPQ]
        if dPQ:
            minv = linalg.inverse(m)
        cws, ws = {}, {}
        for k, g in enumerate(dPQ):
            # beta_g^vee = sum_d x_d d^vee with <alpha_e, .> = delta_{eg}:  x = column g of M^{-1}
            cv = Coweight((0,) * rd.rank, (0,) * rd.central_rank)
            for t, d in enumerate(dPQ):
                if minv[t][k]:
                    cv = cv + coroots[d] * minv[t][k]
            cws[g] = cv
            # beta_g = sum_d y_d root_d with <., e^vee> = delta_{ge}: M^T y = e_g
            w = rd.zero_weight()
            for t, d in enumerate(dPQ):
                if minv[k][t]:
                    w = w + roots[d] * minv[k][t]
            ws[g] = w
        dual_cw[Q] = cws
        dual_w[Q] = ws
        tau[Q] = sum(ws.values(), rd.zero_weight())
        tv = Coweight((0,) * rd.rank, (0,) * rd.central_rank)
        for v in cws.values():
            tv = tv + v
        tau_v[Q] = tv
    rho_P = rd.rho - rd.rho_of(P.levi)
    return SplitBasis(P, dP, coroots, dual_w, dual_cw, rho_P, tau, tau_v)


def rho_P(rd: RootDatum, P: Parabolic) -> Weight:
    return rd.rho - rd.rho_of(P.levi)


@dataclass(frozen=True)
class Xi:
    """A functional on ``a_P`` with its decomposition for a chosen ``Q >= P``."""

    P: Parabolic
    xi: Weight

    def split(self, rd: RootDatum, Q: Parabolic) -> tuple[Weight, Weight]:
        """``(xi_Q, xi^Q)`` with ``xi_Q`` in ``a_Q^*`` and ``xi^Q`` in ``a_P^{Q*}``."""
        if not self.P <= Q:
            raise NotComparable(f"{self.P} is not below {Q}")
        xq = project_weight(rd, self.xi, Q)
        return xq, self.xi - xq


def restrict_xi(rd: RootDatum, P: Parabolic, mu: Weight) -> Xi:
    """The ``a_P``-component ``xi`` of the character ``mu`` of ``L_P``."""
    return Xi(P, project_weight(rd, mu, P))


# ---------------------------------------------------------------------------
# Cones and the geometric lemma


def cone_test(rd: RootDatum, P: Parabolic, Q: Parabolic, xi: Weight, cone: str) -> bool:
    """Membership of ``xi`` (restricted to ``a_P^Q``) in one of the standard cones.

    ``cone`` is one of ``dominant+``, ``dual+``, ``dominant_closure``,
    ``dual_closure``.
    """
    sb = split_basis(rd, P)
    dPQ = delta(rd, P, Q)
    if cone.startswith("dominant"):
        vals = [pairing(xi, sb.coroots[g]) for g in dPQ]
    elif cone.startswith("dual"):
        vals = [pairing(xi, sb.dual_coweights[Q][g]) for g in dPQ]
    else:
        raise ValueError(f"unknown cone {cone!r}")
    if cone.endswith("+"):
        return all(v > 0 for v in vals)
    if cone.endswith("closure"):
        return all(v >= 0 for v in vals)
    raise ValueError(f"unknown cone {cone!r}")


VARIANTS = ("strict_on_complement", "strict_on_subset")


def geometric_lemma_conditions(rd: RootDatum, P: Parabolic, xi: Weight, R: Parabolic, variant: str) -> bool:
    """Check the two defining inequalities of the partition piece indexed by ``R``."""
    sb = split_basis(rd, P)
    sbR = split_basis(rd, R)
    inner = [pairing(xi, sb.dual_coweights[R][g]) for g in delta(rd, P, R)]
    outer = [pairing(xi, sbR.coroots[g]) for g in delta(rd, R)]
    if variant == "strict_on_complement":
        return all(v >= 0 for v in inner) and all(v < 0 for v in outer)
    if variant == "strict_on_subset":
        return all(v > 0 for v in inner) and all(v <= 0 for v in outer)
    raise ValueError(f"unknown variant {variant!r}")


def geometric_lemma_scan(rd: RootDatum, P: Parabolic, xi: Weight, variant: str) -> list[Parabolic]:
    """Every ``R`` in ``[P, G]`` satisfying the partition conditions (brute force)."""
    return [R for R in ParabolicLattice(rd, P) if geometric_lemma_conditions(rd, P, xi, R, variant)]


def _cone_projection(rd: RootDatum, P: Parabolic, xi: Weight) -> tuple[dict, dict]:
    """Nearest-point decomposition ``xi = pi + sum c_g g`` with ``c >= 0``.

    ``pi`` is the projection onto the closed antidominant cone of ``a_P^*``
    and the root part lies in the polar cone.  Solved as the linear
    complementarity problem ``w = B c - b``, ``w, c >= 0``, ``w.c = 0`` by
    least-index principal pivoting, which terminates for positive definite
    ``B``.  Returns ``(c, w)`` keyed by the indices of ``Delta_P``.
    """
    dP = delta(rd, P)
    roots = [restricted_root(rd, g, P) for g in dP]
    n = len(dP)
    B = [[rd.weight_form(roots[i], roots[j]) for j in range(n)] for i in range(n)]
    b = [rd.weight_form(xi, roots[i]) for i in range(n)]
    basis: set[int] = set()
    for _ in range(4**n + 10):
        S = sorted(basis)
        c = [Fraction(0)] * n
        if S:
            sol = linalg.solve([[B[i][j] for j in S] for i in S], [b[i] for i in S])
            for i, v in zip(S, sol):
                c[i] = v
        w = [sum((B[i][j] * c[j] for j in range(n)), Fraction(0)) - b[i] for i in range(n)]
        bad = next((i for i in range(n) if (i in basis and c[i] < 0) or (i not in basis and w[i] < 0)), None)
        if bad is None:
            return dict(zip(dP, c)), dict(zip(dP, w))
        basis ^= {bad}
    raise InternalInconsistency("principal pivoting did not terminate")


def geometric_lemma(
    rd: RootDatum, P: Parabolic, xi: Weight, variant: str = "strict_on_complement", verify: bool = False
) -> Parabolic:
    """The unique ``R`` in ``[P, G]`` of Langlands' geometric lemma.

    ``strict_on_complement``: ``<xi, beta_a^R vee> >= 0`` on ``Delta_P^R`` and
    ``<xi, g_R^vee> < 0`` off it.  ``strict_on_subset``: ``> 0`` and ``<= 0``.
    """
    c, w = _cone_projection(rd, P, xi)
    if variant == "strict_on_complement":
        # the face of the antidominant cone containing the projection
        R = Parabolic(P.levi | {g for g, v in w.items() if v == 0})
    elif variant == "strict_on_subset":
        R = Parabolic(P.levi | {g for g, v in c.items() if v > 0})
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if verify:
        found = geometric_lemma_scan(rd, P, xi, variant)
        if len(found) != 1:
            raise InternalInconsistency(f"geometric lemma scan found {len(found)} solutions for {xi}")
        if found[0] != R:
            raise InternalInconsistency(f"projection gave {R}, scan gave {found[0]}")
    return R
