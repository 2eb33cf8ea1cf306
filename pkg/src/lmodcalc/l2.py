"""Closed-form invariants of the L^2-cohomology L-module.

Infinite-dimensional groups are tracked only through their degree support:
:class:`DegreeSupport` keeps a lower envelope (degrees provably nonzero) and
an upper envelope (degrees possibly nonzero, everything else provably zero).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .kostant import kostant_cohomology, piece_for
from .parabolic import NotComparable, Parabolic, ParabolicLattice, delta, geometric_lemma, restrict_xi, split_basis
from .realform import RealFormEntry, split_entry
from .rootdata import NotDominant, RootDatum, Weight, pairing


class WeightNotPresent(ValueError):
    pass


class ModeDisagreement(AssertionError):
    pass


# ---------------------------------------------------------------------------
# Dimension classes


@dataclass(frozen=True)
class DimClass:
    """``Zero``, ``Fin(n)`` with ``n > 0``, or ``Inf``."""

    n: int | None  # None means infinite

    def __post_init__(self):
        if self.n is not None and self.n < 0:
            raise ValueError("negative dimension")

    @property
    def is_zero(self) -> bool:
        return self.n == 0

    @property
    def is_inf(self) -> bool:
        return self.n is None

    def __add__(self, other: "DimClass") -> "DimClass":
        if self.is_inf or other.is_inf:
            return INF
        return DimClass(self.n + other.n)

    def __mul__(self, other: "DimClass") -> "DimClass":
        if self.is_zero or other.is_zero:
            return ZERO
        if self.is_inf or other.is_inf:
            return INF
        return DimClass(self.n * other.n)

    def __str__(self) -> str:
        return "inf" if self.is_inf else str(self.n)

    def to_json(self):
        return "inf" if self.is_inf else self.n


ZERO = DimClass(0)
INF = DimClass(None)


def fin(n: int) -> DimClass:
    return DimClass(n)


def _clean(d: dict) -> dict:
    return {k: v for k, v in sorted(d.items()) if not v.is_zero}


def _add_into(d: dict, k: int, v: DimClass) -> None:
    d[k] = d.get(k, ZERO) + v


@dataclass(frozen=True)
class DegreeSupport:
    guaranteed: dict = field(default_factory=dict)
    possible: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "guaranteed", _clean(self.guaranteed))
        object.__setattr__(self, "possible", _clean(self.possible))
        for k in self.guaranteed:
            if k not in self.possible:
                raise AssertionError(f"degree {k} guaranteed but not possible")

    @classmethod
    def point(cls, degree: int = 0, dim: DimClass = DimClass(1)) -> "DegreeSupport":
        return cls({degree: dim}, {degree: dim})

    @classmethod
    def zero(cls) -> "DegreeSupport":
        return cls({}, {})

    @property
    def is_zero(self) -> bool:
        return not self.possible

    @property
    def is_nonzero(self) -> bool:
        return bool(self.guaranteed)

    @property
    def is_finite(self) -> bool:
        return not any(v.is_inf for v in self.possible.values())

    @property
    def infinite_flag(self) -> bool:
        """Some degree carries an infinite-dimensional group for certain."""
        return any(v.is_inf for v in self.guaranteed.values())

    def shift(self, k: int) -> "DegreeSupport":
        """Move every degree up by ``k`` (the shift ``[-k]``)."""
        return DegreeSupport(
            {d + k: v for d, v in self.guaranteed.items()}, {d + k: v for d, v in self.possible.items()}
        )

    def __add__(self, other: "DegreeSupport") -> "DegreeSupport":
        g, p = dict(self.guaranteed), dict(self.possible)
        for k, v in other.guaranteed.items():
            _add_into(g, k, v)
        for k, v in other.possible.items():
            _add_into(p, k, v)
        return DegreeSupport(g, p)

    def tensor(self, other: "DegreeSupport") -> "DegreeSupport":
        g, p = {}, {}
        for i, a in self.guaranteed.items():
            for j, b in other.guaranteed.items():
                _add_into(g, i + j, a * b)
        for i, a in self.possible.items():
            for j, b in other.possible.items():
                _add_into(p, i + j, a * b)
        return DegreeSupport(g, p)

    def lowest(self, which: str = "possible") -> int | None:
        d = getattr(self, which)
        return min(d) if d else None

    def highest(self, which: str = "possible") -> int | None:
        d = getattr(self, which)
        return max(d) if d else None

    def to_json(self) -> dict:
        return {
            "guaranteed": {str(k): v.to_json() for k, v in self.guaranteed.items()},
            "possible": {str(k): v.to_json() for k, v in self.possible.items()},
        }


def inf_on(lo: int, hi: int) -> DegreeSupport:
    """Possibly infinite on ``[lo, hi]``, nothing guaranteed."""
    return DegreeSupport({}, {k: INF for k in range(lo, hi + 1)})


# ---------------------------------------------------------------------------
# Sign data


def _top(rd: RootDatum) -> Parabolic:
    return Parabolic(range(rd.rank))


def shifted_xi(rd: RootDatum, P: Parabolic, mu: Weight) -> Weight:
    """``xi_V + rho_P``."""
    return restrict_xi(rd, P, mu).xi + split_basis(rd, P).rho_P


def zucker_cone(rd: RootDatum, P: Parabolic, mu: Weight, weighted: bool = True) -> DegreeSupport:
    """L^2 cohomology of the cone ``A_P^G`` with coefficients of type ``mu``."""
    sb = split_basis(rd, P)
    x = shifted_xi(rd, P, mu) if weighted else restrict_xi(rd, P, mu).xi
    vals = [pairing(x, sb.dual_coweights[_top(rd)][g]) for g in sb.delta_P]
    if all(v > 0 for v in vals):
        return DegreeSupport.point(0)
    if any(v < 0 for v in vals):
        return DegreeSupport.zero()
    r = sum(1 for v in vals if v == 0)
    return inf_on(1, r)


@dataclass(frozen=True)
class SVData:
    P: Parabolic
    mu: Weight
    xi: Weight
    S: Parabolic
    T: Parabolic
    T_prime: Parabolic
    Q: Parabolic
    Q_prime: Parabolic

    def to_json(self) -> dict:
        return {
            "P": self.P.to_json(),
            "mu": self.mu.to_json(),
            "xi": self.xi.to_json(),
            "S_V": self.S.to_json(),
            "T_V": self.T.to_json(),
            "T_V_prime": self.T_prime.to_json(),
            "Q_V": self.Q.to_json(),
            "Q_V_prime": self.Q_prime.to_json(),
        }


def sv_data(rd: RootDatum, P: Parabolic, mu: Weight) -> SVData:
    if not mu.is_dominant(P.levi):
        raise NotDominant(f"{mu} is not dominant for {P}")
    sb = split_basis(rd, P)
    x = shifted_xi(rd, P, mu)
    G = _top(rd)
    S, T, Tp, Q, Qp = (set(P.levi) for _ in range(5))
    for g in sb.delta_P:
        b = pairing(x, sb.dual_coweights[G][g])
        a = pairing(x, sb.coroots[g])
        if b > 0:
            S.add(g)
        if b < 0:
            T.add(g)
        if b <= 0:
            Tp.add(g)
        if a < 0:
            Q.add(g)
        if a <= 0:
            Qp.add(g)
    return SVData(P, mu, restrict_xi(rd, P, mu).xi, *(Parabolic(s) for s in (S, T, Tp, Q, Qp)))


def split_vanishing(rd: RootDatum, P: Parabolic, mu: Weight) -> bool:
    """``(xi_V + rho_P)`` vanishes on ``a_P^G``."""
    sb = split_basis(rd, P)
    x = shifted_xi(rd, P, mu)
    return all(pairing(x, sb.coroots[g]) == 0 for g in sb.delta_P)


# ---------------------------------------------------------------------------
# Interval cohomology and local groups


def n_delta(rd: RootDatum, S: Parabolic, R: Parabolic | None = None) -> int:
    return len(delta(rd, S, R))


def interval_support(rd: RootDatum, S1: Parabolic, S2: Parabolic) -> DegreeSupport:
    """Degree support of the cohomology of the interval ``[S1, S2]`` double complex.

    The upper envelope is the ``E_1`` term; the lower envelope is the degree
    ``#Delta_{S1}`` where the cohomology is known not to vanish.
    """
    if not S1 <= S2:
        raise NotComparable(f"{S1} is not below {S2}")
    lat = ParabolicLattice(rd)
    G = _top(rd)
    possible = DegreeSupport.zero()
    for R in lat.interval(S1, S2):
        term = DegreeSupport.point(0) if R == G else inf_on(1, n_delta(rd, R))
        possible = possible + term.shift(n_delta(rd, S1, R))
    top = n_delta(rd, S1)
    if S1 == G and S2 == G:
        return DegreeSupport.point(0)
    return DegreeSupport({top: INF}, possible.possible)


def cone_cohomology(rd: RootDatum, S: Parabolic) -> DegreeSupport:
    """``H_(2)(A_S^G; C)``: a point for ``S = G``, else infinite in degrees ``[1, #Delta_S]``,
    certainly nonzero in the top one."""
    return interval_support(rd, S, S)


def _kostant_piece(rd: RootDatum, lam: Weight, P: Parabolic, mu: Weight):
    p = piece_for(rd, P, _top(rd), lam, mu)
    if p is None:
        raise WeightNotPresent(f"{mu} does not occur in H(n_P; E) for P = {P}")
    return p


def _coefficients(rd: RootDatum, lam: Weight, P: Parabolic, mu: Weight, as_type: bool) -> DegreeSupport:
    p = _kostant_piece(rd, lam, P, mu)
    dim = 1 if as_type else rd.weyl_dim(mu, P.levi)
    return DegreeSupport.point(p.degree, fin(dim))


def local_l2(rd: RootDatum, lam: Weight, P: Parabolic, mu: Weight, as_type: bool = False) -> DegreeSupport:
    """Local L^2 cohomology at ``P``, ``mu``-isotypic part."""
    coeff = _coefficients(rd, lam, P, mu, as_type)
    sv = sv_data(rd, P, mu)
    if sv.T != P:
        return DegreeSupport.zero()
    return cone_cohomology(rd, sv.S).tensor(coeff)


def nilpotent_local_l2(
    rd: RootDatum, lam: Weight, P: Parabolic, R: Parabolic, mu: Weight, as_type: bool = False
) -> DegreeSupport:
    """``H(n_P^R; H(i_R^* A_(2)(E)))``, ``mu``-isotypic part."""
    coeff = _coefficients(rd, lam, P, mu, as_type)
    sv = sv_data(rd, P, mu)
    if not sv.T <= R:
        return DegreeSupport.zero()
    return cone_cohomology(rd, Parabolic(R.levi | sv.S.levi)).tensor(coeff)


def intermediate_type(rd: RootDatum, lam: Weight, P: Parabolic, R: Parabolic, mu: Weight):
    """The unique ``L_R``-type ``W`` of ``H(n_R; E)`` with ``V`` inside ``H(n_P^R; W)``.

    Returns ``(W piece, inner piece)``.
    """
    hits = []
    for outer in kostant_cohomology(rd, R, _top(rd), lam).pieces:
        inner = piece_for(rd, P, R, outer.weight, mu)
        if inner is not None:
            hits.append((outer, inner))
    if len(hits) != 1:
        raise WeightNotPresent(f"{mu} arises from {len(hits)} types at {R}")
    return hits[0]


def nilpotent_local_l2_via_levi(
    rd: RootDatum, lam: Weight, P: Parabolic, R: Parabolic, mu: Weight, as_type: bool = True
) -> DegreeSupport:
    """Same group computed at ``R`` for the intermediate type and pushed down."""
    outer, inner = intermediate_type(rd, lam, P, R, mu)
    loc = local_l2(rd, lam, R, outer.weight, as_type=True)
    dim = 1 if as_type else rd.weyl_dim(mu, P.levi)
    return loc.tensor(DegreeSupport.point(inner.degree, fin(dim)))


def supports_l2(rd: RootDatum, lam: Weight, P: Parabolic, Q: Parabolic, mu: Weight, as_type: bool = True) -> DegreeSupport:
    """Local cohomology at ``P`` supported on ``Q``, ``mu``-isotypic part."""
    coeff = _coefficients(rd, lam, P, mu, as_type)
    lat = ParabolicLattice(rd, P)
    sv = sv_data(rd, P, mu)
    lo = lat.complement(P, sv.T_prime)
    hi = lat.complement(P, sv.T)
    if not (lo <= Q <= hi):
        return DegreeSupport.zero()
    S1 = lat.join(sv.T, sv.S)
    S2 = lat.join(lat.complement(P, Q), sv.S)
    return interval_support(rd, S1, S2).tensor(coeff).shift(n_delta(rd, P, sv.T))


def lattice_decomposition_check(rd: RootDatum, P: Parabolic, mu: Weight, Q: Parabolic) -> bool | None:
    """``[T_V, (P,Q)]`` as the disjoint union of ``[T, (T v S_V) ^ (P,Q)]``.

    Returns None when ``T_V`` is not below ``(P,Q)``.
    """
    lat = ParabolicLattice(rd, P)
    sv = sv_data(rd, P, mu)
    PQ = lat.complement(P, Q)
    if not sv.T <= PQ:
        return None
    whole = set(lat.interval(sv.T, PQ))
    seen: list = []
    for Tt in lat.interval(sv.T, lat.meet(sv.T_prime, PQ)):
        top = lat.meet(lat.join(Tt, sv.S), PQ)
        if not Tt <= top:
            return False
        seen.extend(lat.interval(Tt, top))
    return len(seen) == len(set(seen)) and set(seen) == whole


# ---------------------------------------------------------------------------
# Micro-support


@dataclass
class L2Element:
    P: Parabolic
    mu: Weight
    degree: int
    sv: SVData
    types: dict  # Q -> DegreeSupport

    def key(self):
        return (self.P.sort_key(), self.mu)

    def type_union(self) -> DegreeSupport:
        out = DegreeSupport.zero()
        for t in self.types.values():
            out = out + t
        return out

    def to_json(self, rank: int) -> dict:
        return {
            "P": self.P.label(rank),
            "levi": self.P.to_json(),
            "mu": self.mu.to_json(),
            "kostant_degree": self.degree,
            "type_support": {
                Q.label(rank): t.to_json() for Q, t in sorted(self.types.items(), key=lambda kv: kv[0].sort_key())
            },
        }


def micro_support_l2(
    rd: RootDatum, lam: Weight, mode: str = "characterization", entry: RealFormEntry | None = None, weak: bool = False
) -> list[L2Element]:
    entry = entry or split_entry()
    G = _top(rd)
    if not lam.is_dominant():
        raise NotDominant(f"{lam} is not dominant")
    out = []
    for P in ParabolicLattice(rd).elements():
        lat = ParabolicLattice(rd, P)
        for piece in kostant_cohomology(rd, P, G, lam).pieces:
            mu = piece.weight
            if not weak and not entry.conj_selfdual(rd, P, mu):
                continue
            sv = sv_data(rd, P, mu)
            window = [Q for Q in lat.elements() if sv.Q <= Q <= sv.Q_prime]
            if mode == "characterization":
                if not split_vanishing(rd, P, mu):
                    continue
                types = {
                    Q: interval_support(rd, P, lat.complement(P, Q)).tensor(DegreeSupport.point(piece.degree))
                    for Q in window
                }
            elif mode == "definitional":
                types = {}
                for Q in window:
                    t = supports_l2(rd, lam, P, Q, mu)
                    if t.is_nonzero:
                        types[Q] = t
                if not types:
                    continue
            else:
                raise ValueError(f"unknown mode {mode!r}")
            out.append(L2Element(P, mu, piece.degree, sv, types))
    out.sort(key=L2Element.key)
    return out


def _same(a: list[L2Element], b: list[L2Element]) -> bool:
    if [x.key() for x in a] != [y.key() for y in b]:
        return False
    for x, y in zip(a, b):
        if set(x.types) != set(y.types):
            return False
        if any(x.types[Q] != y.types[Q] for Q in x.types):
            return False
    return True


def micro_support_both(rd: RootDatum, lam: Weight, entry: RealFormEntry | None = None, weak: bool = False):
    a = micro_support_l2(rd, lam, "characterization", entry, weak)
    b = micro_support_l2(rd, lam, "definitional", entry, weak)
    if not _same(a, b):
        raise ModeDisagreement(
            f"characterization {[(x.P, x.mu) for x in a]} != definitional {[(y.P, y.mu) for y in b]}"
        )
    return a


def partition_cross_check(rd: RootDatum, P: Parabolic, mu: Weight) -> bool:
    """Vanishing on ``a_P^G`` iff both geometric-lemma partitions land on ``G`` and ``P``."""
    x = shifted_xi(rd, P, mu)
    a = geometric_lemma(rd, P, x, "strict_on_complement") == _top(rd)
    b = geometric_lemma(rd, P, x, "strict_on_subset") == P
    return (a and b) == split_vanishing(rd, P, mu)


def l2_report(rd: RootDatum, lam: Weight, entry: RealFormEntry | None = None) -> dict:
    entry = entry or split_entry()
    sigma = micro_support_both(rd, lam, entry)
    G = _top(rd)
    rank = rd.rank
    finite_ok = all(x.type_union().is_finite == (x.P == G) for x in sigma)
    fundamental_ok = all(entry.fundamental(rd, x.P) for x in sigma)
    report = {
        "cartan": str(rd.cartan),
        "lambda": lam.to_json(),
        "realform": entry.to_json(),
        "microsupport": [x.to_json(rank) for x in sigma],
        "modes_agree": True,
        "equal_rank": entry.equal_rank(rd),
        "finite_type_iff_G": finite_ok,
        "boundary_only_at_fundamental": fundamental_ok,
    }
    if not sigma:
        report["bracket"] = None
        report["conclusion"] = "L2-cohomology vanishes: empty micro-support"
        return report
    lo = hi = inner_lo = None
    for x in sigma:
        dD = entry.dim_D(rd, x.P)
        dV = entry.dim_DV(rd, x.P, x.mu)
        t = x.type_union()
        c = Fraction(dD - dV, 2) + t.lowest("possible")
        d = Fraction(dD + dV, 2) + t.highest("possible")
        lo = c if lo is None else min(lo, c)
        hi = d if hi is None else max(hi, d)
        g = t.lowest("guaranteed")
        if g is not None:
            cg = Fraction(dD - dV, 2) + g
            inner_lo = cg if inner_lo is None else min(inner_lo, cg)
    report["bracket"] = [lo, hi]
    report["c_upper"] = inner_lo
    report["conclusion"] = f"H^i vanishes for i outside [{lo}, {hi}]"
    return report
