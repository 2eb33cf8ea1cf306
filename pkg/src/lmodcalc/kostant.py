"""Kostant's theorem: ``H(n_P^Q; V_lam)`` as a sum of Levi irreducibles."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .parabolic import NotComparable, Parabolic
from .rootdata import NotDominant, RootDatum, Weight, WeylElement


@dataclass(frozen=True)
class KostantPiece:
    degree: int
    word: tuple[int, ...]
    weight: Weight

    def to_json(self) -> dict:
        return {"degree": self.degree, "word": list(self.word), "weight": self.weight.to_json()}


@dataclass(frozen=True)
class KostantDecomposition:
    P: Parabolic
    Q: Parabolic
    lam: Weight
    pieces: tuple[KostantPiece, ...]

    def degrees(self) -> Counter:
        return Counter(p.degree for p in self.pieces)

    def multiset(self) -> Counter:
        return Counter((p.degree, p.weight) for p in self.pieces)

    def to_json(self) -> dict:
        return {
            "P": self.P.to_json(),
            "Q": self.Q.to_json(),
            "lambda": self.lam.to_json(),
            "pieces": [p.to_json() for p in self.pieces],
        }


def _check_chain(P: Parabolic, Q: Parabolic) -> None:
    if not P <= Q:
        raise NotComparable(f"{P} is not below {Q}")


@lru_cache(maxsize=None)
def coset_reps(rd: RootDatum, P: Parabolic, Q: Parabolic) -> tuple[WeylElement, ...]:
    """Elements ``w`` of ``W(I_Q)`` with ``w^{-1}(alpha) > 0`` for every ``alpha`` in ``I_P``.

    Ordered by length.  Since ``<w rho, alpha^vee> = <rho, w^{-1} alpha^vee>``,
    the test is positivity of ``w rho`` on the coroots of ``I_P``.
    """
    _check_chain(P, Q)
    rho = rd.rho
    out = []
    for w in rd.weyl_enumerate(subset=Q.levi):
        wr = w.act(rho)
        if all(wr.coords[i] > 0 for i in P.levi):
            out.append(w)
    return tuple(out)


def n_dim(rd: RootDatum, P: Parabolic, Q: Parabolic) -> int:
    """``dim n_P^Q``."""
    _check_chain(P, Q)
    return len(rd.positive_roots_in(Q.levi)) - len(rd.positive_roots_in(P.levi))


@lru_cache(maxsize=None)
def kostant_cohomology(rd: RootDatum, P: Parabolic, Q: Parabolic, lam: Weight) -> KostantDecomposition:
    _check_chain(P, Q)
    if not lam.is_dominant(Q.levi):
        raise NotDominant(f"{lam} is not dominant for the Levi {sorted(Q.levi)}")
    pieces = []
    for w in coset_reps(rd, P, Q):
        mu = rd.dot_action(w, lam)
        assert mu.is_dominant(P.levi)
        pieces.append(KostantPiece(w.length, w.word, mu))
    return KostantDecomposition(P, Q, lam, tuple(pieces))


def graded_pieces(rd: RootDatum, P: Parabolic, Q: Parabolic, lam: Weight, degree: int) -> list[KostantPiece]:
    """Pieces of ``H(n_P^Q; V_lam[-degree])``: the module sits in degree ``degree``."""
    return [
        KostantPiece(p.degree + degree, p.word, p.weight) for p in kostant_cohomology(rd, P, Q, lam).pieces
    ]


def piece_for(rd: RootDatum, P: Parabolic, Q: Parabolic, lam: Weight, mu: Weight) -> KostantPiece | None:
    """The unique piece of weight ``mu`` (weights are distinct since ``lam + rho`` is regular)."""
    for p in kostant_cohomology(rd, P, Q, lam).pieces:
        if p.weight == mu:
            return p
    return None


def two_step(rd: RootDatum, P: Parabolic, Q: Parabolic, R: Parabolic, lam: Weight) -> Counter:
    """``(degree, weight)`` multiset of ``H(n_P^Q; H(n_Q^R; V_lam))``."""
    out: Counter = Counter()
    for outer in kostant_cohomology(rd, Q, R, lam).pieces:
        for inner in kostant_cohomology(rd, P, Q, outer.weight).pieces:
            out[(outer.degree + inner.degree, inner.weight)] += 1
    return out


def kappa_check(rd: RootDatum, P: Parabolic, Q: Parabolic, R: Parabolic, lam: Weight) -> bool:
    """Degree and weight bookkeeping of the associativity of the nilpotent-cohomology isomorphisms."""
    _check_chain(P, Q)
    _check_chain(Q, R)
    return two_step(rd, P, Q, R, lam) == kostant_cohomology(rd, P, R, lam).multiset()


def euler_character(rd: RootDatum, P: Parabolic, Q: Parabolic, lam: Weight) -> int:
    """Signed dimension ``sum (-1)^k dim H^k``."""
    return sum((-1) ** p.degree * rd.weyl_dim(p.weight, P.levi) for p in kostant_cohomology(rd, P, Q, lam).pieces)


def ce_oracle(rd: RootDatum, P: Parabolic, Q: Parabolic, lam: Weight | None = None):
    """Brute-force Lie algebra cohomology; see :mod:`lmodcalc.oracle`."""
    from .oracle import ce_oracle as run

    return run(rd, P, Q, lam)
