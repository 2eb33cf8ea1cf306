"""Based root data of split reductive groups with exact rational arithmetic.

Weights are stored in the fundamental-weight basis, so the pairing with a
simple coroot is a coordinate read.  Coweights are stored in the simple-coroot
basis.  A central torus of rank ``k`` contributes ``k`` extra coordinates to
both, paired by the standard dot product.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from . import linalg


class InvalidCartanType(ValueError):
    pass


class GroupTooLarge(RuntimeError):
    pass


class RankMismatch(ValueError):
    pass


class NotDominant(ValueError):
    pass


DEFAULT_MAX_WEYL = 10**6

_POSITIVE_ROOT_COUNT = {
    "A": lambda n: n * (n + 1) // 2,
    "B": lambda n: n * n,
    "C": lambda n: n * n,
    "D": lambda n: n * (n - 1),
    "E": lambda n: {6: 36, 7: 63, 8: 120}[n],
    "F": lambda n: 24,
    "G": lambda n: 6,
}


def max_weyl_default() -> int:
    env = os.environ.get("LMOD_MAX_WEYL")
    return int(env) if env else DEFAULT_MAX_WEYL


# ---------------------------------------------------------------------------
# Cartan types


@dataclass(frozen=True)
class CartanType:
    factors: tuple[tuple[str, int], ...]
    central_torus_rank: int = 0

    def __post_init__(self):
        for fam, n in self.factors:
            _check_factor(fam, n)
        if self.central_torus_rank < 0:
            raise InvalidCartanType("negative central torus rank")

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        """Parse strings such as ``"A3"``, ``"B2xA1"`` or ``"A2+t1"``."""
        text = text.strip().replace(" ", "")
        central = 0
        m = re.fullmatch(r"(.*?)(?:\+t(\d+))?", text)
        body, t = m.group(1), m.group(2)
        if t is not None:
            central = int(t)
        if not body:
            raise InvalidCartanType(f"no simple factors in {text!r}")
        factors = []
        for part in body.split("x"):
            fm = re.fullmatch(r"([A-Ga-g])(\d+)", part)
            if not fm:
                raise InvalidCartanType(f"cannot parse factor {part!r}")
            factors.append((fm.group(1).upper(), int(fm.group(2))))
        return cls(tuple(factors), central)

    @property
    def rank(self) -> int:
        return sum(n for _, n in self.factors)

    def __str__(self) -> str:
        s = "x".join(f"{f}{n}" for f, n in self.factors)
        if self.central_torus_rank:
            s += f"+t{self.central_torus_rank}"
        return s


def _check_factor(fam: str, n: int) -> None:
    ok = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 3,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }.get(fam)
    if not ok:
        raise InvalidCartanType(f"invalid Cartan factor {fam}{n}")


def factor_cartan_matrix(fam: str, n: int) -> list[list[int]]:
    """Bourbaki-numbered Cartan matrix with ``A[i][j] = <alpha_j, alpha_i^vee>``."""
    _check_factor(fam, n)
    a = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j, aij=-1, aji=-1):
        a[i][j] = aij
        a[j][i] = aji

    if fam in "ABC":
        for i in range(n - 1):
            link(i, i + 1)
        if fam == "B":
            # alpha_n short
            a[n - 1][n - 2] = -2
        elif fam == "C":
            # alpha_n long
            a[n - 2][n - 1] = -2
    elif fam == "D":
        for i in range(n - 2):
            link(i, i + 1)
        link(n - 3, n - 1)
    elif fam == "E":
        link(0, 2)
        link(1, 3)
        for i in range(2, n - 1):
            link(i, i + 1)
    elif fam == "F":
        link(0, 1)
        link(1, 2)
        link(2, 3)
        a[2][1] = -2
    elif fam == "G":
        link(0, 1)
        a[0][1] = -3
    return a


# ---------------------------------------------------------------------------
# Weights and coweights


def _fr(xs: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in xs)


@dataclass(frozen=True, order=True)
class Weight:
    coords: tuple[Fraction, ...]
    central: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coords", _fr(self.coords))
        object.__setattr__(self, "central", _fr(self.central))

    def __add__(self, other: "Weight") -> "Weight":
        _same_rank(self, other)
        return Weight(
            tuple(a + b for a, b in zip(self.coords, other.coords)),
            tuple(a + b for a, b in zip(self.central, other.central)),
        )

    def __sub__(self, other: "Weight") -> "Weight":
        return self + (-other)

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords), tuple(-a for a in self.central))

    def __mul__(self, c) -> "Weight":
        c = Fraction(c)
        return Weight(tuple(c * a for a in self.coords), tuple(c * a for a in self.central))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords) and not any(self.central)

    def is_dominant(self, subset: Iterable[int] | None = None) -> bool:
        idx = range(len(self.coords)) if subset is None else subset
        return all(self.coords[i] >= 0 for i in idx)

    def to_json(self) -> list[str]:
        return [str(x) for x in self.coords + self.central]

    def __str__(self) -> str:
        return "(" + ",".join(str(x) for x in self.coords + self.central) + ")"


@dataclass(frozen=True)
class Coweight:
    coords: tuple[Fraction, ...]
    central: tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coords", _fr(self.coords))
        object.__setattr__(self, "central", _fr(self.central))

    def __add__(self, other: "Coweight") -> "Coweight":
        return Coweight(
            tuple(a + b for a, b in zip(self.coords, other.coords)),
            tuple(a + b for a, b in zip(self.central, other.central)),
        )

    def __sub__(self, other: "Coweight") -> "Coweight":
        return self + other * -1

    def __mul__(self, c) -> "Coweight":
        c = Fraction(c)
        return Coweight(tuple(c * a for a in self.coords), tuple(c * a for a in self.central))

    __rmul__ = __mul__

    def to_json(self) -> list[str]:
        return [str(x) for x in self.coords + self.central]


def _same_rank(a, b) -> None:
    if len(a.coords) != len(b.coords) or len(a.central) != len(b.central):
        raise RankMismatch("weights of different rank")


def pairing(lam: Weight, cv: Coweight) -> Fraction:
    """Exact pairing of a weight (fundamental basis) with a coweight (coroot basis)."""
    if len(lam.coords) != len(cv.coords) or len(lam.central) != len(cv.central):
        raise RankMismatch("weight/coweight rank mismatch")
    return sum((a * b for a, b in zip(lam.coords, cv.coords)), Fraction(0)) + sum(
        (a * b for a, b in zip(lam.central, cv.central)), Fraction(0)
    )


# ---------------------------------------------------------------------------
# Weyl group elements


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element: a reduced word and its integer action on weights.

    ``word = (i, j)`` means ``s_i s_j`` (``s_j`` applied first).  ``matrix``
    acts on fundamental-weight coordinates as column vectors.
    """

    word: tuple[int, ...]
    matrix: tuple[tuple[int, ...], ...]

    @property
    def length(self) -> int:
        return len(self.word)

    def act(self, lam: Weight) -> Weight:
        m = self.matrix
        c = lam.coords
        return Weight(
            tuple(sum((m[i][j] * c[j] for j in range(len(c))), Fraction(0)) for i in range(len(c))),
            lam.central,
        )


# ---------------------------------------------------------------------------
# Root datum


@dataclass(frozen=True, eq=False)
class RootDatum:
    cartan: CartanType
    cartan_matrix: tuple[tuple[int, ...], ...]
    factor_of: tuple[int, ...]  # simple index -> factor index
    epsilon: tuple[Fraction, ...]  # (alpha_i, alpha_i)/2, long roots = 1

    @property
    def rank(self) -> int:
        return len(self.cartan_matrix)

    @property
    def central_rank(self) -> int:
        return self.cartan.central_torus_rank

    def __repr__(self) -> str:
        return f"RootDatum({self.cartan})"

    # -- basic vectors ----------------------------------------------------
    def weight(self, coords: Sequence, central: Sequence = ()) -> Weight:
        coords = tuple(coords)
        central = tuple(central) or (0,) * self.central_rank
        if len(coords) != self.rank or len(central) != self.central_rank:
            raise RankMismatch(f"expected {self.rank}+{self.central_rank} coordinates")
        return Weight(coords, central)

    def zero_weight(self) -> Weight:
        return self.weight((0,) * self.rank)

    def fundamental_weight(self, i: int) -> Weight:
        return self.weight(tuple(1 if j == i else 0 for j in range(self.rank)))

    @cached_property
    def simple_roots(self) -> tuple[Weight, ...]:
        a = self.cartan_matrix
        return tuple(self.weight(tuple(a[k][j] for k in range(self.rank))) for j in range(self.rank))

    @cached_property
    def simple_coroots(self) -> tuple[Coweight, ...]:
        return tuple(self.coroot_basis(i) for i in range(self.rank))

    def coroot_basis(self, i: int) -> Coweight:
        return Coweight(
            tuple(1 if j == i else 0 for j in range(self.rank)), (0,) * self.central_rank
        )

    def root_from_coeffs(self, coeffs: Sequence[int]) -> Weight:
        out = self.zero_weight()
        for c, a in zip(coeffs, self.simple_roots):
            if c:
                out = out + a * c
        return out

    # -- roots ------------------------------------------------------------
    @cached_property
    def positive_root_coeffs(self) -> tuple[tuple[int, ...], ...]:
        """Positive roots in simple-root coordinates, sorted by height then lex."""
        n = self.rank
        a = self.cartan_matrix
        simple = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        found = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for beta in frontier:
                for i in range(n):
                    # <beta, alpha_i^vee>
                    p = sum(beta[j] * a[i][j] for j in range(n))
                    if p == 0:
                        continue
                    gamma = tuple(beta[j] - (p if j == i else 0) for j in range(n))
                    if all(x >= 0 for x in gamma) and any(gamma) and gamma not in found:
                        found.add(gamma)
                        nxt.append(gamma)
            frontier = nxt
        return tuple(sorted(found, key=lambda r: (sum(r), tuple(-x for x in r))))

    @cached_property
    def positive_roots(self) -> tuple[Weight, ...]:
        return tuple(self.root_from_coeffs(c) for c in self.positive_root_coeffs)

    def root_coroot_coeffs(self, coeffs: Sequence[int]) -> tuple[Fraction, ...]:
        """Coroot of a root, in simple-coroot coordinates."""
        # beta^vee = sum c_i (eps_i / eps_beta) alpha_i^vee
        eps_b = self.root_norm(coeffs)
        return tuple(Fraction(c) * self.epsilon[i] / eps_b for i, c in enumerate(coeffs))

    def coroot(self, coeffs: Sequence[int]) -> Coweight:
        return Coweight(self.root_coroot_coeffs(coeffs), (0,) * self.central_rank)

    def root_norm(self, coeffs: Sequence[int]) -> Fraction:
        """Half the squared length of a root given in simple-root coordinates."""
        n = self.rank
        a = self.cartan_matrix
        # (beta, beta) = sum c_i c_j (alpha_i, alpha_j), (alpha_i,alpha_j) = A[i][j] eps_i
        tot = Fraction(0)
        for i in range(n):
            if coeffs[i]:
                for j in range(n):
                    if coeffs[j]:
                        tot += coeffs[i] * coeffs[j] * a[i][j] * self.epsilon[i]
        return tot / 2

    def positive_roots_in(self, subset: Iterable[int]) -> tuple[tuple[int, ...], ...]:
        s = set(subset)
        return tuple(
            c for c in self.positive_root_coeffs if all(c[j] == 0 for j in range(self.rank) if j not in s)
        )

    @cached_property
    def rho(self) -> Weight:
        return self.weight((1,) * self.rank)

    def rho_of(self, subset: Iterable[int]) -> Weight:
        """Half the sum of the positive roots of the Levi subsystem ``subset``."""
        tot = self.zero_weight()
        for c in self.positive_roots_in(subset):
            tot = tot + self.root_from_coeffs(c)
        return tot * Fraction(1, 2)

    # -- forms --------------------------------------------------------------
    @cached_property
    def root_gram(self) -> tuple[tuple[Fraction, ...], ...]:
        """``(alpha_i, alpha_j)`` for the invariant form (long roots length^2 2)."""
        a = self.cartan_matrix
        return tuple(
            tuple(Fraction(a[i][j]) * self.epsilon[i] for j in range(self.rank)) for i in range(self.rank)
        )

    @cached_property
    def invariant_form(self) -> tuple[tuple[Fraction, ...], ...]:
        """W-invariant form on the coweight space in the simple-coroot basis.

        Short coroots have squared length 2.  The central block is the
        identity.
        """
        n = self.rank
        a = self.cartan_matrix
        m = [[Fraction(a[i][j]) / self.epsilon[j] for j in range(n)] for i in range(n)]
        k = self.central_rank
        full = [row + [Fraction(0)] * k for row in m]
        for c in range(k):
            full.append([Fraction(0)] * n + [Fraction(1 if d == c else 0) for d in range(k)])
        return tuple(tuple(r) for r in full)

    @cached_property
    def _fund_gram(self) -> tuple[tuple[Fraction, ...], ...]:
        # (varpi_i, varpi_j) = eps_i (A^{-1})_{ij}
        n = self.rank
        if n == 0:
            return ()
        inv = linalg.inverse(linalg.to_matrix(self.cartan_matrix))
        return tuple(tuple(self.epsilon[i] * inv[i][j] for j in range(n)) for i in range(n))

    def weight_form(self, x: Weight, y: Weight) -> Fraction:
        """Invariant form on weights, dual to :attr:`invariant_form`."""
        g = self._fund_gram
        n = self.rank
        tot = sum(
            (x.coords[i] * g[i][j] * y.coords[j] for i in range(n) for j in range(n) if x.coords[i] and y.coords[j]),
            Fraction(0),
        )
        return tot + sum((a * b for a, b in zip(x.central, y.central)), Fraction(0))

    # -- Weyl group ---------------------------------------------------------
    def reflect(self, i: int, lam: Weight) -> Weight:
        p = lam.coords[i]
        if p == 0:
            return lam
        return lam - self.simple_roots[i] * p

    def reflect_coweight(self, i: int, cv: Coweight) -> Coweight:
        a = self.cartan_matrix
        p = sum((a[j][i] * cv.coords[j] for j in range(self.rank)), Fraction(0))
        if p == 0:
            return cv
        return cv - self.coroot_basis(i) * p

    def reflection_matrix(self, i: int) -> tuple[tuple[int, ...], ...]:
        n = self.rank
        a = self.cartan_matrix
        # new_j = lam_j - lam_i * A[j][i]
        return tuple(
            tuple((1 if j == k else 0) - (a[j][i] if k == i else 0) for k in range(n)) for j in range(n)
        )

    def identity_element(self) -> WeylElement:
        n = self.rank
        return WeylElement((), tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    def element(self, word: Sequence[int]) -> WeylElement:
        m = self.identity_element().matrix
        for i in word:
            m = _imatmul(m, self.reflection_matrix(i))
        return WeylElement(tuple(word), m)

    def multiply(self, w1: WeylElement, w2: WeylElement) -> WeylElement:
        """Group product; the word is concatenated, not reduced."""
        return WeylElement(w1.word + w2.word, _imatmul(w1.matrix, w2.matrix))

    def inverse(self, w: WeylElement) -> WeylElement:
        return self.element(tuple(reversed(w.word)))

    def act_coweight(self, w: WeylElement, cv: Coweight) -> Coweight:
        for i in reversed(w.word):
            cv = self.reflect_coweight(i, cv)
        return cv

    def dot_action(self, w: WeylElement, lam: Weight) -> Weight:
        return w.act(lam + self.rho) - self.rho

    def weyl_enumerate(self, max_size: int | None = None, subset: Iterable[int] | None = None) -> list[WeylElement]:
        """All elements of W (or of the parabolic subgroup ``W(subset)``).

        Breadth-first search on right multiplication, so each word is reduced
        and the list is ordered by length.
        """
        if max_size is None:
            max_size = max_weyl_default()
        gens = list(range(self.rank)) if subset is None else sorted(subset)
        e = self.identity_element()
        rho = self.rho
        seen = {rho.coords: e}
        layer = [e]
        out = [e]
        while layer:
            nxt = []
            for w in layer:
                for i in gens:
                    if w.word and w.word[-1] == i:
                        continue
                    m = _imatmul(w.matrix, self.reflection_matrix(i))
                    key = _imatvec(m, rho.coords)
                    if key in seen:
                        continue
                    u = WeylElement(w.word + (i,), m)
                    seen[key] = u
                    nxt.append(u)
                    out.append(u)
                    if len(out) > max_size:
                        raise GroupTooLarge(f"|W| exceeds {max_size}")
            layer = nxt
        return out

    def inversion_count(self, w: WeylElement) -> int:
        """Number of positive roots sent to negative roots."""
        return sum(1 for c in self.positive_root_coeffs if self._is_negative(w.act(self.root_from_coeffs(c))))

    def _is_negative(self, root: Weight) -> bool:
        # a root is negative iff it pairs negatively with rho^vee, i.e. its
        # coefficient sum in simple roots is negative; solve via the inverse
        # Cartan matrix applied to fundamental coordinates
        return self.root_height(root) < 0

    def root_height(self, lam: Weight) -> Fraction:
        return sum(self.to_root_coords(lam), Fraction(0))

    @cached_property
    def _cartan_inv(self):
        return linalg.inverse(linalg.to_matrix(self.cartan_matrix)) if self.rank else []

    def to_root_coords(self, lam: Weight) -> tuple[Fraction, ...]:
        """Coordinates of a weight in the simple-root basis (rational in general)."""
        # lam_k = sum_j A[k][j] c_j  =>  c = A^{-1} lam
        inv = self._cartan_inv
        n = self.rank
        return tuple(sum((inv[j][k] * lam.coords[k] for k in range(n)), Fraction(0)) for j in range(n))

    # -- representation dimensions ----------------------------------------
    def weyl_dim(self, lam: Weight, subset: Iterable[int] | None = None) -> int:
        """Weyl dimension formula for the irreducible of highest weight ``lam``.

        With ``subset`` the formula is taken over the Levi subsystem, giving
        the dimension of an irreducible module of that Levi factor.
        """
        idx = range(self.rank) if subset is None else sorted(subset)
        if not lam.is_dominant(idx):
            raise NotDominant(f"{lam} is not dominant")
        roots = self.positive_root_coeffs if subset is None else self.positive_roots_in(idx)
        num = Fraction(1)
        for c in roots:
            cv = self.root_coroot_coeffs(c)
            # <lam + rho_I, beta^vee>; rho_I pairs to 1 with every simple coroot in I
            x = sum((cv[i] * (lam.coords[i] + 1) for i in idx), Fraction(0))
            y = sum((cv[i] for i in idx), Fraction(0))
            num *= x / y
        assert num.denominator == 1
        return int(num)


def _imatmul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _imatvec(m, v):
    return tuple(sum(m[i][j] * v[j] for j in range(len(v))) for i in range(len(v)))


def _factor_epsilon(a: list[list[int]]) -> list[Fraction]:
    """Half squared root lengths for one connected factor, long roots = 1."""
    n = len(a)
    eps: list[Fraction | None] = [None] * n
    eps[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and a[i][j] != 0 and eps[j] is None:
                # A[i][j] eps_i = A[j][i] eps_j
                eps[j] = Fraction(a[i][j]) * eps[i] / a[j][i]
                stack.append(j)
    top = max(eps)
    return [e / top for e in eps]


def build_root_datum(ct: CartanType | str) -> RootDatum:
    if isinstance(ct, str):
        ct = CartanType.parse(ct)
    n = ct.rank
    big = [[0] * n for _ in range(n)]
    factor_of: list[int] = []
    eps: list[Fraction] = []
    off = 0
    for f, (fam, r) in enumerate(ct.factors):
        a = factor_cartan_matrix(fam, r)
        for i in range(r):
            for j in range(r):
                big[off + i][off + j] = a[i][j]
        factor_of.extend([f] * r)
        eps.extend(_factor_epsilon(a))
        off += r
    rd = RootDatum(ct, tuple(tuple(r) for r in big), tuple(factor_of), tuple(eps))
    expected = sum(_POSITIVE_ROOT_COUNT[fam](r) for fam, r in ct.factors)
    if len(rd.positive_root_coeffs) != expected:
        raise AssertionError("positive root generation failed")
    return rd


def weyl_enumerate(rd: RootDatum, max_size: int | None = None) -> list[WeylElement]:
    return rd.weyl_enumerate(max_size)


def dot_action(rd: RootDatum, w: WeylElement, lam: Weight) -> Weight:
    return rd.dot_action(w, lam)


def weyl_dim(rd: RootDatum, lam: Weight) -> int:
    return rd.weyl_dim(lam)


def dominant_weights_in_box(rd: RootDatum, bound: int) -> list[Weight]:
    """All dominant integral weights with every coordinate in ``[0, bound]``."""
    out = [()]
    for _ in range(rd.rank):
        out = [c + (k,) for c in out for k in range(bound + 1)]
    return [rd.weight(c) for c in out]


def weight_multiplicities(rd: RootDatum, lam: Weight, subset: Iterable[int] | None = None) -> dict[Weight, int]:
    """Character of the irreducible of highest weight ``lam`` (Freudenthal).

    With ``subset`` this is the character of the irreducible module of the
    Levi factor with simple roots ``subset``.
    """
    idx = list(range(rd.rank)) if subset is None else sorted(subset)
    if not lam.is_dominant(idx):
        raise NotDominant(f"{lam} is not dominant for {idx}")
    roots = [c for c in (rd.positive_root_coeffs if subset is None else rd.positive_roots_in(idx))]
    root_w = [rd.root_from_coeffs(c) for c in roots]
    heights = [sum(c) for c in roots]
    rho_i = rd.rho_of(idx)
    form = rd.weight_form
    top = form(lam + rho_i, lam + rho_i)
    mult: dict[Weight, int] = {lam: 1}
    layer = [lam]
    simple = [rd.simple_roots[i] for i in idx]
    while layer:
        cand = sorted({nu - a for nu in layer for a in simple})
        nxt = []
        for nu in cand:
            den = top - form(nu + rho_i, nu + rho_i)
            num = Fraction(0)
            depth = rd.root_height(lam - nu)
            for a, h in zip(root_w, heights):
                k = 1
                while k * h <= depth:
                    m = mult.get(nu + a * k)
                    if m:
                        num += m * form(nu + a * k, a)
                    k += 1
            if num == 0:
                continue
            val = 2 * num / den
            assert val.denominator == 1 and val > 0
            mult[nu] = int(val)
            nxt.append(nu)
        layer = nxt
    return mult
