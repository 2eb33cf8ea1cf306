"""Brute-force Chevalley-Eilenberg cohomology of ``n_P^Q``.

This is an independent check on :func:`lmodcalc.kostant.kostant_cohomology`.
The nilpotent algebra is built from explicit structure constants (matrix
realizations for the classical types, the Frenkel-Kac sign cocycle for
``E``), the cochain complex ``Hom(wedge^k n, V)`` is split into torus-weight
blocks, and cohomology dimensions come from exact ranks.  Nothing from the
Weyl-group side is used except to label the answer.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .parabolic import NotComparable, Parabolic
from .rootdata import RootDatum, Weight, weight_multiplicities

MAX_N_DIM = 12


class UnsupportedCoefficients(ValueError):
    pass


class ComplexTooLarge(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Matrix realizations of one simple factor


def _diag_coroots(fam: str, n: int) -> tuple[int, list[list[int]]]:
    """Matrix size and the diagonals of the simple coroots (Bourbaki numbering)."""
    if fam == "A":
        size = n + 1
        hs = []
        for i in range(n):
            d = [0] * size
            d[i], d[i + 1] = 1, -1
            hs.append(d)
        return size, hs
    # eps-coordinates of the coroots, then mirrored with a sign
    eps = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        eps.append(v)
    last = [0] * n
    if fam == "B":
        last[n - 1] = 2
    elif fam == "C":
        last[n - 1] = 1
    elif fam == "D":
        last[n - 2], last[n - 1] = 1, 1
    else:
        raise UnsupportedCoefficients(f"no matrix realization for type {fam}")
    eps.append(last)
    mid = [0] if fam == "B" else []
    size = 2 * n + len(mid)
    return size, [v + mid + [-x for x in reversed(v)] for v in eps]


def _form_matrix(fam: str, size: int) -> list[list[int]] | None:
    if fam == "A":
        return None
    j = [[0] * size for _ in range(size)]
    for a in range(size):
        b = size - 1 - a
        j[a][b] = -1 if (fam == "C" and a >= size // 2) else 1
    return j


def _matrix_root_vectors(fam: str, n: int):
    """Root vectors for the positive roots of a classical factor.

    Returns ``(size, weight_of_basis, vectors)`` where ``weight_of_basis[a]``
    is the weight (coroot pairings) of the standard basis vector ``e_a`` and
    ``vectors`` maps a root weight (tuple) to a sparse matrix
    ``{(a, b): x}``.
    """
    size, hs = _diag_coroots(fam, n)
    wt = [tuple(h[a] for h in hs) for a in range(size)]
    J = _form_matrix(fam, size)
    by_root = defaultdict(list)
    for a in range(size):
        for b in range(size):
            if a != b:
                r = tuple(x - y for x, y in zip(wt[a], wt[b]))
                by_root[r].append((a, b))
    vectors = {}
    for r, units in by_root.items():
        if J is None:
            if len(units) != 1:
                raise AssertionError("type A root spaces are matrix units")
            vectors[r] = {units[0]: Fraction(1)}
            continue
        # X = sum x_u E_u with X^T J + J X = 0
        eqs = []
        for p in range(size):
            for q in range(size):
                row = []
                for (a, b) in units:
                    # (X^T J)_{pq} = X_{ap'} ... for X = E_ab: X^T = E_ba, (E_ba J)_{pq} = [p==b] J[a][q]
                    v = (J[a][q] if p == b else 0) + (J[p][a] if q == b else 0)
                    row.append(Fraction(v))
                if any(row):
                    eqs.append(row)
        sol = linalg.nullspace(eqs, len(units)) if eqs else linalg.identity(len(units))
        if not sol:
            continue
        if len(sol) != 1:
            raise AssertionError("root space is not one-dimensional")
        vectors[r] = {u: x for u, x in zip(units, sol[0]) if x}
    return size, wt, vectors


def _sparse_bracket(x: dict, y: dict) -> dict:
    out: dict = defaultdict(Fraction)
    for (a, b), s in x.items():
        for (c, d), t in y.items():
            if b == c:
                out[(a, d)] += s * t
            if d == a:
                out[(c, b)] -= s * t
    return {k: v for k, v in out.items() if v}


def _ratio(x: dict, y: dict) -> Fraction:
    """``x = c y``; return c."""
    k = next(iter(y))
    c = x.get(k, Fraction(0)) / y[k]
    if any(x.get(u, 0) != c * v for u, v in y.items()) or any(u not in y for u in x):
        raise AssertionError("bracket left the root space")
    return c


def _frenkel_kac(a: list[list[int]], pos: list[tuple[int, ...]]):
    n = len(a)

    def eps(x, y):
        s = 0
        for i in range(n):
            for j in range(n):
                if x[i] and y[j]:
                    e = 1 if i == j else (a[i][j] if i < j else 0)
                    s += x[i] * y[j] * e
        return -1 if s % 2 else 1

    posset = set(pos)
    br = {}
    for x in pos:
        for y in pos:
            z = tuple(p + q for p, q in zip(x, y))
            if z in posset:
                br[(x, y)] = (z, Fraction(eps(x, y)))
    return br


# ---------------------------------------------------------------------------
# The nilpotent algebra and the module


class _Algebra:
    """Positive root vectors of ``g`` with brackets, and a module ``V``."""

    def __init__(self, rd: RootDatum, lam: Weight):
        self.rd = rd
        self.brackets = {}  # (beta, gamma) -> (beta+gamma, c), roots as coefficient tuples
        self.matrices = {}  # coefficient tuple -> sparse matrix on the standard rep of its factor
        self.vfactor = None
        supp = [i for i in range(rd.rank) if lam.coords[i]]
        factors = {rd.factor_of[i] for i in supp}
        if len(factors) > 1:
            raise UnsupportedCoefficients("coefficients must live on a single simple factor")
        off = 0
        for f, (fam, r) in enumerate(rd.cartan.factors):
            idx = list(range(off, off + r))
            pos = [c for c in rd.positive_root_coeffs if any(c[i] for i in idx)]
            if f in factors and fam != "A":
                raise UnsupportedCoefficients("nontrivial coefficients are realized for type A only")
            if fam in "ABCD":
                self._classical(fam, r, off, pos)
                if f in factors:
                    self.vfactor = (off, r)
            elif fam == "E":
                local = [c[off : off + r] for c in pos]
                a = [row[off : off + r] for row in rd.cartan_matrix[off : off + r]]
                for (x, y), (z, c) in _frenkel_kac(a, local).items():
                    pad = lambda t: (0,) * off + t + (0,) * (rd.rank - off - r)
                    self.brackets[(pad(x), pad(y))] = (pad(z), c)
            else:
                raise UnsupportedCoefficients(f"no structure constants for type {fam}")
            off += r
        self.module = _Module(rd, lam, self)

    def _classical(self, fam, r, off, pos):
        rd = self.rd
        size, wt, vectors = _matrix_root_vectors(fam, r)
        for c in pos:
            key = tuple(rd.root_from_coeffs(c).coords[off : off + r])
            if key not in vectors:
                raise AssertionError("matrix realization does not match the Cartan matrix")
            self.matrices[c] = vectors[key]
        self.std_weights = getattr(self, "std_weights", {})
        self.std_weights[off] = wt
        posset = set(pos)
        for x in pos:
            for y in pos:
                z = tuple(p + q for p, q in zip(x, y))
                if z in posset:
                    self.brackets[(x, y)] = (z, _ratio(_sparse_bracket(self.matrices[x], self.matrices[y]), self.matrices[z]))

    def bracket(self, x, y):
        return self.brackets.get((x, y))


class _Module:
    """An irreducible module, generated inside a tensor product of exterior powers.

    Vectors are sparse dicts keyed by index tuples of ``(C^N)^{tensor d}``.
    For trivial coefficients the module is one-dimensional.
    """

    def __init__(self, rd: RootDatum, lam: Weight, alg: _Algebra):
        self.rd = rd
        self.alg = alg
        self.basis = defaultdict(list)  # weight -> list of vectors
        self._echelon = {}
        if alg.vfactor is None:
            self.trivial = True
            self.basis[lam].append({(): Fraction(1)})
            return
        self.trivial = False
        off, r = alg.vfactor
        self.off = off
        self.N = r + 1
        self.wt = alg.std_weights[off]
        top = {(): Fraction(1)}
        for i in range(r):
            m = int(lam.coords[off + i])
            wedge = {}
            for perm in itertools.permutations(range(i + 1)):
                wedge[perm] = Fraction(_perm_sign(perm))
            for _ in range(m):
                top = _tensor(top, wedge)
        self.lam = lam
        self._generate(top)

    def weight_of(self, key: tuple) -> Weight:
        coords = list(self.lam.coords)
        for i in range(self.alg.vfactor[1]):
            coords[self.off + i] = sum(self.wt[a][i] for a in key)
        return Weight(tuple(coords), self.lam.central)

    def _add(self, mu: Weight, v: dict) -> bool:
        keys, rows = self._echelon.setdefault(mu, ([], []))
        v = dict(v)
        for piv, row in zip(keys, rows):
            c = v.get(piv)
            if c:
                for k, x in row.items():
                    y = v.get(k, Fraction(0)) - c * x
                    if y:
                        v[k] = y
                    else:
                        v.pop(k, None)
        if not v:
            return False
        piv = min(v)
        c = v[piv]
        row = {k: x / c for k, x in v.items()}
        # keep rows fully reduced
        for j, old in enumerate(rows):
            d = old.get(piv)
            if d:
                new = dict(old)
                for k, x in row.items():
                    y = new.get(k, Fraction(0)) - d * x
                    if y:
                        new[k] = y
                    else:
                        new.pop(k, None)
                rows[j] = new
        keys.append(piv)
        rows.append(row)
        self.basis[mu].append(row)
        return True

    def _generate(self, top: dict) -> None:
        mu = self.weight_of(next(iter(top)))
        self._add(mu, top)
        frontier = [(mu, top)]
        r = self.alg.vfactor[1]
        while frontier:
            nxt = []
            for mu, v in frontier:
                for i in range(r):
                    # lowering operator E_{i+1, i}
                    w = _act_matrix({(i + 1, i): Fraction(1)}, v)
                    if not w:
                        continue
                    nu = mu - self.rd.simple_roots[self.off + i]
                    if self._add(nu, w):
                        nxt.append((nu, w))
            frontier = nxt
        # the echelon rows are the basis
        self.basis = {mu: list(rows) for mu, (keys, rows) in self._echelon.items()}

    def coords(self, mu: Weight, v: dict) -> list[Fraction]:
        """Coordinates of ``v`` in the basis of the weight space ``mu``."""
        if self.trivial:
            return [v.get((), Fraction(0))] if mu in self.basis else []
        keys, rows = self._echelon.get(mu, ([], []))
        out = [v.get(k, Fraction(0)) for k in keys]
        check = {}
        for c, row in zip(out, rows):
            for k, x in row.items():
                check[k] = check.get(k, Fraction(0)) + c * x
        if {k: x for k, x in check.items() if x} != {k: x for k, x in v.items() if x}:
            raise AssertionError("vector is not in the module")
        return out

    def act(self, root: tuple, v: dict) -> dict:
        """Action of the positive root vector ``root`` on ``v``."""
        if self.trivial or root not in self.alg.matrices:
            return {}
        off, r = self.alg.vfactor
        if any(root[j] for j in range(self.rd.rank) if not off <= j < off + r):
            return {}
        return _act_matrix(self.alg.matrices[root], v)


def _perm_sign(p) -> int:
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def _tensor(x: dict, y: dict) -> dict:
    return {a + b: s * t for a, s in x.items() for b, t in y.items()}


def _act_matrix(m: dict, v: dict) -> dict:
    """Action of a matrix on a tensor by derivation."""
    out: dict = defaultdict(Fraction)
    for key, s in v.items():
        for pos, idx in enumerate(key):
            for (a, b), x in m.items():
                if b == idx:
                    out[key[:pos] + (a,) + key[pos + 1 :]] += s * x
    return {k: c for k, c in out.items() if c}


# ---------------------------------------------------------------------------
# The cochain complex


def _sort_sign(seq) -> tuple[int, tuple]:
    """Sign of the permutation sorting ``seq`` (0 if there are repeats)."""
    if len(set(seq)) != len(seq):
        return 0, ()
    return _perm_sign([sorted(seq).index(x) for x in seq]), tuple(sorted(seq))


def ce_cohomology_character(rd: RootDatum, P: Parabolic, Q: Parabolic, lam: Weight | None = None):
    """Torus character of ``H^k(n_P^Q; V)`` for each ``k``.

    ``V`` is the irreducible ``G``-module of highest weight ``lam``, restricted
    to ``L_Q``.  Returns ``{k: Counter(weight -> dim)}``.
    """
    if not P <= Q:
        raise NotComparable(f"{P} is not below {Q}")
    lam = rd.zero_weight() if lam is None else lam
    nroots = [c for c in rd.positive_roots_in(Q.levi) if c not in set(rd.positive_roots_in(P.levi))]
    if len(nroots) > MAX_N_DIM:
        raise ComplexTooLarge(f"dim n = {len(nroots)} exceeds {MAX_N_DIM}")
    alg = _Algebra(rd, lam)
    V = alg.module
    root_w = {c: rd.root_from_coeffs(c) for c in nroots}
    order = {c: i for i, c in enumerate(nroots)}
    n = len(nroots)

    # cochain basis per degree and weight: (subset of n-roots, module weight, index)
    blocks: dict = defaultdict(lambda: defaultdict(list))
    for k in range(n + 1):
        for S in itertools.combinations(range(n), k):
            shift = sum((root_w[nroots[i]] for i in S), rd.zero_weight())
            for nu, vecs in V.basis.items():
                for j in range(len(vecs)):
                    blocks[nu - shift][k].append((S, nu, j))

    def differential(mu, k):
        src = blocks[mu][k]
        tgt = blocks[mu][k + 1]
        index = {b: t for t, b in enumerate(tgt)}
        m = linalg.zeros(len(tgt), len(src))
        for col, (S, nu, j) in enumerate(src):
            v = V.basis[nu][j]
            Sset = set(S)
            # x_b . omega(rest): targets S + {b}
            for b in range(n):
                if b in Sset:
                    continue
                T = tuple(sorted(S + (b,)))
                i = T.index(b)
                w = V.act(nroots[b], v)
                if not w:
                    continue
                nu2 = nu + root_w[nroots[b]]
                for jj, c in enumerate(V.coords(nu2, w)):
                    if c:
                        m[index[(T, nu2, jj)]][col] += (-1) ** i * c
            # omega([x_a, x_b], rest)
            for g in S:
                rest = [s for s in S if s != g]
                for a in range(n):
                    for b in range(a + 1, n):
                        if a in rest or b in rest:
                            continue
                        br = alg.bracket(nroots[a], nroots[b])
                        if br is None or br[0] != nroots[g]:
                            continue
                        T = tuple(sorted(rest + [a, b]))
                        if len(set(T)) != len(T):
                            continue
                        ia, ib = T.index(a), T.index(b)
                        remaining = [t for t in T if t not in (a, b)]
                        sgn, _ = _sort_sign([g] + remaining)
                        m[index[(T, nu, j)]][col] += (-1) ** (ia + ib) * br[1] * sgn
        return m

    out: dict = {k: Counter() for k in range(n + 1)}
    for mu, by_k in blocks.items():
        ranks = {}
        mats = {}
        for k in range(n + 1):
            if by_k.get(k) and by_k.get(k + 1):
                mats[k] = differential(mu, k)
                ranks[k] = linalg.rank(mats[k])
            else:
                ranks[k] = 0
        for k in range(n):
            if k in mats and k + 1 in mats:
                if not linalg.is_zero(linalg.matmul(mats[k + 1], mats[k])):
                    raise AssertionError("d^2 != 0 in the cochain complex")
        for k in range(n + 1):
            h = len(by_k.get(k, ())) - ranks[k] - (ranks[k - 1] if k else 0)
            if h:
                out[k][mu] = h
    return out


def peel(rd: RootDatum, char: Counter, subset) -> Counter:
    """Decompose a torus character into irreducibles of the Levi with simple roots ``subset``."""
    idx = sorted(subset)
    char = Counter({k: v for k, v in char.items() if v})
    out: Counter = Counter()
    simple = [rd.simple_roots[i] for i in idx]
    while char:
        tops = [mu for mu in char if all(mu + a not in char for a in simple)]
        mu = max(tops, key=rd.root_height)
        m = char[mu]
        if m < 0:
            raise AssertionError("character is not effective")
        out[mu] += m
        for nu, c in weight_multiplicities(rd, mu, idx).items():
            char[nu] -= m * c
            if char[nu] == 0:
                del char[nu]
    return out


def ce_oracle(rd: RootDatum, P: Parabolic, Q: Parabolic, lam: Weight | None = None) -> dict:
    """Per-degree ``Counter`` of ``L_P`` highest weights in ``H(n_P^Q; Res V_lam)``."""
    chars = ce_cohomology_character(rd, P, Q, lam)
    return {k: peel(rd, c, P.levi) for k, c in chars.items() if c}


def kostant_prediction(rd: RootDatum, P: Parabolic, Q: Parabolic, lam: Weight | None = None) -> dict:
    """The same data from Kostant's theorem, after branching ``V_lam`` to ``L_Q``."""
    from .kostant import kostant_cohomology

    lam = rd.zero_weight() if lam is None else lam
    if len(Q.levi) == rd.rank:
        branches = Counter({lam: 1})
    else:
        branches = peel(rd, Counter(weight_multiplicities(rd, lam)), Q.levi)
    out: dict = defaultdict(Counter)
    for nu, m in branches.items():
        for p in kostant_cohomology(rd, P, Q, nu).pieces:
            out[p.degree][p.weight] += m
    return dict(out)
