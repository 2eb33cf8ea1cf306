"""Finite L-modules in isotypic normal form.

Each ``E_P`` is a list of summands ``V_mu[-k]^{m}`` (weight ``mu``, degree
``k``, multiplicity ``m``), unique per ``(mu, k)``.  By Schur's lemma a map
``f_PQ: H(n_P^Q; E_Q) -> E_P[1]`` is a family of matrices, one for every
``L_P``-type ``mu`` and degree ``d``:

* rows: the copies of ``V_mu`` in ``E_P^{d+1}`` (the multiplicity of the summand);
* columns: the copies of ``V_mu`` in ``H(n_P^Q; E_Q)^d``, listed summand by
  summand of ``E_Q`` in sorted order.  A summand ``V_nu[-k]`` of ``E_Q``
  contributes its multiplicity when some ``w`` in ``W^{P,Q}`` has
  ``w.nu = mu`` and ``k + l(w) = d``; that ``w`` is unique.

Applying ``H(n_P^R; -)`` to an ``L_R``-map acts on these matrices without
signs, and the nilpotent-cohomology isomorphisms are the bijections
``W^{P,R} x W^{R,S} -> W^{P,S}``.
"""

from __future__ import annotations

import json
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from . import linalg
from .kostant import kostant_cohomology, piece_for
from .parabolic import Parabolic, ParabolicLattice, restrict_xi, split_basis
from .realform import RealFormEntry, split_entry
from .rootdata import RootDatum, Weight, pairing


class NotInSupport(ValueError):
    pass


class NotAComplex(ValueError):
    pass


class InvalidModule(ValueError):
    pass


@dataclass(frozen=True)
class IsotypicSummand:
    weight: Weight
    degree: int
    mult: int

    def to_json(self) -> dict:
        return {"weight": self.weight.to_json(), "degree": self.degree, "mult": self.mult}


def _pkey(P: Parabolic):
    return P.sort_key()


def _zero(nrows: int, ncols: int):
    return linalg.zeros(nrows, ncols)


# ---------------------------------------------------------------------------
# Complexes of isotypic pieces


class IsotypicComplex:
    """A complex of ``L_P``-modules, one finite complex of multiplicity spaces per type.

    ``blocks[mu] = (labels, degrees, d)`` with ``d`` the square matrix of the
    differential on the multiplicity space of ``mu`` (``d[i][j]`` is the
    coefficient of basis vector ``i`` in the image of ``j``).
    """

    def __init__(self, blocks: dict | None = None, check: bool = True):
        self.blocks = {}
        for mu, (labels, degrees, d) in (blocks or {}).items():
            if labels:
                self.blocks[mu] = (list(labels), list(degrees), d)
        if check:
            self.check()

    def check(self) -> None:
        for mu, (labels, degrees, d) in self.blocks.items():
            n = len(labels)
            for i in range(n):
                for j in range(n):
                    if d[i][j] and degrees[i] != degrees[j] + 1:
                        raise NotAComplex(f"differential does not raise degree by one at type {mu}")
            if not linalg.is_zero(linalg.matmul(d, d, n, n)):
                raise NotAComplex(f"d^2 != 0 at type {mu}")

    def terms(self) -> list[tuple[int, Weight, int]]:
        """``(degree, weight, multiplicity)`` sorted by degree then weight."""
        out = Counter()
        for mu, (labels, degrees, d) in self.blocks.items():
            for k in degrees:
                out[(k, mu)] += 1
        return [(k, mu, m) for (k, mu), m in sorted(out.items())]

    def _piece(self, mu, i, j):
        labels, degrees, d = self.blocks[mu]
        rows = [a for a, k in enumerate(degrees) if k == j]
        cols = [a for a, k in enumerate(degrees) if k == i]
        return [[d[r][c] for c in cols] for r in rows], len(rows), len(cols)

    def cohomology(self) -> dict[int, Counter]:
        """``{degree: Counter(weight -> dim)}`` of the cohomology."""
        out: dict[int, Counter] = defaultdict(Counter)
        for mu, (labels, degrees, d) in self.blocks.items():
            degs = sorted(set(degrees))
            rk = {}
            for k in degs:
                m, nr, nc = self._piece(mu, k, k + 1)
                rk[k] = linalg.rank(m) if nr and nc else 0
            for k in degs:
                h = degrees.count(k) - rk[k] - rk.get(k - 1, 0)
                if h:
                    out[k][mu] += h
        return {k: v for k, v in sorted(out.items())}

    def type_of(self, mu: Weight) -> dict[int, int]:
        """Multiplicity of ``V_mu`` in each cohomology group."""
        return {k: c[mu] for k, c in self.cohomology().items() if c.get(mu)}

    def shift(self, k: int) -> "IsotypicComplex":
        """``C[k]``: degrees lowered by ``k`` and differential multiplied by ``(-1)^k``."""
        s = -1 if k % 2 else 1
        return IsotypicComplex(
            {mu: (labels, [x - k for x in degrees], linalg.scale(d, s)) for mu, (labels, degrees, d) in self.blocks.items()},
            check=False,
        )

    def euler(self) -> Counter:
        out = Counter()
        for mu, (labels, degrees, d) in self.blocks.items():
            out[mu] += sum((-1) ** k for k in degrees)
        return out

    def to_json(self) -> dict:
        return {
            "terms": [{"degree": k, "weight": mu.to_json(), "mult": m} for k, mu, m in self.terms()],
            "cohomology": [
                {"degree": k, "weight": mu.to_json(), "dim": c[mu]}
                for k, c in self.cohomology().items()
                for mu in sorted(c)
            ],
        }


def mapping_cone(C: IsotypicComplex, D: IsotypicComplex, f: dict) -> IsotypicComplex:
    """``M(f) = C[1] + D`` with differential ``(c, d) -> (-d_C c, f c + d_D d)``.

    ``f[mu]`` is the matrix of the chain map on the type ``mu`` (rows indexed
    by the basis of ``D``, columns by the basis of ``C``).
    """
    blocks = {}
    for mu in set(C.blocks) | set(D.blocks):
        lc, dc, mc = C.blocks.get(mu, ([], [], []))
        ld, dd, md = D.blocks.get(mu, ([], [], []))
        nc, nd = len(lc), len(ld)
        n = nc + nd
        m = _zero(n, n)
        for i in range(nc):
            for j in range(nc):
                m[i][j] = -mc[i][j]
        for i in range(nd):
            for j in range(nd):
                m[nc + i][nc + j] = md[i][j]
        fm = f.get(mu)
        if fm is not None:
            for i in range(nd):
                for j in range(nc):
                    m[nc + i][j] = Fraction(fm[i][j])
        labels = [("C", x) for x in lc] + [("D", x) for x in ld]
        blocks[mu] = (labels, [x - 1 for x in dc] + list(dd), m)
    return IsotypicComplex(blocks)


# ---------------------------------------------------------------------------
# L-modules


def is_locally_closed(lat: ParabolicLattice, support) -> bool:
    s = set(support)
    for P in s:
        for Q in s:
            if P <= Q:
                if any(R not in s for R in lat.interval(P, Q)):
                    return False
    return True


class LModule:
    def __init__(self, rd: RootDatum, support, pieces: dict, morphisms: dict):
        self.rd = rd
        self.lattice = ParabolicLattice(rd)
        self.support = tuple(sorted(set(support), key=_pkey))
        if not is_locally_closed(self.lattice, self.support):
            raise InvalidModule("support is not locally closed")
        self.pieces = {}
        for P in self.support:
            seen = {}
            for s in pieces.get(P, ()):
                if s.mult < 0:
                    raise InvalidModule("negative multiplicity")
                if not s.weight.is_dominant(P.levi):
                    raise InvalidModule(f"{s.weight} is not dominant for {P}")
                key = (s.degree, s.weight)
                seen[key] = seen.get(key, 0) + s.mult
            self.pieces[P] = tuple(IsotypicSummand(w, k, m) for (k, w), m in sorted(seen.items()) if m)
        self._cols = {}
        self.morphisms = {}
        for (P, Q), blocks in morphisms.items():
            if P not in self.pieces or Q not in self.pieces or not P <= Q:
                raise InvalidModule(f"morphism {P} <- {Q} outside the support")
            clean = {}
            for (mu, d), m in blocks.items():
                nr, nc = self.shape(P, Q, mu, d)
                m = linalg.to_matrix(m)
                if len(m) != nr or any(len(r) != nc for r in m):
                    raise InvalidModule(f"block {P} <- {Q} at {mu}, degree {d}: expected {nr}x{nc}")
                if not linalg.is_zero(m):
                    clean[(mu, d)] = m
            if clean:
                self.morphisms[(P, Q)] = clean

    # -- bookkeeping --------------------------------------------------------
    def mult(self, P: Parabolic, mu: Weight, k: int) -> int:
        for s in self.pieces.get(P, ()):
            if s.weight == mu and s.degree == k:
                return s.mult
        return 0

    def columns(self, P: Parabolic, R: Parabolic, mu: Weight, d: int) -> list[tuple[int, int]]:
        """Basis of the ``mu``-multiplicity space of ``H(n_P^R; E_R)^d``: ``(summand, copy)``."""
        key = (P, R, mu, d)
        hit = self._cols.get(key)
        if hit is not None:
            return hit
        out = []
        for t, s in enumerate(self.pieces.get(R, ())):
            p = piece_for(self.rd, P, R, s.weight, mu)
            if p is not None and s.degree + p.degree == d:
                out.extend((t, c) for c in range(s.mult))
        self._cols[key] = out
        return out

    def types(self, P: Parabolic, R: Parabolic) -> set:
        """All ``(mu, d)`` occurring in ``H(n_P^R; E_R)``."""
        out = set()
        for s in self.pieces.get(R, ()):
            for p in kostant_cohomology(self.rd, P, R, s.weight).pieces:
                out.add((p.weight, s.degree + p.degree))
        return out

    def shape(self, P, Q, mu, d) -> tuple[int, int]:
        return self.mult(P, mu, d + 1), len(self.columns(P, Q, mu, d))

    def block(self, P, Q, mu, d):
        nr, nc = self.shape(P, Q, mu, d)
        m = self.morphisms.get((P, Q), {}).get((mu, d))
        return m if m is not None else _zero(nr, nc)

    def hmap(self, P: Parabolic, R: Parabolic, S: Parabolic, mu: Weight, d: int):
        """``H(n_P^R; f_RS)`` on the type ``mu``: columns(P,S,mu,d) -> columns(P,R,mu,d+1)."""
        src = self.columns(P, S, mu, d)
        tgt = self.columns(P, R, mu, d + 1)
        out = _zero(len(tgt), len(src))
        if not src or not tgt:
            return out
        if R == P:
            return [list(r) for r in self.block(P, S, mu, d)]
        tindex = {c: i for i, c in enumerate(tgt)}
        rd = self.rd
        Rpieces = self.pieces.get(R, ())
        for col, (t, c) in enumerate(src):
            s = self.pieces[S][t]
            # factor the coset representative through W^{R,S}
            hits = []
            for u in kostant_cohomology(rd, R, S, s.weight).pieces:
                w = piece_for(rd, P, R, u.weight, mu)
                if w is not None:
                    hits.append((u, w))
            if len(hits) != 1:
                raise AssertionError("coset factorization is not unique")
            u, w = hits[0]
            nu, dR = u.weight, s.degree + u.degree
            inner_cols = self.columns(R, S, nu, dR)
            j = inner_cols.index((t, c))
            blk = self.block(R, S, nu, dR)
            row_summand = next((i for i, x in enumerate(Rpieces) if x.weight == nu and x.degree == dR + 1), None)
            if row_summand is None:
                continue
            for copy in range(Rpieces[row_summand].mult):
                x = blk[copy][j]
                if x:
                    out[tindex[(row_summand, copy)]][col] = x
        return out

    # -- local complexes ------------------------------------------------------
    def local_complex(self, P: Parabolic, Rset) -> IsotypicComplex:
        """``(sum_{R in Rset} H(n_P^R; E_R), sum H(n_P^R; f_RS))``."""
        Rs = sorted(set(Rset), key=_pkey)
        by_mu = defaultdict(set)
        for R in Rs:
            for mu, d in self.types(P, R):
                by_mu[mu].add(d)
        blocks = {}
        for mu, ds in by_mu.items():
            labels, degrees, where = [], [], {}
            for d in sorted(ds):
                for R in Rs:
                    cols = self.columns(P, R, mu, d)
                    where[(R, d)] = len(labels)
                    for x in cols:
                        labels.append((R, d) + x)
                        degrees.append(d)
            n = len(labels)
            m = _zero(n, n)
            for d in sorted(ds):
                for S in Rs:
                    for R in Rs:
                        if not R <= S or (R, d + 1) not in where:
                            continue
                        h = self.hmap(P, R, S, mu, d)
                        r0, c0 = where[(R, d + 1)], where[(S, d)]
                        for i, row in enumerate(h):
                            for j, x in enumerate(row):
                                if x:
                                    m[r0 + i][c0 + j] = x
            blocks[mu] = (labels, degrees, m)
        return IsotypicComplex(blocks, check=False)

    def index_set(self, P: Parabolic, kind: str, Q: Parabolic | None = None) -> list[Parabolic]:
        if P not in self.pieces:
            raise NotInSupport(f"{P} is not in the support")
        if Q is not None and Q not in self.pieces:
            raise NotInSupport(f"{Q} is not in the support")
        if kind in ("star_shriek", "star_jstar", "star_istar") and (Q is None or not P <= Q):
            raise NotInSupport(f"{kind} needs P <= Q in the support")
        up = [R for R in self.support if P <= R]
        if kind == "shriek":
            return [P]
        if kind == "star":
            return up
        if kind == "link":
            return [R for R in up if R != P]
        if kind == "star_shriek":
            return [R for R in up if R <= Q]
        if kind == "star_jstar":
            return [R for R in up if R != P and not R <= Q]
        if kind == "star_istar":
            return [R for R in up if Q <= R]
        raise ValueError(f"unknown functor {kind!r}")

    def local_functor(self, P: Parabolic, kind: str, Q: Parabolic | None = None) -> IsotypicComplex:
        C = self.local_complex(P, self.index_set(P, kind, Q))
        C.check()
        return C

    # -- the module condition ---------------------------------------------------
    def violations(self) -> list[dict]:
        out = []
        for P in self.support:
            for R in self.support:
                if not P <= R:
                    continue
                Qs = [Q for Q in self.support if P <= Q <= R]
                for mu, d in sorted(self.types(P, R)):
                    tot = None
                    for Q in Qs:
                        a = self.hmap(P, P, Q, mu, d + 1)
                        b = self.hmap(P, Q, R, mu, d)
                        prod = linalg.matmul(a, b, len(b), len(self.columns(P, R, mu, d)))
                        tot = prod if tot is None else linalg.add(tot, prod)
                    if tot is not None and not linalg.is_zero(tot):
                        out.append({"P": P, "R": R, "weight": mu, "degree": d})
        return out

    def validate(self) -> tuple[bool, list[dict]]:
        v = self.violations()
        return (not v), v

    # -- serialization ------------------------------------------------------
    def to_json(self) -> dict:
        morph = []
        for (P, Q), blocks in sorted(self.morphisms.items(), key=lambda kv: (_pkey(kv[0][0]), _pkey(kv[0][1]))):
            for (mu, d), m in sorted(blocks.items(), key=lambda kv: (kv[0][1], kv[0][0])):
                morph.append(
                    {
                        "from_Q": Q.to_json(),
                        "to_P": P.to_json(),
                        "weight": mu.to_json(),
                        "degree": d,
                        "matrix": [[str(x) for x in row] for row in m],
                    }
                )
        return {
            "cartan": str(self.rd.cartan),
            "support": [P.to_json() for P in self.support],
            "pieces": {
                json.dumps(P.to_json()): [s.to_json() for s in self.pieces[P]] for P in self.support
            },
            "morphisms": morph,
        }


def module_from_json(rd: RootDatum, data: dict) -> LModule:
    def par(x):
        if isinstance(x, str):
            x = json.loads(x) if x.strip().startswith("[") else [int(t) for t in x.split(",") if t.strip()]
        return Parabolic(x)

    def wt(x):
        coords = [Fraction(c) for c in x]
        n = rd.rank
        return rd.weight(coords[:n], coords[n:])

    support = [par(p) for p in data["support"]]
    pieces = {}
    for k, lst in data.get("pieces", {}).items():
        pieces[par(k)] = [IsotypicSummand(wt(s["weight"]), int(s["degree"]), int(s["mult"])) for s in lst]
    morph: dict = defaultdict(dict)
    for b in data.get("morphisms", []):
        key = (par(b["to_P"]), par(b["from_Q"]))
        mu = wt(b["weight"])
        if "degree" not in b:
            raise InvalidModule("morphism block without a degree")
        morph[key][(mu, int(b["degree"]))] = [[Fraction(x) for x in row] for row in b["matrix"]]
    return LModule(rd, support, pieces, dict(morph))


# ---------------------------------------------------------------------------
# Short exact sequences


def _restrict(C: IsotypicComplex, keep) -> dict:
    """Index maps from ``C``'s labels to the sub/quotient label lists."""
    out = {}
    for mu, (labels, degrees, d) in C.blocks.items():
        out[mu] = [i for i, lab in enumerate(labels) if keep(lab)]
    return out


def _span_dim(vectors: list[list[Fraction]]) -> int:
    return linalg.rank(vectors) if vectors else 0


def _cycles(d, degrees, k):
    """Basis of the cycles in degree ``k`` as full-length vectors."""
    n = len(degrees)
    idx = [i for i in range(n) if degrees[i] == k]
    if not idx:
        return []
    rows = [i for i in range(n) if degrees[i] == k + 1]
    m = [[d[r][c] for c in idx] for r in rows]
    null = linalg.nullspace(m, len(idx)) if rows else linalg.identity(len(idx))
    out = []
    for v in null:
        full = [Fraction(0)] * n
        for a, i in enumerate(idx):
            full[i] = v[a]
        out.append(full)
    return out


def _boundaries(d, degrees, k):
    n = len(degrees)
    cols = [j for j in range(n) if degrees[j] == k - 1]
    return [[d[i][j] for i in range(n)] for j in cols if any(d[i][j] for i in range(n))]


def ses_check(M: LModule, P: Parabolic, Q: Parabolic | None = None) -> dict:
    """Check ``0 -> i_P^* i_Q^! M -> i_P^* M -> i_P^* j_Q* j_Q^* M -> 0``.

    With ``Q = P`` this is ``0 -> i_P^! -> i_P^* -> link -> 0``.  Returns a
    report with the graded splitting, subcomplex/quotient compatibility and
    long-exact-sequence rank identities per type and degree.
    """
    Q = P if Q is None else Q
    A = M.local_functor(P, "star_shriek", Q)
    B = M.local_functor(P, "star")
    C = M.local_functor(P, "star_jstar", Q)
    report = {"graded_split": True, "subcomplex": True, "quotient": True, "exact": True, "euler": True, "failures": []}
    hA, hB, hC = A.cohomology(), B.cohomology(), C.cohomology()

    def h(H, k, mu):
        return H.get(k, {}).get(mu, 0)

    for mu, (labels, degrees, d) in B.blocks.items():
        la = A.blocks.get(mu, ([], [], []))[0]
        lc = C.blocks.get(mu, ([], [], []))[0]
        inA = [i for i, lab in enumerate(labels) if lab[0] <= Q]
        inC = [i for i, lab in enumerate(labels) if not lab[0] <= Q]
        if [labels[i] for i in inA] != list(la) or [labels[i] for i in inC] != list(lc):
            report["graded_split"] = False
            report["failures"].append(("graded_split", mu))
            continue
        if any(d[i][j] for i in inC for j in inA):
            report["subcomplex"] = False
            report["failures"].append(("subcomplex", mu))
        dA = A.blocks[mu][2] if la else []
        if any(d[inA[i]][inA[j]] != dA[i][j] for i in range(len(inA)) for j in range(len(inA))):
            report["subcomplex"] = False
            report["failures"].append(("restriction", mu))
        dC = C.blocks[mu][2] if lc else []
        if any(d[inC[i]][inC[j]] != dC[i][j] for i in range(len(inC)) for j in range(len(inC))):
            report["quotient"] = False
            report["failures"].append(("quotient", mu))
        # long exact sequence
        degs = sorted(set(degrees))
        degC = [degrees[i] for i in inC]
        dCm = [[d[i][j] for j in inC] for i in inC]
        iota, pi = {}, {}
        for k in degs:
            bB = _boundaries(d, degrees, k)
            zA = []
            if la:
                for v in _cycles(dA, A.blocks[mu][1], k):
                    full = [Fraction(0)] * len(labels)
                    for a, i in enumerate(inA):
                        full[i] = v[a]
                    zA.append(full)
            iota[k] = _span_dim(zA + bB) - _span_dim(bB)
            zB = _cycles(d, degrees, k)
            bC = _boundaries(dCm, degC, k) if inC else []
            proj = [[v[i] for i in inC] for v in zB] if inC else []
            pi[k] = _span_dim(proj + bC) - _span_dim(bC) if inC else 0
        alt = 0
        for k in degs:
            ok_b = h(hB, k, mu) - pi[k] == iota[k]
            ok_a = h(hA, k, mu) - iota[k] == h(hC, k - 1, mu) - pi.get(k - 1, 0)
            ok_c = h(hC, k, mu) - pi[k] >= 0
            if not (ok_a and ok_b and ok_c):
                report["exact"] = False
                report["failures"].append(("exact", mu, k))
            alt += (-1) ** k * (h(hA, k, mu) - h(hB, k, mu) + h(hC, k, mu))
        if alt:
            report["euler"] = False
            report["failures"].append(("euler", mu))
    report["ok"] = all(report[k] for k in ("graded_split", "subcomplex", "quotient", "exact", "euler"))
    return report


# ---------------------------------------------------------------------------
# Micro-support


@dataclass
class MicroSupportElement:
    P: Parabolic
    weight: Weight
    interval: tuple
    types: dict = field(default_factory=dict)  # Q -> {degree: multiplicity}

    def degrees(self) -> list[int]:
        return sorted({k for t in self.types.values() for k in t})

    def to_json(self, rank: int) -> dict:
        return {
            "P": self.P.label(rank),
            "mu": self.weight.to_json(),
            "interval": [self.interval[0].to_json(), self.interval[1].to_json()],
            "types": [
                {"Q": Q.label(rank), "degrees": {str(k): v for k, v in sorted(t.items())}}
                for Q, t in sorted(self.types.items(), key=lambda kv: _pkey(kv[0]))
            ],
        }


def q_interval(rd: RootDatum, P: Parabolic, mu: Weight, top: Parabolic) -> tuple[Parabolic, Parabolic]:
    """``(Q_V, Q_V')`` below ``top`` from the signs of ``<xi_V + rho_P, alpha^vee>``."""
    sb = split_basis(rd, P)
    x = restrict_xi(rd, P, mu).xi + sb.rho_P
    lt, le = set(P.levi), set(P.levi)
    for g in sorted(top.levi - P.levi):
        v = pairing(x, sb.coroots[g])
        if v < 0:
            lt.add(g)
        if v <= 0:
            le.add(g)
    return Parabolic(lt), Parabolic(le)


def micro_support_generic(M: LModule, entry: RealFormEntry | None = None, weak: bool = False) -> list[MicroSupportElement]:
    entry = entry or split_entry()
    top = Parabolic(set().union(*[P.levi for P in M.support])) if M.support else None
    out = []
    for P in M.support:
        cands = set()
        for R in M.support:
            if P <= R:
                cands |= {mu for mu, d in M.types(P, R)}
        for mu in sorted(cands):
            if not weak and not entry.conj_selfdual(M.rd, P, mu):
                continue
            qv, qv2 = q_interval(M.rd, P, mu, top)
            types = {}
            for Q in M.support:
                if qv <= Q <= qv2 and P <= Q:
                    t = M.local_functor(P, "star_shriek", Q).type_of(mu)
                    if t:
                        types[Q] = t
            if types:
                out.append(MicroSupportElement(P, mu, (qv, qv2), types))
    return out


def vanishing_bounds(M: LModule, entry: RealFormEntry | None = None, sigma=None):
    """``(c(M), d(M))`` as Fractions, or None when the micro-support is empty."""
    entry = entry or split_entry()
    sigma = micro_support_generic(M, entry) if sigma is None else sigma
    if not sigma:
        return None
    lo, hi = None, None
    for v in sigma:
        dD = entry.dim_D(M.rd, v.P)
        dV = entry.dim_DV(M.rd, v.P, v.weight)
        degs = v.degrees()
        c = Fraction(dD - dV, 2) + degs[0]
        d = Fraction(dD + dV, 2) + degs[-1]
        lo = c if lo is None else min(lo, c)
        hi = d if hi is None else max(hi, d)
    return lo, hi


# ---------------------------------------------------------------------------
# Random valid modules


def _random_matrix(rng: random.Random, nr: int, nc: int, lo=-2, hi=2):
    return [[Fraction(rng.randint(lo, hi)) for _ in range(nc)] for _ in range(nr)]


def _random_invertible(rng: random.Random, n: int):
    while True:
        m = _random_matrix(rng, n, n)
        if linalg.rank(m) == n:
            return m


def random_module(rng: random.Random, rd: RootDatum, support=None, max_mult: int = 2) -> LModule:
    """A random valid L-module.

    Every ``E_P`` is a direct sum ``A_P + B_P`` and the maps send ``A``-parts
    to ``B``-parts only, so every composite ``f o H(f)`` vanishes.  The ``B``
    parts are chosen to contain some of the types that the ``A`` parts
    produce one degree up, so the maps are generically nonzero.  A random
    change of basis on every isotypic block then hides the splitting.
    """
    lat = ParabolicLattice(rd)
    if support is None:
        els = lat.elements()
        a, b = sorted(rng.sample(els, 2), key=_pkey)
        if not a <= b:
            a, b = lat.meet(a, b), b
        support = lat.interval(a, b)
    support = sorted(support, key=_pkey)
    A: dict = {P: Counter() for P in support}
    B: dict = {P: Counter() for P in support}
    for P in support:
        for _ in range(rng.randint(1, 2)):
            coords = [0] * rd.rank
            for i in P.levi:
                coords[i] = rng.randint(0, 1)
            for i in set(range(rd.rank)) - P.levi:
                coords[i] = rng.randint(-2, 1)
            A[P][(rng.randint(0, 1), rd.weight(coords))] += rng.randint(1, max_mult)
    for P in support:
        for Q in support:
            if P <= Q:
                for (k, nu), m in A[Q].items():
                    for p in kostant_cohomology(rd, P, Q, nu).pieces:
                        if rng.random() < 0.5:
                            B[P][(k + p.degree + 1, p.weight)] += rng.randint(1, max_mult)
    # merged multiplicities: A coordinates first
    merged = {P: Counter() for P in support}
    for P in support:
        for key, m in A[P].items():
            merged[P][key] += m
        for key, m in B[P].items():
            merged[P][key] += m
    pieces = {P: [IsotypicSummand(w, k, m) for (k, w), m in merged[P].items()] for P in support}
    M0 = LModule(rd, support, pieces, {})

    def split_rows(P, mu, k):
        return A[P].get((k, mu), 0)

    morph = {}
    for P in support:
        for Q in support:
            if not P <= Q:
                continue
            blocks = {}
            for mu, d in M0.types(P, Q):
                nr, nc = M0.shape(P, Q, mu, d)
                if not nr or not nc:
                    continue
                m = _zero(nr, nc)
                a_rows = split_rows(P, mu, d + 1)
                for j, (t, c) in enumerate(M0.columns(P, Q, mu, d)):
                    s = M0.pieces[Q][t]
                    if c >= A[Q].get((s.degree, s.weight), 0):
                        continue  # source copy lies in B
                    for i in range(a_rows, nr):
                        m[i][j] = Fraction(rng.randint(-2, 2))
                blocks[(mu, d)] = m
            morph[(P, Q)] = blocks
    M1 = LModule(rd, support, pieces, morph)
    return gauge(rng, M1)


def gauge(rng: random.Random, M: LModule) -> LModule:
    """Conjugate every block by random invertible base changes of the multiplicity spaces."""
    g = {}
    for P in M.support:
        for t, s in enumerate(M.pieces[P]):
            g[(P, t)] = _random_invertible(rng, s.mult)
    return transform(M, g)


def transform(M: LModule, g: dict) -> LModule:
    """Apply base changes ``g[(P, summand)]``: ``f'_PQ = g_P f_PQ H(g_Q)^{-1}``."""
    ginv = {k: linalg.inverse(v) for k, v in g.items()}
    morph = {}
    for (P, Q), blocks in M.morphisms.items():
        nb = {}
        for (mu, d), m in blocks.items():
            rows_t = next(t for t, s in enumerate(M.pieces[P]) if s.weight == mu and s.degree == d + 1)
            left = g[(P, rows_t)]
            cols = M.columns(P, Q, mu, d)
            n = len(cols)
            right = _zero(n, n)
            # block diagonal: one block per source summand
            pos = 0
            while pos < n:
                t = cols[pos][0]
                k = M.pieces[Q][t].mult
                inv = ginv[(Q, t)]
                for i in range(k):
                    for j in range(k):
                        right[pos + i][pos + j] = inv[i][j]
                pos += k
            nb[(mu, d)] = linalg.matmul(linalg.matmul(left, m), right, n, n)
        morph[(P, Q)] = nb
    return LModule(M.rd, M.support, {P: list(v) for P, v in M.pieces.items()}, morph)
