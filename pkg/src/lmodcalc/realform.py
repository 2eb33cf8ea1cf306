"""Real-form data: symmetric-space dimensions, equal rank, fundamental parabolics.

The built-in entry is the split real form of the given root datum.  A user
table (JSON) can override dimensions, the equal-rank verdict, the set of
fundamental parabolics and the complex-conjugation involution of the Dynkin
diagram.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .parabolic import Parabolic, project_weight
from .rootdata import RootDatum, Weight


class MissingEntry(KeyError):
    pass


MissingRealFormData = MissingEntry

FLAT_RANK_MODES = ("full", "none")


def _component_type(rd: RootDatum, comp: list[int]) -> tuple[str, int]:
    """Classify a connected Dynkin subdiagram."""
    a = rd.cartan_matrix
    n = len(comp)
    bonds = {}
    for i in comp:
        for j in comp:
            if i < j and a[i][j]:
                bonds[(i, j)] = a[i][j] * a[j][i]
    if any(b == 3 for b in bonds.values()):
        return ("G", 2)
    deg = {i: sum(1 for e in bonds if i in e) for i in comp}
    doubles = [e for e, b in bonds.items() if b == 2]
    if doubles:
        (i, j), = doubles
        if n == 4 and deg[i] == 2 and deg[j] == 2:
            return ("F", 4)
        return ("B", n)
    branch = [i for i in comp if deg[i] == 3]
    if not branch:
        return ("A", n)
    b = branch[0]
    arms = []
    for start in (j for j in comp if (min(b, j), max(b, j)) in bonds):
        length, prev, cur = 1, b, start
        while True:
            nxt = [k for k in comp if k not in (prev, cur) and (min(cur, k), max(cur, k)) in bonds]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    arms.sort()
    if arms[:2] == [1, 1]:
        return ("D", n)
    return ("E", n)


def components(rd: RootDatum, subset) -> list[list[int]]:
    left = set(subset)
    out = []
    a = rd.cartan_matrix
    while left:
        stack = [min(left)]
        comp = set(stack)
        while stack:
            i = stack.pop()
            for j in list(left):
                if j not in comp and a[i][j]:
                    comp.add(j)
                    stack.append(j)
        left -= comp
        out.append(sorted(comp))
    return out


def split_compact_rank(fam: str, n: int) -> int:
    """Rank of a maximal compact subgroup of the split real form."""
    return {
        "A": (n + 1) // 2,
        "B": n,
        "C": n,
        "D": 2 * (n // 2),
        "E": {6: 4, 7: 7, 8: 8}.get(n, 0),
        "F": 4,
        "G": 2,
    }[fam]


def levi_compact_rank(rd: RootDatum, subset) -> int:
    return sum(split_compact_rank(*_component_type(rd, c)) for c in components(rd, subset))


def _key(levi) -> str:
    return ",".join(str(i) for i in sorted(levi))


def _parse_key(rd: RootDatum, text) -> frozenset:
    if isinstance(text, (list, tuple)):
        return frozenset(int(i) for i in text)
    text = str(text).strip().strip("[]")
    if text == "G":
        return frozenset(range(rd.rank))
    if text in ("", "P0", "B"):
        return frozenset()
    return frozenset(int(t) for t in text.split(","))


@dataclass
class RealFormEntry:
    mode: str = "split_default"
    flat_rank: str = "full"
    levis: dict = field(default_factory=dict)  # frozenset -> {"dim_D": int, "equal_rank": bool}
    fundamental_sets: list | None = None
    involution: tuple | None = None

    # -- dimensions -------------------------------------------------------
    def dim_D(self, rd: RootDatum, P: Parabolic) -> int:
        if self.mode == "user_table":
            row = self.levis.get(P.levi)
            if row is None or "dim_D" not in row:
                raise MissingEntry(f"no dim_D for Levi {_key(P.levi)}")
            return int(row["dim_D"])
        return len(rd.positive_roots_in(P.levi)) + len(P.levi)

    def dim_DV(self, rd: RootDatum, P: Parabolic, mu: Weight) -> int:
        if self.mode == "user_table":
            row = self.levis.get(P.levi, {})
            table = row.get("dim_DV", {})
            k = ",".join(str(c) for c in mu.coords)
            if k in table:
                return int(table[k])
        flat = len(P.levi) if self.flat_rank == "full" else 0
        fixed = 0
        for c in rd.positive_roots_in(P.levi):
            cv = rd.root_coroot_coeffs(c)
            if sum(x * mu.coords[i] for i, x in enumerate(cv)) == 0:
                fixed += 1
        return fixed + flat

    # -- self-duality -----------------------------------------------------
    def conj(self, rd: RootDatum, mu: Weight) -> Weight:
        if self.involution is None:
            return mu
        coords = [None] * rd.rank
        for i, j in enumerate(self.involution):
            coords[j] = mu.coords[i]
        return Weight(tuple(coords), mu.central)

    def conj_selfdual(self, rd: RootDatum, P: Parabolic, mu: Weight) -> bool:
        hat = mu - project_weight(rd, mu, P)
        w0 = rd.weyl_enumerate(subset=P.levi)[-1]
        return -w0.act(self.conj(rd, hat)) == hat

    # -- predicates ---------------------------------------------------------
    def equal_rank(self, rd: RootDatum) -> bool:
        if self.mode == "user_table":
            row = self.levis.get(frozenset(range(rd.rank)))
            if row is None or "equal_rank" not in row:
                raise MissingEntry("no equal_rank entry for G")
            return bool(row["equal_rank"])
        return levi_compact_rank(rd, range(rd.rank)) == rd.rank

    def fundamental(self, rd: RootDatum, P: Parabolic) -> bool:
        if self.fundamental_sets is not None:
            return any(P.levi >= s for s in self.fundamental_sets) or len(P.levi) == rd.rank
        return levi_compact_rank(rd, P.levi) == levi_compact_rank(rd, range(rd.rank))

    def to_json(self) -> dict:
        out = {"mode": self.mode, "flat_rank": self.flat_rank}
        if self.levis:
            out["levis"] = {_key(k): v for k, v in sorted(self.levis.items(), key=lambda kv: sorted(kv[0]))}
        if self.fundamental_sets is not None:
            out["fundamental"] = [sorted(s) for s in self.fundamental_sets]
        if self.involution is not None:
            out["involution"] = list(self.involution)
        return out


def split_entry(flat_rank: str = "full") -> RealFormEntry:
    if flat_rank not in FLAT_RANK_MODES:
        raise ValueError(f"flat_rank must be one of {FLAT_RANK_MODES}")
    return RealFormEntry(flat_rank=flat_rank)


def entry_from_json(rd: RootDatum, data: dict, flat_rank: str = "full") -> RealFormEntry:
    levis = {_parse_key(rd, k): dict(v) for k, v in data.get("levis", {}).items()}
    fund = data.get("fundamental")
    inv = data.get("involution")
    if inv is not None:
        inv = tuple(int(i) for i in inv)
        if sorted(inv) != list(range(rd.rank)):
            raise ValueError("involution must be a permutation of the simple roots")
        a = rd.cartan_matrix
        if any(inv[inv[i]] != i for i in range(rd.rank)):
            raise ValueError("involution must square to the identity")
        if any(a[inv[i]][inv[j]] != a[i][j] for i in range(rd.rank) for j in range(rd.rank)):
            raise ValueError("involution must preserve the Cartan matrix")
    return RealFormEntry(
        mode="user_table",
        flat_rank=data.get("flat_rank", flat_rank),
        levis=levis,
        fundamental_sets=None if fund is None else [_parse_key(rd, s) for s in fund],
        involution=inv,
    )


def load_entry(rd: RootDatum, path: str | Path | None, flat_rank: str = "full") -> RealFormEntry:
    if path is None:
        return split_entry(flat_rank)
    return entry_from_json(rd, json.loads(Path(path).read_text()), flat_rank)
