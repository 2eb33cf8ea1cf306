"""Sign bookkeeping for the flag construction of the L^2 L-module.

A flag is a chain ``R_0 < ... < R_k`` in a Boolean lattice (subsets of
``range(n)``, the top element playing the role of ``G``).  The maps are

* ``u(R, R) = (-1)^k d``;
* ``u(R, R - {R_l}) = (-1)^sigma g`` with ``g`` indexed by the end points of
  the two flags.

The check treats ``d`` and ``g`` as formal symbols with ``d d = 0``,
``g d = d g`` and ``g o H(g') = g'' o kappa`` (end points composed), expands
every composite required by the module condition, and asks that each
expansion cancels.
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Callable


class SignViolation(AssertionError):
    pass


def default_sigma(flag: tuple, l: int, top: frozenset) -> int:
    """Exponent for deleting the ``l``-th element of ``flag``."""
    k = len(flag) - 1
    if l == k and flag[k] == top:
        return k
    return l + 1


def default_diag(flag: tuple) -> int:
    return len(flag) - 1


def boolean_lattice(n: int) -> list[frozenset]:
    return [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]


def flags_of(n: int) -> list[tuple]:
    """All nonempty chains, each listed in increasing order."""
    els = boolean_lattice(n)
    out = []

    def grow(chain):
        out.append(tuple(chain))
        for x in els:
            if chain[-1] < x:
                grow(chain + [x])

    for x in els:
        grow([x])
    return out


def _g(flag: tuple, sub: tuple) -> tuple:
    return (flag[0], flag[-1], sub[0], sub[-1])


class _Expr:
    """A signed sum of normal-form words ``d^a g_{...} kappa^b``."""

    def __init__(self):
        self.terms: Counter = Counter()

    def add(self, sign: int, gs: list, nd: int) -> None:
        if nd >= 2:
            return  # d d = 0 once every d is moved to the front
        nk = 0
        g = None
        for x in gs:
            if g is None:
                g = x
                continue
            # g_{A B, C D} o H(g_{C D, E F}) = g_{A B, E F} o kappa
            if g[2:] != x[:2]:
                raise SignViolation(f"composite of non-matching g symbols {g} and {x}")
            g = g[:2] + x[2:]
            nk += 1
        self.terms[(nd, g, nk)] += sign

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.terms.values())


def flag_sign_check(
    rd=None,
    up_to_rank: int | None = None,
    sigma: Callable | None = None,
    diag: Callable | None = None,
    raise_on_fail: bool = True,
) -> dict:
    """Verify the three families of identities behind the module condition.

    ``rd`` (a root datum) fixes the largest lattice rank unless
    ``up_to_rank`` is given.  ``sigma(flag, l, top)`` and ``diag(flag)``
    override the sign exponents, which is how negative tests are built.
    """
    if up_to_rank is None:
        up_to_rank = rd.rank if rd is not None else 4
    sigma = sigma or default_sigma
    diag = diag or default_diag
    report = {"ok": True, "checked": Counter(), "violations": []}

    def fail(kind, flag, sub):
        report["ok"] = False
        report["violations"].append({"case": kind, "flag": flag, "sub": sub})
        if raise_on_fail:
            raise SignViolation(f"case {kind}: {_fmt(flag)} over {_fmt(sub)}")

    for n in range(up_to_rank + 1):
        top = frozenset(range(n))
        for flag in flags_of(n):
            k = len(flag) - 1
            # case 0: u u
            e = _Expr()
            e.add((-1) ** (2 * diag(flag)), [], 2)
            report["checked"][0] += 1
            if not e.is_zero():
                fail(0, flag, flag)
            # case 1: one element removed
            for l in range(k + 1):
                sub = flag[:l] + flag[l + 1 :]
                if not sub:
                    continue
                s = sigma(flag, l, top)
                e = _Expr()
                e.add((-1) ** (s + diag(sub)), [_g(flag, sub)], 1)
                e.add((-1) ** (diag(flag) + s), [_g(flag, sub)], 1)
                report["checked"][1] += 1
                if not e.is_zero():
                    fail(1, flag, sub)
            # case 2: two elements removed, two paths
            for a, b in itertools.combinations(range(k + 1), 2):
                sub2 = tuple(x for i, x in enumerate(flag) if i not in (a, b))
                if not sub2:
                    continue
                e = _Expr()
                for first, second in ((a, b), (b, a)):
                    mid = flag[:first] + flag[first + 1 :]
                    j = mid.index(flag[second])
                    s1 = sigma(flag, first, top)
                    s2 = sigma(mid, j, top)
                    e.add((-1) ** (s1 + s2), [_g(flag, mid), _g(mid, sub2)], 0)
                report["checked"][2] += 1
                if not e.is_zero():
                    fail(2, flag, sub2)
        # restriction morphism signs: u({P<Q},{P}), u({P<Q},{Q}), u({P<Q},{P<Q})
        for P in boolean_lattice(n):
            for Q in boolean_lattice(n):
                if P < Q:
                    flag = (P, Q)
                    want = 1 if Q == top else 0
                    report["checked"]["corollary"] += 1
                    if sigma(flag, 1, top) % 2 != want or sigma(flag, 0, top) % 2 != 1 or diag(flag) % 2 != 1:
                        fail("corollary", flag, (P,))
    report["checked"] = dict(report["checked"])
    return report


def _fmt(flag) -> str:
    return "<".join("{" + ",".join(str(i) for i in sorted(x)) + "}" for x in flag)

