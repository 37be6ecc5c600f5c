"""Constant terms of Laurent expansions in the region ``u_1 << u_2 << ... << u_N``.

The integrands met in residue pairings have the shape

    sum_e c_e u^e  *  prod_{l < l'} sum_{m >= 0} a_{l,l'}(m) (u_l / u_l')^m

and their iterated residue ``res_{u_N} ... res_{u_1}`` (with ``du/u``) is the
coefficient of ``u^0``.  For one base monomial ``u^e`` the contributing index
families ``m`` satisfy, for every variable ``v``,

    e_v + sum_{l' > v} m_{v,l'} - sum_{l < v} m_{l,v} = 0.

Reading these equations from ``v = 1`` upward, the outgoing total at ``v`` is
fixed by the already chosen incoming indices, so the solutions are enumerated
directly and the sum is finite and exact.  The flow out of ``{1..j}`` equals
``-(e_1 + ... + e_j)``, which bounds every single index; :func:`certified_bound`
returns that bound.
"""
from __future__ import annotations

from typing import Callable, Sequence

from .coeff import QLaurent

SeriesCoeff = Callable[[int, int, int], QLaurent]  # (l, l', m) -> coefficient


def certified_bound(e: Sequence[int]) -> int:
    """Upper bound on every geometric index that can contribute for base exponent ``e``."""
    best, s = 0, 0
    for x in e:
        s += x
        best = max(best, -s)
    return best


def _compositions(total: int, parts: int, cap: int | None):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if cap is None or total <= cap:
            yield (total,)
        return
    hi = total if cap is None else min(total, cap)
    for x in range(hi + 1):
        for rest in _compositions(total - x, parts - 1, cap):
            yield (x,) + rest


def flows(e: Sequence[int], pairs: Sequence[tuple[int, int]], cap: int | None = None):
    """All ``{(l, l'): m}`` solving the exponent balance for base exponent ``e``.

    ``pairs`` lists the ``(l, l')`` with ``l < l'`` that carry a series; any
    variable pair not listed has no series factor.  ``cap`` optionally limits
    every index (used to test truncation independence).
    """
    N = len(e)
    if sum(e) != 0:
        return
    out_edges = [[p for p in pairs if p[0] == v] for v in range(N)]
    assign: dict[tuple[int, int], int] = {}

    def rec(v: int):
        if v == N:
            yield dict(assign)
            return
        incoming = sum(m for (l, lp), m in assign.items() if lp == v)
        need = incoming - e[v]
        edges = out_edges[v]
        if not edges:
            if need == 0:
                yield from rec(v + 1)
            return
        if need < 0:
            return
        for comp in _compositions(need, len(edges), cap):
            for p, m in zip(edges, comp):
                assign[p] = m
            yield from rec(v + 1)
            for p in edges:
                del assign[p]

    yield from rec(0)


def constant_term(poly: dict[tuple[int, ...], QLaurent],
                  pairs: Sequence[tuple[int, int]],
                  series: SeriesCoeff,
                  cap: int | None = None) -> QLaurent:
    """Coefficient of ``u^0`` in ``poly * prod_{(l,l') in pairs} sum_m series(l,l',m) (u_l/u_l')^m``."""
    total = QLaurent()
    for e, coef in poly.items():
        if coef.is_zero():
            continue
        for m in flows(e, pairs, cap):
            term = coef
            for (l, lp), k in m.items():
                term = term * series(l, lp, k)
                if term.is_zero():
                    break
            total = total + term
    return total
