"""Sparse multivariate Laurent polynomials with rational coefficients.

A polynomial in ``nvars`` variables is a dict from exponent tuples to
coefficients, kept as ``int`` when integral and ``Fraction`` otherwise
(integer arithmetic is much faster and covers almost everything).  The
last variable of every tuple is the scalar parameter (``q`` for the
trigonometric kernel, ``hbar`` for the rational one), so a coefficient in
Q[q, q^-1] or Q[hbar] is spread over several keys.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

MPoly = dict  # tuple[int, ...] -> int | Fraction


def clean(p: Mapping) -> MPoly:
    return {k: v for k, v in p.items() if v}


def add_into(acc: MPoly, p: Mapping, scale=1) -> None:
    for k, v in p.items():
        s = acc.get(k, 0) + v * scale
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)


def add(p: Mapping, q: Mapping) -> MPoly:
    out = dict(p)
    add_into(out, q)
    return out


def sub(p: Mapping, q: Mapping) -> MPoly:
    out = dict(p)
    add_into(out, q, -1)
    return out


def scale(p: Mapping, c) -> MPoly:
    c = as_number(c)
    return {k: v * c for k, v in p.items()} if c else {}


def mul(p: Mapping, q: Mapping) -> MPoly:
    out: MPoly = {}
    for k1, v1 in p.items():
        for k2, v2 in q.items():
            k = tuple(a + b for a, b in zip(k1, k2))
            s = out.get(k, 0) + v1 * v2
            if s:
                out[k] = s
            else:
                out.pop(k, None)
    return out


def as_number(c):
    """``int`` if integral, else ``Fraction``."""
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def monomial(exps: Sequence[int], c=1) -> MPoly:
    return {tuple(exps): as_number(c)} if c else {}


def one(nvars: int) -> MPoly:
    return {(0,) * nvars: 1}


def var(nvars: int, i: int, power: int = 1) -> MPoly:
    e = [0] * nvars
    e[i] = power
    return {tuple(e): 1}


def linear(nvars: int, terms: Iterable[tuple[Sequence[int], int]]) -> MPoly:
    out: MPoly = {}
    for exps, c in terms:
        add_into(out, monomial(exps, c))
    return out


def permute(p: Mapping, perm: Sequence[int]) -> MPoly:
    """Rename variable ``i`` to ``perm[i]``; the scalar slot is left alone."""
    out = {}
    n = len(perm)
    for k, v in p.items():
        e = [0] * len(k)
        for i in range(n):
            e[perm[i]] = k[i]
        e[n:] = k[n:]
        out[tuple(e)] = v
    return out


def embed(p: Mapping, positions: Sequence[int], nvars: int) -> MPoly:
    """Place the variables of ``p`` at ``positions`` of an ``nvars``-variable ring.

    ``p`` has ``len(positions)`` ordinary variables plus the trailing scalar slot.
    """
    out = {}
    m = len(positions)
    for k, v in p.items():
        e = [0] * nvars
        for i, pos in enumerate(positions):
            e[pos] = k[i]
        e[-1] = k[m]
        out[tuple(e)] = v
    return out


class DivisionError(ArithmeticError):
    pass


def divide_difference(p: Mapping, a: int, b: int) -> MPoly:
    """Exact quotient ``p / (x_a - x_b)``; raises ``DivisionError`` if not exact."""
    if not p:
        return {}
    # group by the power of x_a
    groups: dict[int, MPoly] = {}
    for k, v in p.items():
        ka = k[a]
        rest = k[:a] + (0,) + k[a + 1:]
        groups.setdefault(ka, {})[rest] = v
    kmin, kmax = min(groups), max(groups)
    q_coeffs: dict[int, MPoly] = {}
    qk: MPoly = {}
    for k in range(kmax, kmin, -1):
        # Q_{k-1} = P_k + x_b Q_k
        nxt = dict(groups.get(k, {}))
        for key, v in qk.items():
            kk = list(key)
            kk[b] += 1
            kk = tuple(kk)
            s = nxt.get(kk, 0) + v
            if s:
                nxt[kk] = s
            else:
                nxt.pop(kk, None)
        q_coeffs[k - 1] = nxt
        qk = nxt
    # remainder check: P_kmin == -x_b Q_kmin
    lowest = q_coeffs.get(kmin, {})
    check = dict(groups.get(kmin, {}))
    for key, v in lowest.items():
        kk = list(key)
        kk[b] += 1
        kk = tuple(kk)
        s = check.get(kk, 0) + v
        if s:
            check[kk] = s
        else:
            check.pop(kk, None)
    if check:
        raise DivisionError(f"polynomial is not divisible by (x_{a} - x_{b})")
    out: MPoly = {}
    for k, part in q_coeffs.items():
        for key, v in part.items():
            kk = list(key)
            kk[a] = k
            out[tuple(kk)] = v
    return out


def substitute_scalar(p: Mapping, value) -> MPoly:
    """Set the trailing scalar variable to a rational ``value``."""
    out: MPoly = {}
    value = Fraction(value)
    for k, v in p.items():
        kk = k[:-1] + (0,)
        s = out.get(kk, 0) + v * value ** k[-1]
        if s:
            out[kk] = s
        else:
            out.pop(kk, None)
    return out


def by_variables(p: Mapping) -> dict[tuple[int, ...], dict[int, Fraction]]:
    """Group into ``{ordinary exponents: {scalar exponent: coefficient}}``."""
    out: dict[tuple[int, ...], dict[int, Fraction]] = {}
    for k, v in p.items():
        out.setdefault(k[:-1], {})[k[-1]] = v
    return out
