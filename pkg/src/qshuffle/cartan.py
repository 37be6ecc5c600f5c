"""Cartan data, positive roots and the Kostant-partition dimension oracles.

Indices are 0-based throughout the package.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Sequence

Weight = tuple[int, ...]


class CartanError(ValueError):
    pass


@dataclass(frozen=True)
class CartanDatum:
    A: tuple[tuple[int, ...], ...]
    d: tuple[int, ...]
    finite_type: bool
    name: str | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.A)

    def form(self, i: int, j: int) -> int:
        """``<eps_i, eps_j> = d_i a_ij``."""
        return self.d[i] * self.A[i][j]

    def pairing(self, x: Sequence[int], y: Sequence[int]) -> int:
        """Bilinear extension of :meth:`form` to weights."""
        n = self.n
        return sum(x[i] * y[j] * self.d[i] * self.A[i][j]
                   for i in range(n) if x[i] for j in range(n) if y[j])

    def simple_root(self, i: int) -> Weight:
        return tuple(1 if k == i else 0 for k in range(self.n))

    def __str__(self) -> str:
        return self.name or json.dumps([list(r) for r in self.A])


PRESETS: dict[str, list[list[int]]] = {
    "A1": [[2]],
    "A2": [[2, -1], [-1, 2]],
    "B2": [[2, -1], [-2, 2]],
    "G2": [[2, -1], [-3, 2]],
    "A1^(1)": [[2, -2], [-2, 2]],
    "A2^(1)": [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]],
}


def _symmetrizer(A: list[list[int]]) -> list[int]:
    """Minimal positive integers with ``d_i a_ij = d_j a_ji``, per connected component."""
    n = len(A)
    d: list[Fraction | None] = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        comp = [start]
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j == i or A[i][j] == 0:
                    continue
                want = d[i] * A[i][j] / A[j][i]
                if d[j] is None:
                    if want <= 0:
                        raise CartanError("matrix is not symmetrizable with positive d")
                    d[j] = want
                    comp.append(j)
                    stack.append(j)
                elif d[j] != want:
                    raise CartanError("matrix is not symmetrizable")
        den = reduce(lcm, (d[i].denominator for i in comp), 1)
        ints = [int(d[i] * den) for i in comp]
        g = reduce(gcd, ints)
        for i, v in zip(comp, ints):
            d[i] = Fraction(v // g)
    return [int(x) for x in d]


def _positive_definite(S: list[list[int]]) -> bool:
    """Sylvester's criterion with exact fraction-based determinants."""
    n = len(S)
    for m in range(1, n + 1):
        M = [[Fraction(S[i][j]) for j in range(m)] for i in range(m)]
        det = Fraction(1)
        for c in range(m):
            p = next((r for r in range(c, m) if M[r][c] != 0), None)
            if p is None:
                return False
            if p != c:
                M[c], M[p] = M[p], M[c]
                det = -det
            det *= M[c][c]
            for r in range(c + 1, m):
                f = M[r][c] / M[c][c]
                if f:
                    for k in range(c, m):
                        M[r][k] -= f * M[c][k]
        if det <= 0:
            return False
    return True


def validate(A, name: str | None = None) -> CartanDatum:
    A = [[int(x) for x in row] for row in A]
    n = len(A)
    if n == 0 or any(len(r) != n for r in A):
        raise CartanError("Cartan matrix must be square and nonempty")
    for i in range(n):
        if A[i][i] != 2:
            raise CartanError(f"a_{i}{i} must be 2")
        for j in range(n):
            if i != j:
                if A[i][j] > 0:
                    raise CartanError("off-diagonal entries must be <= 0")
                if (A[i][j] == 0) != (A[j][i] == 0):
                    raise CartanError("a_ij = 0 must be equivalent to a_ji = 0")
    d = _symmetrizer(A)
    S = [[d[i] * A[i][j] for j in range(n)] for i in range(n)]
    return CartanDatum(tuple(map(tuple, A)), tuple(d), _positive_definite(S), name)


def preset(name: str) -> CartanDatum:
    if name not in PRESETS:
        raise CartanError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return validate(PRESETS[name], name)


def load(spec: str) -> CartanDatum:
    """A preset name or a JSON array of arrays."""
    if spec in PRESETS:
        return preset(spec)
    try:
        A = json.loads(spec)
    except json.JSONDecodeError as exc:
        raise CartanError(f"not a preset or JSON matrix: {spec!r}") from exc
    return validate(A)


# --------------------------------------------------------------------------
# roots
# --------------------------------------------------------------------------


def height(alpha: Sequence[int]) -> int:
    return sum(alpha)


def _require_finite(c: CartanDatum):
    if not c.finite_type:
        raise CartanError(f"{c} is not of finite type")


@lru_cache(maxsize=None)
def positive_roots(c: CartanDatum) -> tuple[Weight, ...]:
    """Positive roots, sorted by height then lexicographically."""
    _require_finite(c)
    n = c.n
    roots = {c.simple_root(i) for i in range(n)}
    layer = sorted(roots)
    while layer:
        nxt = set()
        for beta in layer:
            for i in range(n):
                # p = how far the alpha_i string extends below beta
                p = 0
                down = list(beta)
                while True:
                    down[i] -= 1
                    if tuple(down) in roots:
                        p += 1
                    else:
                        break
                pair = sum(beta[j] * c.A[i][j] for j in range(n))  # <beta, alpha_i^vee>
                if p - pair > 0:
                    up = list(beta)
                    up[i] += 1
                    nxt.add(tuple(up))
        nxt -= roots
        roots |= nxt
        layer = sorted(nxt)
    return tuple(sorted(roots, key=lambda r: (sum(r), r)))


def weights_of_height(n: int, h: int) -> list[Weight]:
    """All ``alpha`` in N^n of height ``h`` in lexicographic order."""
    out = []

    def rec(prefix, left, slots):
        if slots == 1:
            out.append(tuple(prefix + [left]))
            return
        for x in range(left, -1, -1):
            rec(prefix + [x], left - x, slots - 1)

    rec([], h, n)
    return sorted(out, reverse=True)


def _partition_count(parts: Sequence[Weight], alpha: Weight) -> int:
    """Number of multisets from ``parts`` (with repetition) summing to ``alpha``."""
    alpha = tuple(alpha)

    @lru_cache(maxsize=None)
    def count(idx: int, rest: Weight) -> int:
        if not any(rest):
            return 1
        if idx == len(parts):
            return 0
        beta = parts[idx]
        total = 0
        cur = rest
        while all(x >= 0 for x in cur):
            total += count(idx + 1, cur)
            cur = tuple(x - y for x, y in zip(cur, beta))
        return total

    return count(0, alpha)


def kostant_dim(c: CartanDatum, alpha: Sequence[int]) -> int:
    roots = positive_roots(c)
    return _partition_count(roots, tuple(alpha))


def min_parts(c: CartanDatum, alpha: Sequence[int]) -> int:
    """Minimal number of positive roots summing to ``alpha``."""
    roots = positive_roots(c)
    alpha = tuple(alpha)
    if any(x < 0 for x in alpha):
        raise CartanError(f"{alpha} is not expressible as a sum of positive roots")

    @lru_cache(maxsize=None)
    def best(rest: Weight) -> int | None:
        if not any(rest):
            return 0
        out = None
        for beta in roots:
            nxt = tuple(x - y for x, y in zip(rest, beta))
            if all(x >= 0 for x in nxt):
                b = best(nxt)
                if b is not None and (out is None or b + 1 < out):
                    out = b + 1
        return out

    r = best(alpha)
    if r is None:
        raise CartanError(f"{alpha} is not expressible as a sum of positive roots")
    return r


def loop_kostant_dim(c: CartanDatum, alpha: Sequence[int], dtot: int) -> int:
    """Multisets of (root, mode >= 0) pairs with root sum ``alpha`` and mode sum ``dtot``."""
    if dtot < 0:
        return 0
    roots = positive_roots(c)
    parts = [tuple(beta) + (m,) for beta in roots for m in range(dtot + 1)]
    # a zero-height part would make the count infinite; roots have height >= 1
    return _partition_count(parts, tuple(alpha) + (dtot,))
