"""Structure constants of the positive toroidal sector for sl_2 and sl_3.

The positive part of an untwisted affine algebra sits inside
``gbar[lambda]``; a loop term is ``E_ij (x) lambda^a (x) t^l`` with ``a >= 0``
and ``a = 0`` allowed only for strictly upper triangular ``E_ij``.  Central
generators ``K_{k delta}[l]`` with ``k > 0`` complete the sector.

Bracket of loop terms with lambda-degrees ``a``, ``b``:

    [x t^l, y t^m] = [x, y] t^(l+m) + tr(x y) (l b - m a) K_{(a+b) delta}[l+m]

and every ``K`` is central.  The trace form is unnormalized.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

LoopKey = tuple[int, int, int, int]  # (row, col, lambda power, t power)
CentralKey = tuple[int, int]  # (k, l) for K_{k delta}[l]


class SectorError(ValueError):
    """Input lies outside the positive toroidal sector."""


def _clean(d: Mapping) -> dict:
    return {k: Fraction(v) for k, v in d.items() if v}


@dataclass(frozen=True)
class ToroidalElem:
    size: int
    loop: tuple  # sorted items of {LoopKey: Fraction}
    central: tuple  # sorted items of {CentralKey: Fraction}

    @classmethod
    def make(cls, size: int, loop: Mapping | None = None, central: Mapping | None = None,
             check: bool = True) -> "ToroidalElem":
        loop = _clean(loop or {})
        central = _clean(central or {})
        if check:
            _check_sector(size, loop, central)
        return cls(size, tuple(sorted(loop.items())), tuple(sorted(central.items())))

    @property
    def loop_part(self) -> dict:
        return dict(self.loop)

    @property
    def central_part(self) -> dict:
        return dict(self.central)

    def is_zero(self) -> bool:
        return not self.loop and not self.central

    def is_central(self) -> bool:
        return not self.loop

    def __add__(self, other: "ToroidalElem") -> "ToroidalElem":
        lp = self.loop_part
        for k, v in other.loop:
            lp[k] = lp.get(k, 0) + v
        cp = self.central_part
        for k, v in other.central:
            cp[k] = cp.get(k, 0) + v
        return ToroidalElem.make(self.size, lp, cp, check=False)

    def scale(self, c) -> "ToroidalElem":
        return ToroidalElem.make(self.size, {k: v * c for k, v in self.loop},
                                 {k: v * c for k, v in self.central}, check=False)

    def __neg__(self) -> "ToroidalElem":
        return self.scale(-1)

    def __sub__(self, other: "ToroidalElem") -> "ToroidalElem":
        return self + (-other)

    def __str__(self) -> str:
        parts = []
        for (i, j, a, l), v in self.loop:
            parts.append(f"{v}*E{i}{j}*lambda^{a}*t^{l}")
        for (k, l), v in self.central:
            parts.append(f"{v}*K[{k}d][{l}]")
        return " + ".join(parts) if parts else "0"


def _check_sector(size: int, loop: Mapping, central: Mapping):
    diag: dict[tuple[int, int], Fraction] = {}
    for (i, j, a, l), v in loop.items():
        if not (0 <= i < size and 0 <= j < size):
            raise SectorError(f"matrix unit E{i}{j} outside gl_{size}")
        if a < 0 or (a == 0 and i >= j):
            raise SectorError(f"E{i}{j} lambda^{a} is not in the positive sector")
        if i == j:
            diag[(a, l)] = diag.get((a, l), 0) + v
    if any(diag.values()):
        raise SectorError("diagonal part is not traceless")
    for (k, _), _v in central.items():
        if k <= 0:
            raise SectorError(f"K_{k}delta is outside the positive sector")


def loop_elem(size: int, i: int, j: int, a: int, l: int, coef=1) -> ToroidalElem:
    return ToroidalElem.make(size, {(i, j, a, l): coef})


def cartan_elem(size: int, i: int, a: int, l: int, coef=1) -> ToroidalElem:
    """``(E_ii - E_{i+1,i+1}) lambda^a t^l`` (needs ``a >= 1``)."""
    return ToroidalElem.make(size, {(i, i, a, l): coef, (i + 1, i + 1, a, l): -coef})


def central_elem(size: int, k: int, l: int, coef=1) -> ToroidalElem:
    return ToroidalElem.make(size, central={(k, l): coef})


def trace_form(x: Iterable[tuple[tuple[int, int], Fraction]],
               y: Iterable[tuple[tuple[int, int], Fraction]]) -> Fraction:
    """``tr(x y)`` for matrices given as ``{(i, j): coefficient}`` items."""
    ys = dict(y)
    return sum((v * ys.get((j, i), 0) for (i, j), v in x), Fraction(0))


def matrix_bracket(x: Mapping[tuple[int, int], Fraction],
                   y: Mapping[tuple[int, int], Fraction]) -> dict:
    out: dict[tuple[int, int], Fraction] = {}
    for (i, j), v in x.items():
        for (k, l), w in y.items():
            if j == k:
                out[(i, l)] = out.get((i, l), 0) + v * w
            if l == i:
                out[(k, j)] = out.get((k, j), 0) - v * w
    return _clean(out)


def t_bracket(x: ToroidalElem, y: ToroidalElem) -> ToroidalElem:
    if x.size != y.size:
        raise ValueError("elements of different matrix sizes")
    loop: dict[LoopKey, Fraction] = {}
    central: dict[CentralKey, Fraction] = {}
    for (i, j, a, l), v in x.loop:
        for (k, p, b, m), w in y.loop:
            c = v * w
            if j == k:
                key = (i, p, a + b, l + m)
                loop[key] = loop.get(key, 0) + c
            if p == i:
                key = (k, j, a + b, l + m)
                loop[key] = loop.get(key, 0) - c
            if j == k and p == i:  # tr(E_ij E_kp) = 1
                s = l * b - m * a
                if s:
                    if a + b <= 0:
                        raise SectorError("central term of lambda-degree 0 outside the sector")
                    ck = (a + b, l + m)
                    central[ck] = central.get(ck, 0) + c * s
    return ToroidalElem.make(x.size, loop, central, check=False)


# --------------------------------------------------------------------------
# affine data
# --------------------------------------------------------------------------


AFFINE_REALIZATIONS = {
    # name: (matrix size, [(row, col, lambda power) for x_0, x_1, ...])
    "A1^(1)": (2, [(1, 0, 1), (0, 1, 0)]),
    "A2^(1)": (3, [(2, 0, 1), (0, 1, 0), (1, 2, 0)]),
}


def affine_generator(name: str, i: int, l: int) -> ToroidalElem:
    """``e_i[l] = xbar_i (x) lambda^{delta_i0} (x) t^l``."""
    size, gens = AFFINE_REALIZATIONS[name]
    r, c, a = gens[i]
    return loop_elem(size, r, c, a, l)


def a11_defect(l: int, m: int) -> ToroidalElem:
    """``[x_0[l+1], x_1[m]] - [x_0[l], x_1[m+1]]`` in the A1^(1) realization."""
    g = lambda i, k: affine_generator("A1^(1)", i, k)
    return t_bracket(g(0, l + 1), g(1, m)) - t_bracket(g(0, l), g(1, m + 1))


@dataclass(frozen=True)
class SimpleBracketReport:
    name: str
    trace_pairs: tuple  # ((i, j), tr(xbar_i xbar_j))
    central_hits: tuple  # ((i, j, l, m), central part) with nonzero central part

    @property
    def ok(self) -> bool:
        return all(v == 0 for _, v in self.trace_pairs) and not self.central_hits


def simple_brackets(name: str, window: tuple[int, int] = (-3, 3)) -> SimpleBracketReport:
    """Trace pairings of the simple generators and the central parts of their brackets."""
    size, gens = AFFINE_REALIZATIONS[name]
    pairs = []
    hits = []
    for i, (ri, ci, _) in enumerate(gens):
        for j, (rj, cj, _) in enumerate(gens):
            pairs.append(((i, j), trace_form([((ri, ci), Fraction(1))], [((rj, cj), Fraction(1))])))
            if i == j:
                continue
            for l in range(window[0], window[1] + 1):
                for m in range(window[0], window[1] + 1):
                    b = t_bracket(affine_generator(name, i, l), affine_generator(name, j, m))
                    if b.central:
                        hits.append(((i, j, l, m), b.central_part))
    return SimpleBracketReport(name, tuple(pairs), tuple(hits))


def non_a11_simple_brackets(name: str = "A2^(1)", window: tuple[int, int] = (-3, 3)) -> SimpleBracketReport:
    if name == "A1^(1)":
        raise ValueError("A1^(1) is the exceptional case; use simple_brackets")
    return simple_brackets(name, window)


# --------------------------------------------------------------------------
# fuzzing
# --------------------------------------------------------------------------


def sector_basis(size: int, lam_max: int, t_window: tuple[int, int]) -> list[ToroidalElem]:
    """Basis of the sector truncated to ``lambda^0..lambda^lam_max`` and the t-window."""
    out = []
    lo, hi = t_window
    for a in range(lam_max + 1):
        for l in range(lo, hi + 1):
            for i in range(size):
                for j in range(size):
                    if i < j or (a > 0 and i != j):
                        out.append(loop_elem(size, i, j, a, l))
            if a > 0:
                for i in range(size - 1):
                    out.append(cartan_elem(size, i, a, l))
                out.append(central_elem(size, a, l))
    return out


@dataclass(frozen=True)
class JacobiReport:
    trials: int
    seed: int
    failures: tuple

    @property
    def ok(self) -> bool:
        return not self.failures


def jacobi_check(trials: int = 1000, seed: int = 0, size: int = 2, lam_max: int = 2,
                 t_window: tuple[int, int] = (-3, 3)) -> JacobiReport:
    """Antisymmetry and Jacobi on random triples of sector elements."""
    rng = random.Random(seed)
    basis = sector_basis(size, lam_max, t_window)
    failures = []

    def pick():
        # sparse random combination of one to three basis elements
        x = None
        for _ in range(rng.randint(1, 3)):
            b = rng.choice(basis).scale(Fraction(rng.randint(-3, 3) or 1, rng.randint(1, 3)))
            x = b if x is None else x + b
        return x

    for n in range(trials):
        x, y, z = pick(), pick(), pick()
        anti = t_bracket(x, y) + t_bracket(y, x)
        jac = (t_bracket(x, t_bracket(y, z)) + t_bracket(y, t_bracket(z, x))
               + t_bracket(z, t_bracket(x, y)))
        if not anti.is_zero() or not jac.is_zero():
            failures.append((n, str(x), str(y), str(z)))
    return JacobiReport(trials, seed, tuple(failures))


def trace_invariance_failures(size: int) -> list:
    """Basis triples of sl_size violating ``tr([x,y] z) + tr(y [x,z]) = 0``."""
    basis = []
    for i in range(size):
        for j in range(size):
            if i != j:
                basis.append({(i, j): Fraction(1)})
    for i in range(size - 1):
        basis.append({(i, i): Fraction(1), (i + 1, i + 1): Fraction(-1)})
    bad = []
    for x in basis:
        for y in basis:
            for z in basis:
                lhs = trace_form(matrix_bracket(x, y).items(), z.items())
                lhs += trace_form(y.items(), matrix_bracket(x, z).items())
                if lhs:
                    bad.append((x, y, z))
    return bad
