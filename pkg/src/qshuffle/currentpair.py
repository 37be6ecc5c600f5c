"""Residue pairing between loop words and functional shuffle elements.

Values are stored with the uniform factor ``hbar^(-p)`` of a length-``p``
block removed (same convention as :mod:`qshuffle.pairing`) and include the
factor ``prod_s d_{j_s}^(-1)`` over the letters of the f-word.

``residue_pair(P, f_{j_1}[l_1] ... f_{j_N}[l_N])`` is the constant term of

    P(u) * prod_{l<l'} (u_l' - u_l) / (q^c u_l' - u_l) * prod_l u_l^(l_l),
    c = <eps_{j_l'}, eps_{j_l}>,

expanded in the region ``u_1 << ... << u_N``; the variables of color ``i`` in
``P`` are matched with the positions ``l`` where ``j_l = i``, in order.

``tpair(u, w)`` is the same pairing composed with the functional realization
of ``u``.  Writing ``P`` as a sum over color-preserving assignments of the
letters of ``u`` to positions, the factor for a pair of positions ``l < l'``
is 1 when the letters sit in inverted order, and otherwise

    (u_l' - q^c u_l) / (q^c u_l' - u_l)
        = q^-c + sum_{m>=1} (q^(-c(m+1)) - q^(-c(m-1))) (u_l / u_l')^m.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product
from typing import Sequence

from . import mpoly as mp
from .cartan import CartanDatum, height
from .coeff import DEFAULT_PRECISION, QLaurent, QRat, qbinom
from .current import TRIG, FOElem, LoopWord, fo_rank_basis, loop_weight, offsets
from .linalg import Echelon
from .pairing import CanonicalTensor, tensor_from_gram
from .region import certified_bound, constant_term


def _d_factor(w: Sequence[tuple[int, int]], c: CartanDatum) -> Fraction:
    out = Fraction(1)
    for j, _ in w:
        out /= c.d[j]
    return out


@lru_cache(maxsize=None)
def _tkernel(cval: int, m: int) -> QLaurent:
    if m == 0:
        return QLaurent({-cval: 1})
    return QLaurent({-cval * (m + 1): 1}) - QLaurent({-cval * (m - 1): 1})


@lru_cache(maxsize=None)
def _geom(cval: int, m: int) -> QLaurent:
    return QLaurent({-cval * m: 1})


def _assignments(u: Sequence[tuple[int, int]], w: Sequence[tuple[int, int]]):
    """Color-preserving bijections letters of ``u`` -> positions of ``w`` (as position lists)."""
    colors = sorted({i for i, _ in u})
    letters = {i: [s for s, (x, _) in enumerate(u) if x == i] for i in colors}
    slots = {i: [l for l, (x, _) in enumerate(w) if x == i] for i in colors}
    per_color = [list(permutations(slots[i])) for i in colors]
    for choice in product(*per_color):
        pos = [0] * len(u)
        for i, perm in zip(colors, choice):
            for s, l in zip(letters[i], perm):
                pos[s] = l
        yield pos


def tpair(u: Sequence[tuple[int, int]], w: Sequence[tuple[int, int]], c: CartanDatum,
          cap: int | None = None) -> QRat:
    """Stripped pairing of the e-word ``u`` with the f-word ``w``."""
    u = tuple(tuple(x) for x in u)
    w = tuple(tuple(x) for x in w)
    return QRat(_tpair(u, w, c, cap))


@lru_cache(maxsize=500000)
def _tpair(u: LoopWord, w: LoopWord, c: CartanDatum, cap: int | None) -> QLaurent:
    N = len(u)
    if N != len(w) or loop_weight(u, c.n) != loop_weight(w, c.n):
        return QLaurent()
    if sum(k for _, k in u) + sum(l for _, l in w) != 0:
        return QLaurent()
    cvals = {(l, lp): c.form(w[lp][0], w[l][0]) for l, lp in combinations(range(N), 2)}
    total = QLaurent()
    for pos in _assignments(u, w):
        letter_at = [0] * N
        for s, l in enumerate(pos):
            letter_at[l] = s
        e = [0] * N
        for s, l in enumerate(pos):
            e[l] = u[s][1] + w[l][1]
        pairs = [(l, lp) for l, lp in combinations(range(N), 2) if letter_at[l] < letter_at[lp]]
        total = total + constant_term({tuple(e): QLaurent.constant(1)}, pairs,
                                      lambda l, lp, m: _tkernel(cvals[(l, lp)], m), cap)
    return total * _d_factor(w, c)


def residue_integrand(P: FOElem, w: Sequence[tuple[int, int]], c: CartanDatum):
    """``(polynomial part, pairs, series)`` of the residue-pairing integrand."""
    N = len(w)
    offs = offsets(P.kvec)
    seen = [0] * c.n
    var_of_pos = []
    for j, _ in w:
        var_of_pos.append(offs[j] + seen[j])
        seen[j] += 1
    # variable v of P becomes position l
    perm = [0] * N
    for l, v in enumerate(var_of_pos):
        perm[v] = l
    poly = mp.permute(P.numerator, perm)
    sign = 1
    factors = mp.one(N + 1)
    shift = [0] * (N + 1)
    cvals = {}
    for l, lp in combinations(range(N), 2):
        cl, clp = w[l][0], w[lp][0]
        cv = c.form(clp, cl)
        cvals[(l, lp)] = cv
        if cl == clp:
            e1 = [0] * (N + 1)
            e1[lp] = 1
            e2 = [0] * (N + 1)
            e2[l] = 1
            factors = mp.mul(factors, {tuple(e1): 1, tuple(e2): -1})
        elif cl < clp:
            # (u_l' - u_l) cancels the implicit (t_l - t_l') up to sign
            sign = -sign
        # 1/(q^c u_l' - u_l) = q^-c u_l'^-1 sum_m (q^-c u_l/u_l')^m
        shift[lp] -= 1
        shift[-1] -= cv
    for l in range(N):
        shift[l] += w[l][1]
    poly = mp.mul(mp.mul(poly, factors), {tuple(shift): sign})
    grouped = {e: QLaurent(v) for e, v in mp.by_variables(poly).items()}
    return grouped, list(cvals), (lambda l, lp, m: _geom(cvals[(l, lp)], m))


def residue_pair(P: FOElem, w: Sequence[tuple[int, int]], c: CartanDatum,
                 cap: int | None = None) -> QRat:
    if P.kind != TRIG:
        raise ValueError("residue_pair needs the trigonometric kernel")
    w = tuple(tuple(x) for x in w)
    if P.kvec != loop_weight(w, c.n) or P.is_zero():
        return QRat(0)
    poly, pairs, series = residue_integrand(P, w, c)
    return QRat(constant_term(poly, pairs, series, cap)) * _d_factor(w, c)


def residue_bound(P: FOElem, w: Sequence[tuple[int, int]], c: CartanDatum) -> int:
    """Largest certified truncation bound over the monomials of the integrand."""
    w = tuple(tuple(x) for x in w)
    if P.kvec != loop_weight(w, c.n) or P.is_zero():
        return 0
    poly, _, _ = residue_integrand(P, w, c)
    return max((certified_bound(e) for e in poly), default=0)


# --------------------------------------------------------------------------
# radical checks
# --------------------------------------------------------------------------


def loop_words_in_window(alpha: Sequence[int], lo: int, hi: int) -> list[LoopWord]:
    """Loop words of weight ``alpha`` with every mode in ``[lo, hi]``, lex order."""
    from .shuffle import words_of_weight

    out = []
    for w in words_of_weight(alpha):
        for modes in product(range(lo, hi + 1), repeat=len(w)):
            out.append(tuple(zip(w, modes)))
    return sorted(out)


def pair_combo(combo_e: dict, combo_f: dict, c: CartanDatum) -> QRat:
    """Bilinear extension of :func:`tpair` to word combinations."""
    total = QRat(0)
    for u, a in combo_e.items():
        for w, b in combo_f.items():
            v = tpair(u, w, c)
            if not v.is_zero():
                total = total + QRat(a) * QRat(b) * v
    return total


def f_serre_combo(i: int, j: int, l: int, c: CartanDatum) -> dict:
    """Mode-0 Serre combination on the f-side (the q-binomials are q <-> 1/q symmetric)."""
    m = 1 - c.A[i][j]
    out = {}
    for k in range(m + 1):
        coef = qbinom(m, k, c.d[i])
        if k % 2:
            coef = -coef
        out[((i, 0),) * k + ((j, l),) + ((i, 0),) * (m - k)] = coef
    return out


def e_relation6_combo(i: int, j: int, k: int, l: int, c: CartanDatum) -> dict:
    """The quadratic exchange relation on the e-side as a word combination."""
    b = c.form(i, j)
    qb = QRat.q(b)
    out: dict = {}

    def put(word, coef):
        out[word] = out[word] + coef if word in out else QRat(coef)

    put(((i, k + 1), (j, l)), QRat(1))
    put(((i, k), (j, l + 1)), -qb)
    put(((j, l), (i, k + 1)), -qb)
    put(((j, l + 1), (i, k)), QRat(1))
    return {w: v for w, v in out.items() if not v.is_zero()}


def f_relation6_combo(i: int, j: int, k: int, l: int, c: CartanDatum) -> dict:
    """The f-side exchange relation as a word combination.

    The f-side series satisfy
    ``(q^-b z - w) f_i(z) f_j(w) = (z - q^-b w) f_j(w) f_i(z)``; after
    multiplying by ``-q^b`` its mode coefficients are exactly those of
    :func:`e_relation6_combo`, read on f-letters.
    """
    return e_relation6_combo(i, j, k, l, c)


@dataclass(frozen=True)
class OrthogonalityReport:
    i: int
    j: int
    checked: int
    witnesses: tuple  # (e-word, f-combination label, value) for nonzero pairings

    @property
    def ok(self) -> bool:
        return not self.witnesses


def serre_orthogonality(i: int, j: int, window: tuple[int, int], c: CartanDatum) -> OrthogonalityReport:
    """Pair every e-word of the Serre weight (modes in ``window``) with the f-side Serre combinations."""
    if i == j:
        raise ValueError("serre_orthogonality needs i != j")
    lo, hi = window
    m = 1 - c.A[i][j]
    alpha = [0] * c.n
    alpha[i] += m
    alpha[j] += 1
    bad = []
    checked = 0
    for l in range(lo, hi + 1):
        S = f_serre_combo(i, j, l, c)
        for u in loop_words_in_window(alpha, lo, hi):
            v = pair_combo({u: 1}, S, c)
            checked += 1
            if not v.is_zero():
                bad.append((u, l, v))
    return OrthogonalityReport(i, j, checked, tuple(bad))


# --------------------------------------------------------------------------
# windowed Gram blocks and canonical elements
# --------------------------------------------------------------------------


def mirror(w: LoopWord) -> LoopWord:
    """e-word -> f-word with the same letters and negated modes."""
    return tuple((i, -k) for i, k in w)


@dataclass(frozen=True)
class WindowedGram:
    alpha: tuple[int, ...]
    window: tuple[int, int]
    rows: tuple[LoopWord, ...]  # e-side basis
    cols: tuple[LoopWord, ...]  # f-side words
    M: tuple[tuple[QRat, ...], ...]

    @property
    def rank(self) -> int:
        ech = Echelon(self.cols)
        for row in self.M:
            ech.add({w: v for w, v in zip(self.cols, row) if not v.is_zero()})
        return ech.rank

    def blocks(self) -> dict[int, tuple[list[int], list[int]]]:
        """Row and column indices grouped by total degree of the e-side."""
        out: dict[int, tuple[list[int], list[int]]] = {}
        for a, u in enumerate(self.rows):
            out.setdefault(sum(k for _, k in u), ([], []))[0].append(a)
        for b, w in enumerate(self.cols):
            out.setdefault(-sum(k for _, k in w), ([], []))[1].append(b)
        return dict(sorted(out.items()))


def window_basis(alpha: Sequence[int], lo: int, hi: int, c: CartanDatum) -> dict[int, list[LoopWord]]:
    """Lex-first independent words per total degree, modes in ``[lo, hi]``."""
    by_degree: dict[int, list[LoopWord]] = {}
    for w in loop_words_in_window(alpha, lo, hi):
        by_degree.setdefault(sum(k for _, k in w), []).append(w)
    return {d: fo_rank_basis(ws, c)[1] for d, ws in sorted(by_degree.items())}


def windowed_gram(alpha: Sequence[int], lo: int, hi: int, c: CartanDatum) -> WindowedGram:
    alpha = tuple(alpha)
    if lo > hi or not any(alpha):
        return WindowedGram(alpha, (lo, hi), (), (), ())
    basis = window_basis(alpha, lo, hi, c)
    rows = tuple(w for d in basis for w in basis[d])
    cols = tuple(mirror(w) for w in rows)
    M = tuple(tuple(tpair(u, w, c) for w in cols) for u in rows)
    return WindowedGram(alpha, (lo, hi), rows, cols, M)


def windowed_canonical(alpha: Sequence[int], lo: int, hi: int, c: CartanDatum,
                       precision: int = DEFAULT_PRECISION) -> CanonicalTensor:
    """Dual-basis tensor of the windowed Gram matrix, inverted block by block."""
    g = windowed_gram(alpha, lo, hi, c)
    k = height(alpha)
    terms = []
    for d, (ri, ci) in g.blocks().items():
        if len(ri) != len(ci):
            raise ZeroDivisionError(f"block of total degree {d} is not square")
        M = [[g.M[a][b] for b in ci] for a in ri]
        try:
            part = tensor_from_gram(alpha, [g.rows[a] for a in ri], [g.cols[b] for b in ci],
                                    M, k, precision)
        except ZeroDivisionError as exc:
            raise ZeroDivisionError(f"windowed Gram block of total degree {d} is singular") from exc
        terms.extend(part.terms)
    return CanonicalTensor(tuple(alpha), tuple(terms), precision)
