"""Hopf pairing between U_q(n+) and U_q(n-) in word bases, and canonical tensors.

Pairing values are computed with the uniform factor ``hbar^(-k)`` of a
height-``k`` block removed, so all linear algebra happens over Q(q).  The
factor ``hbar^k`` is put back only when a canonical tensor is built.

``<e_u, f_w>`` is ``prod_j d_{w_j}^(-1)`` times the coefficient of the word
``w`` in the shuffle image of ``u``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cartan import CartanDatum, kostant_dim, min_parts, height
from .coeff import DEFAULT_PRECISION, HLaurent, PrecisionError, QRat, subst_exp
from .linalg import Echelon, fraction_rank, qrat_inverse
from .shuffle import Word, graded_rank, word_image_laurent, words_of_weight


class Inconclusive(ArithmeticError):
    """The working precision does not certify the requested quantity."""


def d_factor(w: Sequence[int], c: CartanDatum) -> Fraction:
    out = Fraction(1)
    for j in w:
        out /= c.d[j]
    return out


def pair_words(u: Sequence[int], w: Sequence[int], c: CartanDatum) -> QRat:
    """Stripped pairing ``<e_u, f_w>``."""
    if sorted(u) != sorted(w):
        return QRat(0)
    coef = word_image_laurent(u, c).get(tuple(w))
    if coef is None:
        return QRat(0)
    return QRat(coef) * d_factor(w, c)


@dataclass(frozen=True)
class GramBlock:
    alpha: tuple[int, ...]
    rows: tuple[Word, ...]
    cols: tuple[Word, ...]
    M: tuple[tuple[QRat, ...], ...]


def full_gram(alpha: Sequence[int], c: CartanDatum) -> GramBlock:
    """All words against all words."""
    words = tuple(words_of_weight(alpha))
    M = tuple(tuple(pair_words(u, w, c) for w in words) for u in words)
    return GramBlock(tuple(alpha), words, words, M)


def gram(alpha: Sequence[int], c: CartanDatum) -> GramBlock:
    """Square block on the lex-first PBW basis words, f-side mirrored."""
    _, basis = graded_rank(alpha, c)
    basis = tuple(basis)
    M = tuple(tuple(pair_words(u, w, c) for w in basis) for u in basis)
    return GramBlock(tuple(alpha), basis, basis, M)


def pairing_rank(alpha: Sequence[int], c: CartanDatum) -> int:
    g = full_gram(alpha, c)
    ech = Echelon(g.cols)
    for row in g.M:
        ech.add({w: v for w, v in zip(g.cols, row) if not v.is_zero()})
    return ech.rank


def nondegenerate(alpha: Sequence[int], c: CartanDatum) -> bool:
    return pairing_rank(alpha, c) == kostant_dim(c, alpha)


def classical_pairing_rank(alpha: Sequence[int], c: CartanDatum) -> int:
    """Rank of the full pairing matrix at ``q = 1``."""
    g = full_gram(alpha, c)
    return fraction_rank([[v.evaluate(1) for v in row] for row in g.M])


@dataclass(frozen=True)
class CanonicalTensor:
    alpha: tuple[int, ...]
    terms: tuple[tuple[Word, Word, HLaurent], ...]
    precision: int

    def coefficient_matrix(self, j: int):
        """Matrix of the ``hbar^j`` coefficients indexed by (plus word, minus word)."""
        rows = sorted({u for u, _, _ in self.terms})
        cols = sorted({w for _, w, _ in self.terms})
        lookup = {(u, w): s for u, w, s in self.terms}
        return rows, cols, [[lookup[(u, w)].coeff(j) if (u, w) in lookup else Fraction(0)
                             for w in cols] for u in rows]


def tensor_from_gram(alpha, rows, cols, M, k: int, precision: int) -> CanonicalTensor:
    """``sum_{u,w} (M^-1)_{wu} hbar^k u (x) w`` for a square block ``M``."""
    inv = qrat_inverse(M)
    hk = HLaurent.hbar_power(k, precision)
    terms = []
    for a, u in enumerate(rows):
        for b, w in enumerate(cols):
            x = inv[b][a]
            if x.is_zero():
                continue
            terms.append((u, w, subst_exp(x, precision) * hk))
    return CanonicalTensor(tuple(alpha), tuple(terms), precision)


def canonical_tensor(alpha: Sequence[int], c: CartanDatum,
                     precision: int = DEFAULT_PRECISION) -> CanonicalTensor:
    g = gram(alpha, c)
    if len(g.rows) != kostant_dim(c, alpha):
        raise ValueError(f"pairing is degenerate at weight {tuple(alpha)}")
    return tensor_from_gram(alpha, g.rows, g.cols, g.M, height(alpha), precision)


def valuation_of(P: CanonicalTensor) -> int:
    """Minimal hbar-valuation over all terms.

    A term known only as ``O(hbar^m)`` could hide anything at or above
    ``hbar^m``; the minimum is certified only if it is strictly below every
    such bound.
    """
    known = []
    bounds = []
    for _, _, s in P.terms:
        if s.exact_zero:
            continue
        if s.is_zero_to_precision():
            bounds.append(s.order)
        else:
            known.append(s.valuation())
    if not known:
        raise Inconclusive("no term is certified nonzero at the working precision")
    v = min(known)
    if bounds and min(bounds) <= v:
        raise Inconclusive(f"a term is only known to be O(hbar^{min(bounds)})")
    return v


def contract_with_gram(P: CanonicalTensor, c: CartanDatum) -> list[list[HLaurent]]:
    """``sum_w P[u, w] <e_v, f_w> hbar^-k`` for basis rows ``u``, ``v``; should be the identity."""
    rows = sorted({u for u, _, _ in P.terms}, key=lambda x: x)
    cols = sorted({w for _, w, _ in P.terms})
    lookup = {(u, w): s for u, w, s in P.terms}
    k = height(P.alpha)
    hmk = HLaurent.hbar_power(-k, P.precision)
    out = []
    for v in rows:
        line = []
        for u in rows:
            acc = HLaurent.zero()
            for w in cols:
                s = lookup.get((u, w))
                if s is None:
                    continue
                pv = pair_words(v, w, c)
                if pv.is_zero():
                    continue
                acc = acc + s * subst_exp(pv, P.precision) * hmk
            line.append(acc)
        out.append(line)
    return out


def leading_term(P: CanonicalTensor):
    """``(valuation, rows, cols, matrix of the leading hbar coefficients)``."""
    v = valuation_of(P)
    rows, cols, X = P.coefficient_matrix(v)
    return v, rows, cols, X


__all__ = [
    "GramBlock", "CanonicalTensor", "Inconclusive", "PrecisionError",
    "pair_words", "gram", "full_gram", "pairing_rank", "nondegenerate",
    "classical_pairing_rank", "canonical_tensor", "valuation_of",
    "contract_with_gram", "leading_term", "tensor_from_gram", "min_parts",
]
