"""The quantum shuffle algebra and the word-by-word embedding of U_q(n+).

A word is a tuple of 0-based generator indices.  The product of two words
runs over all shuffles; every pair of letters that ends up inverted (a letter
of the right factor placed before a letter of the left factor) contributes
``q^(-<deg z_i, deg z_j>)`` with ``<eps_i, eps_j> = d_i a_ij``.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Mapping, Sequence

from .cartan import CartanDatum, Weight
from .coeff import QLaurent, QRat, qbinom
from .linalg import rank_and_basis

Word = tuple[int, ...]


def weight(w: Sequence[int], n: int) -> Weight:
    out = [0] * n
    for i in w:
        out[i] += 1
    return tuple(out)


def words_of_weight(alpha: Sequence[int]) -> list[Word]:
    """All words of weight ``alpha`` in lexicographic order."""
    alpha = list(alpha)
    total = sum(alpha)
    out: list[Word] = []
    buf: list[int] = []

    def rec():
        if len(buf) == total:
            out.append(tuple(buf))
            return
        for i, left in enumerate(alpha):
            if left:
                alpha[i] -= 1
                buf.append(i)
                rec()
                buf.pop()
                alpha[i] += 1

    rec()
    return out


class ShuffleVec:
    """Finitely supported ``Word -> QRat`` map, homogeneous of one weight."""

    __slots__ = ("terms", "weight")

    def __init__(self, terms: Mapping[Word, QRat | QLaurent | int], n: int, wt: Weight | None = None):
        clean = {}
        for w, c in terms.items():
            c = c if isinstance(c, QRat) else QRat(c)
            if not c.is_zero():
                clean[tuple(w)] = c
        weights = {weight(w, n) for w in clean}
        if len(weights) > 1:
            raise ValueError("ShuffleVec terms must share one weight")
        if weights:
            wt0 = weights.pop()
            if wt is not None and tuple(wt) != wt0:
                raise ValueError("declared weight does not match the terms")
            wt = wt0
        self.terms = clean
        self.weight = tuple(wt) if wt is not None else (0,) * n

    @classmethod
    def letter(cls, i: int, n: int) -> "ShuffleVec":
        return cls({(i,): 1}, n)

    @classmethod
    def unit(cls, n: int) -> "ShuffleVec":
        return cls({(): 1}, n)

    @classmethod
    def zero(cls, n: int, wt: Weight | None = None) -> "ShuffleVec":
        return cls({}, n, wt)

    def is_zero(self) -> bool:
        return not self.terms

    def __getitem__(self, w: Word) -> QRat:
        return self.terms.get(tuple(w), QRat(0))

    def __add__(self, other: "ShuffleVec") -> "ShuffleVec":
        n = len(self.weight)
        if self.terms and other.terms and self.weight != other.weight:
            raise ValueError("cannot add ShuffleVecs of different weights")
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out[w] + c if w in out else c
        wt = self.weight if self.terms else other.weight
        return ShuffleVec(out, n, wt if out else None)

    def scale(self, c) -> "ShuffleVec":
        c = QRat(c) if not isinstance(c, QRat) else c
        return ShuffleVec({w: v * c for w, v in self.terms.items()}, len(self.weight))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ShuffleVec):
            return NotImplemented
        return self.terms == other.terms

    def __repr__(self) -> str:
        if not self.terms:
            return "ShuffleVec(0)"
        body = " + ".join(f"({c})[{'|'.join(str(i + 1) for i in w)}]"
                          for w, c in sorted(self.terms.items()))
        return f"ShuffleVec({body})"


def _shuffle_words(c: CartanDatum, a: Word, b: Word) -> dict[Word, QLaurent]:
    """Shuffle product of two words as ``{word: Laurent coefficient}``."""
    k, l = len(a), len(b)
    out: dict[Word, dict[int, int]] = {}
    for pos in combinations(range(k + l), l):
        # pos: slots taken by b; count inversions (b-letter before a-letter)
        word = [0] * (k + l)
        posset = set(pos)
        ai = bi = 0
        exp = 0
        seen_b: list[int] = []
        for s in range(k + l):
            if s in posset:
                word[s] = b[bi]
                seen_b.append(b[bi])
                bi += 1
            else:
                x = a[ai]
                word[s] = x
                for y in seen_b:
                    exp -= c.form(x, y)
                ai += 1
        w = tuple(word)
        bucket = out.setdefault(w, {})
        bucket[exp] = bucket.get(exp, 0) + 1
    return {w: QLaurent(v) for w, v in out.items()}


def shuffle_product(x: ShuffleVec, y: ShuffleVec, c: CartanDatum) -> ShuffleVec:
    n = c.n
    if len(x.weight) != n or len(y.weight) != n:
        raise ValueError("ShuffleVec and CartanDatum have different ranks")
    out: dict[Word, QRat] = {}
    for u, cu in x.terms.items():
        for v, cv in y.terms.items():
            cuv = cu * cv
            for w, coef in _shuffle_words(c, u, v).items():
                t = cuv * coef
                out[w] = out[w] + t if w in out else t
    wt = tuple(a + b for a, b in zip(x.weight, y.weight))
    return ShuffleVec(out, n, wt)


@lru_cache(maxsize=200000)
def _image_int(c: CartanDatum, w: Word) -> dict[Word, dict[int, int]]:
    """Iterated shuffle of letters with integer Laurent coefficients."""
    if not w:
        return {(): {0: 1}}
    prev = _image_int(c, w[:-1])
    i = w[-1]
    out: dict[Word, dict[int, int]] = {}
    for z, coeff in prev.items():
        # inserting letter i at slot p inverts it with every z_m, m >= p
        shift = 0
        for p in range(len(z), -1, -1):
            if p < len(z):
                shift -= c.form(z[p], i)
            nz = z[:p] + (i,) + z[p:]
            bucket = out.setdefault(nz, {})
            for e, v in coeff.items():
                e2 = e + shift
                s = bucket.get(e2, 0) + v
                if s:
                    bucket[e2] = s
                else:
                    bucket.pop(e2, None)
    return {z: b for z, b in out.items() if b}


def word_image_laurent(w: Sequence[int], c: CartanDatum) -> dict[Word, QLaurent]:
    return {z: QLaurent(b) for z, b in _image_int(c, tuple(w)).items()}


def word_image(w: Sequence[int], c: CartanDatum) -> ShuffleVec:
    return ShuffleVec(word_image_laurent(w, c), c.n, weight(w, c.n))


def linear_image(combo: Mapping[Word, QRat], c: CartanDatum) -> ShuffleVec:
    """Linear extension of :func:`word_image` to a formal word combination."""
    out: dict[Word, QRat] = {}
    wt = None
    for w, coef in combo.items():
        wt = weight(w, c.n)
        for z, v in word_image_laurent(w, c).items():
            t = coef * v
            out[z] = out[z] + t if z in out else t
    return ShuffleVec(out, c.n, wt)


def graded_rank(alpha: Sequence[int], c: CartanDatum) -> tuple[int, list[Word]]:
    """Rank of the weight-``alpha`` part of the image, and its lex-first basis words."""
    words = words_of_weight(alpha)
    rows = ((w, word_image_laurent(w, c)) for w in words)
    return rank_and_basis(list(rows), words)


def serre_element(i: int, j: int, c: CartanDatum) -> dict[Word, QRat]:
    """Quantum Serre combination for the pair ``(i, j)`` as a word combination."""
    if i == j:
        raise ValueError("serre_element needs i != j")
    m = 1 - c.A[i][j]
    out = {}
    for k in range(m + 1):
        coef = qbinom(m, k, c.d[i])
        if k % 2:
            coef = -coef
        out[(i,) * k + (j,) + (i,) * (m - k)] = coef
    return out


def classical_image(w: Sequence[int], c: CartanDatum) -> dict[Word, int]:
    """``word_image`` at ``q = 1``: plain shuffle multiplicities."""
    return {z: sum(b.values()) for z, b in _image_int(c, tuple(w)).items()
            if sum(b.values())}
