from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from qshuffle import cartan as ct
from qshuffle.coeff import HLaurent, QRat
from qshuffle.pairing import (Inconclusive, CanonicalTensor, canonical_tensor, classical_pairing_rank,
                              contract_with_gram, full_gram, gram, leading_term, nondegenerate,
                              pair_words, pairing_rank, valuation_of)
from qshuffle.shuffle import words_of_weight

Q = QRat.q
A1, A2, B2, G2 = (ct.preset(n) for n in ("A1", "A2", "B2", "G2"))


def test_gram_examples():
    assert gram((1,), A1).M == ((QRat(1),),)
    assert gram((2,), A1).M == ((QRat(1) + Q(-2),),)
    g = gram((1, 1), A2)
    assert g.rows == ((0, 1), (1, 0))
    assert g.M == ((QRat(1), Q(1)), (Q(1), QRat(1)))
    # det = 1 - q^2, nonzero in Q(q)
    det = g.M[0][0] * g.M[1][1] - g.M[0][1] * g.M[1][0]
    assert det == QRat(1) - Q(2)


def test_d_factor_on_f_side():
    # B2: long simple root has d = 2
    assert pair_words((0,), (0,), B2) == QRat(Fraction(1, 2))
    assert pair_words((1,), (1,), B2) == QRat(1)
    assert pair_words((0,), (1,), B2).is_zero()


@pytest.mark.parametrize("c", [A2, B2, G2], ids=str)
def test_gram_symmetric(c):
    # the form is symmetric, so the full word Gram is symmetric once d-factors agree
    for a in [(1, 1), (2, 1), (1, 2)]:
        g = full_gram(a, c)
        for x in range(len(g.rows)):
            for y in range(len(g.cols)):
                assert g.M[x][y] == g.M[y][x]


@pytest.mark.parametrize("c", [A1, A2, B2, G2], ids=str)
def test_nondegenerate_height_le_4(c):
    for h in range(1, 5):
        for a in ct.weights_of_height(c.n, h):
            assert pairing_rank(a, c) == ct.kostant_dim(c, a)
            assert nondegenerate(a, c)


def test_classical_pairing_rank_drops():
    assert classical_pairing_rank((1, 1), A2) == 1
    assert pairing_rank((1, 1), A2) == 2


# ---------------------------------------------------------------- product / coproduct compatibility


def braided_coproduct_pairing(u, up, w, c):
    """sum over position subsets S of w: q^(-inv) <u, w|S> <u', w|S^c>."""
    k = len(u)
    total = QRat(0)
    for S in combinations(range(len(w)), k):
        Sset = set(S)
        left = tuple(w[s] for s in S)
        right = tuple(w[s] for s in range(len(w)) if s not in Sset)
        e = 0
        for t in range(len(w)):
            if t in Sset:
                continue
            for s in S:
                if s > t:  # a letter of the right factor precedes one of the left factor
                    e -= c.form(w[s], w[t])
        a = pair_words(u, left, c)
        b = pair_words(up, right, c)
        if not a.is_zero() and not b.is_zero():
            total = total + Q(e) * a * b
    return total


word3 = st.lists(st.integers(0, 1), min_size=1, max_size=2).map(tuple)


@given(word3, word3, st.data())
@settings(max_examples=60, deadline=None)
def test_pairing_multiplicative(u, up, data):
    for c in (A2, B2):
        w = data.draw(st.permutations(u + up).map(tuple))
        assert pair_words(u + up, w, c) == braided_coproduct_pairing(u, up, w, c)


def test_pairing_multiplicative_exhaustive_a2():
    for h in range(2, 4):
        for a in ct.weights_of_height(2, h):
            for uu in words_of_weight(a):
                for k in range(1, len(uu)):
                    u, up = uu[:k], uu[k:]
                    for w in words_of_weight(a):
                        assert pair_words(uu, w, A2) == braided_coproduct_pairing(u, up, w, A2)


def test_plain_deconcatenation_fails():
    # <e e, f f> in A1 is 1 + q^-2, but w = [v|v] has a single cut into (v, v)
    lhs = pair_words((0, 0), (0, 0), A1)
    one_cut = pair_words((0,), (0,), A1) * pair_words((0,), (0,), A1)
    assert lhs == QRat(1) + Q(-2)
    for e in range(-4, 5):
        assert lhs != Q(e) * one_cut


# ---------------------------------------------------------------- canonical tensor


@pytest.mark.parametrize("c,i", [(A1, 0), (A2, 0), (B2, 0), (B2, 1), (G2, 0), (G2, 1)])
def test_simple_root_tensor(c, i):
    a = c.simple_root(i)
    P = canonical_tensor(a, c, 8)
    assert len(P.terms) == 1
    u, w, s = P.terms[0]
    assert u == w == (i,)
    assert s == HLaurent(1, [c.d[i]] + [0] * 7)


@pytest.mark.parametrize("c,a", [
    (A1, (1,)), (A1, (2,)), (A1, (3,)), (A1, (4,)),
    (A2, (1, 1)), (A2, (2, 1)), (A2, (2, 2)),
    (B2, (1, 1)), (B2, (2, 1)), (B2, (1, 2)),
    (G2, (1, 1)), (G2, (1, 3)), (G2, (2, 3)),
])
def test_valuation_law(c, a):
    P = canonical_tensor(a, c, 8)
    assert valuation_of(P) == ct.min_parts(c, a)


def test_a1_tensor_frozen():
    # P[(2)] = hbar^2 / (1 + q^-2) e^2 (x) f^2; oracle: sympy series of 1/(1+e^{-2h})
    P = canonical_tensor((2,), A1, 4)
    (u, w, s), = P.terms
    assert (u, w) == ((0, 0), (0, 0))
    assert s.order == 2
    assert list(s.coeffs) == [Fraction(1, 2), Fraction(1, 2), 0, Fraction(-1, 6)]


@pytest.mark.parametrize("c,a", [(A2, (1, 1)), (A2, (2, 1)), (B2, (1, 2)), (G2, (1, 2))])
def test_duality(c, a):
    P = canonical_tensor(a, c, 6)
    C = contract_with_gram(P, c)
    for x, row in enumerate(C):
        for y, v in enumerate(row):
            expect = HLaurent.constant(1 if x == y else 0, 6)
            assert v.agrees_with(expect)


def test_leading_term_rank_one_for_roots():
    # A2 (1,1) is a root: the leading coefficient matrix has rank 1
    v, rows, cols, X = leading_term(canonical_tensor((1, 1), A2, 6))
    assert v == 1
    assert X == [[Fraction(-1, 2), Fraction(1, 2)], [Fraction(1, 2), Fraction(-1, 2)]]
    from qshuffle.linalg import fraction_rank
    for c, a in [(B2, (1, 1)), (B2, (1, 2)), (G2, (1, 1)), (G2, (1, 3)), (G2, (2, 3))]:
        v, _, _, X = leading_term(canonical_tensor(a, c, 6))
        assert v == 1 and fraction_rank(X) == 1


def test_valuation_inconclusive():
    P = CanonicalTensor((1,), ((((0,), (0,), HLaurent.big_o(1))),), 4)
    with pytest.raises(Inconclusive):
        valuation_of(P)
    P = CanonicalTensor((1,), (((0,), (0,), HLaurent(2, [1])), ((0,), (1,), HLaurent.big_o(1))), 4)
    with pytest.raises(Inconclusive):
        valuation_of(P)


def test_valuation_precision_independent():
    for N in (2, 4, 8):
        assert valuation_of(canonical_tensor((2, 2), A2, N)) == 2


def test_degenerate_rejected():
    with pytest.raises(ct.CartanError):
        canonical_tensor((1,), ct.preset("A1^(1)"))
