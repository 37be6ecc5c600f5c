from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from qshuffle.coeff import (HLaurent, PrecisionError, QLaurent, QRat, format_qrat, parse_laurent,
                            parse_qrat, qbinom, qfactorial, qint, subst_exp)

Q = QRat.q


def ql(d):
    return QLaurent(d)


# ---------------------------------------------------------------- strategies

small = st.integers(-3, 3)
laurents = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4).map(QLaurent)


@st.composite
def qrats(draw):
    num = draw(laurents)
    den = draw(laurents.filter(lambda p: not p.is_zero()))
    return QRat.from_num_den(num, den)


# ---------------------------------------------------------------- QLaurent / QRat


def test_laurent_arithmetic():
    a = ql({1: 1, -1: -1})
    assert a * a == ql({2: 1, 0: -2, -2: 1})
    assert (a - a).is_zero()
    assert a.min_degree() == -1 and a.max_degree() == 1


def test_qrat_canonical_form_is_unique():
    x = (Q(2) - Q(-2)) / (Q(1) - Q(-1))
    assert x.is_laurent()
    assert x.to_laurent() == ql({1: 1, -1: 1})
    assert (Q(3) / Q(5)) == Q(-2)
    assert hash(QRat(Fraction(1, 2)) * 2) == hash(QRat(1))


def test_qrat_non_laurent():
    x = QRat(1) / (Q(1) + 1)
    assert not x.is_laurent()
    with pytest.raises(ValueError):
        x.to_laurent()
    with pytest.raises(ZeroDivisionError):
        QRat(0).inverse()


@given(qrats(), qrats(), qrats())
@settings(max_examples=60, deadline=None)
def test_qrat_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    if not b.is_zero():
        assert (a / b) * b == a


@given(qrats())
@settings(max_examples=60, deadline=None)
def test_format_parse_round_trip(x):
    assert parse_qrat(format_qrat(x)) == x


def test_parse_examples():
    assert parse_laurent("q^2 - 2 + 3/2*q^-1") == ql({2: 1, 0: -2, -1: Fraction(3, 2)})
    assert parse_qrat("(q + 1)/(q^2 + 1)") == (Q(1) + 1) / (Q(2) + 1)
    with pytest.raises(ValueError):
        parse_laurent("q^^2")


# ---------------------------------------------------------------- q-numbers


def test_qint_values():
    assert qint(3).to_laurent() == ql({2: 1, 0: 1, -2: 1})
    assert qint(2, d=2).to_laurent() == ql({2: 1, -2: 1})
    assert qint(0).is_zero()


def test_qbinom_frozen():
    # oracle: sympy expansion of the Gaussian binomial, recentred
    assert qbinom(4, 2).to_laurent() == ql({4: 1, 2: 1, 0: 2, -2: 1, -4: 1})
    assert qbinom(3, 1, d=2).to_laurent() == ql({4: 1, 0: 1, -4: 1})
    assert qbinom(5, 0) == QRat(1)
    with pytest.raises(ValueError):
        qbinom(5, 6)


def _pascal(m, p, d):
    # q-Pascal: [m,p] = q^{dp}[m-1,p] + q^{-d(m-p)}[m-1,p-1]
    if p == 0 or p == m:
        return QRat(1)
    return Q(d * p) * _pascal(m - 1, p, d) + Q(-d * (m - p)) * _pascal(m - 1, p - 1, d)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_qbinom_pascal(d):
    for m in range(0, 13):
        for p in range(0, m + 1):
            assert qbinom(m, p, d) == _pascal(m, p, d)


def test_qbinom_symmetry_and_classical_limit():
    for m in range(7):
        for p in range(m + 1):
            b = qbinom(m, p)
            assert b == qbinom(m, m - p)
            assert b.evaluate(1) == sp.binomial(m, p)
            assert b == b.subs_power(-1)


def test_qfactorial():
    assert qfactorial(3) == qint(2) * qint(3)
    assert qfactorial(0) == QRat(1)


# ---------------------------------------------------------------- hbar series


def test_hlaurent_states():
    z = HLaurent.zero()
    o = HLaurent.big_o(3)
    x = HLaurent(1, [2, 0, 1])
    assert z.exact_zero and o.is_zero_to_precision()
    with pytest.raises(ValueError):
        z.valuation()
    with pytest.raises(PrecisionError):
        o.valuation()
    assert x.valuation() == 1
    assert (x - x).is_zero_to_precision()
    assert (x - x).abs_precision == 4
    assert (x + z) == x


def test_hlaurent_precision_propagation():
    x = HLaurent(1, [1, 0, 0])  # h + O(h^4)
    y = HLaurent(-1, [1, 1])  # 1/h + 1 + O(h)
    p = x * y
    assert p.order == 0 and p.abs_precision == 2
    inv = x.inverse()
    assert inv.valuation() == -1 and inv.precision == 3


# frozen from sympy series of f(exp(h))
SERIES_CASES = [
    (Q(1) - Q(-1), 1, [2, 0, Fraction(1, 3), 0]),
    ((Q(1) - Q(-1)).inverse(), -1, [Fraction(1, 2), 0, Fraction(-1, 12), 0, Fraction(7, 720)]),
    ((Q(2) - Q(-2)) / (Q(1) - Q(-1)), 0, [2, 0, 1, 0, Fraction(1, 12)]),
    ((Q(3) - Q(-3)) ** -2, -2, [Fraction(1, 36), 0, Fraction(-1, 12), 0, Fraction(3, 20)]),
    ((Q(1) + 1) / (Q(2) + 1), 0, [1, Fraction(-1, 2), Fraction(-1, 4), Fraction(1, 6), Fraction(5, 48)]),
]


@pytest.mark.parametrize("f,order,coeffs", SERIES_CASES)
def test_subst_exp_frozen(f, order, coeffs):
    s = subst_exp(f, len(coeffs))
    assert s.order == order
    assert list(s.coeffs) == [Fraction(c) for c in coeffs]


@given(qrats())
@settings(max_examples=25, deadline=None)
def test_subst_exp_matches_sympy(x):
    if x.is_zero():
        assert subst_exp(x).exact_zero
        return
    q, h = sp.symbols("q h")
    num, den = x.num, x.den
    expr = sum(sp.Rational(c.numerator, c.denominator) * q ** k for k, c in num.items())
    expr /= sum(sp.Rational(c.numerator, c.denominator) * q ** k for k, c in den.items())
    s = subst_exp(x, 4)
    ser = sp.series(expr.subs(q, sp.exp(h)), h, 0, s.abs_precision).removeO()
    for j in range(s.order, s.abs_precision):
        c = ser.coeff(h, j)
        assert Fraction(int(sp.numer(c)), int(sp.denom(c))) == s.coeff(j)


@given(qrats(), qrats())
@settings(max_examples=60, deadline=None)
def test_subst_exp_homomorphism(a, b):
    N = 6
    assert (subst_exp(a, N) * subst_exp(b, N)).agrees_with(subst_exp(a * b, N))
    if not (a + b).is_zero():
        assert (subst_exp(a, N) + subst_exp(b, N)).agrees_with(subst_exp(a + b, N))


def test_subst_exp_full_relative_precision():
    # (q - 1)^5 has valuation 5; requested precision is kept regardless
    f = (Q(1) - 1) ** 5
    s = subst_exp(f, 3)
    assert s.order == 5 and s.precision == 3


def test_subst_exp_rejects_bad_precision():
    with pytest.raises(ValueError):
        subst_exp(Q(1), 0)
