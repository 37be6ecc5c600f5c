"""Exact coefficient arithmetic.

Three coefficient rings are used throughout the package:

* :class:`QLaurent` -- Laurent polynomials in ``q`` with rational coefficients,
  stored as a sparse ``{exponent: Fraction}`` map.
* :class:`QRat` -- reduced rational functions in ``q``.  Canonical form: the
  numerator and denominator are ordinary polynomials with nonzero constant
  term, coprime, and the denominator has constant term 1; the remaining power
  of ``q`` is kept as a separate shift.  Equality is therefore a data
  comparison.
* :class:`HLaurent` -- truncated Laurent series in ``hbar`` with pessimistic
  precision tracking.

``subst_exp`` maps ``QRat`` to ``HLaurent`` through ``q = exp(hbar)``.

No floating point is used anywhere.
"""
from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping, Union

from flint import fmpq, fmpq_poly

Rational = Union[int, Fraction]

DEFAULT_PRECISION = 8


def _frac(c) -> Fraction:
    if isinstance(c, fmpq):
        return Fraction(int(c.p), int(c.q))
    return Fraction(c)


def _fmpq(c: Fraction) -> fmpq:
    return fmpq(c.numerator, c.denominator)


# --------------------------------------------------------------------------
# Laurent polynomials
# --------------------------------------------------------------------------


class QLaurent:
    """Finitely supported map ``exponent -> Fraction``; no zero entries stored."""

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Mapping[int, Rational] | None = None):
        c = {}
        if coeffs:
            for k, v in coeffs.items():
                if v:
                    c[int(k)] = Fraction(v)
        self._c = c
        self._hash = None

    @classmethod
    def monomial(cls, k: int, c: Rational = 1) -> "QLaurent":
        return cls({k: c})

    @classmethod
    def constant(cls, c: Rational) -> "QLaurent":
        return cls({0: c})

    @property
    def coeffs(self) -> dict[int, Fraction]:
        return dict(self._c)

    def items(self):
        return self._c.items()

    def __getitem__(self, k: int) -> Fraction:
        return self._c.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self._c

    def __bool__(self) -> bool:
        return bool(self._c)

    def min_degree(self) -> int:
        return min(self._c)

    def max_degree(self) -> int:
        return max(self._c)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = QLaurent.constant(other)
        if isinstance(other, QRat):
            return QRat(self) == other
        if not isinstance(other, QLaurent):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def _coerce(self, other) -> "QLaurent":
        if isinstance(other, QLaurent):
            return other
        if isinstance(other, (int, Fraction)):
            return QLaurent.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return QLaurent(c)

    __radd__ = __add__

    def __neg__(self):
        return QLaurent({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        c: dict[int, Fraction] = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                c[k1 + k2] = c.get(k1 + k2, 0) + v1 * v2
        return QLaurent(c)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            if len(self._c) != 1:
                raise ValueError("only monomials are invertible in the Laurent ring")
            (k, v), = self._c.items()
            return QLaurent({k * n: Fraction(1) / v ** (-n)})
        out = QLaurent.constant(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def subs_power(self, d: int) -> "QLaurent":
        """Substitute ``q -> q**d``."""
        return QLaurent({k * d: v for k, v in self._c.items()})

    def evaluate(self, q0: Rational) -> Fraction:
        q0 = Fraction(q0)
        return sum((v * q0 ** k for k, v in self._c.items()), Fraction(0))

    def __repr__(self) -> str:
        return f"QLaurent({format_laurent(self)!r})"

    def __str__(self) -> str:
        return format_laurent(self)


def format_laurent(p: QLaurent) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in sorted(p.coeffs, reverse=True):
        c = p[k]
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = str(a)
        else:
            mono = "q" if k == 1 else f"q^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# --------------------------------------------------------------------------
# Rational functions
# --------------------------------------------------------------------------

_ONE = fmpq_poly([1])
_ZERO = fmpq_poly([])


def _poly_valuation(p: fmpq_poly) -> int:
    for i, c in enumerate(p.coeffs()):
        if c != 0:
            return i
    raise ValueError("zero polynomial has no valuation")


def _shift_down(p: fmpq_poly, v: int) -> fmpq_poly:
    if v == 0:
        return p
    return fmpq_poly(p.coeffs()[v:])


def _shift_up(p: fmpq_poly, v: int) -> fmpq_poly:
    if v == 0:
        return p
    return fmpq_poly([0] * v + p.coeffs())


class QRat:
    """Element of Q(q) in canonical form ``q**shift * num / den``."""

    __slots__ = ("_num", "_den", "_shift", "_hash")

    def __init__(self, value=0):
        if isinstance(value, QRat):
            self._num, self._den, self._shift = value._num, value._den, value._shift
        elif isinstance(value, QLaurent):
            if value.is_zero():
                self._num, self._den, self._shift = _ZERO, _ONE, 0
            else:
                lo, hi = value.min_degree(), value.max_degree()
                self._num = fmpq_poly([_fmpq(value[k]) for k in range(lo, hi + 1)])
                self._den, self._shift = _ONE, lo
        elif isinstance(value, (int, Fraction)):
            v = Fraction(value)
            self._num = fmpq_poly([_fmpq(v)]) if v else _ZERO
            self._den, self._shift = _ONE, 0
        else:
            raise TypeError(f"cannot build QRat from {type(value).__name__}")
        self._hash = None

    @classmethod
    def _raw(cls, num: fmpq_poly, den: fmpq_poly, shift: int) -> "QRat":
        obj = cls.__new__(cls)
        obj._num, obj._den, obj._shift, obj._hash = num, den, shift, None
        return obj

    @classmethod
    def _make(cls, num: fmpq_poly, den: fmpq_poly, shift: int) -> "QRat":
        if num == 0:
            return cls._raw(_ZERO, _ONE, 0)
        if den == 0:
            raise ZeroDivisionError("division by zero in Q(q)")
        vn = _poly_valuation(num)
        vd = _poly_valuation(den)
        num = _shift_down(num, vn)
        den = _shift_down(den, vd)
        shift += vn - vd
        if den.degree() > 0:
            g = num.gcd(den)
            if g.degree() > 0:
                num = num // g
                den = den // g
        c0 = den[0]
        if c0 != 1:
            num = num / c0
            den = den / c0
        return cls._raw(num, den, shift)

    @classmethod
    def from_num_den(cls, num: QLaurent, den: QLaurent) -> "QRat":
        return QRat(num) / QRat(den)

    @classmethod
    def q(cls, k: int = 1) -> "QRat":
        return cls._raw(_ONE, _ONE, k)

    # -- views -----------------------------------------------------------

    @property
    def num(self) -> QLaurent:
        return QLaurent({i + self._shift: _frac(c) for i, c in enumerate(self._num.coeffs()) if c != 0})

    @property
    def den(self) -> QLaurent:
        return QLaurent({i: _frac(c) for i, c in enumerate(self._den.coeffs()) if c != 0})

    def poly_parts(self) -> tuple[fmpq_poly, fmpq_poly, int]:
        """``(num, den, shift)`` with ``self == q**shift * num / den`` (flint polynomials)."""
        return self._num, self._den, self._shift

    def is_zero(self) -> bool:
        return self._num == 0

    def __bool__(self) -> bool:
        return self._num != 0

    def is_laurent(self) -> bool:
        return self._den == 1

    def to_laurent(self) -> QLaurent:
        if not self.is_laurent():
            raise ValueError(f"{self} is not a Laurent polynomial")
        return self.num

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(other):
        if isinstance(other, QRat):
            return other
        if isinstance(other, (int, Fraction, QLaurent)):
            return QRat(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other._num == 0:
            return self
        if self._num == 0:
            return other
        s = min(self._shift, other._shift)
        a = _shift_up(self._num, self._shift - s)
        b = _shift_up(other._num, other._shift - s)
        if self._den == 1 and other._den == 1:
            return QRat._make(a + b, _ONE, s)
        if self._den == other._den:
            return QRat._make(a + b, self._den, s)
        return QRat._make(a * other._den + b * self._den, self._den * other._den, s)

    __radd__ = __add__

    def __neg__(self):
        return QRat._raw(-self._num, self._den, self._shift)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self._num == 0 or other._num == 0:
            return QRat(0)
        if self._den == 1 and other._den == 1:
            return QRat._raw(self._num * other._num, _ONE, self._shift + other._shift)
        return QRat._make(self._num * other._num, self._den * other._den,
                          self._shift + other._shift)

    __rmul__ = __mul__

    def inverse(self) -> "QRat":
        if self._num == 0:
            raise ZeroDivisionError("inverse of zero in Q(q)")
        return QRat._make(self._den, self._num, -self._shift)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return QRat(other) * self.inverse() if not isinstance(other, QRat) else other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return QRat._make(self._num ** n, self._den ** n, self._shift * n) if n else QRat(1)

    def subs_power(self, d: int) -> "QRat":
        """Substitute ``q -> q**d`` (``d >= 1``)."""
        if d == 1:
            return self
        return QRat.from_num_den(self.num.subs_power(d), self.den.subs_power(d))

    def evaluate(self, q0: Rational) -> Fraction:
        q0 = Fraction(q0)
        den = self.den.evaluate(q0)
        if den == 0:
            raise ZeroDivisionError(f"{self} has a pole at q = {q0}")
        return self.num.evaluate(q0) / den

    # -- comparison ------------------------------------------------------

    def _key(self):
        return (self._shift, tuple(self._num.coeffs()), tuple(self._den.coeffs()))

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return f"QRat({format_qrat(self)!r})"

    def __str__(self) -> str:
        return format_qrat(self)


def format_qrat(x: QRat) -> str:
    if x.is_laurent():
        return format_laurent(x.num)
    return f"({format_laurent(x.num)})/({format_laurent(x.den)})"


_TERM = re.compile(r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*\*?\s*)?(q(?:\s*\^\s*(-?\d+))?)?\s*")


def parse_laurent(text: str) -> QLaurent:
    s = text.strip()
    if not s:
        raise ValueError("empty Laurent polynomial")
    pos = 0
    coeffs: dict[int, Fraction] = {}
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"cannot parse Laurent polynomial at {s[pos:]!r}")
        sign, num, mono, exp = m.groups()
        if sign is None and not first:
            raise ValueError(f"missing operator before {s[pos:]!r}")
        c = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            c = -c
        k = 0 if mono is None else (1 if exp is None else int(exp))
        coeffs[k] = coeffs.get(k, 0) + c
        pos = m.end()
        first = False
    return QLaurent(coeffs)


def parse_qrat(text: str) -> QRat:
    """Inverse of :func:`format_qrat`."""
    s = text.strip()
    m = re.fullmatch(r"\((.*)\)\s*/\s*\((.*)\)", s)
    if m:
        return QRat.from_num_den(parse_laurent(m.group(1)), parse_laurent(m.group(2)))
    return QRat(parse_laurent(s))


# --------------------------------------------------------------------------
# q-integers
# --------------------------------------------------------------------------


def qint(k: int, d: int = 1) -> QRat:
    """``[k]_{q^d} = q^{d(k-1)} + q^{d(k-3)} + ... + q^{d(1-k)}``."""
    if k < 0:
        raise ValueError("qint needs k >= 0")
    return QRat(QLaurent({d * (k - 1 - 2 * j): 1 for j in range(k)}))


def qfactorial(k: int, d: int = 1) -> QRat:
    if k < 0:
        raise ValueError("qfactorial needs k >= 0")
    out = QRat(1)
    for j in range(1, k + 1):
        out = out * qint(j, d)
    return out


def qbinom(m: int, p: int, d: int = 1) -> QRat:
    """Gaussian binomial ``[m p]_{q^d}`` from the factorial formula."""
    if not 0 <= p <= m:
        raise ValueError(f"qbinom needs 0 <= p <= m, got m={m}, p={p}")
    out = qfactorial(m, d) / (qfactorial(p, d) * qfactorial(m - p, d))
    assert out.is_laurent(), "q-binomial division must be exact"
    return out


# --------------------------------------------------------------------------
# hbar series
# --------------------------------------------------------------------------


class PrecisionError(ArithmeticError):
    """All known terms cancelled; the value is only known to be O(hbar^n)."""


class HLaurent:
    """``sum_j coeffs[j] hbar^(order+j) + O(hbar^(order+len(coeffs)))``.

    Three states:

    * ordinary: ``coeffs[0] != 0``;
    * zero to precision: ``coeffs == ()`` and the value is ``O(hbar^order)``;
    * exact zero: ``exact_zero`` is true.
    """

    __slots__ = ("order", "coeffs", "exact_zero")

    def __init__(self, order: int, coeffs: Iterable[Rational], *, exact_zero: bool = False):
        cs = [Fraction(c) for c in coeffs]
        lead = 0
        while lead < len(cs) and cs[lead] == 0:
            lead += 1
        self.order = order + lead
        self.coeffs = tuple(cs[lead:])
        self.exact_zero = exact_zero

    @classmethod
    def zero(cls) -> "HLaurent":
        return cls(0, (), exact_zero=True)

    @classmethod
    def big_o(cls, n: int) -> "HLaurent":
        return cls(n, ())

    @classmethod
    def constant(cls, c: Rational, precision: int = DEFAULT_PRECISION) -> "HLaurent":
        if c == 0:
            return cls.zero()
        return cls(0, [c] + [0] * (precision - 1))

    @classmethod
    def hbar_power(cls, k: int, precision: int = DEFAULT_PRECISION) -> "HLaurent":
        return cls(k, [1] + [0] * (precision - 1))

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    @property
    def abs_precision(self) -> int | None:
        """Exponent of the error term; ``None`` for exact zero."""
        if self.exact_zero:
            return None
        return self.order + len(self.coeffs)

    def is_zero_to_precision(self) -> bool:
        return not self.exact_zero and not self.coeffs

    def valuation(self) -> int:
        if self.exact_zero:
            raise ValueError("exact zero has no valuation")
        if not self.coeffs:
            raise PrecisionError(f"value is O(hbar^{self.order}); valuation not certified")
        return self.order

    def coeff(self, j: int) -> Fraction:
        """Coefficient of ``hbar^j`` (must be inside the known range)."""
        if self.exact_zero:
            return Fraction(0)
        if j < self.order:
            return Fraction(0)
        if j >= self.order + len(self.coeffs):
            raise PrecisionError(f"hbar^{j} is beyond the known precision")
        return self.coeffs[j - self.order]

    def __add__(self, other: "HLaurent") -> "HLaurent":
        if not isinstance(other, HLaurent):
            other = HLaurent.constant(other, max(self.precision, 1))
        if self.exact_zero:
            return other
        if other.exact_zero:
            return self
        top = min(self.abs_precision, other.abs_precision)
        lo = min(self.order, other.order)
        out = [Fraction(0)] * (top - lo) if top > lo else []
        for x in (self, other):
            for j, c in enumerate(x.coeffs):
                e = x.order + j
                if lo <= e < top:
                    out[e - lo] += c
        if not any(out):
            return HLaurent.big_o(top)
        return HLaurent(lo, out)

    __radd__ = __add__

    def __neg__(self) -> "HLaurent":
        if self.exact_zero:
            return self
        return HLaurent(self.order, [-c for c in self.coeffs])

    def __sub__(self, other: "HLaurent") -> "HLaurent":
        return self + (-other)

    def __mul__(self, other) -> "HLaurent":
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return HLaurent.zero()
            return HLaurent(self.order, [c * other for c in self.coeffs], exact_zero=self.exact_zero)
        if self.exact_zero or other.exact_zero:
            return HLaurent.zero()
        if not self.coeffs or not other.coeffs:
            # O(h^a) * (b h^o + ...) = O(h^(a+o)); two big-O's multiply the same way
            return HLaurent.big_o(self.order + other.order)
        n = min(len(self.coeffs), len(other.coeffs))
        out = [Fraction(0)] * n
        for i in range(n):
            ci = self.coeffs[i]
            if ci:
                for j in range(n - i):
                    out[i + j] += ci * other.coeffs[j]
        return HLaurent(self.order + other.order, out)

    __rmul__ = __mul__

    def inverse(self) -> "HLaurent":
        if self.exact_zero:
            raise ZeroDivisionError("inverse of exact zero")
        if not self.coeffs:
            raise PrecisionError("cannot invert a value that is zero to the working precision")
        n = len(self.coeffs)
        a = self.coeffs
        inv = [Fraction(0)] * n
        inv[0] = 1 / a[0]
        for k in range(1, n):
            s = sum((a[j] * inv[k - j] for j in range(1, k + 1)), Fraction(0))
            inv[k] = -s / a[0]
        return HLaurent(-self.order, inv)

    def __truediv__(self, other) -> "HLaurent":
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        return self * other.inverse()

    def truncate(self, precision: int) -> "HLaurent":
        if self.exact_zero or precision >= len(self.coeffs):
            return self
        return HLaurent(self.order, self.coeffs[:precision])

    def agrees_with(self, other: "HLaurent") -> bool:
        """Equality up to the smaller of the two absolute precisions."""
        d = self - other
        return d.exact_zero or not d.coeffs

    def __eq__(self, other) -> bool:
        if not isinstance(other, HLaurent):
            return NotImplemented
        return (self.exact_zero, self.order, self.coeffs) == (other.exact_zero, other.order, other.coeffs)

    def __hash__(self) -> int:
        return hash((self.exact_zero, self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"HLaurent({self})"

    def __str__(self) -> str:
        if self.exact_zero:
            return "0"
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                e = self.order + j
                mono = "" if e == 0 else ("h" if e == 1 else f"h^{e}")
                if not mono:
                    terms.append(str(c))
                elif c == 1:
                    terms.append(mono)
                elif c == -1:
                    terms.append("-" + mono)
                else:
                    terms.append(f"{c}*{mono}")
        terms.append(f"O(h^{self.abs_precision})")
        return " + ".join(terms).replace("+ -", "- ")


def _root_multiplicity_at_one(p: fmpq_poly) -> int:
    one_minus = fmpq_poly([-1, 1])
    m = 0
    while p.degree() >= 1 and p(1) == 0:
        p = p // one_minus
        m += 1
    return m


def _exp_series(p: fmpq_poly, n_terms: int) -> list[Fraction]:
    """First ``n_terms`` hbar-coefficients of ``p(exp(hbar))``."""
    cs = [(k, _frac(c)) for k, c in enumerate(p.coeffs()) if c != 0]
    out = []
    for j in range(n_terms):
        s = sum((c * k ** j for k, c in cs), Fraction(0))
        out.append(s / factorial(j))
    return out


def subst_exp(f: QRat | QLaurent | Rational, precision: int = DEFAULT_PRECISION) -> HLaurent:
    """Expand ``f(q)`` at ``q = exp(hbar)`` to ``precision`` significant terms.

    The hbar-valuations of numerator and denominator are the multiplicities of
    the root ``q = 1``, which are computed exactly, so the result always carries
    the full requested relative precision.
    """
    if precision < 1:
        raise ValueError("precision must be >= 1")
    f = QRat(f) if not isinstance(f, QRat) else f
    if f.is_zero():
        return HLaurent.zero()
    num, den, shift = f.poly_parts()
    vn = _root_multiplicity_at_one(num)
    vd = _root_multiplicity_at_one(den)
    ns = _exp_series(num, vn + precision)[vn:]
    ds = _exp_series(den, vd + precision)[vd:]
    assert ns[0] != 0 and ds[0] != 0
    value = HLaurent(vn, ns) / HLaurent(vd, ds)
    if shift:
        value = value * HLaurent(0, [Fraction(shift ** j, factorial(j)) for j in range(precision)])
    return value
