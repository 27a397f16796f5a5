"""Exact arithmetic in q and t.

``QTCoeff`` is a sparse polynomial over the rationals that is Laurent in q
and ordinary in t.  ``QTRatFun`` is a reduced quotient of two of them.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

from sympy import QQ
from sympy.polys.rings import ring

Exp = Tuple[int, int]
Scalar = Union[int, Fraction]


class DivisionByZero(ZeroDivisionError):
    """Raised when dividing by the zero function."""


class PoleAtZero(ZeroDivisionError):
    """Raised when q = 0 is substituted into a negative power of q."""


def _clean(c: Scalar) -> Scalar:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    return c


def _is_scalar(x: object) -> bool:
    return isinstance(x, Rational)


class QTCoeff:
    """Sparse Laurent polynomial in q (signed exponents) and t (exponents >= 0)."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exp, Scalar] | Iterable[Tuple[Exp, Scalar]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: Dict[Exp, Scalar] = {}
        for (qe, te), c in items:
            if te < 0:
                raise ValueError("t exponents of a QTCoeff must be nonnegative")
            key = (int(qe), int(te))
            acc[key] = acc.get(key, 0) + c
        self._terms = {k: _clean(v) for k, v in acc.items() if v != 0}
        self._hash = None

    @classmethod
    def _trusted(cls, terms: Dict[Exp, Scalar]) -> "QTCoeff":
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def const(cls, c: Scalar) -> "QTCoeff":
        return cls._trusted({(0, 0): _clean(c)} if c else {})

    @classmethod
    def monomial(cls, qe: int = 0, te: int = 0, c: Scalar = 1) -> "QTCoeff":
        return cls({(qe, te): c})

    @classmethod
    def coerce(cls, x: object) -> "QTCoeff":
        if isinstance(x, QTCoeff):
            return x
        if _is_scalar(x):
            return cls.const(x)  # type: ignore[arg-type]
        raise TypeError(f"cannot coerce {type(x).__name__} to QTCoeff")

    @property
    def terms(self) -> Dict[Exp, Scalar]:
        return dict(self._terms)

    def items(self) -> Iterator[Tuple[Exp, Scalar]]:
        return iter(sorted(self._terms.items()))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def coeff(self, qexp: int, texp: int) -> Scalar:
        return self._terms.get((qexp, texp), 0)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and (0, 0) in self._terms)

    def min_exponents(self) -> Exp:
        if not self._terms:
            return (0, 0)
        return (min(k[0] for k in self._terms), min(k[1] for k in self._terms))

    def max_t(self) -> int:
        return max((k[1] for k in self._terms), default=-1)

    def shift(self, dq: int, dt: int = 0) -> "QTCoeff":
        return QTCoeff({(a + dq, b + dt): c for (a, b), c in self._terms.items()})

    def specialize(self, q0: Scalar, t0: Scalar) -> Scalar:
        total: Scalar = 0
        for (a, b), c in self._terms.items():
            if a < 0 and q0 == 0:
                raise PoleAtZero("negative power of q evaluated at q = 0")
            qa = Fraction(q0) ** a if a < 0 else q0 ** a
            total += c * qa * t0 ** b
        return _clean(Fraction(total))

    def map_coeffs(self, fn) -> "QTCoeff":
        return QTCoeff({k: fn(v) for k, v in self._terms.items()})

    def truncate_t(self, max_t: int) -> "QTCoeff":
        return QTCoeff._trusted({k: v for k, v in self._terms.items() if k[1] <= max_t})

    def t_part(self, texp: int) -> "QTCoeff":
        """The coefficient of t^texp, as a pure q-Laurent polynomial."""
        return QTCoeff._trusted({(a, 0): c for (a, b), c in self._terms.items() if b == texp})

    # arithmetic -----------------------------------------------------------
    def __neg__(self) -> "QTCoeff":
        return QTCoeff._trusted({k: -v for k, v in self._terms.items()})

    def __pos__(self) -> "QTCoeff":
        return self

    def __add__(self, other: object) -> "QTCoeff":
        if _is_scalar(other):
            other = QTCoeff.const(other)  # type: ignore[arg-type]
        if not isinstance(other, QTCoeff):
            return NotImplemented
        out = dict(self._terms)
        for k, v in other._terms.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = _clean(s)
            else:
                out.pop(k, None)
        return QTCoeff._trusted(out)

    __radd__ = __add__

    def __sub__(self, other: object) -> "QTCoeff":
        if _is_scalar(other) or isinstance(other, QTCoeff):
            return self + (-QTCoeff.coerce(other))
        return NotImplemented

    def __rsub__(self, other: object) -> "QTCoeff":
        if _is_scalar(other):
            return QTCoeff.const(other) - self  # type: ignore[arg-type]
        return NotImplemented

    def __mul__(self, other: object) -> "QTCoeff":
        if _is_scalar(other):
            if other == 0:
                return QTCoeff()
            return QTCoeff._trusted({k: _clean(v * other) for k, v in self._terms.items()})
        if not isinstance(other, QTCoeff):
            return NotImplemented
        out: Dict[Exp, Scalar] = {}
        for (a1, b1), c1 in self._terms.items():
            for (a2, b2), c2 in other._terms.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, 0) + c1 * c2
        return QTCoeff._trusted({k: _clean(v) for k, v in out.items() if v != 0})

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> object:
        if _is_scalar(other):
            if other == 0:
                raise DivisionByZero("division by zero scalar")
            return QTCoeff._trusted({k: _clean(Fraction(v) / other) for k, v in self._terms.items()})
        if isinstance(other, QTCoeff):
            return QTRatFun(self, other)
        return NotImplemented

    def __rtruediv__(self, other: object) -> "QTRatFun":
        if _is_scalar(other):
            return QTRatFun(QTCoeff.const(other), self)  # type: ignore[arg-type]
        return NotImplemented

    def __pow__(self, e: int) -> "QTCoeff":
        if e < 0:
            if len(self._terms) != 1:
                raise ValueError("negative powers only for monomials")
            ((a, b), c), = self._terms.items()
            if b != 0:
                raise ValueError("negative powers of t are not QTCoeffs")
            return QTCoeff({(a * e, 0): Fraction(c) ** e})
        result = QTCoeff.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, QTCoeff):
            return self._terms == other._terms
        if _is_scalar(other):
            return self._terms == ({(0, 0): other} if other != 0 else {})
        if isinstance(other, QTRatFun):
            return other == self
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self._terms.get((0, 0), 0))
            else:
                self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"QTCoeff({self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self._terms.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            mono = "*".join(
                s for s in (
                    "" if a == 0 else ("q" if a == 1 else f"q^{a}" if a > 0 else f"q^({a})"),
                    "" if b == 0 else ("t" if b == 1 else f"t^{b}"),
                ) if s
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # serialization --------------------------------------------------------
    def to_json(self) -> list:
        out = []
        for (a, b), c in sorted(self._terms.items()):
            f = Fraction(c)
            out.append({"q": a, "t": b, "num": str(f.numerator), "den": str(f.denominator)})
        return out

    @classmethod
    def from_json(cls, data: list) -> "QTCoeff":
        return cls({(d["q"], d["t"]): Fraction(int(d["num"]), int(d["den"])) for d in data})


def qt_arith(a: QTCoeff, b: QTCoeff, op: str) -> QTCoeff:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def coeff_extract(p: QTCoeff, qexp: int, texp: int) -> Scalar:
    return p.coeff(qexp, texp)


def specialize(p: QTCoeff, q0: Scalar, t0: Scalar) -> Scalar:
    return p.specialize(q0, t0)


Q = QTCoeff.monomial(1, 0)
T = QTCoeff.monomial(0, 1)
ONE = QTCoeff.const(1)
ZERO = QTCoeff()


# rational functions -------------------------------------------------------

_RING, _Q, _T = ring("q,t", QQ)


def _to_poly(p: QTCoeff, qshift: int):
    return _RING({(a + qshift, b): QQ(Fraction(c).numerator, Fraction(c).denominator)
                  for (a, b), c in p._terms.items()})


def _from_poly(poly, qshift: int) -> QTCoeff:
    return QTCoeff._trusted({
        (a - qshift, b): _clean(Fraction(int(c.numerator), int(c.denominator)))
        for (a, b), c in poly.terms()
    })


def _normalize(num: QTCoeff, den: QTCoeff) -> Tuple[QTCoeff, QTCoeff]:
    if den.is_zero():
        raise DivisionByZero("zero denominator")
    if num.is_zero():
        return ZERO, ONE
    # the only units are c*q^j, so fix the q-shift of the denominator first
    dq = den.min_exponents()[0]
    if dq:
        num, den = num.shift(-dq), den.shift(-dq)
    if not den.is_constant():
        nq = min(0, num.min_exponents()[0])
        pn, pd = _to_poly(num, -nq), _to_poly(den, 0)
        g = pn.gcd(pd)
        if g != 1:
            num = _from_poly(pn.exquo(g), -nq)
            den = _from_poly(pd.exquo(g), 0)
    # denominator: primitive over the integers, lex-leading coefficient positive
    coeffs = [Fraction(c) for c in den._terms.values()]
    lcm_den = 1
    for c in coeffs:
        lcm_den = lcm_den * c.denominator // _gcd(lcm_den, c.denominator)
    g = 0
    for c in coeffs:
        g = _gcd(g, (c * lcm_den).numerator)
    scale = Fraction(lcm_den, g)
    lead = den._terms[max(den._terms)]
    if lead < 0:
        scale = -scale
    if scale != 1:
        num, den = num * scale, den * scale
    return num, den


def _gcd(a: int, b: int) -> int:
    from math import gcd

    return gcd(a, b)


class QTRatFun:
    """Reduced quotient num/den of q,t polynomials in a canonical form.

    The denominator has no power of q as a factor, its integer coefficients
    are coprime and its lexicographically largest term is positive.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: object = 0, den: object = 1):
        if isinstance(num, QTRatFun) or isinstance(den, QTRatFun):
            a = num if isinstance(num, QTRatFun) else QTRatFun(num)
            b = den if isinstance(den, QTRatFun) else QTRatFun(den)
            r = a / b
            self.num, self.den = r.num, r.den
            return
        n, d = QTCoeff.coerce(num), QTCoeff.coerce(den)
        self.num, self.den = _normalize(n, d)

    @classmethod
    def _trusted(cls, num: QTCoeff, den: QTCoeff) -> "QTRatFun":
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def coerce(cls, x: object) -> "QTRatFun":
        if isinstance(x, QTRatFun):
            return x
        c = QTCoeff.coerce(x)
        return cls._trusted(c, ONE)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den == ONE

    def as_qtcoeff(self) -> QTCoeff:
        if not self.is_polynomial():
            raise ValueError(f"{self} is not a polynomial")
        return self.num

    def __neg__(self) -> "QTRatFun":
        return QTRatFun._trusted(-self.num, self.den)

    def __add__(self, other: object) -> "QTRatFun":
        try:
            o = QTRatFun.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            if self.den == ONE:
                return QTRatFun._trusted(self.num + o.num, ONE)
            return QTRatFun(self.num + o.num, self.den)
        return QTRatFun(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other: object) -> "QTRatFun":
        try:
            return self + (-QTRatFun.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other: object) -> "QTRatFun":
        return (-self) + other

    def __mul__(self, other: object) -> "QTRatFun":
        try:
            o = QTRatFun.coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == ONE and o.den == ONE:
            return QTRatFun._trusted(self.num * o.num, ONE)
        return QTRatFun(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "QTRatFun":
        try:
            o = QTRatFun.coerce(other)
        except TypeError:
            return NotImplemented
        if o.is_zero():
            raise DivisionByZero("division by the zero function")
        return QTRatFun(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other: object) -> "QTRatFun":
        return QTRatFun.coerce(other) / self

    def __pow__(self, e: int) -> "QTRatFun":
        if e < 0:
            return QTRatFun(1) / (self ** (-e))
        return QTRatFun(self.num ** e, self.den ** e)

    def __eq__(self, other: object) -> bool:
        try:
            o = QTRatFun.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self) -> int:
        if self.den == ONE:
            return hash(self.num)
        return hash((self.num, self.den))

    def specialize(self, q0: Scalar, t0: Scalar) -> Scalar:
        d = self.den.specialize(q0, t0)
        if d == 0:
            raise DivisionByZero("denominator vanishes at this point")
        return _clean(Fraction(self.num.specialize(q0, t0)) / d)

    def __repr__(self) -> str:
        return f"QTRatFun({self})"

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "QTRatFun":
        return cls(QTCoeff.from_json(data["num"]), QTCoeff.from_json(data["den"]))


def ratfun_arith(a: QTRatFun, b: QTRatFun, op: str) -> QTRatFun:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def coeff_to_json(c: object) -> object:
    """JSON form for any coefficient: QTCoeff list, or a num/den dict."""
    if isinstance(c, QTRatFun):
        return c.num.to_json() if c.is_polynomial() else c.to_json()
    return QTCoeff.coerce(c).to_json()
