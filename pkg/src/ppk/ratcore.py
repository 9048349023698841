"""Exact arithmetic over the rationals.

Three value types:

* :class:`PolyQ` -- dense univariate polynomials,
* :class:`SeriesQ` -- power series truncated at an explicit order,
* :class:`RationalFunctionQ` -- canonical quotients of polynomials that are
  defined at 0.

Coefficients are `fractions.Fraction` throughout (re-exported as
``Rational``); every operation is exact and every object immutable.  Series
refuse mixed-order arithmetic so a silent truncation bug becomes a loud
error.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd
from math import lcm as _ilcm
from typing import Iterable, Sequence, Union

Rational = Fraction

Coefficient = Union[Fraction, int]

__all__ = [
    "Rational",
    "PolyQ",
    "SeriesQ",
    "RationalFunctionQ",
    "poly_gcd",
    "squarefree_decomposition",
    "rational_from_str",
    "rational_to_str",
]


def rational_from_str(text: str) -> Fraction:
    """Parse the wire form ``"num/den"`` (or plain ``"num"``)."""
    return Fraction(text.strip())


def rational_to_str(q: Coefficient) -> str:
    """Serialize exactly; the denominator is omitted when it is 1."""
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class PolyQ:
    """Dense polynomial over Q; ``coeffs[i]`` multiplies x^i, no trailing zeros."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Coefficient] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def constant(cls, c: Coefficient) -> "PolyQ":
        return cls((c,))

    @classmethod
    def monomial(cls, c: Coefficient, degree: int) -> "PolyQ":
        if degree < 0:
            raise ValueError("degree must be >= 0")
        return cls((0,) * degree + (c,))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PolyQ):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == PolyQ((other,))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("PolyQ", self.coeffs))

    def __repr__(self) -> str:
        return f"PolyQ({list(self.coeffs)!r})"

    def __add__(self, other: "PolyQ | Coefficient") -> "PolyQ":
        o = other if isinstance(other, PolyQ) else PolyQ((other,))
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return PolyQ(out)

    __radd__ = __add__

    def __neg__(self) -> "PolyQ":
        return PolyQ(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "PolyQ | Coefficient") -> "PolyQ":
        o = other if isinstance(other, PolyQ) else PolyQ((other,))
        return self + (-o)

    def __rsub__(self, other: Coefficient) -> "PolyQ":
        return PolyQ((other,)) - self

    def __mul__(self, other: "PolyQ | Coefficient") -> "PolyQ":
        if isinstance(other, (int, Fraction)):
            return PolyQ(tuple(c * other for c in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return PolyQ()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if ca:
                for j, cb in enumerate(b):
                    out[i + j] += ca * cb
        return PolyQ(out)

    __rmul__ = __mul__

    def __divmod__(self, other: "PolyQ") -> tuple["PolyQ", "PolyQ"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.coeffs[-1]
        d = other.degree
        while len(rem) - 1 >= d and any(rem):
            while rem and not rem[-1]:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            f = rem[-1] / lead
            q[k] = f
            for i, c in enumerate(other.coeffs):
                rem[k + i] -= f * c
            rem.pop()
        return PolyQ(q), PolyQ(rem)

    def __floordiv__(self, other: "PolyQ") -> "PolyQ":
        return divmod(self, other)[0]

    def __mod__(self, other: "PolyQ") -> "PolyQ":
        return divmod(self, other)[1]

    def __call__(self, x: Coefficient) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "PolyQ":
        return PolyQ(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def monic(self) -> "PolyQ":
        if self.is_zero:
            return self
        lead = self.coeffs[-1]
        return PolyQ(tuple(c / lead for c in self.coeffs))

    def text(self, var: str = "x") -> str:
        """Human form, e.g. ``2 + x + 2x^2``; zero terms are skipped."""
        if self.is_zero:
            return "0"
        parts: list[str] = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mag = abs(c)
            if i == 0:
                body = rational_to_str(mag)
            else:
                xpow = var if i == 1 else f"{var}^{i}"
                if mag == 1:
                    body = xpow
                elif mag.denominator == 1:
                    body = f"{mag.numerator}{xpow}"
                else:
                    body = f"{rational_to_str(mag)}*{xpow}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)


def poly_gcd(a: PolyQ, b: PolyQ) -> PolyQ:
    """Monic gcd over Q by the Euclidean algorithm."""
    while not b.is_zero:
        a, b = b, a % b
    if a.is_zero:
        return a
    return a.monic()


def squarefree_decomposition(f: PolyQ) -> list[tuple[PolyQ, int]]:
    """Yun's algorithm: return ``[(g_i, i)]`` with f = lc * prod g_i^i.

    Each ``g_i`` is squarefree and pairwise coprime with the others, so the
    multiplicity structure of f's roots is recovered exactly.
    """
    if f.degree <= 0:
        return []
    fp = f.derivative()
    g = poly_gcd(f, fp)
    if g.degree == 0:
        return [(f.monic(), 1)]
    b = f // g
    d = (fp // g) - b.derivative()
    out: list[tuple[PolyQ, int]] = []
    i = 1
    while b.degree > 0:
        a_i = poly_gcd(b, d)
        if a_i.degree > 0:
            out.append((a_i, i))
        b = b // a_i
        d = (d // a_i) - b.derivative()
        i += 1
    return out


class SeriesQ:
    """Power series truncated at a fixed order (coefficients 0..order kept).

    Arithmetic between series demands equal orders; anything else raises
    ``ValueError`` rather than silently picking a truncation.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable[Coefficient]):
        if order < 0:
            raise ValueError("series order must be >= 0")
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != order + 1:
            raise ValueError(
                f"series of order {order} needs {order + 1} coefficients, got {len(cs)}"
            )
        self.order = order
        self.coeffs = cs

    @classmethod
    def zero(cls, order: int) -> "SeriesQ":
        return cls(order, (0,) * (order + 1))

    @classmethod
    def one(cls, order: int) -> "SeriesQ":
        return cls(order, (1,) + (0,) * order)

    @classmethod
    def from_poly(cls, poly: PolyQ, order: int) -> "SeriesQ":
        cs = poly.coeffs[: order + 1]
        return cls(order, cs + (0,) * (order + 1 - len(cs)))

    def __getitem__(self, j: int) -> Fraction:
        return self.coeffs[j]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SeriesQ):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("SeriesQ", self.order, self.coeffs))

    def __repr__(self) -> str:
        return f"SeriesQ({self.order}, {list(self.coeffs)!r})"

    def _like(self, other: "SeriesQ") -> None:
        if self.order != other.order:
            raise ValueError(
                f"series order mismatch: {self.order} vs {other.order}"
            )

    def __add__(self, other: "SeriesQ") -> "SeriesQ":
        self._like(other)
        return SeriesQ(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "SeriesQ") -> "SeriesQ":
        self._like(other)
        return SeriesQ(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "SeriesQ":
        return SeriesQ(self.order, tuple(-c for c in self.coeffs))

    def __mul__(self, other: "SeriesQ | Coefficient") -> "SeriesQ":
        if isinstance(other, (int, Fraction)):
            return SeriesQ(self.order, tuple(c * other for c in self.coeffs))
        self._like(other)
        n = self.order
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * (n + 1)
        for i in range(n + 1):
            ca = a[i]
            if ca:
                for j in range(n + 1 - i):
                    if b[j]:
                        out[i + j] += ca * b[j]
        return SeriesQ(n, out)

    __rmul__ = __mul__

    def __truediv__(self, other: "SeriesQ | Coefficient") -> "SeriesQ":
        if isinstance(other, (int, Fraction)):
            f = Fraction(other)
            return SeriesQ(self.order, tuple(c / f for c in self.coeffs))
        self._like(other)
        if not other.coeffs[0]:
            raise ZeroDivisionError("series division needs a unit constant term")
        n = self.order
        a, b = self.coeffs, other.coeffs
        q = [Fraction(0)] * (n + 1)
        b0 = b[0]
        for k in range(n + 1):
            acc = a[k]
            for i in range(k):
                if q[i] and b[k - i]:
                    acc -= q[i] * b[k - i]
            q[k] = acc / b0
        return SeriesQ(n, q)

    def log(self) -> "SeriesQ":
        """Series logarithm via formal integration of f'/f; needs f(0) = 1."""
        if self.coeffs[0] != 1:
            raise ValueError("series log needs constant term 1")
        n = self.order
        if n == 0:
            return SeriesQ.zero(0)
        deriv = SeriesQ(n - 1, tuple((i + 1) * c for i, c in enumerate(self.coeffs[1:])))
        base = SeriesQ(n - 1, self.coeffs[:n])
        q = deriv / base
        out = [Fraction(0)] * (n + 1)
        for k, c in enumerate(q.coeffs):
            out[k + 1] = c / (k + 1)
        return SeriesQ(n, out)

    def exp(self) -> "SeriesQ":
        """Series exponential as the defining sum; needs constant term 0."""
        if self.coeffs[0] != 0:
            raise ValueError("series exp needs constant term 0")
        n = self.order
        result = SeriesQ.one(n)
        term = SeriesQ.one(n)
        for k in range(1, n + 1):
            term = (term * self) / k
            result = result + term
        return result

    def to_json(self) -> list[str]:
        """Degree-0-first array of exact rational strings."""
        return [rational_to_str(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "SeriesQ":
        return cls(len(data) - 1, tuple(rational_from_str(s) for s in data))


class RationalFunctionQ:
    """Canonical quotient num/den of polynomials with den(0) != 0.

    Canonical form: the polynomial gcd is divided out, both parts are scaled
    by one common rational so all coefficients are integers of joint content
    1, and the denominator's constant term is positive.  Equal functions
    therefore compare equal structurally.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: "PolyQ | Coefficient", den: "PolyQ | Coefficient" = 1):
        num = num if isinstance(num, PolyQ) else PolyQ((num,))
        den = den if isinstance(den, PolyQ) else PolyQ((den,))
        if den.is_zero or not den(0):
            raise ValueError("denominator must not vanish at 0")
        if num.is_zero:
            self.num = PolyQ()
            self.den = PolyQ((1,))
            return
        g = poly_gcd(num, den)
        if g.degree > 0:
            num = num // g
            den = den // g
        scale_den = _ilcm(*(c.denominator for c in num.coeffs + den.coeffs))
        ints = [c.numerator * (scale_den // c.denominator) for c in num.coeffs + den.coeffs]
        content = 0
        for v in ints:
            content = _igcd(content, abs(v))
        scale = Fraction(scale_den, content)
        if den(0) < 0:
            scale = -scale
        self.num = num * scale
        self.den = den * scale

    @classmethod
    def from_poly(cls, poly: PolyQ) -> "RationalFunctionQ":
        return cls(poly, PolyQ((1,)))

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, RationalFunctionQ):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self) -> int:
        return hash(("RationalFunctionQ", self.num.coeffs, self.den.coeffs))

    def __repr__(self) -> str:
        return f"RationalFunctionQ({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        if self.is_polynomial:
            c = self.den.coeffs[0]
            if c == 1:
                return self.num.text()
            return (self.num * (Fraction(1) / c)).text()
        return f"({self.num.text()})/({self.den.text()})"

    def __mul__(self, other: "RationalFunctionQ") -> "RationalFunctionQ":
        return RationalFunctionQ(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFunctionQ") -> "RationalFunctionQ":
        return RationalFunctionQ(self.num * other.den, self.den * other.num)

    def eval(self, x: Coefficient) -> Fraction:
        d = self.den(x)
        if not d:
            raise ZeroDivisionError(f"denominator vanishes at {x}")
        return self.num(x) / d

    def series(self, order: int) -> SeriesQ:
        return SeriesQ.from_poly(self.num, order) / SeriesQ.from_poly(self.den, order)
