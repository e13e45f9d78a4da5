"""Scalar fields: exact rationals, exact Gaussian rationals, and complex doubles.

Exact fields compare by value. The complex-double field compares with an
absolute tolerance ``eps`` (default ``1e-9``).
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from numbers import Rational

from .errors import FieldError, InvalidParameter

DEFAULT_EPS = 1e-9


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        return Fraction(x)
    raise TypeError(f"cannot convert {x!r} to a rational")


class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts.

    Stored as integers ``(a, b, d)`` meaning ``(a + b*i) / d`` with ``d > 0`` and
    ``gcd(a, b, d) = 1``, which keeps arithmetic on plain ints.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        r, m = _frac(re), _frac(im)
        d = r.denominator * m.denominator // gcd(r.denominator, m.denominator)
        self._set(r.numerator * (d // r.denominator), m.numerator * (d // m.denominator), d)

    def _set(self, a: int, b: int, d: int):
        g = gcd(gcd(a, b), d)
        if g != 1:
            a, b, d = a // g, b // g, d // g
        self._a, self._b, self._d = a, b, d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> GaussianRational:
        out = object.__new__(cls)
        out._set(a, b, d)
        return out

    @classmethod
    def coerce(cls, x) -> GaussianRational:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, int):
            return cls._raw(x, 0, 1)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        return cls(x, 0)

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    real = re
    imag = im

    # arithmetic ---------------------------------------------------------
    @staticmethod
    def _other(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, int):
            return GaussianRational._raw(other, 0, 1)
        if isinstance(other, Rational):
            return GaussianRational._raw(other.numerator, 0, other.denominator)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) + other
            return NotImplemented
        if self._d == o._d:
            return GaussianRational._raw(self._a + o._a, self._b + o._b, self._d)
        return GaussianRational._raw(self._a * o._d + o._a * self._d,
                                     self._b * o._d + o._b * self._d, self._d * o._d)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational._raw(-self._a, -self._b, self._d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) - other
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return other - complex(self)
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) * other
            return NotImplemented
        a, b, c, e = self._a, self._b, o._a, o._b
        return GaussianRational._raw(a * c - b * e, a * e + b * c, self._d * o._d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Squared modulus."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def conjugate(self) -> GaussianRational:
        return GaussianRational._raw(self._a, -self._b, self._d)

    def inverse(self) -> GaussianRational:
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        m = self._a * self._a + self._b * self._b
        if m == 0:
            raise ZeroDivisionError("inverse of zero")
        a, b = self._a * self._d, -self._b * self._d
        if m < 0:
            a, b, m = -a, -b, -m
        return GaussianRational._raw(a, b, m)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            if isinstance(other, (complex, float)):
                return complex(self) / other
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = GaussianRational._raw(1, 0, 1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            if isinstance(other, complex):
                return complex(self) == other
            return NotImplemented
        return self._a == o._a and self._b == o._b and self._d == o._d

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __bool__(self):
        return self._a != 0 or self._b != 0

    def __complex__(self):
        return complex(self._a / self._d, self._b / self._d)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        if self._b == 0:
            return str(self.re)
        im = "" if self.im == 1 else "-" if self.im == -1 else str(self.im)
        if self._a == 0:
            return f"{im}i"
        sign = "+" if self._b > 0 else ""
        return f"{self.re}{sign}{im}i"


I = GaussianRational(0, 1)


def _json_rational(q: Fraction):
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class Field:
    """A scalar field tag with its coercion and comparison rules.

    Use the module constants :data:`Q`, :data:`QI` and :func:`c64`.
    """

    tag: str
    eps: float = DEFAULT_EPS

    @property
    def exact(self) -> bool:
        return self.tag != "C64"

    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def coerce(self, x):
        if self.tag == "Q":
            if isinstance(x, str):
                x = parse_gaussian(x)
            elif isinstance(x, (tuple, list)):
                x = GaussianRational(_frac(x[0]), _frac(x[1]))
            if isinstance(x, GaussianRational):
                if x.im != 0:
                    raise FieldError(f"{x} is not rational")
                return x.re
            if isinstance(x, complex):
                if x.imag != 0:
                    raise FieldError(f"{x} is not rational")
                return Fraction(x.real)
            return _frac(x)
        if self.tag == "Qi":
            if isinstance(x, (tuple, list)):
                return GaussianRational(_frac(x[0]), _frac(x[1]))
            if isinstance(x, str):
                return parse_gaussian(x)
            return GaussianRational.coerce(x)
        if isinstance(x, (tuple, list)):
            return complex(float(_frac(x[0])), float(_frac(x[1])))
        if isinstance(x, str):
            return complex(parse_gaussian(x))
        return complex(x)

    def is_zero(self, x) -> bool:
        if self.exact:
            return x == 0
        return abs(x) <= self.eps

    def eq(self, x, y) -> bool:
        if self.exact:
            return x == y
        return abs(x - y) <= self.eps

    def inverse(self, x):
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero")
        return 1 / x if self.tag == "C64" else self.one / x

    def to_json(self, x):
        """Encode a scalar as ``[re, im]``; exact parts become ints or ``"p/q"``."""
        if self.exact:
            g = GaussianRational.coerce(x)
            return [_json_rational(g.re), _json_rational(g.im)]
        z = complex(x)
        return [z.real, z.imag]

    def from_json(self, pair):
        if isinstance(pair, (list, tuple)):
            if len(pair) != 2:
                raise InvalidParameter(f"scalar must be [re, im], got {pair!r}")
            if self.exact:
                return self.coerce(GaussianRational(_frac(pair[0]), _frac(pair[1])))
            return complex(float(pair[0]), float(pair[1]))
        return self.coerce(pair)

    def sort_key(self, x):
        if self.exact:
            g = GaussianRational.coerce(x)
            return (g.re, g.im)
        z = complex(x)
        return (z.real, z.imag)


Q = Field("Q")
QI = Field("Qi")


def c64(eps: float = DEFAULT_EPS) -> Field:
    return Field("C64", eps)


C64 = c64()


def field_from_tag(tag: str, eps: float = DEFAULT_EPS) -> Field:
    if tag == "Q":
        return Q
    if tag == "Qi":
        return QI
    if tag == "C64":
        return c64(eps)
    raise InvalidParameter(f"unknown field tag {tag!r}; expected Q, Qi or C64")


def parse_gaussian(text: str) -> GaussianRational:
    """Parse ``"3"``, ``"-1/2"``, ``"i"``, ``"-2i"``, ``"1+i"``, ``"1/2-3/4i"``."""
    s = text.strip().replace(" ", "").replace("j", "i")
    if not s:
        raise InvalidParameter("empty scalar")
    if not s.endswith("i"):
        re_part, im_part = s, "0"
    else:
        body = s[:-1]
        # split at the last sign that is not leading
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        re_part, im_part = ("0", body) if cut <= 0 else (body[:cut], body[cut:])
        if im_part in ("", "+"):
            im_part = "1"
        elif im_part == "-":
            im_part = "-1"
    try:
        return GaussianRational(_frac(re_part), _frac(im_part))
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidParameter(f"cannot parse scalar {text!r}") from exc


def cross(u, w):
    """``Im(conj(u) * w)``; positive iff ``w`` is counter-clockwise of ``u``."""
    if isinstance(u, GaussianRational) and isinstance(w, GaussianRational):
        return Fraction(u._a * w._b - u._b * w._a, u._d * w._d)
    u, w = complex(u), complex(w)
    return u.real * w.imag - u.imag * w.real


def dot(u, w):
    """``Re(conj(u) * w)``."""
    if isinstance(u, GaussianRational) and isinstance(w, GaussianRational):
        return Fraction(u._a * w._a + u._b * w._b, u._d * w._d)
    u, w = complex(u), complex(w)
    return u.real * w.real + u.imag * w.imag


def imag_part(z):
    return z.im if isinstance(z, GaussianRational) else complex(z).imag


def phase(z) -> float:
    """Normalized argument ``arg(z)/pi`` as a float."""
    return cmath.phase(complex(z)) / cmath.pi
