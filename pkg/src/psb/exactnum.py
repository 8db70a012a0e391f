"""Exact arithmetic in the field Q[sqrt(3)].

Rationals are plain :class:`fractions.Fraction` values (aliased as ``Rat``).
A :class:`Quad` is ``r + s*sqrt(3)`` with rational ``r`` and ``s``; since
sqrt(3) is irrational the pair ``(r, s)`` is unique, so equality and hashing
are componentwise.

>>> a = Quad(1, 1)
>>> a * a.conjugate()
Quad(-2, 0)
>>> Quad(0, 1).inverse()
Quad(0, 1/3)
>>> Quad(2) > Quad(0, 1)
True
"""

from __future__ import annotations

import decimal
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

__all__ = ["Rat", "Quad", "SQRT3", "ZERO", "ONE", "quad_key", "rat_key", "as_quad"]

Rat = Fraction

QuadLike = Union["Quad", int, Fraction]


def _rat(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, Rational):
        return Fraction(v.numerator, v.denominator)
    raise TypeError(f"exact rational expected, got {type(v).__name__}")


def _sign_of(r: Fraction, s: Fraction) -> int:
    """Sign of r + s*sqrt(3), exactly."""
    sr = (r > 0) - (r < 0)
    ss = (s > 0) - (s < 0)
    if ss == 0:
        return sr
    if sr == 0 or sr == ss:
        return ss
    # opposite signs: the larger of r^2 and 3 s^2 wins
    d = r * r - 3 * s * s
    if d > 0:
        return sr
    return ss  # d == 0 is impossible for s != 0


class Quad:
    """Immutable element ``r + s*sqrt(3)`` of Q[sqrt(3)]."""

    __slots__ = ("_r", "_s", "_hash")

    def __init__(self, r=0, s=0):
        self._r = _rat(r)
        self._s = _rat(s)
        self._hash = None

    @classmethod
    def _make(cls, r: Fraction, s: Fraction) -> Quad:
        q = object.__new__(cls)
        q._r = r
        q._s = s
        q._hash = None
        return q

    @property
    def r(self) -> Fraction:
        return self._r

    @property
    def s(self) -> Fraction:
        return self._s

    @classmethod
    def parse(cls, text: str) -> Quad:
        """Parse ``"a"``, ``"a*sqrt3"``, ``"sqrt3"``, ``"a + b*sqrt3"`` and similar.

        Rational parts may be integers, ``p/q`` or finite decimals.
        """
        t = text.replace(" ", "").replace("√3", "*sqrt3").replace("**sqrt3", "*sqrt3")
        if not t:
            raise ValueError("empty Q[sqrt3] literal")
        terms = re.findall(r"[+-]?[^+-]+", t)
        if "".join(terms) != t:
            raise ValueError(f"cannot parse {text!r}")
        r = Fraction(0)
        s = Fraction(0)
        for term in terms:
            if term.endswith("sqrt3"):
                coef = term[: -len("sqrt3")].rstrip("*")
                if coef in ("", "+"):
                    s += 1
                elif coef == "-":
                    s -= 1
                else:
                    s += Fraction(coef)
            else:
                r += Fraction(term)
        return cls(r, s)

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other: QuadLike) -> Quad:
        o = as_quad(other)
        return Quad._make(self._r + o._r, self._s + o._s)

    __radd__ = __add__

    def __sub__(self, other: QuadLike) -> Quad:
        o = as_quad(other)
        return Quad._make(self._r - o._r, self._s - o._s)

    def __rsub__(self, other: QuadLike) -> Quad:
        return as_quad(other) - self

    def __mul__(self, other: QuadLike) -> Quad:
        if isinstance(other, (int, Fraction)):
            return Quad._make(self._r * other, self._s * other)
        o = as_quad(other)
        return Quad._make(
            self._r * o._r + 3 * self._s * o._s,
            self._r * o._s + self._s * o._r,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: QuadLike) -> Quad:
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in Q[sqrt3]")
            return Quad._make(self._r / other, self._s / other)
        return self * as_quad(other).inverse()

    def __rtruediv__(self, other: QuadLike) -> Quad:
        return as_quad(other) * self.inverse()

    def __neg__(self) -> Quad:
        return Quad._make(-self._r, -self._s)

    def __pos__(self) -> Quad:
        return self

    def __abs__(self) -> Quad:
        return -self if self.sign() < 0 else self

    def __pow__(self, k: int) -> Quad:
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> Quad:
        """``r - s*sqrt(3)``."""
        return Quad._make(self._r, -self._s)

    def norm(self) -> Fraction:
        """Field norm ``r^2 - 3 s^2``; zero only for zero."""
        return self._r * self._r - 3 * self._s * self._s

    def inverse(self) -> Quad:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q[sqrt3]")
        return Quad._make(self._r / n, -self._s / n)

    # -- order ------------------------------------------------------------

    def sign(self) -> int:
        return _sign_of(self._r, self._s)

    def cmp(self, other: QuadLike) -> int:
        o = as_quad(other)
        return _sign_of(self._r - o._r, self._s - o._s)

    def __eq__(self, other) -> bool:
        if isinstance(other, Quad):
            return self._r == other._r and self._s == other._s
        if isinstance(other, (int, Fraction)):
            return self._s == 0 and self._r == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            h = hash(self._r) if self._s == 0 else hash((self._r, self._s))
            self._hash = h
        return self._hash

    def __lt__(self, other: QuadLike) -> bool:
        return self.cmp(other) < 0

    def __le__(self, other: QuadLike) -> bool:
        return self.cmp(other) <= 0

    def __gt__(self, other: QuadLike) -> bool:
        return self.cmp(other) > 0

    def __ge__(self, other: QuadLike) -> bool:
        return self.cmp(other) >= 0

    def __bool__(self) -> bool:
        return bool(self._r) or bool(self._s)

    # -- conversions ------------------------------------------------------

    def is_rational(self) -> bool:
        return self._s == 0

    def __float__(self) -> float:
        return float(self._r) + float(self._s) * 3**0.5

    def to_decimal(self, digits: int = 30) -> decimal.Decimal:
        """Decimal approximation with ``digits`` significant digits."""
        ctx = decimal.Context(prec=digits + 10)
        sq = ctx.sqrt(decimal.Decimal(3))

        def dec(q: Fraction) -> decimal.Decimal:
            return ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))

        val = ctx.add(dec(self._r), ctx.multiply(dec(self._s), sq))
        return decimal.Context(prec=digits).plus(val)

    def key(self) -> bytes:
        return quad_key(self)

    def __repr__(self) -> str:
        return f"Quad({self._r}, {self._s})"

    def __str__(self) -> str:
        if self._s == 0:
            return str(self._r)
        s = "sqrt3" if abs(self._s) == 1 else f"{abs(self._s)}*sqrt3"
        if self._r == 0:
            return s if self._s > 0 else f"-{s}"
        return f"{self._r} {'+' if self._s > 0 else '-'} {s}"


def as_quad(v: QuadLike) -> Quad:
    if isinstance(v, Quad):
        return v
    return Quad(_rat(v))


ZERO = Quad(0)
ONE = Quad(1)
SQRT3 = Quad(0, 1)


def _int_bytes(n: int) -> bytes:
    mag = abs(n)
    body = mag.to_bytes((mag.bit_length() + 7) // 8, "big")
    return (b"-" if n < 0 else b"+") + len(body).to_bytes(4, "big") + body


def rat_key(q: Fraction) -> bytes:
    """Injective byte encoding of a reduced rational."""
    return _int_bytes(q.numerator) + _int_bytes(q.denominator)


def quad_key(a: Quad) -> bytes:
    """Injective, endianness-fixed byte key of a Q[sqrt3] value.

    Length-prefixed sign/magnitude encodings of the four integers of the
    canonical form. Never derived from a float.
    """
    return rat_key(a.r) + rat_key(a.s)
