"""Lower and upper bounds on b_n = log2 B_n.

All bounds are kept as exact symbolic sums ``q0 + sum q_t * log2(N_t)`` with
rational ``q`` and odd integers ``N_t`` (powers of two are folded into
``q0``).  Decimals come from interval arithmetic and are rounded outward, so a
printed lower bound is always a true lower bound.

>>> matousek_lower(9)
LogBound('39/4')
>>> str(construction_constant("rect4"))[:10]
'0.16666666'
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Context, Decimal
from fractions import Fraction
from functools import lru_cache

from mpmath.ctx_iv import MPIntervalContext

from .census import crossing_census
from .constructions import build, get_spec, odd_size_for
from .enumeration import TABLE_B, macmahon_P

__all__ = [
    "LogBound",
    "BoundReport",
    "log2_table_B",
    "construction_constant",
    "construction_constant_bound",
    "knuth_lower",
    "matousek_lower",
    "fv_lower",
    "unrolled_lower",
    "knuth_upper",
    "default_digits",
    "CONSTANT_THRESHOLDS",
]

DEFAULT_DIGITS = 50

# Published lower bounds on the construction constants.
CONSTANT_THRESHOLDS = {
    "hex6": Decimal("0.1981"),
    "rect8": Decimal("0.1999"),
    "rect12": Decimal("0.2053"),
    "hex12": Decimal("0.2083"),
}


def default_digits() -> int:
    v = os.environ.get("PSB_PRECISION")
    if not v:
        return DEFAULT_DIGITS
    d = int(v)
    if d < 5:
        raise ValueError("PSB_PRECISION must be at least 5")
    return d


def _split_two(n: int) -> tuple:
    e = (n & -n).bit_length() - 1
    return e, n >> e


class LogBound:
    """Exact value ``rational + sum coef * log2(base)``."""

    __slots__ = ("rational", "terms")

    def __init__(self, rational=0, terms=None):
        self.rational = Fraction(rational)
        acc: dict = {}
        for base, coef in (terms or {}).items():
            self._add_term(acc, base, Fraction(coef))
        self.terms = dict(sorted((b, c) for b, c in acc.items() if c))

    def _add_term(self, acc, base, coef):
        if base < 1:
            raise ValueError("log2 of a non-positive integer")
        e, odd = _split_two(base)
        self.rational += coef * e
        if odd != 1:
            acc[odd] = acc.get(odd, Fraction(0)) + coef

    @classmethod
    def log2(cls, n: int, coef=1) -> LogBound:
        return cls(0, {n: coef})

    def __add__(self, other) -> LogBound:
        if not isinstance(other, LogBound):
            other = LogBound(other)
        terms = dict(self.terms)
        for b, c in other.terms.items():
            terms[b] = terms.get(b, Fraction(0)) + c
        return LogBound(self.rational + other.rational, terms)

    __radd__ = __add__

    def __mul__(self, q) -> LogBound:
        q = Fraction(q)
        return LogBound(self.rational * q, {b: c * q for b, c in self.terms.items()})

    __rmul__ = __mul__

    def __truediv__(self, q) -> LogBound:
        return self * (1 / Fraction(q))

    def __eq__(self, other) -> bool:
        return isinstance(other, LogBound) and (self.rational, self.terms) == (other.rational, other.terms)

    def __hash__(self):
        return hash((self.rational, tuple(self.terms.items())))

    def is_rational(self) -> bool:
        return not self.terms

    def exact(self) -> str:
        """Deterministic exact text form."""
        parts = [str(self.rational)] if self.rational or not self.terms else []
        parts += [f"{c}*log2({b})" for b, c in self.terms.items()]
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"LogBound({self.exact()!r})"

    __str__ = exact

    def interval(self, digits: int):
        """mpmath interval enclosing the value, at about ``digits`` + 20 digits."""
        iv = MPIntervalContext()  # private context: no shared precision state
        iv.dps = digits + 20
        ln2 = iv.log(iv.mpf(2))
        acc = iv.mpf(self.rational.numerator) / self.rational.denominator
        for b, c in self.terms.items():
            acc += iv.mpf(c.numerator) / c.denominator * (iv.log(iv.mpf(b)) / ln2)
        return acc

    def evaluate(self, digits: int | None = None, direction: str = "down") -> Decimal:
        """Decimal with ``digits`` significant digits, rounded down or up."""
        digits = digits or default_digits()
        if direction not in ("down", "up"):
            raise ValueError("direction must be 'down' or 'up'")
        if self.is_rational():
            q = self.rational
            return _round_fraction(q, digits, direction)
        lo, hi = self.interval(digits)._mpi_
        end = lo if direction == "down" else hi
        return _round_fraction(_mpf_fraction(end), digits, direction)

    def __float__(self) -> float:
        return float(self.evaluate(20))


def _mpf_fraction(raw) -> Fraction:
    """Exact value of a raw mpf tuple (sign, mantissa, exponent, bitcount)."""
    sign, man, exp, _ = raw
    v = Fraction(int(man)) * Fraction(2) ** int(exp)
    return -v if sign else v


def _round_fraction(q: Fraction, digits: int, direction: str) -> Decimal:
    ctx = Context(prec=digits, rounding=ROUND_FLOOR if direction == "down" else ROUND_CEILING)
    if q == 0:
        return Decimal(0)
    # exact quotient to digits+5 places, then one directed rounding
    scale = digits + 5 - (len(str(abs(q.numerator))) - len(str(q.denominator)))
    num = q.numerator * 10 ** max(scale, 0)
    den = q.denominator * 10 ** max(-scale, 0)
    floor_q = num // den
    exact = floor_q * den == num
    if not exact and direction == "up":
        floor_q += 1
    return ctx.plus(Decimal(f"{floor_q}E{-scale}"))


def log2_table_B(n: int) -> LogBound:
    """log2 B_n from the exact table (n <= 15)."""
    return LogBound.log2(TABLE_B[n])


def _base(n: int) -> LogBound:
    """log2 B_min(n,15); monotone in n since deleting a pseudoline is onto."""
    if n < 1:
        return LogBound(0)
    return log2_table_B(min(n, max(TABLE_B)))


@dataclass(frozen=True)
class BoundReport:
    name: str
    n: int
    log2_lower: LogBound
    normalized: Decimal

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "n": self.n,
            "log2_lower": self.log2_lower.exact(),
            "normalized": str(self.normalized),
        }


def _report(name: str, n: int, lb: LogBound, digits=None) -> BoundReport:
    digits = digits or default_digits()
    norm = (lb / (n * n)).evaluate(digits, "down")
    if norm >= 1:
        raise ArithmeticError(f"{name}({n}) normalized bound {norm} is not below 1")
    return BoundReport(name, n, lb, norm)


# -- construction constants -----------------------------------------------------


def construction_constant_bound(name: str) -> LogBound:
    """c = sum_i coef_i * log2 B_i / (k (k - 1)), from the tabulated coefficients.

    Solving c n^2 = sum_i coef_i (n/k)^2 b_i + k c (n/k)^2 gives this value.
    """
    spec = get_spec(name)
    total = LogBound(0)
    for i, coef in spec.paper_lambda_coeffs.items():
        if not coef.is_rational():
            raise ValueError("lambda coefficients must be rational")
        total = total + log2_table_B(i) * coef.r
    return total / (spec.k * (spec.k - 1))


def construction_constant(name: str, digits: int | None = None) -> Decimal:
    return construction_constant_bound(name).evaluate(digits or default_digits(), "down")


# -- prior recurrences --------------------------------------------------------


@lru_cache(maxsize=None)
def knuth_lower(n: int) -> LogBound:
    """Unroll B_n >= 2^(n^2/8 - n/4) B_(n/2), using B_n >= B_(n-1) for odd n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    h = n // 2
    if h < 3:
        return _base(n)
    return LogBound(Fraction(h * h, 2) - Fraction(h, 2)) + knuth_lower(h)


@lru_cache(maxsize=None)
def matousek_lower(n: int) -> LogBound:
    """Unroll B_3m >= 2^((3m)^2/12) B_m^3 with m the largest odd value <= n/3."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = odd_size_for(n, 3)
    if m < 3:
        return _base(n)
    return LogBound(Fraction(9 * m * m, 12)) + matousek_lower(m) * 3


@lru_cache(maxsize=None)
def fv_lower(n: int) -> LogBound:
    """Unroll B_3m >= P(m, m, m) B_m^3 with m = floor(n/3)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    m = n // 3
    if m < 3:
        return _base(n)
    return LogBound.log2(macmahon_P(m, m, m).value) + fv_lower(m) * 3


def knuth_upper(n: int) -> LogBound:
    """b_n <= (n^2 + n)/2 * log2 3."""
    if n < 3:
        raise ValueError("n must be >= 3")
    return LogBound.log2(3, Fraction(n * n + n, 2))


# -- census-driven bound ------------------------------------------------------


@lru_cache(maxsize=None)
def _junction_log2(name: str, m: int, threads: int = 1) -> LogBound:
    """log2 of prod_i B_i^lambda_i(m) from an exact census."""
    c = crossing_census(build(name, m), threads=threads)
    total = LogBound(0)
    for i, count in c.lam.items():
        if i >= 3:
            total = total + log2_table_B(i) * count
    return total


@lru_cache(maxsize=None)
def _unrolled(name: str, n: int, threads: int = 1) -> LogBound:
    k = get_spec(name).k
    if n < 3 * k:
        return _base(n)
    m = odd_size_for(n, k)
    return _junction_log2(name, m, threads) + _unrolled(name, m, threads) * k


def unrolled_lower(name: str, n: int, digits: int | None = None, threads: int = 1) -> BoundReport:
    """Rigorous lower bound on b_n by unrolling with exact censuses at every level.

    Each level keeps k*m of the n lines (m the largest odd value <= n/k),
    multiplies the choices at every crossing of i lines and recurses into the
    k bundles of m lines.  Below 3k lines the table value is used.
    """
    get_spec(name)
    if n < 1:
        raise ValueError("n must be >= 1")
    return _report(name, n, _unrolled(name, n, threads), digits)


def prior_report(which: str, n: int, digits: int | None = None) -> BoundReport:
    fn = {"knuth": knuth_lower, "matousek": matousek_lower, "fv": fv_lower}[which]
    return _report(which, n, fn(n), digits)


def bounds_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], sort_keys=True, separators=(",", ":"))


def table_bound_consistent(lb: LogBound, n: int) -> bool:
    """Whether ``lb`` is certainly at most log2 B_n (n <= 15)."""
    diff = log2_table_B(n) + lb * -1
    return diff.evaluate(30, "down") >= 0 if not diff.is_rational() else diff.rational >= 0

