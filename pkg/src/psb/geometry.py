"""Exact lines, intersections, areas and strip membership over Q[sqrt3].

A line is ``alpha*x + beta*y + gamma = 0``. Nothing here touches floats.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .exactnum import ZERO, Quad, as_quad, quad_key

__all__ = [
    "GeometryError",
    "Line",
    "Point",
    "Strip",
    "Side",
    "intersect",
    "triangle_area",
    "parallelogram_area",
    "strip_side",
]


class GeometryError(ValueError):
    """Violated geometric precondition (parallel lines, duplicate lines, ...)."""


@dataclass(frozen=True)
class Line:
    alpha: Quad
    beta: Quad
    gamma: Quad
    bundle: int = 0
    index_in_bundle: int = 0

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            v = getattr(self, name)
            if not isinstance(v, Quad):
                object.__setattr__(self, name, as_quad(v))
        if not self.alpha and not self.beta:
            raise GeometryError("line with alpha = beta = 0")

    def value_at(self, p: Point) -> Quad:
        """Left-hand side ``alpha*x + beta*y + gamma`` evaluated at ``p``."""
        return self.alpha * p.x + self.beta * p.y + self.gamma

    def cross(self, other: Line) -> Quad:
        return self.alpha * other.beta - self.beta * other.alpha

    def is_parallel(self, other: Line) -> bool:
        return not self.cross(other)


@dataclass(frozen=True)
class Point:
    x: Quad
    y: Quad

    def key(self) -> bytes:
        return quad_key(self.x) + quad_key(self.y)


@dataclass(frozen=True)
class Strip:
    """Closed region between the parallel lines ``alpha*x + beta*y + gamma = 0``
    for ``gamma`` equal to ``lo_gamma`` and ``hi_gamma``."""

    lo_gamma: Quad
    hi_gamma: Quad
    alpha: Quad
    beta: Quad

    def __post_init__(self):
        if self.lo_gamma == self.hi_gamma:
            raise GeometryError("degenerate strip: both bounding lines coincide")

    @classmethod
    def between(cls, l1: Line, l2: Line) -> Strip:
        if not l1.is_parallel(l2):
            raise GeometryError("strip bounding lines must be parallel")
        t = _scale(l1, l2)
        return cls(l1.gamma, l2.gamma / t, l1.alpha, l1.beta)

    def contains(self, p: Point) -> bool:
        return strip_side(self, p) is not Side.OUTSIDE


class Side(Enum):
    INSIDE = "inside"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


def _scale(l1: Line, l2: Line) -> Quad:
    """The factor t with (alpha2, beta2) = t * (alpha1, beta1)."""
    return l2.alpha / l1.alpha if l1.alpha else l2.beta / l1.beta


def intersect(l1: Line, l2: Line) -> Point | None:
    """Exact intersection point, or ``None`` for distinct parallel lines."""
    d = l1.cross(l2)
    if not d:
        t = _scale(l1, l2)
        if l2.gamma == l1.gamma * t:
            raise GeometryError(f"identical lines: {l1} and {l2}")
        return None
    x = (l1.beta * l2.gamma - l2.beta * l1.gamma) / d
    y = (l2.alpha * l1.gamma - l1.alpha * l2.gamma) / d
    return Point(x, y)


def triangle_area(l1: Line, l2: Line, l3: Line) -> Quad:
    """Area of the triangle cut out by three pairwise non-parallel lines.

    Uses ``A^2 / (2 |C1 C2 C3|)`` with ``A`` the 3x3 coefficient determinant
    and ``C_s`` its cofactors along the gamma column. Concurrent lines give 0.
    """
    c1 = l2.alpha * l3.beta - l2.beta * l3.alpha
    c2 = -(l1.alpha * l3.beta - l1.beta * l3.alpha)
    c3 = l1.alpha * l2.beta - l1.beta * l2.alpha
    if not c1 or not c2 or not c3:
        raise GeometryError("triangle_area needs pairwise non-parallel lines")
    a = c1 * l1.gamma + c2 * l2.gamma + c3 * l3.gamma
    return a * a / (2 * abs(c1 * c2 * c3))


def parallelogram_area(li: Line, lj: Line, lg: Line, lh: Line) -> Quad:
    """Area of the parallelogram bounded by ``li || lj`` and ``lg || lh``."""
    if not li.is_parallel(lj) or not lg.is_parallel(lh):
        raise GeometryError("parallelogram sides must come in parallel pairs")
    d = li.cross(lg)
    if not d:
        raise GeometryError("parallelogram needs two distinct directions")
    w1 = li.gamma - lj.gamma / _scale(li, lj)
    w2 = lg.gamma - lh.gamma / _scale(lg, lh)
    return abs(w1 * w2 / d)


def strip_side(s: Strip, p: Point) -> Side:
    level = -(s.alpha * p.x + s.beta * p.y)  # the gamma of the parallel through p
    lo, hi = (s.lo_gamma, s.hi_gamma) if s.lo_gamma < s.hi_gamma else (s.hi_gamma, s.lo_gamma)
    c_lo = level.cmp(lo)
    c_hi = level.cmp(hi)
    if c_lo == 0 or c_hi == 0:
        return Side.ON_BOUNDARY
    if c_lo > 0 and c_hi < 0:
        return Side.INSIDE
    return Side.OUTSIDE


def point_on(line: Line, p: Point) -> bool:
    return line.value_at(p) == ZERO
