"""Slope-bundle constructions and their exact coverage areas.

Each construction has ``k`` parallel strips; strip ``b`` (1-based) is bounded
by table rows ``2b-1`` and ``2b``.  An arrangement places ``m`` equidistant
lines inside every strip, centred on the strip axis:

>>> arr = build("rect4", 3)
>>> len(arr.lines)
12
>>> sorted(str(-l.gamma / l.beta) for l in arr.bundle_lines(2))
['1/2', '1/6', '5/6']
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .exactnum import ZERO, Quad
from .geometry import GeometryError, Line, Point, Strip, intersect

__all__ = [
    "NAMES",
    "ConstructionSpec",
    "Arrangement",
    "ConstructionError",
    "get_spec",
    "build",
    "coverage_areas",
    "predicted_lambda_coefficients",
    "odd_size_for",
]

NAMES = ("rect4", "hex6", "rect8", "rect12", "hex12")

DATA_FILE = "constructions.json"
FORMAT_VERSION = 1


class ConstructionError(ValueError):
    """Bad construction name or unusable bundle size."""


@dataclass(frozen=True)
class ConstructionSpec:
    name: str
    k: int
    strip_rows: tuple  # 2k triples (alpha, beta, gamma) of Quad
    role_of_bundle: dict  # bundle -> "primary" | "secondary" | "tertiary"
    cell_area: Quad  # area(sigma_0) * m^2
    paper_lambda_coeffs: dict  # i -> Quad
    paper_area_table: dict  # i -> Quad
    paper_w_table: dict  # type label -> Quad
    paper_type_signatures: dict  # type label -> frozenset of bundles
    symmetry_orbits: tuple = field(default=())  # tuples of type labels

    @property
    def primary_bundles(self) -> tuple:
        return tuple(b for b in range(1, self.k + 1) if self.role_of_bundle[b] == "primary")

    def boundary_line(self, row: int) -> Line:
        """Table row ``row`` (1-based) as a line tagged with its bundle."""
        a, b, g = self.strip_rows[row - 1]
        return Line(a, b, g, bundle=(row + 1) // 2, index_in_bundle=0)

    def strip(self, bundle: int) -> Strip:
        return Strip.between(self.boundary_line(2 * bundle - 1), self.boundary_line(2 * bundle))

    def width_squared(self, bundle: int) -> Quad:
        """Squared Euclidean width of strip ``bundle``."""
        s = self.strip(bundle)
        d = s.hi_gamma - s.lo_gamma
        return d * d / (s.alpha * s.alpha + s.beta * s.beta)

    def type_of_signature(self) -> dict:
        """Map each distinct table signature to the list of type labels carrying it."""
        out: dict = {}
        for label, sig in self.paper_type_signatures.items():
            out.setdefault(sig, []).append(label)
        return out


def _load_raw() -> dict:
    pkg = resources.files("psb") / "data"
    raw = (pkg / DATA_FILE).read_bytes()
    expected = (pkg / (DATA_FILE + ".sha256")).read_text().split()[0]
    digest = hashlib.sha256(raw).hexdigest()
    if digest != expected:
        raise RuntimeError(f"fixture {DATA_FILE} is corrupt: sha256 {digest} != {expected}")
    data = json.loads(raw)
    if data.get("format_version") != FORMAT_VERSION:
        raise RuntimeError(f"fixture {DATA_FILE} has unsupported format_version")
    return data


@lru_cache(maxsize=None)
def _all_specs() -> dict:
    out = {}
    for name, d in _load_raw()["constructions"].items():
        P = Quad.parse
        types = d["types"]
        out[name] = ConstructionSpec(
            name=name,
            k=d["k"],
            strip_rows=tuple(tuple(P(v) for v in row) for row in d["strip_rows"]),
            role_of_bundle={int(b): r for b, r in d["roles"].items()},
            cell_area=P(d["cell_area"]),
            paper_lambda_coeffs={int(i): P(v) for i, v in d["lambda_coeffs"].items()},
            paper_area_table={int(i): P(v) for i, v in d["area_table"].items()},
            paper_w_table={t["label"]: P(t["w"]) for t in types},
            paper_type_signatures={t["label"]: frozenset(t["signature"]) for t in types},
            symmetry_orbits=tuple(tuple(o) for o in d["orbits"]),
        )
    return out


def get_spec(name: str) -> ConstructionSpec:
    try:
        return _all_specs()[name]
    except KeyError:
        raise ConstructionError(
            f"unknown construction {name!r}; choose one of {', '.join(NAMES)}"
        ) from None


def odd_size_for(n: int, k: int) -> int:
    """Largest odd m with k*m <= n (0 if none)."""
    m = n // k
    if m % 2 == 0:
        m -= 1
    return max(m, 0)


@dataclass(frozen=True)
class Arrangement:
    spec: ConstructionSpec
    m: int
    lines: tuple

    @property
    def name(self) -> str:
        return self.spec.name

    def bundle_lines(self, bundle: int) -> tuple:
        return self.lines[(bundle - 1) * self.m : bundle * self.m]

    def spacing(self, bundle: int) -> Quad:
        """Signed gamma step between consecutive lines of ``bundle``."""
        s = self.spec.strip(bundle)
        return (s.hi_gamma - s.lo_gamma) / self.m

    def spacing_squared(self, bundle: int) -> Quad:
        """Squared Euclidean distance between consecutive lines of ``bundle``."""
        return self.spec.width_squared(bundle) / (self.m * self.m)

    def center(self) -> Point:
        """Common point of all middle lines."""
        mid = (self.m - 1) // 2
        l1 = self.bundle_lines(1)[mid]
        for b in range(2, self.spec.k + 1):
            p = intersect(l1, self.bundle_lines(b)[mid])
            if p is not None:
                return p
        raise GeometryError("all bundles parallel")


def build(name: str, m: int) -> Arrangement:
    """The k*m lines of ``name`` with m lines per bundle (m odd, m >= 3)."""
    spec = get_spec(name)
    if not isinstance(m, int) or m < 3 or m % 2 == 0:
        raise ConstructionError(
            f"m must be an odd integer >= 3, got {m!r}; for n lines use m = floor(n/{spec.k}) "
            f"or floor(n/{spec.k}) - 1, whichever is odd"
        )
    lines = []
    half = Fraction(m + 1, 2)
    for b in range(1, spec.k + 1):
        s = spec.strip(b)
        axis = (s.lo_gamma + s.hi_gamma) / 2
        step = (s.hi_gamma - s.lo_gamma) / m
        for j in range(1, m + 1):
            gamma = axis + step * (j - half)
            lines.append(Line(s.alpha, s.beta, gamma, bundle=b, index_in_bundle=j))
    return Arrangement(spec, m, tuple(lines))


# -- coverage areas -----------------------------------------------------------


def _breakpoints(spec: ConstructionSpec) -> list:
    rows = [spec.boundary_line(r) for r in range(1, 2 * spec.k + 1)]
    xs = set()
    for i, l1 in enumerate(rows):
        if not l1.beta:
            xs.add(-l1.gamma / l1.alpha)
        for l2 in rows[i + 1 :]:
            p = intersect(l1, l2)
            if p is not None:
                xs.add(p.x)
    return sorted(xs)


def coverage_areas(name: str) -> dict:
    """Exact area a_i of the region covered by exactly i closed strips, i >= 3.

    Vertical decomposition: between consecutive x-coordinates of boundary
    crossings no two boundary lines cross, so every strip is a fixed band of
    a slab and the coverage count is piecewise constant between the sorted
    boundary segments. Each piece is a trapezoid.
    """
    spec = get_spec(name)
    strips = [spec.strip(b) for b in range(1, spec.k + 1)]
    vertical = [s for s in strips if not s.beta]
    sloped = [s for s in strips if s.beta]
    xs = _breakpoints(spec)
    totals: dict = {}
    for xa, xb in zip(xs, xs[1:]):
        xm = (xa + xb) / 2
        base = 0
        for s in vertical:
            lo = -s.lo_gamma / s.alpha
            hi = -s.hi_gamma / s.alpha
            if min(lo, hi) <= xa and xb <= max(lo, hi):
                base += 1
        events = []  # (y at xm, y at xa, y at xb, +1 opening / -1 closing)
        for s in sloped:
            ys = []
            for g in (s.lo_gamma, s.hi_gamma):
                ys.append(tuple(-(s.alpha * x + g) / s.beta for x in (xm, xa, xb)))
            ys.sort(key=lambda t: t[0])
            events.append((*ys[0], 1))
            events.append((*ys[1], -1))
        events.sort(key=lambda e: e[0])
        count = base
        width = xb - xa
        for left, right in zip(events, events[1:]):
            count += left[3]
            if count >= 3:
                area = width * ((right[1] - left[1]) + (right[2] - left[2])) / 2
                totals[count] = totals.get(count, ZERO) + area
    return {i: totals.get(i, ZERO) for i in range(3, spec.k + 1)}


def predicted_lambda_coefficients(name: str) -> dict:
    """Quadratic coefficient of lambda_i(m): (a_i + sum of w_j over types of size i) / cell.

    Uses the computed a_i and the tabulated type weights.
    """
    spec = get_spec(name)
    a = coverage_areas(name)
    out = {}
    for i in range(3, spec.k + 1):
        w = sum(
            (spec.paper_w_table[t] for t, sig in spec.paper_type_signatures.items() if len(sig) == i),
            ZERO,
        )
        out[i] = (a[i] + w) / spec.cell_area
    return out
