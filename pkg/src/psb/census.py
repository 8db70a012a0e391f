"""Exhaustive exact crossing census of a finite arrangement.

Every pair of lines from different bundles meets in exactly one point.  Points
are grouped by exact coordinates; a point hit by ``p`` pairs is an ``i``-wise
crossing with ``C(i, 2) = p``.

Two engines share one interface.  ``engine="exact"`` intersects every pair with
:class:`~psb.exactnum.Quad` arithmetic and groups by byte keys.  The default
``engine="fast"`` uses that, for a fixed bundle pair, both coordinates are
affine in the two integer line offsets; over a common denominator each
coordinate component is an integer, so grouping becomes an integer sort.
Overflow is ruled out before using int64; otherwise the exact engine runs.

>>> from psb.constructions import build
>>> c = crossing_census(build("rect4", 3))
>>> conservation_holds(c)
True
>>> sorted(c.lam.items())
[(2, 12), (3, 4), (4, 5)]
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .constructions import Arrangement, build, get_spec
from .exactnum import ZERO, Quad
from .geometry import Point, intersect

__all__ = [
    "CensusError",
    "CrossingCensus",
    "TypeReport",
    "AsymptoticReport",
    "crossing_census",
    "crossing_points",
    "conservation_holds",
    "classify_types",
    "verify_asymptotics",
    "census_to_csv",
    "census_from_csv",
    "census_to_json",
    "DEFAULT_SLACK",
]

DEFAULT_SLACK = 8
_INT64_SAFE = 1 << 62


class CensusError(RuntimeError):
    """Internal inconsistency found while counting crossings."""


@dataclass
class CrossingCensus:
    name: str
    m: int
    lam: dict  # multiplicity -> number of points
    signature_counts: dict  # frozenset of bundles -> number of points
    offgrid_counts: dict  # same, restricted to crossings of >= 3 lines off the primary lattice
    total_points: int
    k: int = 0

    def expected_pair_total(self) -> int:
        return math.comb(self.k * self.m, 2) - self.k * math.comb(self.m, 2)


def _multiplicity(p: int) -> int:
    i = (1 + math.isqrt(1 + 8 * p)) // 2
    if i * (i - 1) // 2 != p:
        raise CensusError(f"a point is hit by {p} pairs, which is not a triangular number")
    return i


def conservation_holds(c: CrossingCensus) -> bool:
    return sum(math.comb(i, 2) * n for i, n in c.lam.items()) == c.expected_pair_total()


# -- primary lattice ----------------------------------------------------------


def _lattice_levels(arr: Arrangement):
    """Per primary bundle: (alpha, beta, axis gamma, step) of its line family."""
    out = []
    for b in arr.spec.primary_bundles:
        s = arr.spec.strip(b)
        axis = (s.lo_gamma + s.hi_gamma) / 2
        out.append((s.alpha, s.beta, axis, arr.spacing(b)))
    return out


def _on_lattice(x: Quad, y: Quad, levels) -> bool:
    """Whether (x, y) lies on the infinite extension of every primary family."""
    for a, b, axis, step in levels:
        t = (-(a * x + b * y) - axis) / step
        if t.s or t.r.denominator != 1:
            return False
    return True


# -- exact engine -------------------------------------------------------------


def _census_exact(arr: Arrangement) -> CrossingCensus:
    pts: dict = {}
    lines = arr.lines
    for i, l1 in enumerate(lines):
        for l2 in lines[i + 1 :]:
            if l1.bundle == l2.bundle:
                continue
            p = intersect(l1, l2)
            key = p.key()
            e = pts.get(key)
            if e is None:
                pts[key] = [p, 1, 0]
                e = pts[key]
            else:
                e[1] += 1
            e[2] |= (1 << l1.bundle) | (1 << l2.bundle)
    levels = _lattice_levels(arr)
    groups = []
    for p, count, mask in pts.values():
        groups.append((count, mask, lambda p=p: _on_lattice(p.x, p.y, levels)))
    return _summarize(arr, groups)


# -- fast engine --------------------------------------------------------------


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def _affine_pair(arr: Arrangement, b: int, c: int):
    """Coordinates of line (b, t) meet line (c, u) as X0 + t*Xt + u*Xu (same for y).

    Here t and u are the integer offsets j - (m+1)/2 of the two lines.
    """
    sb, sc = arr.spec.strip(b), arr.spec.strip(c)
    ab, bb = sb.alpha, sb.beta
    ac, bc = sc.alpha, sc.beta
    gb = (sb.lo_gamma + sb.hi_gamma) / 2
    gc = (sc.lo_gamma + sc.hi_gamma) / 2
    db, dc = arr.spacing(b), arr.spacing(c)
    inv = (ab * bc - bb * ac).inverse()
    x0 = (bb * gc - bc * gb) * inv
    xt = -bc * db * inv
    xu = bb * dc * inv
    y0 = (ac * gb - ab * gc) * inv
    yt = ac * db * inv
    yu = -ab * dc * inv
    return (x0, xt, xu), (y0, yt, yu)


def _level_affine(arr: Arrangement, xs, ys, level):
    """Level t of a primary family at the point, as an affine form in (t, u)."""
    a, b, axis, step = level
    inv = step.inverse()
    c0 = (-(a * xs[0] + b * ys[0]) - axis) * inv
    ct = -(a * xs[1] + b * ys[1]) * inv
    cu = -(a * xs[2] + b * ys[2]) * inv
    return (c0, ct, cu)


def _fast_plan(arr: Arrangement):
    """Integer numerators per bundle pair, or None when int64 could overflow."""
    k, m = arr.spec.k, arr.m
    h = (m - 1) // 2
    pairs = list(combinations(range(1, k + 1), 2))
    forms = [_affine_pair(arr, b, c) for b, c in pairs]
    levels = _lattice_levels(arr)
    lforms = [[_level_affine(arr, xs, ys, lv) for lv in levels] for xs, ys in forms]

    comps = []  # the four rational component triples per pair: xr, xs, yr, ys
    for xs, ys in forms:
        comps.append(
            [
                tuple(q.r for q in xs),
                tuple(q.s for q in xs),
                tuple(q.r for q in ys),
                tuple(q.s for q in ys),
            ]
        )
    dens = [_lcm(f.denominator for pc in comps for f in pc[ci]) for ci in range(4)]
    ncomp = []
    big = 0
    for pc in comps:
        row = []
        for ci in range(4):
            trip = tuple(int(f * dens[ci]) for f in pc[ci])
            big = max(big, abs(trip[0]) + h * (abs(trip[1]) + abs(trip[2])))
            row.append(trip)
        ncomp.append(row)

    # level forms: s-part must vanish, r-part must be an integer
    lint = []
    for lf in lforms:
        row = []
        for c0, ct, cu in lf:
            den_r = _lcm((c0.r.denominator, ct.r.denominator, cu.r.denominator))
            den_s = _lcm((c0.s.denominator, ct.s.denominator, cu.s.denominator))
            r = tuple(int(q.r * den_r) for q in (c0, ct, cu))
            s = tuple(int(q.s * den_s) for q in (c0, ct, cu))
            big = max(big, abs(r[0]) + h * (abs(r[1]) + abs(r[2])))
            big = max(big, abs(s[0]) + h * (abs(s[1]) + abs(s[2])))
            row.append((den_r, r, s))
        lint.append(row)
    if big >= _INT64_SAFE:
        return None
    return pairs, ncomp, lint


def _pair_block(m, bc, trips):
    h = (m - 1) // 2
    off = np.arange(-h, h + 1, dtype=np.int64)
    t = np.repeat(off, m)
    u = np.tile(off, m)
    cols = [np.int64(c0) + t * np.int64(ct) + u * np.int64(cu) for c0, ct, cu in trips]
    mask = np.full(m * m, (1 << bc[0]) | (1 << bc[1]), dtype=np.int64)
    return cols, mask, t, u


def _fast_groups(arr: Arrangement, plan, threads: int = 1) -> dict:
    pairs, ncomp, lint = plan
    m = arr.m

    def work(idx):
        return _pair_block(m, pairs[idx], ncomp[idx])

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            blocks = list(ex.map(work, range(len(pairs))))
    else:
        blocks = [work(i) for i in range(len(pairs))]

    cols = [np.concatenate([blk[0][ci] for blk in blocks]) for ci in range(4)]
    masks = np.concatenate([blk[1] for blk in blocks])
    ts = np.concatenate([blk[2] for blk in blocks])
    us = np.concatenate([blk[3] for blk in blocks])
    pid = np.repeat(np.arange(len(pairs), dtype=np.int64), m * m)

    order = np.lexsort(cols[::-1])
    sc = [c[order] for c in cols]
    change = np.zeros(len(order), dtype=bool)
    change[0] = True
    for c in sc:
        change[1:] |= c[1:] != c[:-1]
    starts = np.flatnonzero(change)
    counts = np.diff(np.append(starts, len(order)))
    gmask = np.bitwise_or.reduceat(masks[order], starts)
    rep = order[starts]

    # primary-lattice test, only needed for crossings of >= 3 lines
    multi = counts >= 3
    on_lat = np.ones(len(starts), dtype=bool)
    sel = np.flatnonzero(multi)
    rp, rt, ru = pid[rep[sel]], ts[rep[sel]], us[rep[sel]]
    ok = np.ones(len(sel), dtype=bool)
    for li in range(len(lint[0])):
        den = np.array([lint[p][li][0] for p in range(len(pairs))], dtype=np.int64)[rp]
        r = [np.array([lint[p][li][1][z] for p in range(len(pairs))], dtype=np.int64)[rp] for z in range(3)]
        s = [np.array([lint[p][li][2][z] for p in range(len(pairs))], dtype=np.int64)[rp] for z in range(3)]
        rv = r[0] + rt * r[1] + ru * r[2]
        sv = s[0] + rt * s[1] + ru * s[2]
        ok &= (sv == 0) & (rv % den == 0)
    on_lat[sel] = ok
    return {
        "pairs": pairs, "counts": counts, "mask": gmask, "on_lattice": on_lat,
        "pair": pid[rep], "t": ts[rep], "u": us[rep],
    }


def _census_fast(arr: Arrangement, plan, threads: int = 1) -> CrossingCensus:
    g = _fast_groups(arr, plan, threads)
    groups = [
        (int(n), int(mk), bool(o))
        for n, mk, o in zip(g["counts"].tolist(), g["mask"].tolist(), g["on_lattice"].tolist())
    ]
    return _summarize(arr, groups)


def crossing_points(arr: Arrangement, min_multiplicity: int = 3) -> list:
    """Exact ``(Point, multiplicity)`` for every crossing of at least ``min_multiplicity`` lines.

    Sorted by point key, so the order is reproducible.
    """
    plan = _fast_plan(arr)
    if plan is None:
        raise CensusError("arrangement too large for the integer engine")
    g = _fast_groups(arr, plan)
    need = math.comb(min_multiplicity, 2)
    forms = {}
    out = []
    for idx in np.flatnonzero(g["counts"] >= need).tolist():
        pid = int(g["pair"][idx])
        if pid not in forms:
            forms[pid] = _affine_pair(arr, *g["pairs"][pid])
        (x0, xt, xu), (y0, yt, yu) = forms[pid]
        t, u = int(g["t"][idx]), int(g["u"][idx])
        p = Point(x0 + xt * t + xu * u, y0 + yt * t + yu * u)
        out.append((p, _multiplicity(int(g["counts"][idx]))))
    out.sort(key=lambda e: e[0].key())
    return out


def _summarize(arr: Arrangement, groups) -> CrossingCensus:
    lam: dict = {}
    sigs: dict = {}
    offgrid: dict = {}
    for count, mask, on_lat in groups:
        i = _multiplicity(count)
        sig = frozenset(b for b in range(1, arr.spec.k + 1) if mask >> b & 1)
        if len(sig) != i:
            raise CensusError(f"{i}-wise crossing carries {len(sig)} bundles")
        lam[i] = lam.get(i, 0) + 1
        sigs[sig] = sigs.get(sig, 0) + 1
        if i >= 3:
            if callable(on_lat):
                on_lat = on_lat()
            if not on_lat:
                offgrid[sig] = offgrid.get(sig, 0) + 1
    c = CrossingCensus(
        name=arr.name,
        m=arr.m,
        lam=dict(sorted(lam.items())),
        signature_counts=dict(sorted(sigs.items(), key=lambda t: sorted(t[0]))),
        offgrid_counts=dict(sorted(offgrid.items(), key=lambda t: (len(t[0]), sorted(t[0])))),
        total_points=len(groups),
        k=arr.spec.k,
    )
    if not conservation_holds(c):
        raise CensusError("pair conservation identity violated")
    return c


def crossing_census(arr: Arrangement, engine: str = "fast", threads: int = 1) -> CrossingCensus:
    """Multiplicity histogram and bundle signatures of every crossing of ``arr``."""
    if engine == "exact":
        return _census_exact(arr)
    if engine != "fast":
        raise ValueError(f"unknown engine {engine!r}")
    plan = _fast_plan(arr)
    if plan is None:
        return _census_exact(arr)
    return _census_fast(arr, plan, threads=threads)


# -- crossing types -----------------------------------------------------------


@dataclass
class TypeReport:
    name: str
    m: int
    counts: dict  # observed off-grid signature -> count
    labels: dict  # observed signature -> table labels carrying it
    unexpected: list  # observed signatures absent from the table
    missing: list  # table signatures never observed

    @property
    def ok(self) -> bool:
        return not self.unexpected and not self.missing


def classify_types(c: CrossingCensus) -> TypeReport:
    """Match the off-grid crossings of ``c`` against the tabulated crossing types."""
    spec = get_spec(c.name)
    table = spec.type_of_signature()
    unexpected = [sorted(s) for s in c.offgrid_counts if s not in table]
    missing = [sorted(s) for s in table if s not in c.offgrid_counts]
    labels = {s: table.get(s, []) for s in c.offgrid_counts}
    return TypeReport(c.name, c.m, dict(c.offgrid_counts), labels, unexpected, missing)


# -- asymptotics --------------------------------------------------------------


@dataclass
class LambdaRow:
    m: int
    i: int
    observed: int
    coefficient: Quad
    predicted: Quad
    residual_over_m: float
    ok: bool


@dataclass
class TypeRow:
    m: int
    signature: tuple
    labels: tuple
    observed: int
    predicted: Quad
    residual_over_m: float
    ok: bool


@dataclass
class AsymptoticReport:
    name: str
    m_list: tuple
    slack: float
    lambda_rows: list = field(default_factory=list)
    type_rows: list = field(default_factory=list)
    type_reports: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            all(r.ok for r in self.lambda_rows)
            and all(r.ok for r in self.type_rows)
            and all(t.ok for t in self.type_reports)
        )

    def failures(self) -> list:
        bad = [f"m={r.m} i={r.i} residual/m={r.residual_over_m:.3f}" for r in self.lambda_rows if not r.ok]
        bad += [f"m={r.m} type {'/'.join(r.labels)} residual/m={r.residual_over_m:.3f}" for r in self.type_rows if not r.ok]
        for t in self.type_reports:
            bad += [f"m={t.m} unexpected signature {s}" for s in t.unexpected]
            bad += [f"m={t.m} missing signature {s}" for s in t.missing]
        return bad


def _within(observed: int, predicted: Quad, m: int, slack) -> tuple:
    """Exact test |observed - predicted| <= slack*m, plus the float ratio for display."""
    diff = Quad(observed) - predicted
    ok = abs(diff) <= Quad(Fraction(slack)) * m
    return float(diff) / m, ok


def verify_asymptotics(name: str, m_list, slack=DEFAULT_SLACK, engine: str = "fast", threads: int = 1) -> AsymptoticReport:
    """Compare censuses at each m with the tabulated quadratic coefficients."""
    spec = get_spec(name)
    rep = AsymptoticReport(name, tuple(m_list), slack)
    sig_w: dict = {}
    for label, sig in spec.paper_type_signatures.items():
        sig_w[sig] = sig_w.get(sig, ZERO) + spec.paper_w_table[label]
    table = spec.type_of_signature()
    for m in m_list:
        if m < 9 or m % 2 == 0:
            raise ValueError(f"asymptotic checks need odd m >= 9, got {m}")
        c = crossing_census(build(name, m), engine=engine, threads=threads)
        for i, coef in sorted(spec.paper_lambda_coeffs.items()):
            pred = coef * (m * m)
            obs = c.lam.get(i, 0)
            r, ok = _within(obs, pred, m, slack)
            rep.lambda_rows.append(LambdaRow(m, i, obs, coef, pred, r, ok))
        for sig in sorted(sig_w, key=lambda s: (len(s), sorted(s))):
            pred = sig_w[sig] / spec.cell_area * (m * m)
            obs = c.offgrid_counts.get(sig, 0)
            r, ok = _within(obs, pred, m, slack)
            rep.type_rows.append(TypeRow(m, tuple(sorted(sig)), tuple(table[sig]), obs, pred, r, ok))
        rep.type_reports.append(classify_types(c))
    return rep


# -- export -------------------------------------------------------------------

CSV_COLUMNS = ("construction", "m", "i", "lambda_i")


def census_to_csv(c: CrossingCensus) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for i, n in sorted(c.lam.items()):
        w.writerow((c.name, c.m, i, n))
    return buf.getvalue()


def census_from_csv(text: str) -> tuple:
    """Parse CSV written by :func:`census_to_csv` into ``(name, m, lam)``."""
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows:
        raise ValueError("empty census CSV")
    names = {r["construction"] for r in rows}
    ms = {int(r["m"]) for r in rows}
    if len(names) != 1 or len(ms) != 1:
        raise ValueError("census CSV mixes constructions or sizes")
    lam = {int(r["i"]): int(r["lambda_i"]) for r in rows}
    return names.pop(), ms.pop(), dict(sorted(lam.items()))


def census_to_dict(c: CrossingCensus) -> dict:
    return {
        "construction": c.name,
        "m": c.m,
        "lines": c.k * c.m,
        "total_points": str(c.total_points),
        "lambda": {str(i): str(n) for i, n in sorted(c.lam.items())},
        "conservation": conservation_holds(c),
        "offgrid_types": [
            {"signature": sorted(s), "count": str(n)} for s, n in c.offgrid_counts.items()
        ],
    }


def census_to_json(c: CrossingCensus) -> str:
    return json.dumps(census_to_dict(c), sort_keys=True, separators=(",", ":"))
