"""Counting pseudoline arrangements, reduced words and box plane partitions.

Simple arrangements of n pseudolines correspond to reduced words of the
longest permutation of n letters (letters ``1..n-1`` are adjacent
transpositions).  ``A_n`` counts the words, ``B_n`` counts their commutation
classes.

>>> stanley_A(4).value, count_reduced_words(4).value, count_commutation_classes(4).value
(16, 16, 8)
>>> macmahon_P(2, 2, 2).value
20
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from decimal import Decimal
from functools import lru_cache

import mpmath

__all__ = [
    "CountResult",
    "EnumerationCapError",
    "stanley_A",
    "count_reduced_words",
    "iter_reduced_words",
    "is_reduced_word_of_reversal",
    "canonical_form",
    "local_sequences",
    "count_commutation_classes",
    "commutation_classes_union_find",
    "macmahon_P",
    "count_plane_partitions_box",
    "fv_constant_trace",
    "TABLE_A",
    "TABLE_B",
    "REDUCED_WORD_CAP",
    "CLASS_CAP",
    "PLANE_PARTITION_CAP",
]

# Known values, indexed by n.
TABLE_A = {
    1: 1, 2: 1, 3: 2, 4: 16, 5: 768, 6: 292864, 7: 1100742656,
    8: 48608795688960, 9: 29258366996258488320,
}
TABLE_B = {
    1: 1, 2: 1, 3: 2, 4: 8, 5: 62, 6: 908, 7: 24698, 8: 1232944,
    9: 112018190, 10: 18410581880, 11: 5449192389984,
    12: 2894710651370536, 13: 2752596959306389652,
    14: 4675651520558571537540, 15: 14163808995580022218786390,
}

REDUCED_WORD_CAP = 6
CLASS_CAP = 8
PLANE_PARTITION_CAP = 64


class EnumerationCapError(ValueError):
    """Requested size is above the configured enumeration cap."""


@dataclass(frozen=True)
class CountResult:
    value: int
    method: str  # closed_form | brute_force | class_bfs | oracle
    seconds: float = 0.0

    def __int__(self) -> int:
        return self.value


def _timed(method, fn, *args):
    t0 = time.perf_counter()
    v = fn(*args)
    return CountResult(v, method, time.perf_counter() - t0)


# -- reduced words ------------------------------------------------------------


def stanley_A(n: int) -> CountResult:
    """Number of reduced words of the longest permutation, in closed form."""
    if n < 1:
        raise ValueError("n must be >= 1")

    def f(n):
        num = math.factorial(math.comb(n, 2))
        den = math.prod((2 * n - 2 * k - 1) ** k for k in range(1, n))
        q, r = divmod(num, den)
        if r:
            raise ArithmeticError(f"closed form is not integral at n={n}")
        return q

    return _timed("closed_form", f, n)


def count_reduced_words(n: int) -> CountResult:
    """Depth-first count of reduced words, memoised on the current permutation."""
    if not 1 <= n <= REDUCED_WORD_CAP:
        raise EnumerationCapError(f"count_reduced_words supports 1 <= n <= {REDUCED_WORD_CAP}, got {n}")

    def f(n):
        @lru_cache(maxsize=None)
        def paths(perm):
            total = 0
            for i in range(n - 1):
                if perm[i] < perm[i + 1]:
                    p = list(perm)
                    p[i], p[i + 1] = p[i + 1], p[i]
                    total += paths(tuple(p))
            return total or 1  # the reversal is the only permutation without ascents

        return paths(tuple(range(n)))

    return _timed("brute_force", f, n)


def iter_reduced_words(n: int):
    """Yield every reduced word of the reversal as a tuple of letters 1..n-1."""
    word = []

    def rec(perm):
        moved = False
        for i in range(n - 1):
            if perm[i] < perm[i + 1]:
                moved = True
                perm[i], perm[i + 1] = perm[i + 1], perm[i]
                word.append(i + 1)
                yield from rec(perm)
                word.pop()
                perm[i], perm[i + 1] = perm[i + 1], perm[i]
        if not moved:
            yield tuple(word)

    yield from rec(list(range(n)))


def is_reduced_word_of_reversal(word, n: int) -> bool:
    perm = list(range(n))
    for letter in word:
        i = letter - 1
        if not 0 <= i < n - 1 or perm[i] > perm[i + 1]:
            return False
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    return perm == list(range(n - 1, -1, -1))


# -- commutation classes ------------------------------------------------------


def canonical_form(word) -> tuple:
    """Lexicographically least word in the commutation class of ``word``.

    Greedy: at every step emit the smallest letter that commutes with all
    letters still in front of it.
    """
    rest = list(word)
    out = []
    while rest:
        best = None
        blocked = set()
        for pos, a in enumerate(rest):
            if a not in blocked and (best is None or a < rest[best]):
                best = pos
            blocked.update((a - 1, a, a + 1))
        out.append(rest.pop(best))
    return tuple(out)


def local_sequences(word, n: int) -> bytes:
    """For each pseudoline, the order in which it meets the others.

    This is a complete invariant of the commutation class.
    """
    perm = list(range(n))
    seqs = [[] for _ in range(n)]
    for letter in word:
        i = letter - 1
        a, b = perm[i], perm[i + 1]
        seqs[a].append(b)
        seqs[b].append(a)
        perm[i], perm[i + 1] = b, a
    return bytes(x for s in seqs for x in s)


def _bubble_word(n: int) -> list:
    word = []
    for top in range(n - 1, 0, -1):
        word.extend(range(1, top + 1))
    return word


def _count_local_bfs(n: int) -> int:
    """Breadth-first search over arrangements, each stored by its local sequences.

    A triangle flip (the braid move) exchanges the crossing order of three
    pseudolines a < u < v whose three mutual crossings are consecutive on
    each of them.
    """
    if n <= 2:
        return 1
    w = n - 1
    start = local_sequences(_bubble_word(n), n)
    seen = {start}
    frontier = [start]
    rows = range(n)
    while frontier:
        nxt = []
        for st in frontier:
            pos = [0] * (n * n)
            for a in rows:
                base = a * w
                row = a * n
                for i in range(w):
                    pos[row + st[base + i]] = i
            for a in rows:
                base = a * w
                for i in range(w - 1):
                    u = st[base + i]
                    v = st[base + i + 1]
                    if u < a or v < a:
                        continue
                    pu = pos[u * n + a]
                    pv = pos[u * n + v]
                    if pu - pv != 1 and pv - pu != 1:
                        continue
                    qa = pos[v * n + a]
                    qu = pos[v * n + u]
                    if qa - qu != 1 and qu - qa != 1:
                        continue
                    b = bytearray(st)
                    b[base + i], b[base + i + 1] = v, u
                    ub = u * w
                    b[ub + pu], b[ub + pv] = b[ub + pv], b[ub + pu]
                    vb = v * w
                    b[vb + qa], b[vb + qu] = b[vb + qu], b[vb + qa]
                    key = bytes(b)
                    if key not in seen:
                        seen.add(key)
                        nxt.append(key)
        frontier = nxt
    return len(seen)


def _class_members(word) -> set:
    """All words reachable from ``word`` by swapping adjacent commuting letters."""
    start = tuple(word)
    seen = {start}
    stack = [start]
    while stack:
        w = stack.pop()
        for i in range(len(w) - 1):
            if abs(w[i] - w[i + 1]) >= 2:
                v = w[:i] + (w[i + 1], w[i]) + w[i + 2 :]
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
    return seen


def _count_word_bfs(n: int) -> int:
    """Breadth-first search over canonical words using braid moves i,i+1,i <-> i+1,i,i+1."""
    start = canonical_form(_bubble_word(n))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for c in frontier:
            for w in _class_members(c):
                for i in range(len(w) - 2):
                    a, b, d = w[i : i + 3]
                    if a == d and abs(a - b) == 1:
                        key = canonical_form(w[:i] + (b, a, b) + w[i + 3 :])
                        if key not in seen:
                            seen.add(key)
                            nxt.append(key)
        frontier = nxt
    return len(seen)


def count_commutation_classes(n: int, allow_9: bool = False, engine: str = "local") -> CountResult:
    """Number of commutation classes of reduced words of the reversal (B_n).

    ``engine="local"`` keys each class by its local sequences and is the fast
    default; ``engine="words"`` keys by canonical words and applies braid
    moves to every representative (small n only).
    """
    cap = 9 if allow_9 else CLASS_CAP
    if not 1 <= n <= cap:
        raise EnumerationCapError(
            f"count_commutation_classes supports 1 <= n <= {CLASS_CAP} (9 with allow_9), got {n}"
        )
    if engine == "local":
        return _timed("class_bfs", _count_local_bfs, n)
    if engine == "words":
        if n > 6:
            raise EnumerationCapError("the word engine is limited to n <= 6")
        return _timed("class_bfs", _count_word_bfs, n)
    raise ValueError(f"unknown engine {engine!r}")


def commutation_classes_union_find(n: int) -> CountResult:
    """Independent oracle: union-find over all reduced words joined by commuting swaps."""
    if not 1 <= n <= 6:
        raise EnumerationCapError("the union-find oracle is limited to n <= 6")

    def f(n):
        words = list(iter_reduced_words(n))
        index = {w: i for i, w in enumerate(words)}
        parent = list(range(len(words)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for w, i in index.items():
            for p in range(len(w) - 1):
                if abs(w[p] - w[p + 1]) >= 2:
                    j = index[w[:p] + (w[p + 1], w[p]) + w[p + 2 :]]
                    ri, rj = find(i), find(j)
                    if ri != rj:
                        parent[ri] = rj
        return sum(1 for i in range(len(words)) if find(i) == i)

    return _timed("oracle", f, n)


# -- plane partitions ---------------------------------------------------------


def _level_counts(i: int, j: int, k: int) -> list:
    """counts[s] = number of (a, b, c) in [0,i) x [0,j) x [0,k) with a+b+c = s."""
    ab = [0] * (i + j - 1)
    for a in range(i):
        for b in range(j):
            ab[a + b] += 1
    out = [0] * (i + j + k - 2)
    for s, n in enumerate(ab):
        for c in range(k):
            out[s + c] += n
    return out


def macmahon_P(i: int, j: int, k: int) -> CountResult:
    """Rhombic tilings of the hexagon with sides i, j, k (MacMahon's box product)."""
    if min(i, j, k) < 0:
        raise ValueError("box sides must be nonnegative")

    def f(i, j, k):
        if min(i, j, k) == 0:
            return 1
        counts = _level_counts(i, j, k)
        # factor (s+2)/(s+1) appears counts[s] times; collect exponents per integer
        exp: dict = {}
        for s, n in enumerate(counts):
            exp[s + 2] = exp.get(s + 2, 0) + n
            exp[s + 1] = exp.get(s + 1, 0) - n
        num = math.prod(t**e for t, e in exp.items() if e > 0)
        den = math.prod(t ** (-e) for t, e in exp.items() if e < 0)
        q, r = divmod(num, den)
        if r:
            raise ArithmeticError("box product is not integral")
        return q

    return _timed("closed_form", f, i, j, k)


def count_plane_partitions_box(i: int, j: int, k: int) -> CountResult:
    """Count i x j matrices over [0, k] nonincreasing along rows and columns."""
    if min(i, j, k) < 0:
        raise ValueError("box sides must be nonnegative")
    if i * j * k > PLANE_PARTITION_CAP:
        raise EnumerationCapError(f"plane partition oracle needs i*j*k <= {PLANE_PARTITION_CAP}")

    def rows_under(bound):
        """All nonincreasing rows with row[c] <= bound[c]."""
        out = []

        def rec(c, prev, acc):
            if c == len(bound):
                out.append(tuple(acc))
                return
            for v in range(min(prev, bound[c]) + 1):
                acc.append(v)
                rec(c + 1, v, acc)
                acc.pop()

        rec(0, k, [])
        return out

    def f(i, j, k):
        @lru_cache(maxsize=None)
        def count(r, prev):
            if r == i:
                return 1
            return sum(count(r + 1, row) for row in rows_under(prev))

        return count(0, (k,) * j)

    return _timed("oracle", f, i, j, k)


def fv_constant_trace(n_list, digits: int = 30) -> list:
    """``log2 P(n, n, n) / n^2`` for each n, as Decimals with ``digits`` significant digits."""
    out = []
    for n in n_list:
        if not 1 <= n <= 128:
            raise ValueError(f"fv_constant_trace needs 1 <= n <= 128, got {n}")
        p = macmahon_P(n, n, n).value
        with mpmath.workdps(digits + 15):
            v = mpmath.log(mpmath.mpf(p), 2) / (n * n)
            out.append(Decimal(mpmath.nstr(v, digits, strip_zeros=False)))
    return out
