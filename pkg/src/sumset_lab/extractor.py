"""Constructive large-subset, inverse and stability statements.

* ``plunnecke_large_subset`` finds X with |X| >= (1 - delta)|A| and small
  |X + hA|, either exactly (exhaustive search) or greedily.
* ``inverse_extract`` splits A = X u Y with X from the large-subset step
  and checks that the leftover Y is spline-like.
* ``stability_analyze`` looks for a nearly dissociated Y of size about x,
  where |2A| = C(x+1, 2).

Hypotheses and conclusions involving roots are compared after raising
both sides to a common integer power, so verdicts are exact for rational M.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import comb, sqrt

import numpy as np

from . import kernels
from .bounds import binom_real, real_x
from .constructions import as_fraction
from .shadow import tuple_embedding
from .sumsets import PointSet, sum_coords, sumset_chain

log = logging.getLogger(__name__)

EXACT_SUBSET_LIMIT = 20
EXACT_WINDOW_LIMIT = 18
STABILITY_DELTA_MAX = Fraction(1, 1152)

VARIANTS = {"h2": "h2", "alpha": "general-alpha", "general-alpha": "general-alpha",
            "K": "general-K", "k": "general-K", "general-K": "general-K"}


def floor_root(q, r: int) -> int:
    """Largest integer t >= 0 with t**r <= q, for rational q >= 0."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    t = int(float(q) ** (1.0 / r))
    while t > 0 and t ** r > q:
        t -= 1
    while (t + 1) ** r <= q:
        t += 1
    return t


# -- Pluennecke for a large subset -------------------------------------------

@dataclass(frozen=True)
class LargeSubset:
    X: PointSet
    h: int
    delta: float
    min_size: int
    sumset_size: int  # |X + hA|
    bound: float  # K^h / delta^(h-1) |A|
    bound_holds: bool
    strategy: str


def _translate_indices(A: PointSet, hA: PointSet):
    """Row a of the result lists the positions of a + hA inside (h+1)A."""
    U = sum_coords(A.group, A.coords, hA.coords)
    lookup = {tuple(row): i for i, row in enumerate(U.tolist())}
    rows = []
    for a in A.coords:
        sums = sum_coords(A.group, a.reshape(1, -1), hA.coords)
        rows.append(np.fromiter((lookup[tuple(s)] for s in sums.tolist()), dtype=np.int64))
    return rows, len(U)


def _bitmasks(rows, width):
    member = np.zeros((len(rows), width + (-width) % 64), dtype=bool)
    for i, idx in enumerate(rows):
        member[i, idx] = True
    packed = np.packbits(member, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def plunnecke_large_subset(A: PointSet, h: int, delta, strategy: str = "exact",
                           threshold: int = EXACT_SUBSET_LIMIT,
                           min_size: int | None = None) -> LargeSubset:
    """X within A, |X| >= ceil((1 - delta)|A|), with small |X + hA|.

    ``exact`` returns the admissible X minimising |X + hA| (ties: larger X,
    then lexicographically smallest), which always meets the
    K^h / delta^(h-1) |A| bound.  ``greedy`` repeatedly drops the element whose
    removal shrinks |X + hA| most (ties: drop the lexicographically largest).
    ``min_size`` overrides the size floor when delta is irrational.
    """
    if h < 2:
        raise ValueError("h must be at least 2")
    if not len(A):
        raise ValueError("empty set")
    exact_delta = delta if isinstance(delta, Fraction) else None
    if exact_delta is None and not isinstance(delta, float):
        exact_delta = Fraction(delta)
    delta_f = float(delta)
    if not 0 < delta_f < 1:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    n = len(A)
    if min_size is None:
        d = exact_delta if exact_delta is not None else Fraction(delta_f)
        q = (1 - d) * n
        min_size = -(-q.numerator // q.denominator)
    if strategy not in ("exact", "greedy"):
        raise ValueError(f"unknown strategy {strategy!r}")
    if strategy == "exact" and n > threshold:
        raise ValueError(f"exact search limited to {threshold} elements, |A| = {n}")

    chain = sumset_chain(A, h)
    rows, width = _translate_indices(A, chain[-1])
    if strategy == "exact":
        count, mask = kernels.min_union(_bitmasks(rows, width), min_size)
        keep = [i for i in range(n) if mask >> i & 1]
    else:
        keep, count = _greedy_removal(rows, width, min_size)

    size2 = len(chain[1])
    if exact_delta is not None:
        bound_q = Fraction(size2, n) ** h * n / exact_delta ** (h - 1)
        holds, bound = count <= bound_q, float(bound_q)
    else:
        bound = (size2 / n) ** h * n / delta_f ** (h - 1)
        holds = count <= bound * (1 + 1e-9)
    return LargeSubset(A.take(keep), h, delta_f, min_size, count, bound, holds, strategy)


def _greedy_removal(rows, width, min_size):
    counts = np.zeros(width, dtype=np.int64)
    for idx in rows:
        counts[idx] += 1
    alive = list(range(len(rows)))
    while len(alive) > min_size:
        gains = [int(np.count_nonzero(counts[rows[i]] == 1)) for i in alive]
        best = max(gains)
        # lexicographically largest among the best: last in index order
        drop = max(i for i, g in zip(alive, gains) if g == best)
        counts[rows[drop]] -= 1
        alive.remove(drop)
    return alive, int(np.count_nonzero(counts))


# -- inverse theorems ----------------------------------------------------------

@dataclass
class ExtractionReport:
    variant: str
    h: int
    M: Fraction
    strategy: str
    sizes: dict  # |A|, |2A|, |hA|, |(h+1)A|
    hypothesis_holds: bool
    hypothesis: dict = field(default_factory=dict)
    delta: float | None = None
    X: PointSet | None = None
    Y: PointSet | None = None
    size_y: int = 0
    size_sum_y: int = 0  # |(h+1)Y|
    y_lower: float | None = None
    y_upper: float | None = None
    sum_y_lower: float | None = None
    conclusion1_holds: bool = False
    conclusion2_holds: bool = False
    large_subset: LargeSubset | None = None
    notes: list = field(default_factory=list)

    @property
    def applicable(self) -> bool:
        return self.hypothesis_holds


def _hypotheses(variant, h, M, n, n2, nh, nh1):
    if variant == "h2":
        rng = M >= 1 and 4 * M * M * n2 <= n * n
        growth = (M * nh1) ** 2 >= n2 ** 3
    elif variant == "general-alpha":
        rng = M >= 1 and (2 * h * M) ** (h * (h - 1)) * nh <= n ** h
        growth = (M * nh1) ** h >= nh ** (h + 1)
    else:
        rng = M >= 1 and (2 * M) ** 2 * n2 ** (h - 1) <= n ** (2 * (h - 1))
        growth = (M * nh1) ** 2 >= n2 ** (h + 1)
    return bool(rng), bool(growth)


def _delta_times_n(variant, h, M, n2, nh):
    """(delta |A|) ** r as an exact rational, with r."""
    if variant == "h2":
        return 4 * M * M * n2, 2
    if variant == "general-alpha":
        return (2 * M * h) ** (h * (h - 1)) * nh, h
    return (2 * M) ** 2 * n2 ** (h - 1), 2 * (h - 1)


def _conclusions(variant, h, M, n2, nh, y, sy):
    """(conclusion1, conclusion2, y_lower, y_upper, sum_lower) for |Y| = y, |(h+1)Y| = sy."""
    Mf = float(M)
    if variant == "h2":
        c1 = n2 ** 3 <= y ** 6 * (2 * M) ** 2 and y * y < 4 * M * M * n2
        c2 = sy * (2 * M) ** 4 >= y ** 3
        lo, hi, sl = sqrt(n2) / (2 * Mf) ** (1 / 3), 2 * Mf * sqrt(n2), y ** 3 / (2 * Mf) ** 4
    elif variant == "general-alpha":
        c1 = nh <= y ** h * 2 * M and y ** h < (2 * M * h) ** (h * (h - 1)) * nh
        c2 = sy * (2 * M) ** (h * h) * h ** (h * h - 1) >= y ** (h + 1)
        lo = nh ** (1 / h) / (2 * Mf) ** (1 / h)
        hi = (2 * Mf * h) ** (h - 1) * nh ** (1 / h)
        sl = y ** (h + 1) / ((2 * Mf) ** (h * h) * h ** (h * h - 1))
    else:
        c1 = (n2 ** (h + 1) <= y ** (2 * (h + 1)) * (2 * M) ** 2
              and y ** (2 * (h - 1)) < (2 * M) ** 2 * n2 ** (h - 1))
        c2 = sy * (2 * M) ** 4 >= y ** (h + 1)
        lo = sqrt(n2) / (2 * Mf) ** (1 / (h + 1))
        hi = (2 * Mf) ** (1 / (h - 1)) * sqrt(n2)
        sl = y ** (h + 1) / (2 * Mf) ** 4
    return bool(c1), bool(c2), lo, hi, sl


def inverse_extract(A: PointSet, h: int, M, variant: str = "h2", strategy: str = "exact",
                    threshold: int = EXACT_SUBSET_LIMIT, force: bool = False) -> ExtractionReport:
    """Split A into X (large-subset step) and Y = A minus X, then test the conclusions.

    ``force`` runs the extraction whenever M lies in its admissible range,
    even if the growth hypothesis fails; conclusions are then informational.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    variant = VARIANTS[variant]
    if variant == "h2" and h != 2:
        raise ValueError("variant h2 is the h = 2 statement")
    if h < 2:
        raise ValueError("h must be at least 2")
    M = as_fraction(M)
    chain = sumset_chain(A, h + 1)
    n, n2, nh, nh1 = len(A), len(chain[1]), len(chain[h - 1]), len(chain[h])
    sizes = {"A": n, "2A": n2, f"{h}A": nh, f"{h + 1}A": nh1}
    in_range, growth = _hypotheses(variant, h, M, n, n2, nh, nh1)
    rep = ExtractionReport(variant, h, M, strategy, sizes, in_range and growth,
                           {"M_in_range": in_range, "growth": growth})
    if not rep.hypothesis_holds:
        if not (force and in_range):
            rep.X, rep.Y = A, PointSet(A.group)
            rep.notes.append("hypotheses fail: not applicable")
            return rep
        rep.notes.append("growth hypothesis fails: forced run, conclusions not guaranteed")

    radicand, r = _delta_times_n(variant, h, M, n2, nh)
    removable = floor_root(radicand, r)
    rep.delta = float(radicand) ** (1 / r) / n
    ls = plunnecke_large_subset(A, h, rep.delta, strategy, threshold, min_size=n - removable)
    rep.large_subset = ls
    rep.X = ls.X
    rep.Y = A.difference(ls.X)
    rep.size_y = len(rep.Y)
    rep.size_sum_y = len(sumset_chain(rep.Y, h + 1)[-1]) if len(rep.Y) else 0
    (rep.conclusion1_holds, rep.conclusion2_holds,
     rep.y_lower, rep.y_upper, rep.sum_y_lower) = _conclusions(
        variant, h, M, n2, nh, rep.size_y, rep.size_sum_y)
    if strategy == "exact" and rep.hypothesis_holds and not (rep.conclusion1_holds and rep.conclusion2_holds):
        log.warning("exact extraction missed a guaranteed conclusion: %s", rep)
    return rep


def admissible_M_max(A_sizes: dict, h: int, variant: str) -> float:
    """Upper end of the admissible M range (floats; for grids only)."""
    variant = VARIANTS[variant]
    n, n2, nh = A_sizes["A"], A_sizes["2A"], A_sizes[f"{h}A"]
    if variant == "h2":
        return 0.5 * sqrt(n * n / n2)
    if variant == "general-alpha":
        return (n ** h / nh) ** (1 / (h * (h - 1))) / (2 * h)
    return 0.5 * (n * n / n2) ** ((h - 1) / 2)


# -- stability -----------------------------------------------------------------

@dataclass
class StabilityReport:
    x: int | float
    delta: Fraction | float
    window: tuple[float, float]  # sizes k with window[0] <= k < window[1]
    Y: PointSet | None
    size_y: int
    size_3y: int
    triple_lower: float  # (1 - 50 sqrt(delta)) C(|Y|+2, 3)
    size_window_holds: bool
    triple_bound_holds: bool
    delta_within_theorem: bool
    x_y: int | float | None  # |2Y| = C(x_Y + 1, 2)
    macaulay_y_holds: bool  # |3Y| <= binom_real(x_Y + 2, 3)
    strategy: str
    notes: list = field(default_factory=list)


def _triples_by_sum(A: PointSet):
    """Index bitmasks of all 3-multisets of A grouped by their sum."""
    n = len(A)
    trip = np.array(list(combinations_with_replacement(range(n), 3)), dtype=np.int64)
    sums = A.coords[trip[:, 0]] + A.coords[trip[:, 1]] + A.coords[trip[:, 2]]
    mod = np.array(A.group.moduli, dtype=np.int64)
    sums = np.where(mod > 0, sums % np.where(mod > 0, mod, 1), sums)
    _, inv = np.unique(sums, axis=0, return_inverse=True)
    inv = inv.ravel()
    order = np.argsort(inv, kind="stable")
    masks = (np.left_shift(np.uint64(1), trip[:, 0].astype(np.uint64))
             | np.left_shift(np.uint64(1), trip[:, 1].astype(np.uint64))
             | np.left_shift(np.uint64(1), trip[:, 2].astype(np.uint64)))
    inv = inv[order]
    starts = np.flatnonzero(np.r_[True, inv[1:] != inv[:-1], True]).astype(np.int64)
    return np.ascontiguousarray(masks[order]), starts


def _greedy_chain(A: PointSet, limit: int) -> list[int]:
    """Vertices in the order the triangle-graph greedy adds them."""
    n = len(A)
    C = tuple_embedding(A, 2)
    edges = sorted({(x, y) for x, y in C if x != y})
    adj = [set() for _ in range(n)]
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    tri = [0] * n
    for u, v in edges:
        for w in adj[u] & adj[v]:
            if w > v:
                tri[u] += 1
                tri[v] += 1
                tri[w] += 1
    start = max(range(n), key=lambda v: (tri[v], -v))
    order, inside = [start], {start}
    while len(order) < min(limit, n):
        def score(v):
            nb = adj[v] & inside
            closed = sum(1 for a in nb for b in nb if a < b and b in adj[a])
            return (closed, len(nb), -v)
        v = max((v for v in range(n) if v not in inside), key=score)
        order.append(v)
        inside.add(v)
    return order


def _objective_better(cnt, k, best_cnt, best_k):
    lhs, rhs = cnt * comb(best_k + 2, 3), best_cnt * comb(k + 2, 3)
    return lhs > rhs or (lhs == rhs and k > best_k)


def stability_analyze(A: PointSet, strategy: str = "exact",
                      threshold: int = EXACT_WINDOW_LIMIT) -> StabilityReport:
    if not len(A):
        raise ValueError("empty set")
    if strategy not in ("exact", "greedy"):
        raise ValueError(f"unknown strategy {strategy!r}")
    chain = sumset_chain(A, 3)
    n, n2, n3 = len(A), len(chain[1]), len(chain[2])
    notes = []
    x = real_x(n2, 2)
    top = binom_real(x + 2, 3)
    delta = 1 - Fraction(n3) / top if isinstance(top, (int, Fraction)) else 1 - n3 / top
    if delta < 0:
        notes.append(f"delta {float(delta):.3g} < 0 from rounding, clamped to 0")
        delta = 0.0
    root = sqrt(delta)
    lo, hi = (1 - 6 * root) * float(x), (1 + 9 * root) * (float(x) + 1)
    kmin, kmax = max(1, _ceil(lo)), min(n, _ceil(hi) - 1)

    Y = None
    if kmin <= kmax:
        if strategy == "exact":
            if n > threshold:
                raise ValueError(f"exact window search limited to {threshold} elements, |A| = {n}")
            reps, starts = _triples_by_sum(A)
            mask, _ = kernels.window_scan(reps, starts, n, kmin, kmax)
            Y = A.take_mask(mask) if mask >= 0 else None
        else:
            order = _greedy_chain(A, kmax)
            best = None
            for k in range(kmin, len(order) + 1):
                cand = A.take(order[:k])
                cnt = len(sumset_chain(cand, 3)[-1])
                if best is None or _objective_better(cnt, k, best[0], best[1]):
                    best = (cnt, k, cand)
            Y = best[2] if best else None
    else:
        notes.append("size window contains no admissible size")

    delta_ok = delta < STABILITY_DELTA_MAX
    if not delta_ok:
        notes.append("delta >= 1/1152: outside the stability regime, no guarantee")
    notes.append("the guarantee needs |A| large enough; small-|A| verdicts are non-binding")

    if Y is None:
        return StabilityReport(x, delta, (lo, hi), None, 0, 0, 0.0, False, False,
                               delta_ok, None, True, strategy, notes)
    ch = sumset_chain(Y, 3)
    y, s2, s3 = len(Y), len(ch[1]), len(ch[2])
    cap = comb(y + 2, 3)
    if delta == 0:
        triple_ok, triple_lower = s3 >= cap, float(cap)
    else:
        triple_lower = (1 - 50 * root) * cap
        triple_ok = s3 >= triple_lower * (1 - 1e-9) if triple_lower > 0 else True
    x_y = real_x(s2, 2)
    cap_y = binom_real(x_y + 2, 3)
    mac_ok = s3 <= cap_y if isinstance(cap_y, (int, Fraction)) else s3 <= cap_y * (1 + 1e-9)
    return StabilityReport(
        x, delta, (lo, hi), Y, y, s3, triple_lower,
        lo <= y < hi, triple_ok, delta_ok, x_y, mac_ok, strategy, notes,
    )


def _ceil(v: float) -> int:
    return math.ceil(v - 1e-12 * max(1.0, abs(v)))
