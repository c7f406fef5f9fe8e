"""Real binomial coefficients, their inversion, and the sumset inequalities.

Every inequality here is a theorem, so a failing check means a bug in the
code computing the sets.  Verdicts are decided in exact integer/rational
arithmetic whenever the bound is algebraic in the set sizes; only the
Macaulay-type bound at non-integral x falls back to floats, with a
relative slack of 1e-9 in favour of the inequality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, isqrt

from .shadow import triangle_stats
from .sumsets import PointSet, sumset_chain

FLOAT_SLACK = 1e-9
LOWER_BOUNDS = ("trivial-lower", "monotone")  # checks of the form value >= bound


def binom_real(x, k: int):
    """x (x-1) ... (x-k+1) / k!; exact for int/Fraction x, float otherwise."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    if isinstance(x, bool):
        x = int(x)
    if isinstance(x, int) and x >= 0:
        return comb(x, k)
    if isinstance(x, (int, Fraction)):
        out = Fraction(1)
        for i in range(k):
            out *= Fraction(x) - i
        for i in range(2, k + 1):
            out /= i
        return int(out) if out.denominator == 1 else out
    x = float(x)
    out = 1.0
    for i in range(k):
        out *= (x - i) / (i + 1)
    return out


def invert_binom_exact(r, h: int) -> int | None:
    """Integer j >= 1 with C(j+h-1, h) == r, if one exists."""
    r = Fraction(r)
    if r.denominator != 1 or r < 1:
        return None
    r = int(r)
    j = max(1, int(round(invert_binom(r, h))))
    for cand in (j - 1, j, j + 1):
        if cand >= 1 and comb(cand + h - 1, h) == r:
            return cand
    return None


def invert_binom(r, h: int) -> float:
    """The unique real x >= 1 with binom_real(x+h-1, h) == r (r >= 1)."""
    if h < 1:
        raise ValueError("h must be positive")
    if r < 1:
        raise ValueError(f"invert_binom needs r >= 1, got {r}")
    target = float(r)

    def f(x):
        return binom_real(x + h - 1, h)

    lo, hi = 1.0, 2.0
    while f(hi) < target:
        lo, hi = hi, hi * 2
    for _ in range(200):
        mid = (lo + hi) / 2
        if mid in (lo, hi):
            break
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return (lo + hi) / 2


def real_x(r, h: int):
    """x for |hA| = r: an int when r is a binomial value, else a float."""
    j = invert_binom_exact(r, h)
    return j if j is not None else invert_binom(r, h)


@dataclass(frozen=True)
class BoundCheck:
    name: str
    h: int
    value: int
    bound: int | Fraction | float
    holds: bool
    exact: bool

    @property
    def relation(self) -> str:
        return ">=" if self.name in LOWER_BOUNDS else "<="

    @property
    def slack(self) -> float:
        """Distance to the bound, positive when the check holds."""
        s = float(self.bound) - self.value
        return -s if self.relation == ">=" else s

    @property
    def tight(self) -> bool:
        return self.exact and self.value == self.bound


@dataclass
class BoundReport:
    sizes: tuple[int, ...]
    xs: dict[int, int | float]  # h -> x with |hA| = binom_real(x+h-1, h)
    checks: list[BoundCheck] = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(c.holds for c in self.checks)

    def violations(self) -> list[BoundCheck]:
        return [c for c in self.checks if not c.holds]

    def get(self, name: str, h: int) -> BoundCheck:
        for c in self.checks:
            if c.name == name and c.h == h:
                return c
        raise KeyError((name, h))


def macaulay_check(size_h: int, size_next: int, h: int) -> BoundCheck:
    """|(h+1)A| <= binom_real(x+h, h+1) where |hA| = binom_real(x+h-1, h)."""
    j = invert_binom_exact(size_h, h)
    if j is not None:
        bound = comb(j + h, h + 1)
        return BoundCheck("macaulay", h + 1, size_next, bound, size_next <= bound, True)
    x = invert_binom(size_h, h)
    bound = binom_real(x + h, h + 1)
    return BoundCheck("macaulay", h + 1, size_next, bound,
                      size_next <= bound * (1 + FLOAT_SLACK), False)


def bound_suite(A: PointSet, H: int = 3, triangles: bool = True) -> BoundReport:
    if H < 3:
        raise ValueError("bound_suite needs H >= 3")
    if not len(A):
        raise ValueError("bound_suite of an empty set")
    sizes = tuple(len(S) for S in sumset_chain(A, H))
    return bounds_from_sizes(sizes, A if triangles else None)


def bounds_from_sizes(sizes, A: PointSet | None = None) -> BoundReport:
    H = len(sizes)
    n, n2 = sizes[0], sizes[1]
    size = {h: sizes[h - 1] for h in range(1, H + 1)}
    rep = BoundReport(tuple(sizes), {h: real_x(size[h], h) for h in range(2, H + 1)})
    add = rep.checks.append

    add(BoundCheck("trivial-lower", 2, n2, n, n <= n2, True))
    for h in range(2, H + 1):
        cap = comb(n + h - 1, h)
        add(BoundCheck("trivial-upper", h, size[h], cap, size[h] <= cap, True))
    for h in range(2, H):
        add(BoundCheck("monotone", h + 1, size[h + 1], size[h], size[h] <= size[h + 1], True))

    K = Fraction(n2, n)
    for h in range(3, H + 1):
        add(BoundCheck("plunnecke", h, size[h], K ** h * n,
                       size[h] * n ** (h - 1) <= n2 ** h, True))

    s3 = size[3]
    add(BoundCheck("ruzsa", 3, s3, _root_bound(n2, 3, 2), s3 ** 2 <= n2 ** 3, True))
    for h in range(2, H):
        add(BoundCheck("ruzsa-higher", h + 1, size[h + 1], _root_bound(size[h], h + 1, h),
                       size[h + 1] ** h <= size[h] ** (h + 1), True))
    for h in range(2, H):
        add(macaulay_check(size[h], size[h + 1], h))

    if A is not None:
        ts = triangle_stats(A)
        add(BoundCheck("kruskal-katona", 3, ts.size_3a, ts.kk_bound, ts.kk_ruzsa_holds, True))
        add(BoundCheck("triangles", 3, ts.distinct_triple_count, ts.triangle_count,
                       ts.triples_in_triangles, True))
        add(BoundCheck("repeated-triples", 3, ts.size_3a - ts.distinct_triple_count,
                       2 * ts.size_2a, ts.repeated_part_bounded, True))
    return rep


def _root_bound(base: int, num: int, den: int):
    """base ** (num/den): exact when it is an integer, float otherwise."""
    if den == 2:
        r = isqrt(base)
        if r * r == base:
            return r ** num
    return float(base) ** (num / den)


def rho(size_h: int, size_next: int, h: int) -> float:
    """|(h+1)A| / |hA|^((h+1)/h); at most 1 by the higher Ruzsa inequality."""
    return size_next / size_h ** ((h + 1) / h)
