"""Extremal families: dissociated progressions, cube-plus-splines sets and
their random, GAP and higher-order variants.

Real parameters (K, p, alpha) are converted to exact fractions, so derived
integers such as spline lengths never depend on float rounding.  Floats
are read through their decimal repr: ``0.3`` means 3/10.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import isqrt, sqrt

import numpy as np

from .group import INT64_MAX, GroupSpec
from .sumsets import PointSet, sumset_chain


def as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(x)


def ceil_sqrt(v) -> int:
    """Least integer L >= 0 with L*L >= v; also the number of integers 0 <= x < sqrt(v)."""
    v = Fraction(v)
    if v <= 0:
        return 0
    t = isqrt(v.numerator // v.denominator)
    while t * t < v:
        t += 1
    return t


def integer_root(N: int, h: int) -> int | None:
    """r with r**h == N, or None."""
    if N < 0:
        return None
    r = int(round(N ** (1.0 / h)))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** h == N:
            return cand
    return None


def _check_int64(value, what):
    if value > INT64_MAX:
        raise OverflowError(f"{what} = {value} does not fit in a 64-bit coordinate")


def _splines(L: int, dim: int = 3):
    for t in range(dim):
        for x in range(L):
            p = [0] * dim
            p[t] = x
            yield p


# -- geometric progression ---------------------------------------------------

def gen_geometric(n: int, base: int = 3) -> PointSet:
    if n < 1:
        raise ValueError("n must be at least 1")
    if base < 3:
        raise ValueError("base must be at least 3")
    _check_int64(base ** (n - 1), "largest term")
    return PointSet(GroupSpec.integers(), ([base ** i] for i in range(n)))


# -- cube plus splines ---------------------------------------------------------

def ruzsa_params(m: int, K) -> dict:
    K = as_fraction(K)
    if m < 1:
        raise ValueError("m must be at least 1")
    if not m <= K <= m ** 3:
        raise ValueError(f"need m <= K <= m^3, got m={m}, K={K}")
    V = K * m ** 3
    return {"m": m, "K": K, "L": ceil_sqrt(V), "L_target": sqrt(V)}


def gen_ruzsa(m: int, K) -> PointSet:
    prm = ruzsa_params(m, K)
    _check_int64(prm["L"], "spline length")
    cube = product(range(m), repeat=3)
    return PointSet(GroupSpec.integers(3), [*cube, *_splines(prm["L"])])


# -- random cube in (Z/n)^3 --------------------------------------------------

def random_params(m: int, p, K, seed: int) -> dict:
    p, K = as_fraction(p), as_fraction(K)
    if m < 1:
        raise ValueError("m must be at least 1")
    if not 0 < p <= 1:
        raise ValueError(f"need 0 < p <= 1, got {p}")
    if not m / p <= K <= p * m ** 3:
        raise ValueError(f"need m/p <= K <= p m^3, got m={m}, p={p}, K={K}")
    V = p * K * m ** 3
    t = ceil_sqrt(V)
    n = -(-t // m) * m
    if n < m:
        raise ValueError("ambient modulus smaller than m")
    return {"m": m, "p": p, "K": K, "seed": int(seed), "n": n, "n_target": sqrt(V)}


def random_cube_mask(m: int, p, seed: int) -> np.ndarray:
    """Inclusion flags for the m^3 subgroup points, in lex order.

    Point i is kept when the i-th double drawn from Philox4x64 keyed by
    ``seed`` is below p; each draw depends only on (seed, i).
    """
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    return rng.random(m ** 3) < float(as_fraction(p))


def gen_random(m: int, p, K, seed: int = 0) -> PointSet:
    prm = random_params(m, p, K, seed)
    n, step = prm["n"], prm["n"] // m
    keep = random_cube_mask(m, prm["p"], seed)
    cube = [tuple(step * c for c in pt) for pt, k in zip(product(range(m), repeat=3), keep) if k]
    return PointSet(GroupSpec.cyclic(n, 3), [*cube, *_splines(n)])


# -- generalized arithmetic progression cube -----------------------------------

def gap_progression(k: int, d: int) -> PointSet:
    """Integers in base 3k with d digits, each digit below k."""
    if k < 1 or d < 1:
        raise ValueError("k and d must be positive")
    _check_int64((k - 1) * sum((3 * k) ** i for i in range(d)), "largest GAP element")
    vals = {sum(x * (3 * k) ** i for i, x in enumerate(digits))
            for digits in product(range(k), repeat=d)}
    return PointSet(GroupSpec.integers(), ([v] for v in vals))


def gap_cube(k: int, d: int) -> PointSet:
    P = [v for (v,) in gap_progression(k, d)]
    return PointSet(GroupSpec.integers(3), product(P, repeat=3))


def gap_params(k: int, d: int, K) -> dict:
    K = as_fraction(K)
    if k < 1 or d < 1:
        raise ValueError("k and d must be positive")
    if not k ** d <= K <= k ** (3 * d):
        raise ValueError(f"need k^d <= K <= k^(3d), got k={k}, d={d}, K={K}")
    V = K * k ** (3 * d)
    return {"k": k, "d": d, "K": K, "L": ceil_sqrt(V), "L_target": sqrt(V), "P_size": k ** d}


def gen_gap(k: int, d: int, K) -> PointSet:
    prm = gap_params(k, d, K)
    _check_int64(prm["L"], "spline length")
    X = gap_cube(k, d)
    return PointSet(GroupSpec.integers(3), [*X.elements, *_splines(prm["L"])])


# -- higher-order construction in (Z/n)^(h+1) ---------------------------------

def higher_params(h: int, m: int, alpha) -> dict:
    alpha = as_fraction(alpha)
    if h < 2:
        raise ValueError("h must be at least 2")
    if m < 1:
        raise ValueError("m must be at least 1")
    if not m ** (h - 1) <= alpha <= m ** (h * h - 1):
        raise ValueError(f"need m^(h-1) <= alpha <= m^(h^2-1), got h={h}, m={m}, alpha={alpha}")
    N = alpha * m ** (h + 1)
    n = integer_root(int(N), h) if N.denominator == 1 else None
    if n is None:
        raise ValueError(f"(alpha m^(h+1))^(1/h) = ({N})^(1/{h}) is not an integer")
    if n % m:
        raise ValueError(f"m = {m} does not divide n = {n}")
    return {"h": h, "m": m, "alpha": alpha, "n": n}


def gen_higher(h: int, m: int, alpha) -> PointSet:
    prm = higher_params(h, m, alpha)
    n, dim = prm["n"], h + 1
    step = n // m
    X = (tuple(step * c for c in pt) for pt in product(range(m), repeat=dim))
    return PointSet(GroupSpec.cyclic(n, dim), [*X, *_splines(n, dim)])


FAMILIES = ("geometric", "ruzsa", "random", "gap", "higher")


def build(family: str, **kw) -> tuple[PointSet, dict]:
    """Generate a family member and the realized parameters for its report."""
    if family == "geometric":
        n, base = int(kw["n"]), int(kw.get("base") or 3)
        return gen_geometric(n, base), {"n": n, "base": base}
    if family == "ruzsa":
        m, K = int(kw["m"]), kw["K"]
        return gen_ruzsa(m, K), ruzsa_params(m, K)
    if family == "random":
        m, p, K, seed = int(kw["m"]), kw["p"], kw["K"], int(kw.get("seed") or 0)
        A = gen_random(m, p, K, seed)
        prm = random_params(m, p, K, seed)
        prm["X_size"] = int(random_cube_mask(m, prm["p"], seed).sum())
        return A, prm
    if family == "gap":
        k, d, K = int(kw["k"]), int(kw["d"]), kw["K"]
        prm = gap_params(k, d, K)
        P = gap_progression(k, d)
        prm["P_sumset_sizes"] = [len(S) for S in sumset_chain(P, 3)]
        return gen_gap(k, d, K), prm
    if family == "higher":
        h, m, alpha = int(kw["h"]), int(kw["m"]), kw["alpha"]
        return gen_higher(h, m, alpha), higher_params(h, m, alpha)
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")

