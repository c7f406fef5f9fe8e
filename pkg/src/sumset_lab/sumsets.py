"""Point sets, h-fold sumsets, cardinality profiles and dissociativity."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import kernels
from .group import INT64_MAX, INT64_MIN, GroupMismatchError, GroupSpec, format_element

log = logging.getLogger(__name__)

_MAX_SPACE = 1 << 62


class PointSet:
    """A finite set of canonical elements of one group, sorted lexicographically.

    Coordinates live in an ``(n, d)`` int64 array; iteration yields tuples.
    """

    __slots__ = ("group", "coords", "_tuples")

    def __init__(self, group: GroupSpec, points: Iterable[Sequence[int]] = ()):
        rows = [group.canonical(p) for p in points]
        arr = np.array(rows, dtype=np.int64).reshape(len(rows), group.dim)
        self._set(group, np.unique(arr, axis=0) if len(rows) else arr)

    def _set(self, group, arr):
        self.group = group
        self.coords = np.ascontiguousarray(arr, dtype=np.int64)
        self.coords.setflags(write=False)
        self._tuples = None

    @classmethod
    def from_array(cls, group: GroupSpec, arr, *, canonical_sorted: bool = False) -> "PointSet":
        """Build from an int array; ``canonical_sorted`` skips normalisation."""
        obj = cls.__new__(cls)
        arr = np.asarray(arr, dtype=np.int64).reshape(-1, group.dim)
        if not canonical_sorted:
            mod = np.array(group.moduli, dtype=np.int64)
            arr = np.where(mod > 0, arr % np.where(mod > 0, mod, 1), arr)
            arr = np.unique(arr, axis=0) if len(arr) else arr
        obj._set(group, arr)
        return obj

    def __len__(self):
        return self.coords.shape[0]

    @property
    def elements(self) -> tuple[tuple[int, ...], ...]:
        if self._tuples is None:
            self._tuples = tuple(tuple(int(c) for c in row) for row in self.coords)
        return self._tuples

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, point):
        return tuple(point) in set(self.elements)

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and self.group == other.group
            and self.coords.shape == other.coords.shape
            and bool(np.array_equal(self.coords, other.coords))
        )

    def __hash__(self):
        return hash((self.group, self.elements))

    def __repr__(self):
        shown = ", ".join(map(str, self.elements[:6]))
        more = ", ..." if len(self) > 6 else ""
        return f"PointSet({self.group.moduli}, [{shown}{more}], n={len(self)})"

    def take(self, indices) -> "PointSet":
        idx = np.sort(np.asarray(list(indices), dtype=np.int64))
        return PointSet.from_array(self.group, self.coords[idx], canonical_sorted=True)

    def take_mask(self, mask: int) -> "PointSet":
        return self.take(i for i in range(len(self)) if mask >> i & 1)

    def union(self, other: "PointSet") -> "PointSet":
        _check_same_group(self, other)
        return PointSet.from_array(self.group, np.vstack([self.coords, other.coords]))

    def difference(self, other: "PointSet") -> "PointSet":
        _check_same_group(self, other)
        drop = set(other.elements)
        return self.take(i for i, p in enumerate(self.elements) if p not in drop)

    def issubset(self, other: "PointSet") -> bool:
        return self.group == other.group and set(self.elements) <= set(other.elements)


def _check_same_group(a: PointSet, b: PointSet):
    if a.group != b.group:
        raise GroupMismatchError(f"groups differ: {a.group.moduli} vs {b.group.moduli}")


# -- pair enumeration -------------------------------------------------------

@dataclass(frozen=True)
class _Layout:
    moduli: np.ndarray
    lo: np.ndarray
    span: tuple[int, ...]
    stride: np.ndarray
    space: int

    def decode(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64).copy()
        out = np.empty((len(codes), len(self.span)), dtype=np.int64)
        for t in range(len(self.span) - 1, -1, -1):
            out[:, t] = codes % self.span[t] + self.lo[t]
            codes //= self.span[t]
        return out


def _layout(group: GroupSpec, a: np.ndarray, b: np.ndarray) -> _Layout | None:
    """Mixed-radix code for the sums a + b; code order equals lex order."""
    lo, span = [], []
    for t, n in enumerate(group.moduli):
        if n:
            lo.append(0)
            span.append(n)
        else:
            low = int(a[:, t].min()) + int(b[:, t].min())
            high = int(a[:, t].max()) + int(b[:, t].max())
            if low < INT64_MIN or high > INT64_MAX:
                raise OverflowError("sum leaves the 64-bit coordinate range")
            lo.append(low)
            span.append(high - low + 1)
    stride, acc = [], 1
    for s in reversed(span):
        stride.append(acc)
        acc *= s
    if acc > _MAX_SPACE:
        return None
    return _Layout(
        np.array(group.moduli, dtype=np.int64),
        np.array(lo, dtype=np.int64),
        tuple(span),
        np.array(stride[::-1], dtype=np.int64),
        acc,
    )


def _slow_sum(group, a, b):
    return [group.canonical(int(x) + int(y) for x, y in zip(p, q)) for p in a for q in b]


def sum_coords(group: GroupSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Distinct sums of rows of ``a`` and ``b``, lexicographically sorted."""
    if not len(a) or not len(b):
        return np.zeros((0, group.dim), dtype=np.int64)
    lay = _layout(group, a, b)
    if lay is None:
        rows = sorted(set(_slow_sum(group, a.tolist(), b.tolist())))
        return np.array(rows, dtype=np.int64).reshape(-1, group.dim)
    codes = kernels.sumset_codes(
        np.ascontiguousarray(a), np.ascontiguousarray(b), lay.moduli, lay.lo, lay.stride, lay.space
    )
    return lay.decode(codes)


def first_hit_pairs(group: GroupSpec, a: np.ndarray, b: np.ndarray, jmin=None):
    """Scan pairs (i, j) with j >= jmin[i] in row-major order, keeping the
    first pair that produces each distinct sum.

    Returns ``(sums, i, j)`` in discovery order.
    """
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    jmin = np.zeros(len(a), np.int64) if jmin is None else np.ascontiguousarray(jmin, np.int64)
    if not len(a) or not len(b):
        e = np.zeros(0, dtype=np.int64)
        return np.zeros((0, group.dim), dtype=np.int64), e, e.copy()
    lay = _layout(group, a, b)
    if lay is None:
        seen, out = set(), ([], [], [])
        for i, p in enumerate(a.tolist()):
            for j in range(int(jmin[i]), len(b)):
                s = group.canonical(x + y for x, y in zip(p, b[j].tolist()))
                if s not in seen:
                    seen.add(s)
                    out[0].append(s)
                    out[1].append(i)
                    out[2].append(j)
        sums = np.array(out[0], dtype=np.int64).reshape(-1, group.dim)
        return sums, np.array(out[1], dtype=np.int64), np.array(out[2], dtype=np.int64)
    codes, ii, jj = kernels.first_hits(a, b, jmin, lay.moduli, lay.lo, lay.stride, lay.space)
    return lay.decode(codes), ii, jj


# -- public operations ------------------------------------------------------

def sumset(A: PointSet, B: PointSet) -> PointSet:
    _check_same_group(A, B)
    if not len(A) or not len(B):
        raise ValueError("sumset of an empty set")
    return PointSet.from_array(A.group, sum_coords(A.group, A.coords, B.coords), canonical_sorted=True)


def iterated_sumset(A: PointSet, h: int) -> PointSet:
    return sumset_chain(A, h)[-1]


def sumset_chain(A: PointSet, h: int) -> list[PointSet]:
    """[A, 2A, ..., hA], each stage deduplicated before the next addition."""
    if h < 1:
        raise ValueError(f"h must be positive, got {h}")
    if not len(A):
        raise ValueError("iterated sumset of an empty set")
    chain = [A]
    for _ in range(h - 1):
        chain.append(sumset(chain[-1], A))
    return chain


@dataclass(frozen=True)
class SumsetProfile:
    sizes: tuple[int, ...]  # |1A|, ..., |HA|

    @property
    def K(self) -> Fraction:
        return Fraction(self.sizes[1], self.sizes[0])

    @property
    def alpha(self) -> tuple[Fraction, ...]:
        """alpha_h = |hA| / |A| for h = 1..H."""
        return tuple(Fraction(s, self.sizes[0]) for s in self.sizes)

    def size(self, h: int) -> int:
        return self.sizes[h - 1]


def profile(A: PointSet, H: int) -> SumsetProfile:
    if H < 2:
        raise ValueError(f"profile needs H >= 2, got {H}")
    return SumsetProfile(tuple(len(S) for S in sumset_chain(A, H)))


def is_dissociated(A: PointSet, h: int) -> bool:
    if h < 2:
        raise ValueError(f"dissociativity needs h >= 2, got {h}")
    return len(iterated_sumset(A, h)) == comb(len(A) + h - 1, h)


# -- .pts files -------------------------------------------------------------

class PtsFormatError(ValueError):
    pass


def parse_pts(text: str, source: str = "<string>") -> tuple[PointSet, int]:
    """Parse .pts text; returns the set and the number of merged duplicates."""
    group, rows = None, []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#group"):
            if group is not None:
                raise PtsFormatError(f"{source}:{lineno}: second #group directive")
            try:
                group = GroupSpec.parse(line)
            except ValueError as exc:
                raise PtsFormatError(f"{source}:{lineno}: {exc}") from None
            continue
        if not line or line.startswith("#"):
            continue
        if group is None:
            raise PtsFormatError(f"{source}:{lineno}: element before #group directive")
        try:
            rows.append(group.canonical(int(t) for t in line.split()))
        except (ValueError, OverflowError) as exc:
            raise PtsFormatError(f"{source}:{lineno}: {exc}") from None
    if group is None:
        raise PtsFormatError(f"{source}: missing #group directive")
    A = PointSet(group, rows)
    dups = len(rows) - len(A)
    if dups:
        log.warning("%s: merged %d duplicate element(s)", source, dups)
    return A, dups


def read_pts(path) -> tuple[PointSet, int]:
    path = Path(path)
    return parse_pts(path.read_text(), str(path))


def format_pts(A: PointSet, comments: Sequence[str] = ()) -> str:
    lines = [A.group.directive()]
    lines += [f"# {c}" for c in comments]
    lines += [format_element(p) for p in A.elements]
    return "\n".join(lines) + "\n"


def write_pts(path, A: PointSet, comments: Sequence[str] = ()):
    Path(path).write_text(format_pts(A, comments))
