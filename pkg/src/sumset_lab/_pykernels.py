"""Pure numpy implementations of the hot loops (fallback for ``_ckernels``)."""

from itertools import combinations

import numpy as np

DENSE_LIMIT = 1 << 28
_CHUNK = 1 << 22  # pair codes materialised per block


def _row_block(n_cols):
    return max(1, _CHUNK // max(1, n_cols))


def _codes_block(a, b, moduli, lo, stride):
    s = a[:, None, :] + b[None, :, :]
    finite = moduli > 0
    if finite.any():
        m = np.where(finite, moduli, 1)
        s = np.where(finite, s % m, s)
    return ((s - lo) * stride).sum(axis=2)


def sumset_codes(a, b, moduli, lo, stride, space):
    a, b = np.asarray(a, np.int64), np.asarray(b, np.int64)
    moduli, lo, stride = (np.asarray(v, np.int64) for v in (moduli, lo, stride))
    step = _row_block(len(b))
    if space <= DENSE_LIMIT:
        seen = np.zeros(int(space), dtype=bool)
        for r in range(0, len(a), step):
            seen[_codes_block(a[r:r + step], b, moduli, lo, stride).ravel()] = True
        return np.flatnonzero(seen).astype(np.int64)
    parts = [np.unique(_codes_block(a[r:r + step], b, moduli, lo, stride))
             for r in range(0, len(a), step)]
    if not parts:
        return np.zeros(0, dtype=np.int64)
    return np.unique(np.concatenate(parts))


def first_hits(a, b, jmin, moduli, lo, stride, space):
    a, b = np.asarray(a, np.int64), np.asarray(b, np.int64)
    jmin = np.asarray(jmin, np.int64)
    moduli, lo, stride = (np.asarray(v, np.int64) for v in (moduli, lo, stride))
    m = len(b)
    step = _row_block(m)
    dense = space <= DENSE_LIMIT
    seen = np.zeros(int(space), dtype=bool) if dense else np.zeros(0, dtype=np.int64)
    out_c, out_i, out_j = [], [], []
    cols = np.arange(m)
    for r in range(0, len(a), step):
        block = _codes_block(a[r:r + step], b, moduli, lo, stride)
        valid = cols[None, :] >= jmin[r:r + step, None]
        flat = block.ravel()
        pos = np.flatnonzero(valid.ravel())
        codes = flat[pos]
        uniq, first = np.unique(codes, return_index=True)
        keep = np.sort(first)
        codes, pos = codes[keep], pos[keep]
        if dense:
            fresh = ~seen[codes]
            seen[codes[fresh]] = True
        else:
            fresh = ~np.isin(codes, seen)
            seen = np.union1d(seen, codes[fresh])
        codes, pos = codes[fresh], pos[fresh]
        out_c.append(codes)
        out_i.append(pos // m + r)
        out_j.append(pos % m)
    if not out_c:
        e = np.zeros(0, dtype=np.int64)
        return e, e.copy(), e.copy()
    return (np.concatenate(out_c).astype(np.int64),
            np.concatenate(out_i).astype(np.int64),
            np.concatenate(out_j).astype(np.int64))


def _lex_less(x, y):
    diff = x ^ y
    return diff != 0 and (x & (diff & -diff)) != 0


def _popcount(words):
    return np.bitwise_count(words).sum(axis=-1)


def min_union(masks, size):
    masks = np.ascontiguousarray(masks, dtype=np.uint64)
    n = masks.shape[0]
    if n > 63:
        raise ValueError("min_union supports at most 63 elements")
    if size < 0 or size > n:
        raise ValueError("size out of range")
    if size == 0:
        empty = ~masks.any(axis=1)
        return 0, int(sum(1 << int(i) for i in np.flatnonzero(empty)))
    best, best_cl, best_cl_size = None, 0, -1
    combos = combinations(range(n), size)
    while True:
        block = np.fromiter(
            (i for c in _take(combos, 1 << 15) for i in c), dtype=np.int64
        )
        if not block.size:
            break
        block = block.reshape(-1, size)
        unions = np.bitwise_or.reduce(masks[block], axis=1)
        counts = _popcount(unions)
        low = int(counts.min())
        if best is not None and low > best:
            continue
        for row in np.flatnonzero(counts == low):
            u = unions[row]
            inside = ~((masks & ~u[None, :]).any(axis=1))
            cl = int(sum(1 << int(i) for i in np.flatnonzero(inside)))
            cl_size = int(inside.sum())
            if best is None or low < best:
                best, best_cl, best_cl_size = low, cl, cl_size
            elif cl_size > best_cl_size or (cl_size == best_cl_size and _lex_less(cl, best_cl)):
                best_cl, best_cl_size = cl, cl_size
    return int(best), best_cl


def _take(it, k):
    for _, item in zip(range(k), it):
        yield item


def _binom3(k):
    return (k + 2) * (k + 1) * k // 6


def window_scan(reps, starts, n, kmin, kmax):
    reps = np.asarray(reps, dtype=np.uint64)
    starts = np.asarray(starts, dtype=np.int64)
    if n > 62:
        raise ValueError("window_scan supports at most 62 elements")
    kmin, kmax = max(kmin, 1), min(kmax, n)
    best, best_cnt, best_k = -1, -1, 0
    groups = len(starts) - 1
    for k in range(kmin, kmax + 1):
        combos = combinations(range(n), k)
        while True:
            ys = np.fromiter(
                (sum(1 << i for i in c) for c in _take(combos, 1 << 12)), dtype=np.uint64
            )
            if not ys.size:
                break
            if groups:
                inside = (reps[None, :] & ~ys[:, None]) == 0
                counts = np.logical_or.reduceat(inside, starts[:-1], axis=1).sum(axis=1)
            else:
                counts = np.zeros(len(ys), dtype=np.int64)
            top = int(counts.max())
            for row in np.flatnonzero(counts == top):
                y, cnt = int(ys[row]), top
                if best_cnt < 0:
                    better = True
                else:
                    lhs, rhs = cnt * _binom3(best_k), best_cnt * _binom3(k)
                    if lhs != rhs:
                        better = lhs > rhs
                    elif k != best_k:
                        better = k > best_k
                    else:
                        better = _lex_less(y, best)
                if better:
                    best, best_cnt, best_k = y, cnt, k
    if best_cnt < 0:
        return -1, 0
    return best, best_cnt
