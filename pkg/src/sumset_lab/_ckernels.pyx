# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled hot loops.  Same signatures and results as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libcpp.vector cimport vector
from libcpp.unordered_set cimport unordered_set
from libcpp.algorithm cimport sort, unique

cnp.import_array()

DENSE_LIMIT = 1 << 28
cdef Py_ssize_t PAIR_SORT_LIMIT = 1 << 23

cdef extern from *:
    int popcount64 "__builtin_popcountll"(unsigned long long) nogil
    int ctz64 "__builtin_ctzll"(unsigned long long) nogil


cdef inline int64_t _code(const int64_t[:, ::1] a, const int64_t[:, ::1] b,
                          Py_ssize_t i, Py_ssize_t j, const int64_t[::1] mod,
                          const int64_t[::1] lo, const int64_t[::1] stride,
                          Py_ssize_t d) noexcept nogil:
    cdef int64_t code = 0, c
    cdef Py_ssize_t t
    for t in range(d):
        c = a[i, t] + b[j, t]
        if mod[t] > 0:
            if c >= mod[t]:
                c -= mod[t]
        code += (c - lo[t]) * stride[t]
    return code


def sumset_codes(const int64_t[:, ::1] a, const int64_t[:, ::1] b,
                 const int64_t[::1] moduli, const int64_t[::1] lo,
                 const int64_t[::1] stride, int64_t space):
    """Sorted distinct codes of all pairwise sums a[i] + b[j]."""
    cdef Py_ssize_t n = a.shape[0], m = b.shape[0], d = a.shape[1]
    cdef Py_ssize_t i, j, w, nwords
    cdef int64_t code
    cdef uint64_t word
    cdef vector[uint64_t] bits
    cdef unordered_set[int64_t] seen
    cdef vector[int64_t] out
    if space <= DENSE_LIMIT:
        nwords = (space + 63) // 64
        bits.resize(nwords, 0)
        with nogil:
            for i in range(n):
                for j in range(m):
                    code = _code(a, b, i, j, moduli, lo, stride, d)
                    bits[code >> 6] |= (<uint64_t>1) << (code & 63)
            for w in range(nwords):
                word = bits[w]
                while word:
                    out.push_back(w * 64 + ctz64(word))
                    word &= word - 1
        return np.asarray(<int64_t[:out.size()]> out.data(), dtype=np.int64).copy() \
            if out.size() else np.zeros(0, dtype=np.int64)
    with nogil:
        if n * m <= PAIR_SORT_LIMIT:
            # few pairs: sort them all and drop repeats
            out.reserve(n * m)
            for i in range(n):
                for j in range(m):
                    out.push_back(_code(a, b, i, j, moduli, lo, stride, d))
            sort(out.begin(), out.end())
            out.erase(unique(out.begin(), out.end()), out.end())
        else:
            for i in range(n):
                for j in range(m):
                    seen.insert(_code(a, b, i, j, moduli, lo, stride, d))
            out.assign(seen.begin(), seen.end())
            sort(out.begin(), out.end())
    res = np.empty(out.size(), dtype=np.int64)
    cdef int64_t[::1] vr = res
    for w in range(<Py_ssize_t>out.size()):
        vr[w] = out[w]
    return res


def first_hits(const int64_t[:, ::1] a, const int64_t[:, ::1] b,
               const int64_t[::1] jmin, const int64_t[::1] moduli,
               const int64_t[::1] lo, const int64_t[::1] stride, int64_t space):
    """Scan pairs (i, j >= jmin[i]) row-major; keep the first pair hitting each sum.

    Returns (codes, i, j) in discovery order.
    """
    cdef Py_ssize_t n = a.shape[0], m = b.shape[0], d = a.shape[1]
    cdef Py_ssize_t i, j
    cdef int64_t code
    cdef bint dense = space <= DENSE_LIMIT
    cdef vector[uint64_t] bits
    cdef unordered_set[int64_t] seen
    cdef vector[int64_t] codes, ii, jj
    if dense:
        bits.resize((space + 63) // 64, 0)
    with nogil:
        for i in range(n):
            for j in range(jmin[i], m):
                code = _code(a, b, i, j, moduli, lo, stride, d)
                if dense:
                    if bits[code >> 6] & ((<uint64_t>1) << (code & 63)):
                        continue
                    bits[code >> 6] |= (<uint64_t>1) << (code & 63)
                else:
                    if not seen.insert(code).second:
                        continue
                codes.push_back(code)
                ii.push_back(i)
                jj.push_back(j)
    k = codes.size()
    out_c = np.empty(k, dtype=np.int64)
    out_i = np.empty(k, dtype=np.int64)
    out_j = np.empty(k, dtype=np.int64)
    cdef int64_t[::1] vc = out_c, vi = out_i, vj = out_j
    cdef Py_ssize_t t
    for t in range(<Py_ssize_t>k):
        vc[t] = codes[t]
        vi[t] = ii[t]
        vj[t] = jj[t]
    return out_c, out_i, out_j


cdef inline bint _lex_less(uint64_t x, uint64_t y) noexcept nogil:
    # equal-size index sets: x precedes y iff the least index of x ^ y is in x
    cdef uint64_t diff = x ^ y
    return diff != 0 and (x & (diff & (~diff + 1))) != 0


def min_union(const uint64_t[:, ::1] masks, int size):
    """Minimise |union of masks[i], i in X| over |X| = size.

    Among optimal X, their closures {i : masks[i] within the union} are
    compared: larger first, then lexicographically smallest.
    Returns (best_count, closure_bitmask).
    """
    cdef Py_ssize_t n = masks.shape[0], W = masks.shape[1]
    if n > 63:
        raise ValueError("min_union supports at most 63 elements")
    if size < 0 or size > n:
        raise ValueError("size out of range")
    cdef vector[uint64_t] stack
    stack.resize((size + 1) * W, 0)
    cdef vector[int] choice
    choice.resize(size + 1, 0)
    cdef int64_t best = -1, cnt
    cdef uint64_t best_cl = 0, cl
    cdef int best_cl_size = -1, cl_size
    cdef int depth = 0, idx, t, w
    cdef bint sub
    cdef Py_ssize_t base
    with nogil:
        if size == 0:
            best = 0
            for t in range(n):
                sub = True
                for w in range(W):
                    if masks[t, w] != 0:
                        sub = False
                        break
                if sub:
                    best_cl |= (<uint64_t>1) << t
        else:
            choice[0] = 0
            depth = 0
            while depth >= 0:
                idx = choice[depth]
                if idx > n - (size - depth):
                    depth -= 1
                    if depth >= 0:
                        choice[depth] += 1
                    continue
                base = (depth + 1) * W
                cnt = 0
                for w in range(W):
                    stack[base + w] = stack[depth * W + w] | masks[idx, w]
                    cnt += popcount64(stack[base + w])
                if best >= 0 and cnt > best:
                    choice[depth] += 1
                    continue
                if depth + 1 == size:
                    cl = 0
                    cl_size = 0
                    for t in range(n):
                        sub = True
                        for w in range(W):
                            if masks[t, w] & ~stack[base + w]:
                                sub = False
                                break
                        if sub:
                            cl |= (<uint64_t>1) << t
                            cl_size += 1
                    if best < 0 or cnt < best:
                        best = cnt
                        best_cl = cl
                        best_cl_size = cl_size
                    elif cl_size > best_cl_size or (cl_size == best_cl_size and _lex_less(cl, best_cl)):
                        best_cl = cl
                        best_cl_size = cl_size
                    choice[depth] += 1
                else:
                    depth += 1
                    choice[depth] = idx + 1
    return int(best), int(best_cl)


cdef inline int64_t _binom3(int64_t k) noexcept nogil:
    return (k + 2) * (k + 1) * k // 6


def window_scan(const uint64_t[::1] reps, const int64_t[::1] starts, int n,
                int kmin, int kmax):
    """Best Y among subsets of range(n) with kmin <= |Y| <= kmax.

    reps holds index bitmasks of representing triples grouped by sum
    (group g spans reps[starts[g]:starts[g+1]]); |3Y| counts groups with a
    representative inside Y.  Maximises |3Y| / C(|Y|+2, 3), then |Y|, then
    lexicographic order.  Returns (mask, count), mask = -1 if the window is empty.
    """
    if n > 62:
        raise ValueError("window_scan supports at most 62 elements")
    cdef Py_ssize_t g, G = starts.shape[0] - 1, r
    cdef int k
    cdef uint64_t y, notY, c, top
    cdef int64_t cnt, best_cnt = -1, best_k = 0
    cdef uint64_t best = 0
    cdef bint better
    if kmin < 1:
        kmin = 1
    if kmax > n:
        kmax = n
    with nogil:
        for k in range(kmin, kmax + 1):
            y = ((<uint64_t>1) << k) - 1
            top = (<uint64_t>1) << n
            while y < top:
                notY = ~y
                cnt = 0
                for g in range(G):
                    for r in range(starts[g], starts[g + 1]):
                        if (reps[r] & notY) == 0:
                            cnt += 1
                            break
                if best_cnt < 0:
                    better = True
                else:
                    # cnt / C(k) vs best_cnt / C(best_k)
                    if cnt * _binom3(best_k) != best_cnt * _binom3(k):
                        better = cnt * _binom3(best_k) > best_cnt * _binom3(k)
                    elif k != best_k:
                        better = k > best_k
                    else:
                        better = _lex_less(y, best)
                if better:
                    best = y
                    best_cnt = cnt
                    best_k = k
                # Gosper's hack: next mask with the same popcount
                c = y & (~y + 1)
                y = ((((y + c) ^ y) >> 2) // c) | (y + c)
    if best_cnt < 0:
        return -1, 0
    return int(best), int(best_cnt)
