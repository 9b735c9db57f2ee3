# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled reduction kernels; same signatures and results as `_kernels_py`.

Term codes can exceed 64 bits, so they stay Python ints.  Coefficient
arithmetic is done in C, and `rref_mod_p` runs entirely on a C buffer.
"""

from heapq import heapify, heappop, heappush
from libc.stdlib cimport malloc, free


cdef inline long long _mod(long long a, long long p) noexcept:
    a %= p
    return a + p if a < 0 else a


def reduce_full(red, dict work, dict rep):
    cdef long long p = red.p
    cdef long long c, a, old, v
    coder = red.coder
    REV = coder.REVMASK
    G = coder.GUARD
    cdef int S_POS = coder.S_POS
    PM = coder.POSMASK
    ideal = red.ideal
    cdef tuple ileads = tuple(ideal.leads) if ideal is not None else ()
    itails = ideal.tails if ideal is not None else None
    cdef dict leads = red.leads
    tails = red.tails
    lead_codes = red.lead_codes
    reps = red.reps
    cdef list heap = [-k for k in work]
    heapify(heap)
    cdef dict rem = {}
    cdef dict rmap
    while heap:
        t = -heappop(heap)
        c = work.pop(t, 0)
        if c == 0:
            continue
        Rt = t & REV
        reducer = None
        for Rs, idx in ileads:
            if not ((Rs - Rt) & G):
                reducer = itails[idx]
                s = t
                break
        else:
            lst = leads.get((t >> S_POS) & PM)
            if lst:
                for Rs, idx in lst:
                    if not ((Rs - Rt) & G):
                        s = t - lead_codes[idx]
                        reducer = tails[idx]
                        if rep is not None:
                            rmap = reps[idx]
                            for k, aa in rmap.items():
                                a = aa
                                kk = k + s
                                o = rep.get(kk)
                                if o is None:
                                    rep[kk] = _mod(-c * a, p)
                                else:
                                    old = o
                                    v = _mod(old - c * a, p)
                                    if v:
                                        rep[kk] = v
                                    else:
                                        del rep[kk]
                        break
        if reducer is None:
            rem[t] = c
            continue
        for k, aa in reducer:
            a = aa
            kk = k + s
            o = work.get(kk)
            if o is None:
                work[kk] = _mod(-c * a, p)
                heappush(heap, -kk)
            else:
                old = o
                v = _mod(old - c * a, p)
                if v:
                    work[kk] = v
                else:
                    del work[kk]
    return rem


def reduce_ideal(ideal, REV, G, long long p, dict work):
    """Reduce every term of work modulo the quotient ideal only."""
    cdef long long c, a, old, v
    cdef tuple ileads = tuple(ideal.leads)
    itails = ideal.tails
    cdef list heap = [-k for k in work]
    heapify(heap)
    cdef dict rem = {}
    while heap:
        t = -heappop(heap)
        c = work.pop(t, 0)
        if c == 0:
            continue
        Rt = t & REV
        for Rs, idx in ileads:
            if not ((Rs - Rt) & G):
                for k, aa in itails[idx]:
                    a = aa
                    kk = t + k
                    o = work.get(kk)
                    if o is None:
                        work[kk] = _mod(-c * a, p)
                        heappush(heap, -kk)
                    else:
                        old = o
                        v = _mod(old - c * a, p)
                        if v:
                            work[kk] = v
                        else:
                            del work[kk]
                break
        else:
            rem[t] = c
    return rem


cdef long long _inverse(long long a, long long p) noexcept:
    cdef long long r = 1, e = p - 2
    a %= p
    while e:
        if e & 1:
            r = (r * a) % p
        a = (a * a) % p
        e >>= 1
    return r


def rref_mod_p(list rows, Py_ssize_t ncols, long long p):
    """Row-reduce dense rows mod p in place; return pivot columns."""
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0 or ncols == 0:
        return []
    cdef long long *m = <long long *> malloc(nrows * ncols * sizeof(long long))
    if m == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, j, col, r = 0, piv
    cdef long long f, inv, tmp
    cdef list pivots = []
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                m[i * ncols + j] = row[j]
        for col in range(ncols):
            piv = -1
            for i in range(r, nrows):
                if m[i * ncols + col]:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != r:
                for j in range(ncols):
                    tmp = m[r * ncols + j]
                    m[r * ncols + j] = m[piv * ncols + j]
                    m[piv * ncols + j] = tmp
            inv = _inverse(m[r * ncols + col], p)
            if inv != 1:
                for j in range(col, ncols):
                    m[r * ncols + j] = (m[r * ncols + j] * inv) % p
            for i in range(nrows):
                if i != r:
                    f = m[i * ncols + col]
                    if f:
                        for j in range(col, ncols):
                            if m[r * ncols + j]:
                                m[i * ncols + j] = _mod(m[i * ncols + j] - f * m[r * ncols + j], p)
            pivots.append(col)
            r += 1
            if r == nrows:
                break
        for i in range(nrows):
            rows[i] = [m[i * ncols + j] for j in range(ncols)]
    finally:
        free(m)
    return pivots
