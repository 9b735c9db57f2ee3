"""Pure-Python reduction kernels (reference implementation and fallback).

Vectors are dicts from packed term codes to coefficients in [0, p).  The
compiled module `_kernels` exports the same functions with the same semantics.
"""

from heapq import heapify, heappop, heappush


def reduce_full(red, work, rep):
    p = red.p
    coder = red.coder
    REV = coder.REVMASK
    G = coder.GUARD
    S_POS = coder.S_POS
    PM = coder.POSMASK
    ideal = red.ideal
    ileads = ideal.leads if ideal is not None else ()
    itails = ideal.tails if ideal is not None else None
    leads = red.leads
    tails = red.tails
    lead_codes = red.lead_codes
    reps = red.reps
    heap = [-k for k in work]
    heapify(heap)
    rem = {}
    while heap:
        t = -heappop(heap)
        c = work.pop(t, 0)
        if not c:
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
                            for k, a in reps[idx].items():
                                kk = k + s
                                old = rep.get(kk)
                                if old is None:
                                    rep[kk] = (-c * a) % p
                                else:
                                    v = (old - c * a) % p
                                    if v:
                                        rep[kk] = v
                                    else:
                                        del rep[kk]
                        break
        if reducer is None:
            rem[t] = c
            continue
        for k, a in reducer:
            kk = k + s
            old = work.get(kk)
            if old is None:
                work[kk] = (-c * a) % p
                heappush(heap, -kk)
            else:
                v = (old - c * a) % p
                if v:
                    work[kk] = v
                else:
                    del work[kk]
    return rem


def reduce_ideal(ideal, REV, G, p, work):
    """Reduce every term of work modulo the quotient ideal only."""
    ileads = ideal.leads
    itails = ideal.tails
    heap = [-k for k in work]
    heapify(heap)
    rem = {}
    while heap:
        t = -heappop(heap)
        c = work.pop(t, 0)
        if not c:
            continue
        Rt = t & REV
        for Rs, idx in ileads:
            if not ((Rs - Rt) & G):
                for k, a in itails[idx]:
                    kk = t + k
                    old = work.get(kk)
                    if old is None:
                        work[kk] = (-c * a) % p
                        heappush(heap, -kk)
                    else:
                        v = (old - c * a) % p
                        if v:
                            work[kk] = v
                        else:
                            del work[kk]
                break
        else:
            rem[t] = c
    return rem


def rref_mod_p(rows, ncols, p):
    """Row-reduce a list of dense int rows mod p in place; return pivot columns.

    Rows are lists of ints in [0, p); the returned rows are in reduced echelon
    form (only the first len(pivots) rows are nonzero).
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for col in range(ncols):
        piv = None
        for i in range(r, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = pow(prow[col], p - 2, p)
        if inv != 1:
            for j in range(col, ncols):
                prow[j] = (prow[j] * inv) % p
        for i in range(nrows):
            if i != r:
                row = rows[i]
                f = row[col]
                if f:
                    for j in range(col, ncols):
                        if prow[j]:
                            row[j] = (row[j] - f * prow[j]) % p
        pivots.append(col)
        r += 1
        if r == nrows:
            break
    return pivots
