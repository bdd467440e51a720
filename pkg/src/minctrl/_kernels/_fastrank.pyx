# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer rank kernel (fraction-free elimination).

The int64 path runs each pivot step at C speed (cross-multiplications in
__int128) behind an overflow guard; when a step would overflow, the matrix
state is handed to an object-mode continuation that keeps arbitrary-precision
Python ints under typed loop indices. Results are identical to
minctrl._kernels.pure.integer_rank.
"""

from libc.stdlib cimport malloc, free
from libc.string cimport memcpy

cdef extern from *:
    ctypedef long long int128 "__int128"

# Entries kept below 2**62: products of two guarded values fit __int128 and
# every stored quotient fits int64.
cdef long long GUARD = 4611686018427387904


def integer_rank(rows):
    """Rank of an integer matrix given as a list of row lists."""
    cdef Py_ssize_t nrows = len(rows)
    if nrows == 0:
        return 0
    cdef Py_ssize_t ncols = len(rows[0])
    cdef long long *m = <long long *> malloc(nrows * ncols * sizeof(long long))
    cdef long long *snap = <long long *> malloc(nrows * ncols * sizeof(long long))
    if m == NULL or snap == NULL:
        free(m)
        free(snap)
        raise MemoryError()
    cdef Py_ssize_t i, j, col, r0, piv
    cdef long long v, a, best, pval, f, t, prev
    cdef int128 wide
    cdef bint overflow = False
    try:
        for i in range(nrows):
            row = rows[i]
            for j in range(ncols):
                try:
                    v = row[j]
                except OverflowError:
                    return _rank_object([list(r) for r in rows], 1, 0, 0)
                if v > GUARD or v < -GUARD:
                    return _rank_object([list(r) for r in rows], 1, 0, 0)
                m[i * ncols + j] = v
        prev = 1
        r0 = 0
        for col in range(ncols):
            if r0 >= nrows:
                break
            piv = -1
            best = 0
            for i in range(r0, nrows):
                v = m[i * ncols + col]
                if v != 0:
                    a = v if v > 0 else -v
                    if a > best:
                        best = a
                        piv = i
            if piv < 0:
                continue
            if piv != r0:
                for j in range(col, ncols):
                    t = m[r0 * ncols + j]
                    m[r0 * ncols + j] = m[piv * ncols + j]
                    m[piv * ncols + j] = t
            pval = m[r0 * ncols + col]
            if r0 + 1 < nrows:
                memcpy(
                    snap + (r0 + 1) * ncols,
                    m + (r0 + 1) * ncols,
                    (nrows - r0 - 1) * ncols * sizeof(long long),
                )
            overflow = False
            for i in range(r0 + 1, nrows):
                f = m[i * ncols + col]
                if f != 0:
                    for j in range(col + 1, ncols):
                        wide = (<int128> pval) * m[i * ncols + j] \
                            - (<int128> f) * m[r0 * ncols + j]
                        wide = wide / prev  # exact Bareiss division
                        if wide > GUARD or wide < -GUARD:
                            overflow = True
                            break
                        m[i * ncols + j] = <long long> wide
                    if overflow:
                        break
                    m[i * ncols + col] = 0
                elif pval != prev:
                    # zero-pivot-column rows still rescale by pval/prev
                    # (Sylvester identity with f = 0)
                    for j in range(col + 1, ncols):
                        wide = ((<int128> pval) * m[i * ncols + j]) / prev
                        if wide > GUARD or wide < -GUARD:
                            overflow = True
                            break
                        m[i * ncols + j] = <long long> wide
                    if overflow:
                        break
            if overflow:
                # roll back the half-finished step, continue with big ints
                if r0 + 1 < nrows:
                    memcpy(
                        m + (r0 + 1) * ncols,
                        snap + (r0 + 1) * ncols,
                        (nrows - r0 - 1) * ncols * sizeof(long long),
                    )
                state = [
                    [m[i * ncols + j] for j in range(ncols)]
                    for i in range(nrows)
                ]
                return _rank_object(state, prev, r0, col)
            prev = pval
            r0 += 1
        return r0
    finally:
        free(m)
        free(snap)


def _rank_object(list m, object start_prev, Py_ssize_t start_r0,
                 Py_ssize_t start_col):
    cdef Py_ssize_t nrows = len(m)
    cdef Py_ssize_t ncols = len(<list> m[0])
    cdef list prow, row
    cdef Py_ssize_t i, j, col, r0, piv
    cdef object v, a, best, pval, f, prev
    prev = start_prev
    r0 = start_r0
    for col in range(start_col, ncols):
        if r0 >= nrows:
            break
        piv = -1
        best = 0
        for i in range(r0, nrows):
            v = (<list> m[i])[col]
            if v:
                a = -v if v < 0 else v
                if a > best:
                    best = a
                    piv = i
        if piv < 0:
            continue
        if piv != r0:
            m[r0], m[piv] = m[piv], m[r0]
        prow = <list> m[r0]
        pval = prow[col]
        for i in range(r0 + 1, nrows):
            row = <list> m[i]
            f = row[col]
            if f:
                for j in range(col + 1, ncols):
                    row[j] = (pval * row[j] - f * prow[j]) // prev
                row[col] = 0
            elif pval != prev:
                for j in range(col + 1, ncols):
                    row[j] = (pval * row[j]) // prev
        prev = pval
        r0 += 1
    return r0
