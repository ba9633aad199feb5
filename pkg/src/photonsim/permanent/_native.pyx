# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled permanent kernels: Gray-code Glynn/Ryser and the batched
leave-one-column-out permanents used by the sequential sampler.

Accumulation runs in ``long double complex`` so partial sums keep a few
guard digits beyond double; results are returned as complex128.
"""

import numpy as np

from libc.stdlib cimport calloc, free

ctypedef double complex dcomplex
ctypedef long double complex lcomplex

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil
    int __builtin_popcountll(unsigned long long) nogil

cdef extern from "<math.h>":
    long double ldexpl(long double, int) nogil


cpdef dcomplex glynn(double complex[:, ::1] a):
    """Glynn formula with Gray-code sign-vector updates, O(n 2^n)."""
    cdef Py_ssize_t n = a.shape[0]
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return a[0, 0]
    cdef Py_ssize_t i, j, row
    cdef unsigned long long k, count = 1ULL << (n - 1)
    cdef lcomplex total = 0
    cdef lcomplex prod
    cdef double sign = 1.0
    cdef lcomplex *colsums = <lcomplex*> calloc(n, sizeof(lcomplex))
    if colsums == NULL:
        raise MemoryError()
    try:
        for j in range(n):
            for i in range(n):
                colsums[j] = colsums[j] + a[i, j]
        with nogil:
            for k in range(count):
                prod = sign
                for j in range(n):
                    prod = prod * colsums[j]
                total = total + prod
                if k + 1 < count:
                    # delta_0 stays +1; Gray bit b toggles delta_{b+1}
                    row = __builtin_ctzll(k + 1) + 1
                    if ((k + 1) ^ ((k + 1) >> 1)) >> (row - 1) & 1:
                        for j in range(n):
                            colsums[j] = colsums[j] - 2 * a[row, j]
                    else:
                        for j in range(n):
                            colsums[j] = colsums[j] + 2 * a[row, j]
                    sign = -sign
        total = total * ldexpl(1.0, <int> (1 - n))
        return <dcomplex> total
    finally:
        free(colsums)


cpdef dcomplex ryser_range(double complex[:, ::1] a,
                           unsigned long long start,
                           unsigned long long stop):
    """Signed Ryser partial sum over Gray-coded subset indices [start, stop).

    Chunks of the fixed grid summed in index order reconstruct Perm(A)
    exactly as the sequential loop would, so the split is thread-safe and
    bit-reproducible for any worker count.
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef unsigned long long k, g
    cdef Py_ssize_t i, j, b
    cdef lcomplex total = 0
    cdef lcomplex prod
    cdef int size_par, n_par = <int> (n & 1)
    if start >= stop:
        return 0j
    cdef lcomplex *rowsums = <lcomplex*> calloc(n, sizeof(lcomplex))
    if rowsums == NULL:
        raise MemoryError()
    try:
        g = start ^ (start >> 1)
        for j in range(n):
            if (g >> j) & 1:
                for i in range(n):
                    rowsums[i] = rowsums[i] + a[i, j]
        size_par = __builtin_popcountll(g) & 1
        with nogil:
            for k in range(start, stop):
                if (n_par ^ size_par) == 0:
                    prod = 1.0
                else:
                    prod = -1.0
                for i in range(n):
                    prod = prod * rowsums[i]
                total = total + prod
                if k + 1 < stop:
                    b = __builtin_ctzll(k + 1)
                    g = g ^ (1ULL << b)
                    if (g >> b) & 1:
                        for i in range(n):
                            rowsums[i] = rowsums[i] + a[i, b]
                    else:
                        for i in range(n):
                            rowsums[i] = rowsums[i] - a[i, b]
                    size_par = size_par ^ 1
        return <dcomplex> total
    finally:
        free(rowsums)


cpdef subpermanents(double complex[:, ::1] bmat):
    """All k permanents of a (k-1) x k matrix with one column removed.

    One Glynn sweep over the shared rows; the per-column products use
    prefix/suffix arrays, so the whole batch costs O(k 2^k).
    """
    cdef Py_ssize_t rows = bmat.shape[0]
    cdef Py_ssize_t k = bmat.shape[1]
    if rows != k - 1:
        raise ValueError("expected a (k-1) x k matrix")
    out = np.empty(k, dtype=np.complex128)
    cdef dcomplex[::1] out_v = out
    if k == 1:
        out_v[0] = 1.0
        return out
    cdef Py_ssize_t i, j, row
    cdef unsigned long long t, count = 1ULL << (rows - 1)
    cdef double sign = 1.0
    cdef lcomplex *colsums = <lcomplex*> calloc(k, sizeof(lcomplex))
    cdef lcomplex *prefix = <lcomplex*> calloc(k, sizeof(lcomplex))
    cdef lcomplex *suffix = <lcomplex*> calloc(k, sizeof(lcomplex))
    cdef lcomplex *accum = <lcomplex*> calloc(k, sizeof(lcomplex))
    if colsums == NULL or prefix == NULL or suffix == NULL or accum == NULL:
        free(colsums); free(prefix); free(suffix); free(accum)
        raise MemoryError()
    try:
        for j in range(k):
            for i in range(rows):
                colsums[j] = colsums[j] + bmat[i, j]
        with nogil:
            for t in range(count):
                prefix[0] = 1.0
                for j in range(1, k):
                    prefix[j] = prefix[j - 1] * colsums[j - 1]
                suffix[k - 1] = 1.0
                for j in range(k - 2, -1, -1):
                    suffix[j] = suffix[j + 1] * colsums[j + 1]
                for j in range(k):
                    accum[j] = accum[j] + sign * prefix[j] * suffix[j]
                if t + 1 < count:
                    row = __builtin_ctzll(t + 1) + 1
                    if ((t + 1) ^ ((t + 1) >> 1)) >> (row - 1) & 1:
                        for j in range(k):
                            colsums[j] = colsums[j] - 2 * bmat[row, j]
                    else:
                        for j in range(k):
                            colsums[j] = colsums[j] + 2 * bmat[row, j]
                    sign = -sign
        for j in range(k):
            out_v[j] = <dcomplex> (accum[j] * ldexpl(1.0, <int> (1 - rows)))
        return out
    finally:
        free(colsums)
        free(prefix)
        free(suffix)
        free(accum)
