# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; see ``_kernels_py`` for the reference implementation."""

from libc.stdlib cimport malloc, calloc, free
from libc.stdint cimport int64_t


cdef void _rec(int t, int n, int width, int bound, int exp,
               const int* rows, const int* strict, int64_t* counts) noexcept nogil:
    cdef int i, e, nb
    cdef const int* row = rows + t * width
    cdef bint last = t == n - 1
    cdef int drop = 0 if last else strict[t]
    i = bound
    while i >= 1:
        e = row[i - 1]
        if e >= 0:
            if last:
                counts[exp + e] += 1
            else:
                nb = i - drop
                if nb >= 1:
                    _rec(t + 1, n, width, nb, exp + e, rows, strict, counts)
        i -= 1


def fundamental_counts(colors, strict, table):
    """Count weakly decreasing index sequences by total q-exponent."""
    cdef int n = len(colors)
    if n == 0:
        return [1]
    cdef int width = len(table[0]) if len(table) else 0
    cdef int t, i, e, max_e = 0, top
    for row in table:
        for e in row:
            if e > max_e:
                max_e = e
    top = max_e * n + 1
    cdef int* rows = <int*>malloc(n * width * sizeof(int) + 1)
    cdef int* st = <int*>malloc(n * sizeof(int) + 1)
    cdef int64_t* counts = <int64_t*>calloc(top, sizeof(int64_t))
    if rows == NULL or st == NULL or counts == NULL:
        free(rows); free(st); free(counts)
        raise MemoryError()
    try:
        for t in range(n):
            row = table[colors[t]]
            for i in range(width):
                rows[t * width + i] = row[i]
            st[t] = strict[t] if t < n - 1 else 0
        with nogil:
            _rec(0, n, width, width, 0, rows, st, counts)
        while top > 0 and counts[top - 1] == 0:
            top -= 1
        out = [counts[e] for e in range(top)]
    finally:
        free(rows)
        free(st)
        free(counts)
    return out
