# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: fused histogram binning and max-norm neighbour counts.

Must stay semantically bit-identical to ``numpy_backend``; see that module's
docstring. Only integer counts and exact distances leave this module.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport floor

cnp.import_array()


cdef inline long _bin_index(double x, double lo, double scale, long k) nogil:
    cdef long idx = <long>floor((x - lo) * scale)
    if idx < 0:
        idx = 0
    elif idx >= k:
        idx = k - 1
    return idx


def hist2d(double[::1] u, double[::1] v,
           double lo_u, double hi_u, double lo_v, double hi_v,
           long k_u, long k_v):
    """Joint counts of (u, v) on a uniform k_u x k_v grid."""
    cdef Py_ssize_t n = u.shape[0]
    counts_arr = np.zeros((k_u, k_v), dtype=np.int64)
    cdef long[:, ::1] counts = counts_arr
    cdef double scale_u = 0.0, scale_v = 0.0
    cdef bint flat_u = hi_u <= lo_u
    cdef bint flat_v = hi_v <= lo_v
    cdef Py_ssize_t i
    cdef long iu, iv
    if not flat_u:
        scale_u = k_u / (hi_u - lo_u)
    if not flat_v:
        scale_v = k_v / (hi_v - lo_v)
    with nogil:
        for i in range(n):
            iu = 0 if flat_u else _bin_index(u[i], lo_u, scale_u, k_u)
            iv = 0 if flat_v else _bin_index(v[i], lo_v, scale_v, k_v)
            counts[iu, iv] += 1
    return counts_arr


def hist1d(double[::1] u, double lo, double hi, long k):
    """Counts of u on a uniform k-bin grid."""
    cdef Py_ssize_t n = u.shape[0]
    counts_arr = np.zeros(k, dtype=np.int64)
    cdef long[::1] counts = counts_arr
    cdef bint flat = hi <= lo
    cdef double scale = 0.0
    cdef Py_ssize_t i
    if not flat:
        scale = k / (hi - lo)
    with nogil:
        for i in range(n):
            counts[0 if flat else _bin_index(u[i], lo, scale, k)] += 1
    return counts_arr


def chebyshev_kth_radius(double[:, ::1] data, long k):
    """Max-norm distance from each row to its k-th nearest other row."""
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t d = data.shape[1]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    best_arr = np.empty(k, dtype=np.float64)
    cdef double[::1] best = best_arr
    cdef Py_ssize_t i, j, c, m, pos
    cdef double dist, diff, worst
    with nogil:
        for i in range(n):
            m = 0  # entries of `best` filled so far, ascending
            worst = 0.0
            for j in range(n):
                if j == i:
                    continue
                dist = 0.0
                if m == k:
                    # early abort once the partial max exceeds the k-th best
                    for c in range(d):
                        diff = data[i, c] - data[j, c]
                        if diff < 0:
                            diff = -diff
                        if diff > dist:
                            dist = diff
                            if dist >= worst:
                                break
                    if dist >= worst:
                        continue
                else:
                    for c in range(d):
                        diff = data[i, c] - data[j, c]
                        if diff < 0:
                            diff = -diff
                        if diff > dist:
                            dist = diff
                # insertion into the sorted k-best buffer
                if m < k:
                    pos = m
                    while pos > 0 and best[pos - 1] > dist:
                        best[pos] = best[pos - 1]
                        pos -= 1
                    best[pos] = dist
                    m += 1
                else:
                    pos = k - 1
                    while pos > 0 and best[pos - 1] > dist:
                        best[pos] = best[pos - 1]
                        pos -= 1
                    best[pos] = dist
                worst = best[m - 1] if m == k else 0.0
            out[i] = best[k - 1]
    return out_arr


def chebyshev_count_within(double[:, ::1] data, double[::1] radii):
    """Count rows j != i with max-norm distance strictly below radii[i]."""
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t d = data.shape[1]
    out_arr = np.empty(n, dtype=np.int64)
    cdef long[::1] out = out_arr
    cdef Py_ssize_t i, j, c
    cdef double r, diff
    cdef long count
    cdef bint inside
    with nogil:
        for i in range(n):
            r = radii[i]
            count = 0
            for j in range(n):
                if j == i:
                    continue
                inside = True
                for c in range(d):
                    diff = data[i, c] - data[j, c]
                    if diff < 0:
                        diff = -diff
                    if diff >= r:
                        inside = False
                        break
                if inside:
                    count += 1
            out[i] = count
    return out_arr
