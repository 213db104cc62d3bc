# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled vertex enumeration kernel.

Same contract and arithmetic order as ``_vertex_py.vertex_search``.
"""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef enum:
    MAXN = 8

cdef double SINGULAR_RTOL = 1e-12


def vertex_search(A, B, c, double tol):
    cdef double[:, ::1] a = np.ascontiguousarray(A, dtype=np.float64)
    cdef double[:, ::1] b = np.ascontiguousarray(B, dtype=np.float64)
    cdef double[::1] cc = np.ascontiguousarray(c, dtype=np.float64)
    cdef Py_ssize_t m = a.shape[0], n = a.shape[1], K = b.shape[0]
    if n > MAXN:
        raise ValueError("compiled kernel supports at most %d variables" % MAXN)

    values_np = np.full(K, -np.inf)
    points_np = np.zeros((K, n))
    best_np = np.full(K, -1, dtype=np.int64)
    if K == 0 or m < n:
        return values_np, points_np, best_np

    cdef double[::1] values = values_np
    cdef double[:, ::1] points = points_np
    cdef long long[::1] best = best_np

    cdef double lu[MAXN][MAXN]
    cdef int perm[MAXN]
    cdef int idx[MAXN]
    cdef double y[MAXN]
    cdef double x[MAXN]
    cdef Py_ssize_t i, j, k, r, kk, p
    cdef long long s = 0
    cdef double scale, thresh, amax, t, lik, acc, val
    cdef int ti, singular, feasible

    for i in range(n):
        idx[i] = <int>i

    while True:
        # factor the subset matrix
        scale = 0.0
        for i in range(n):
            for j in range(n):
                lu[i][j] = a[idx[i], j]
                if fabs(lu[i][j]) > scale:
                    scale = fabs(lu[i][j])
            perm[i] = <int>i
        thresh = SINGULAR_RTOL * scale
        singular = scale <= 0.0
        if not singular:
            for k in range(n):
                p = k
                amax = fabs(lu[k][k])
                for i in range(k + 1, n):
                    if fabs(lu[i][k]) > amax:
                        amax = fabs(lu[i][k])
                        p = i
                if p != k:
                    for j in range(n):
                        t = lu[k][j]
                        lu[k][j] = lu[p][j]
                        lu[p][j] = t
                    ti = perm[k]
                    perm[k] = perm[p]
                    perm[p] = ti
                if not fabs(lu[k][k]) > thresh:
                    singular = 1
                    break
                for i in range(k + 1, n):
                    lik = lu[i][k] / lu[k][k]
                    lu[i][k] = lik
                    for j in range(k + 1, n):
                        lu[i][j] = lu[i][j] - lik * lu[k][j]

        if not singular:
            for kk in range(K):
                for i in range(n):
                    y[i] = b[kk, idx[perm[i]]]
                for k in range(n):
                    for i in range(k + 1, n):
                        y[i] = y[i] - lu[i][k] * y[k]
                for i in range(n - 1, -1, -1):
                    acc = y[i]
                    for j in range(i + 1, n):
                        acc = acc - lu[i][j] * x[j]
                    x[i] = acc / lu[i][i]
                feasible = 1
                for r in range(m):
                    acc = a[r, 0] * x[0]
                    for j in range(1, n):
                        acc = acc + a[r, j] * x[j]
                    if not acc <= b[kk, r] + tol:
                        feasible = 0
                        break
                if not feasible:
                    continue
                val = cc[0] * x[0]
                for j in range(1, n):
                    val = val + cc[j] * x[j]
                if best[kk] < 0 or val > values[kk]:
                    values[kk] = val
                    best[kk] = s
                    for j in range(n):
                        points[kk, j] = x[j]

        # next combination in lexicographic order
        s += 1
        i = n - 1
        while i >= 0 and idx[i] == m - n + i:
            i -= 1
        if i < 0:
            break
        idx[i] += 1
        for j in range(i + 1, n):
            idx[j] = idx[j - 1] + 1

    return values_np, points_np, best_np
