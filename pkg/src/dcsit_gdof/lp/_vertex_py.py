"""Pure-Python (numpy) vertex enumeration kernel.

Mirrors ``_vertex_ext.pyx`` operation for operation: the same partial
pivoting rule, the same substitution order and the same strict ``>``
update rule, so both backends agree on every instance the tests cover.
"""
from itertools import combinations, islice

import numpy as np

SINGULAR_RTOL = 1e-12
_CHUNK_ELEMS = 1 << 22


def _factor(M):
    """Batched LU with partial pivoting, in place on ``M`` of shape (S, n, n).

    Returns (perm, ok): row permutation per matrix and a nonsingular mask.
    """
    S, n, _ = M.shape
    rows = np.arange(S)
    perm = np.tile(np.arange(n), (S, 1))
    scale = np.abs(M).reshape(S, -1).max(axis=1)
    ok = scale > 0.0
    thresh = SINGULAR_RTOL * scale
    for k in range(n):
        p = k + np.argmax(np.abs(M[:, k:, k]), axis=1)
        swap = p != k
        if swap.any():
            r = rows[swap]
            pk = p[swap]
            tmp = M[r, k, :].copy()
            M[r, k, :] = M[r, pk, :]
            M[r, pk, :] = tmp
            tp = perm[r, k].copy()
            perm[r, k] = perm[r, pk]
            perm[r, pk] = tp
        piv = M[:, k, k]
        ok &= np.abs(piv) > thresh
        safe = np.where(ok, piv, 1.0)
        for i in range(k + 1, n):
            lik = M[:, i, k] / safe
            M[:, i, k] = lik
            for j in range(k + 1, n):
                M[:, i, j] = M[:, i, j] - lik * M[:, k, j]
    return perm, ok


def _substitute(LU, perm, rhs):
    """Solve for a batch of right-hand sides, ``rhs`` shape (S, n, K)."""
    S, n, _ = LU.shape
    y = np.take_along_axis(rhs, perm[:, :, None], axis=1)
    for k in range(n):
        for i in range(k + 1, n):
            y[:, i, :] = y[:, i, :] - LU[:, i, k, None] * y[:, k, :]
    x = np.empty_like(y)
    for i in range(n - 1, -1, -1):
        acc = y[:, i, :]
        for j in range(i + 1, n):
            acc = acc - LU[:, i, j, None] * x[:, j, :]
        x[:, i, :] = acc / LU[:, i, i, None]
    return x


def vertex_search(A, B, c, tol):
    """Best feasible vertex for ``K`` LPs sharing coefficient matrix ``A``.

    ``A`` is (m, n), ``B`` is (K, m) right-hand sides, ``c`` is (n,).
    Returns ``(values, points, subsets)``; ``subsets[k]`` is the index of
    the defining constraint subset in ``itertools.combinations`` order, or
    -1 when no basic solution of instance ``k`` is feasible.
    """
    A = np.ascontiguousarray(A, dtype=np.float64)
    B = np.ascontiguousarray(B, dtype=np.float64)
    c = np.ascontiguousarray(c, dtype=np.float64)
    m, n = A.shape
    K = B.shape[0]
    values = np.full(K, -np.inf)
    points = np.zeros((K, n))
    best = np.full(K, -1, dtype=np.int64)
    if K == 0 or m < n:
        return values, points, best

    chunk = max(1, _CHUNK_ELEMS // max(1, K * (m + n)))
    subsets = combinations(range(m), n)
    offset = 0
    while True:
        block = list(islice(subsets, chunk))
        if not block:
            break
        idx = np.array(block, dtype=np.intp)
        S = idx.shape[0]
        LU = A[idx].copy()
        perm, ok = _factor(LU)
        if ok.any():
            sel = np.nonzero(ok)[0]
            rhs = np.transpose(B[:, idx[sel]], (1, 2, 0)).copy()
            x = _substitute(LU[sel], perm[sel], rhs)  # (s, n, K)
            lhs = A[None, :, 0, None] * x[:, None, 0, :]
            for j in range(1, n):
                lhs = lhs + A[None, :, j, None] * x[:, None, j, :]
            feas = np.all(lhs <= B.T[None, :, :] + tol, axis=1)  # (s, K)
            val = c[0] * x[:, 0, :]
            for j in range(1, n):
                val = val + c[j] * x[:, j, :]
            val = np.where(feas, val, -np.inf)
            # first maximum per instance within the chunk, then strict > across
            arg = np.argmax(val, axis=0)
            cand = val[arg, np.arange(K)]
            better = np.isfinite(cand) & ((best < 0) | (cand > values))
            if better.any():
                kk = np.nonzero(better)[0]
                values[kk] = cand[kk]
                points[kk] = x[arg[kk], :, kk]
                best[kk] = offset + sel[arg[kk]]
        offset += S
    return values, points, best
