"""Vectorized Fincke-Pohst enumeration of lattice points in an ellipsoid.

The search tree is expanded breadth first, one coordinate at a time, with all
partial vectors of a level held in numpy arrays.  Bounds come from a floating
point triangular decomposition widened by a safety margin; every surviving
leaf is re-checked with exact integer arithmetic, so floating error can only
cost time, never correctness.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 1 << 17
_MARGIN = 1e-7


def decompose(gram: np.ndarray) -> np.ndarray:
    """Fincke-Pohst form: x'Gx = sum_i q_ii (x_i + sum_{j>i} q_ij x_j)^2."""
    n = gram.shape[0]
    q = np.array(gram, dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            q[j, i] = q[i, j]
            q[i, j] = q[i, j] / q[i, i]
        for k in range(i + 1, n):
            q[k, k:] -= q[k, i] * q[i, k:]
    return np.triu(q)


def enumerate_points(gram, bound, q=None, center_num=None, center_den: int = 1,
                     half: bool = True) -> np.ndarray:
    """All integer x with (x - c)' G (x - c) <= bound, exactly.

    ``gram`` is a positive definite integer matrix, ``bound`` an integer (or
    Fraction) bound on the quadratic value, and the optional center is
    ``center_num / center_den``.  With no center and ``half`` set, only one of
    each pair +-x is returned (the one whose last nonzero entry is positive)
    and the zero vector is omitted.
    """
    g = np.asarray(gram, dtype=np.int64)
    n = g.shape[0]
    if q is None:
        q = decompose(g)
    centered = center_num is not None
    if centered:
        cnum = np.asarray(center_num, dtype=np.int64)
        c = cnum / float(center_den)
        half = False
    else:
        c = np.zeros(n)
    fbound = float(bound)
    tol = _MARGIN * (1.0 + fbound)

    diag = np.diag(q).copy()
    out: list[np.ndarray] = []

    def expand(level, xs, rem, s, zero):
        # xs: partial integer vectors, columns > level already set
        while level >= 0:
            if xs.shape[0] > _CHUNK:
                for start in range(0, xs.shape[0], _CHUNK):
                    sl = slice(start, start + _CHUNK)
                    expand(level, xs[sl], rem[sl], s[sl],
                           None if zero is None else zero[sl])
                return
            mid = c[level] - s[:, level]
            r = np.sqrt(np.maximum(rem, 0.0) / diag[level]) * (1 + 1e-9) + 1e-9
            lo = np.ceil(mid - r)
            hi = np.floor(mid + r)
            if zero is not None:
                lo = np.where(zero, np.maximum(lo, 0.0), lo)
            cnt = (hi - lo + 1).astype(np.int64)
            cnt[cnt < 0] = 0
            total = int(cnt.sum())
            if total == 0:
                return
            parent = np.repeat(np.arange(xs.shape[0]), cnt)
            starts = np.cumsum(cnt) - cnt
            offs = np.arange(total) - np.repeat(starts, cnt)
            xi = lo[parent] + offs
            diff = xi - mid[parent]
            nrem = rem[parent] - diag[level] * diff * diff
            keep = nrem >= -tol
            parent, xi, nrem = parent[keep], xi[keep], nrem[keep]
            xs = xs[parent]
            xs[:, level] = xi.astype(np.int64)
            s = s[parent]
            if level:
                s[:, :level] += np.outer(xi - c[level], q[:level, level])
            if zero is not None:
                zero = zero[parent] & (xi == 0)
            rem = nrem
            level -= 1
        out.append(xs)

    xs0 = np.zeros((1, n), dtype=np.int64)
    expand(n - 1, xs0, np.array([fbound + tol]), np.zeros((1, n)),
           np.array([True]) if half else None)
    if not out:
        return np.zeros((0, n), dtype=np.int64)
    pts = np.concatenate(out)
    if half:
        pts = pts[pts.any(axis=1)]
    # exact re-verification
    if centered:
        y = pts * int(center_den) - cnum
        val = exact_norms(g, y)
        ok = val <= bound * int(center_den) ** 2
    else:
        val = exact_norms(g, pts)
        ok = val <= bound
    return pts[np.asarray(ok, dtype=bool)]


def exact_norms(gram: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """x' G x for each row, in int64 when provably safe, else Python ints."""
    if xs.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    n = gram.shape[0]
    gmax = int(np.abs(gram).max())
    xmax = int(np.abs(xs).max())
    if gmax * xmax * xmax * n * n < (1 << 62):
        return np.einsum("ij,jk,ik->i", xs, gram, xs)
    go = gram.astype(object)
    xo = xs.astype(object)
    return ((xo @ go) * xo).sum(axis=1)
