"""Exact integer and rational matrix routines.

Matrices are plain lists of rows.  Integer routines use Python ints throughout,
so there is no overflow; the numpy helpers at the bottom guard their int64
arithmetic and fall back to the exact path when entries grow.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

import numpy as np


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def hnf(rows, ncols: int | None = None) -> list[list[int]]:
    """Row Hermite normal form of the integer row span of ``rows``.

    The result is upper echelon: pivot columns strictly increase, pivots are
    positive and every entry above a pivot lies in ``[0, pivot)``.  Zero rows
    are dropped, so the length of the result is the rank.
    """
    rows = [list(map(int, r)) for r in rows]
    if ncols is None:
        if not rows:
            return []
        ncols = len(rows[0])
    pivots: dict[int, list[int]] = {}
    for vec in rows:
        _insert(pivots, vec, ncols)
    order = sorted(pivots)
    basis = [pivots[j] for j in order]
    for idx, j in enumerate(order):
        piv = basis[idx][j]
        for above in basis[:idx]:
            q = above[j] // piv
            if q:
                for k in range(j, ncols):
                    above[k] -= q * basis[idx][k]
    return basis


def _insert(pivots: dict[int, list[int]], vec: list[int], ncols: int) -> None:
    for j in range(ncols):
        b = vec[j]
        if b == 0:
            continue
        row = pivots.get(j)
        if row is None:
            if b < 0:
                vec = [-c for c in vec]
            pivots[j] = vec
            return
        a = row[j]
        if b % a == 0:
            q = b // a
            for k in range(j, ncols):
                vec[k] -= q * row[k]
        else:
            x, y, g = xgcd(a, b)
            ag, bg = a // g, b // g
            for k in range(j, ncols):
                r, v = row[k], vec[k]
                row[k] = x * r + y * v
                vec[k] = ag * v - bg * r


def det_int(m) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    a = [list(map(int, r)) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det_frac(m) -> Fraction:
    den = 1
    for r in m:
        for x in r:
            den = lcm(den, Fraction(x).denominator)
    scaled = [[int(Fraction(x) * den) for x in r] for r in m]
    return Fraction(det_int(scaled), den ** len(m))


def inverse_frac(m) -> list[list[Fraction]]:
    """Exact inverse by Gauss-Jordan over the rationals."""
    n = len(m)
    a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
         for i, r in enumerate(m)]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                rc = a[c]
                a[r] = [x - f * y for x, y in zip(a[r], rc)]
    return [row[n:] for row in a]


def matmul(a, b):
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]


def common_denominator(m) -> int:
    den = 1
    for r in m:
        for x in r:
            den = lcm(den, Fraction(x).denominator)
    return den


def content(values) -> int:
    g = 0
    for x in values:
        g = gcd(g, int(x))
    return g


def leading_minors_positive(g) -> bool:
    """Sylvester's criterion, exactly."""
    n = len(g)
    return all(det_frac([r[:k] for r in g[:k]]) > 0 for k in range(1, n + 1))


def lll_gram(gram, delta: Fraction = Fraction(99, 100)):
    """Integral LLL reduction of a positive definite integer Gram matrix.

    Works on the Gram matrix only (no embedding), following the integral
    variant in which all Gram-Schmidt data are kept as integers d_i and
    lambda_ij.  Returns ``(U, G)`` with ``U`` unimodular and
    ``G = U * gram * U^T``.
    """
    g = [list(map(int, r)) for r in gram]
    n = len(g)
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    if n <= 1:
        return u, g
    dnum, dden = delta.numerator, delta.denominator
    d = [0] * (n + 1)           # d[i+1] is the i-th Gram-Schmidt denominator
    d[0] = 1
    lam = [[0] * n for _ in range(n)]
    d[1] = g[0][0]
    k, kmax = 1, 0

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l + 1]:
            q = (2 * lam[k][l] + d[l + 1]) // (2 * d[l + 1])
            uk, ul = u[k], u[l]
            for j in range(n):
                uk[j] -= q * ul[j]
            gk, gl = g[k], g[l]
            gkk = gk[k] - 2 * q * gk[l] + q * q * gl[l]
            for j in range(n):
                gk[j] -= q * gl[j]
            gk[k] = gkk
            for j in range(n):
                g[j][k] = gk[j]
            lam[k][l] -= q * d[l + 1]
            for i in range(l):
                lam[k][i] -= q * lam[l][i]

    def swap(k: int) -> None:
        u[k], u[k - 1] = u[k - 1], u[k]
        g[k], g[k - 1] = g[k - 1], g[k]
        for row in g:
            row[k], row[k - 1] = row[k - 1], row[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        la = lam[k][k - 1]
        b = (d[k - 1] * d[k + 1] + la * la) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - la * t) // d[k]
            lam[i][k - 1] = (b * t + la * lam[i][k]) // d[k + 1]
        d[k] = b

    while k < n:
        if k > kmax:
            kmax = k
            for j in range(k + 1):
                val = g[k][j]
                for i in range(j):
                    val = (d[i + 1] * val - lam[k][i] * lam[j][i]) // d[i]
                if j < k:
                    lam[k][j] = val
                else:
                    if val <= 0:
                        raise ValueError("Gram matrix is not positive definite")
                    d[k + 1] = val
        red(k, k - 1)
        # Lovasz: d_{k+1} d_{k-1} >= (delta d_k^2 - lambda^2) scaled
        lhs = dden * d[k + 1] * d[k - 1]
        rhs = dnum * d[k] * d[k] - dden * lam[k][k - 1] ** 2
        if lhs < rhs:
            swap(k)
            k = max(1, k - 1)
        else:
            for l in range(k - 2, -1, -1):
                red(k, l)
            k += 1
    return u, g


# -- numpy helpers --------------------------------------------------------

_SAFE = 1 << 40


def to_int64(m) -> np.ndarray:
    arr = np.array([[int(x) for x in r] for r in m], dtype=object)
    if arr.size and np.abs(arr).max() >= _SAFE:
        raise OverflowError("entries too large for int64 fast path")
    return arr.astype(np.int64)


def span_hnf(vectors: np.ndarray) -> list[list[int]]:
    """HNF of the row span of a (possibly long) integer array.

    Builds the HNF from a few rows with the exact routine, then reduces every
    remaining row against it at once with int64 arithmetic, feeding rows with
    a nonzero residue back into the exact routine until everything reduces to
    zero.
    """
    v = np.asarray(vectors, dtype=np.int64)
    if v.size == 0:
        return []
    ncols = v.shape[1]
    basis = hnf(v[: 2 * ncols].tolist(), ncols)
    while True:
        res = _reduce_rows(v, basis, ncols)
        if res is None:
            basis = hnf(basis + v.tolist(), ncols)
            return basis
        nz = np.flatnonzero(res.any(axis=1))
        if nz.size == 0:
            return basis
        basis = hnf(basis + res[nz[: 2 * ncols]].tolist(), ncols)


def _reduce_rows(v: np.ndarray, basis, ncols: int):
    r = v.copy()
    for row in basis:
        j = next(i for i, x in enumerate(row) if x)
        h = np.array(row, dtype=np.int64)
        q = r[:, j] // h[j]
        nzq = q != 0
        if nzq.any():
            r[nzq] -= q[nzq, None] * h
        if np.abs(r).max() >= _SAFE:
            return None
    return r
