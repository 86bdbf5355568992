"""Short vectors, isometry testing and automorphism groups of definite lattices.

The isometry search is a simplified Plesken-Souvignier backtrack: basis
vectors of an LLL-reduced basis are mapped, one at a time, to short vectors
of the same norm, and every partial assignment must reproduce the Gram
matrix entries seen so far.  After each choice the candidate lists of all
later basis vectors are filtered at once (forward checking), so dead ends are
detected one level early.  Vector-sum invariants and Bacher polynomials are
not used.

Automorphism group orders come from the stabilizer chain of the basis:
|G| = prod_i |orbit of b_i under Stab(b_1, ..., b_{i-1})|, with orbits grown
from generators found along the way.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import prod

import numpy as np

from . import linalg
from .enumeration import decompose, enumerate_points
from .errors import NotPositiveDefiniteError
from .lattice import Lattice


@dataclass
class Reduction:
    """LLL data of a lattice: ``gram = u * scale*gram(L) * u^T``."""

    scale: int
    gram: np.ndarray
    u: np.ndarray
    u_inv: np.ndarray
    q: np.ndarray


@lru_cache(maxsize=512)
def reduction(lat: Lattice) -> Reduction:
    if not lat.is_positive_definite:
        raise NotPositiveDefiniteError(f"{lat!r} is not positive definite")
    scale = linalg.common_denominator(lat.gram)
    a = [[int(x * scale) for x in r] for r in lat.gram]
    u, g = linalg.lll_gram(a)
    u_inv = linalg.inverse_frac(u)
    u_inv = [[int(x) for x in r] for r in u_inv]
    g_np = linalg.to_int64(g)
    return Reduction(scale, g_np, linalg.to_int64(u), linalg.to_int64(u_inv),
                     decompose(g_np))


@dataclass
class ShortVectorList:
    """Nonzero vectors with Q(x) <= bound, one per +-pair.

    ``vectors`` holds lattice coordinates (rows).  ``norms2`` holds
    ``scale * T(x, x)`` as integers; ``norms`` gives Q(x) exactly.
    """

    bound: Fraction
    vectors: np.ndarray
    norms2: np.ndarray
    scale: int = 1

    @property
    def norms(self) -> list[Fraction]:
        return [Fraction(int(t), 2 * self.scale) for t in self.norms2]

    def __len__(self):
        return self.vectors.shape[0]

    def with_norm(self, q) -> np.ndarray:
        t = Fraction(q) * 2 * self.scale
        if t.denominator != 1:
            return self.vectors[:0]
        return self.vectors[self.norms2 == int(t)]


def short_vectors(lat: Lattice, bound, reduced: bool = False) -> ShortVectorList:
    """Every nonzero x with Q(x) <= bound, up to sign, sorted by (norm, lex).

    With ``reduced`` the coordinates refer to the LLL basis of
    :func:`reduction` instead of the lattice basis.
    """
    bound = Fraction(bound)
    red = reduction(lat)
    tb = bound * 2 * red.scale
    pts = enumerate_points(red.gram, int(tb // 1), q=red.q)
    if not reduced:
        pts = pts @ red.u
        pts = _canonical_sign(pts)
        g = linalg.to_int64([[int(x * red.scale) for x in r] for r in lat.gram])
    else:
        g = red.gram
    from .enumeration import exact_norms
    norms2 = np.asarray(exact_norms(g, pts), dtype=np.int64)
    order = np.lexsort(tuple(pts[:, k] for k in range(pts.shape[1] - 1, -1, -1)) + (norms2,))
    return ShortVectorList(bound, pts[order], norms2[order], red.scale)


def _canonical_sign(pts: np.ndarray) -> np.ndarray:
    if pts.shape[0] == 0:
        return pts
    nz = pts != 0
    first = np.argmax(nz, axis=1)
    lead = pts[np.arange(pts.shape[0]), first]
    return pts * np.where(lead < 0, -1, 1)[:, None]


def close_vectors(lat: Lattice, center, bound) -> np.ndarray:
    """Lattice coordinates x with Q(x - center) <= bound (center rational)."""
    red = reduction(lat)
    center = [Fraction(c) for c in center]
    den = linalg.common_denominator([center])
    # center in reduced coordinates: c_red = c * u_inv
    c_red = [sum(center[i] * int(red.u_inv[i, j]) for i in range(lat.n))
             for j in range(lat.n)]
    cnum = [int(c * den) for c in c_red]
    tb = Fraction(bound) * 2 * red.scale
    pts = enumerate_points(red.gram, int(tb // 1), q=red.q,
                           center_num=cnum, center_den=den)
    return pts @ red.u


def theta_counts(lat: Lattice, depth: int) -> tuple[int, ...]:
    """(r(1), ..., r(depth)) counting both signs."""
    sv = short_vectors(lat, depth)
    norms = np.asarray(sv.norms2)
    out = []
    for m in range(1, depth + 1):
        t = 2 * m * sv.scale
        out.append(2 * int(np.count_nonzero(norms == t)))
    return tuple(out)


def span_gram_det(lat: Lattice, vectors) -> Fraction:
    """det of the Gram matrix of the sublattice spanned by ``vectors``."""
    vecs = np.asarray(vectors, dtype=np.int64)
    if vecs.size == 0:
        return Fraction(1)
    h = linalg.span_hnf(vecs)
    g = lat.gram
    gh = [[sum(g[i][j] * r[j] for j in range(lat.n)) for i in range(lat.n)] for r in h]
    sub = [[sum(a * b for a, b in zip(x, r)) for r in h] for x in gh]
    return linalg.det_frac(sub)


def root_determinant(lat: Lattice) -> Fraction:
    """Gram determinant of the span of the roots {x : Q(x) = 1}."""
    sv = short_vectors(lat, 1)
    roots = sv.with_norm(1)
    return span_gram_det(lat, roots)


def fingerprint(lat: Lattice, depth: int = 3) -> tuple:
    """Necessary-for-isometry invariant (disc, (r(1..depth)), root det)."""
    return (lat.discriminant, theta_counts(lat, depth), root_determinant(lat))


# -- backtracking ---------------------------------------------------------

class _Candidates:
    """Vectors of a target lattice (both signs) that may image basis vectors."""

    def __init__(self, gram: np.ndarray, vectors: np.ndarray):
        self.gram = gram
        self.v = np.concatenate([vectors, -vectors]) if len(vectors) else vectors
        self.vg = self.v @ gram
        self.norm = np.einsum("ij,ij->i", self.vg, self.v)
        self.keys = None

    def index_of(self):
        if self.keys is None:
            self.keys = {row.tobytes(): i for i, row in enumerate(self.v)}
        return self.keys


def _target_candidates(red: Reduction, norms) -> _Candidates:
    top = max(norms)
    pts = enumerate_points(red.gram, int(top), q=red.q)
    from .enumeration import exact_norms
    nn = exact_norms(red.gram, pts)
    keep = np.isin(nn, list(norms))
    return _Candidates(red.gram, pts[keep])


def _filter(cand: _Candidates, domains, img_index: int, gram_col):
    """Restrict each domain to vectors with the right product with an image."""
    col = cand.vg[img_index]
    out = []
    for dom, want in zip(domains, gram_col):
        sel = dom[cand.v[dom] @ col == want]
        if sel.size == 0:
            return None
        out.append(sel)
    return out


def _search(cand: _Candidates, a: np.ndarray, level: int, domains, images):
    """Depth-first completion of ``images`` (indices into cand) from ``level``."""
    n = a.shape[0]
    if level == n:
        return list(images)
    first, rest = domains[0], domains[1:]
    for c in first:
        if rest:
            nd = _filter(cand, rest, c, a[level + 1:, level])
            if nd is None:
                continue
        else:
            nd = []
        images.append(int(c))
        found = _search(cand, a, level + 1, nd, images)
        if found is not None:
            return found
        images.pop()
    return None


def _work_order(red: Reduction, cand: _Candidates):
    """Basis order: always take the level with the fewest consistent images."""
    n = red.gram.shape[0]
    a = red.gram
    doms = {l: np.flatnonzero(cand.norm == a[l, l]) for l in range(n)}
    keys = cand.index_of()
    order = []
    while doms:
        l = min(doms, key=lambda k: (doms[k].size, k))
        order.append(l)
        del doms[l]
        e = np.zeros(n, dtype=np.int64)
        e[l] = 1
        idx = keys[e.tobytes()]
        col = cand.vg[idx]
        for k in doms:
            d = doms[k]
            doms[k] = d[cand.v[d] @ col == a[k, l]]
    return order


def _permute(red: Reduction, order):
    p = np.eye(len(order), dtype=np.int64)[order]
    return p @ red.gram @ p.T, p


@dataclass
class IsometryGroup:
    """Automorphism group: generators g with g^T G g = G and the exact order."""

    generators: list
    order: int
    orbit_sizes: list = field(default_factory=list)


def aut_group(lat: Lattice) -> IsometryGroup:
    """Generators and order of O(L) for a positive definite lattice."""
    red = reduction(lat)
    norms = sorted({int(x) for x in np.diag(red.gram)})
    base = _target_candidates(red, norms)
    order = _work_order(red, base)
    a, perm = _permute(red, order)
    # candidates in work coordinates: x_work = x_red * perm^T
    cand = _Candidates(a, base.v[: base.v.shape[0] // 2] @ perm.T)
    n = a.shape[0]
    keys = cand.index_of()
    eye = np.eye(n, dtype=np.int64)
    basis_idx = [keys[eye[i].tobytes()] for i in range(n)]

    # domains along the identity path
    id_domains = []
    doms = [np.flatnonzero(cand.norm == a[l, l]) for l in range(n)]
    for i in range(n):
        id_domains.append(doms)
        if i < n - 1:
            doms = _filter(cand, doms[1:], basis_idx[i], a[i + 1:, i])

    gens: list[np.ndarray] = []
    sizes = [0] * n
    for i in range(n - 1, -1, -1):
        dom = id_domains[i]
        orbit = _orbit(cand, basis_idx[i], gens)
        excluded: set[int] = set()
        for c in dom[0]:
            c = int(c)
            if c in orbit or c in excluded:
                continue
            if dom[1:]:
                nd = _filter(cand, dom[1:], c, a[i + 1:, i])
                found = None if nd is None else _search(
                    cand, a, i + 1, nd, basis_idx[:i] + [c])
            else:
                found = basis_idx[:i] + [c]
            if found is None:
                excluded |= _orbit(cand, c, gens)
                continue
            x = cand.v[found]
            gens.append(x)
            orbit = _orbit(cand, basis_idx[i], gens)
        sizes[i] = len(orbit)

    # back to lattice coordinates: W = perm * u (rows of the work basis)
    w = perm @ red.u
    w_inv = red.u_inv @ perm.T
    g = lat.gram
    out = []
    for x in gens:
        m = (w_inv @ x @ w).astype(object)
        gen = m.T.tolist()
        _check_transport(g, gen, g)
        out.append(gen)
    return IsometryGroup(out, prod(sizes), sizes)


def _orbit(cand: _Candidates, start: int, gens) -> set[int]:
    keys = cand.index_of()
    seen = {start}
    frontier = [start]
    while frontier and gens:
        vecs = cand.v[frontier]
        frontier = []
        for x in gens:
            for row in vecs @ x:
                j = keys[row.tobytes()]
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
    return seen


def _check_transport(g_src, m, g_dst) -> None:
    """Verify m^T g_src m == g_dst exactly."""
    n = len(m)
    mt = linalg.transpose(m)
    left = linalg.matmul(linalg.matmul(mt, [list(r) for r in g_src]), m)
    if any(left[i][j] != g_dst[i][j] for i in range(n) for j in range(n)):
        raise RuntimeError("isometry failed exact verification")


def find_isometry(lat: Lattice, other: Lattice):
    """(g, reason): g integral with g^T gram(lat) g = gram(other), or None."""
    if lat.n != other.n:
        return None, "rank mismatch"
    if lat.discriminant != other.discriminant:
        return None, "discriminants differ"
    g1, g2 = lat.gram, other.gram
    if lat == other or g1 == g2:
        return [[int(i == j) for j in range(lat.n)] for i in range(lat.n)], "identical Gram"
    if linalg.common_denominator(g1) != linalg.common_denominator(g2):
        return None, "Gram denominators differ"
    red1, red2 = reduction(lat), reduction(other)
    norms = sorted({int(x) for x in np.diag(red1.gram)})
    own = _target_candidates(red1, norms)
    tgt = _target_candidates(red2, norms)
    for t in norms:
        if np.count_nonzero(own.norm == t) != np.count_nonzero(tgt.norm == t):
            return None, f"different number of vectors of norm {Fraction(t, 2 * red1.scale)}"
    if root_determinant(lat) != root_determinant(other):
        return None, "root sublattice determinants differ"
    order = _work_order(red1, own)
    a, perm = _permute(red1, order)
    n = a.shape[0]
    doms = [np.flatnonzero(tgt.norm == a[l, l]) for l in range(n)]
    found = _search(tgt, a, 0, doms, [])
    if found is None:
        return None, "no isometry exists"
    x = tgt.v[found]                       # rows: images of work basis (reduced coords of other)
    w_inv = red1.u_inv @ perm.T            # lattice coords -> work coords
    m = (w_inv @ x @ red2.u).astype(object).tolist()
    minv = linalg.inverse_frac(m)
    gmat = [[int(minv[j][i]) for j in range(n)] for i in range(n)]
    _check_transport(g1, gmat, g2)
    return gmat, "isometry found"


def is_isometric(lat: Lattice, other: Lattice):
    """An integral g with g^T gram(lat) g = gram(other), or None."""
    return find_isometry(lat, other)[0]
