"""Kneser p-neighbors.

For v in L with v not in pL and p^2 | Q(v) the neighbor is

    L(p, v) = (v/p) Z + L_v,    L_v = {w in L : T(v, w) = 0 mod p}.

L_v has index p in L, and L(p, v) meets L exactly in L_v.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from . import linalg
from .enumeration import enumerate_points
from .errors import (DimensionMismatchError, KneserError, NotIsotropicError,
                     VectorDivisibleError)
from .finite import ProjPoint, check_prime, hensel_lift, isotropic_array
from .isometry import reduction, short_vectors
from .lattice import Lattice, intersect, index


@dataclass(frozen=True)
class NeighborCertificate:
    p: int
    v: tuple[int, ...]
    source: Lattice
    target: Lattice


def _check_vector(lat: Lattice, p: int, v) -> list[int]:
    v = [int(x) for x in v]
    if len(v) != lat.n:
        raise DimensionMismatchError(f"expected {lat.n} coordinates, got {len(v)}")
    if all(x % p == 0 for x in v):
        raise VectorDivisibleError(f"v lies in {p}L")
    q = lat.evaluate(v)
    if q % (p * p):
        raise NotIsotropicError(f"Q(v) = {q} is not divisible by {p}^2")
    return v


def kernel_rows(lat: Lattice, p: int, v) -> list[list[int]]:
    """Basis (lattice coordinates) of {w : T(v, w) = 0 mod p}."""
    g = lat.gram_int
    n = lat.n
    tv = [sum(v[i] * g[i][j] for i in range(n)) for j in range(n)]
    k = next((j for j in range(n) if tv[j] % p), None)
    if k is None:
        raise KneserError("T(v, -) vanishes mod p; p must divide the discriminant")
    inv = pow(tv[k], -1, p)
    rows = []
    for j in range(n):
        r = [0] * n
        if j == k:
            r[k] = p
        else:
            r[j] = 1
            r[k] = -(tv[j] * inv % p)
        rows.append(r)
    return rows


def neighbor(lat: Lattice, p: int, v) -> Lattice:
    """The p-neighbor L(p, v); v is given in lattice coordinates."""
    lat.require_even()
    check_prime(lat, p)
    v = _check_vector(lat, p, v)
    n = lat.n
    kern = kernel_rows(lat, p, v)
    # lattice coordinates scaled by p: p * L_v + Z v
    rows = linalg.hnf([[p * x for x in r] for r in kern] + [v], n)
    b = lat.basis_num
    amb = linalg.matmul(rows, b)
    out = Lattice._from_integer(lat.ambient, amb, p * lat.basis_den)
    _certify(lat, out, p, kern, rows)
    return out


def _certify(lat: Lattice, out: Lattice, p: int, kern, rows) -> None:
    # In lattice coordinates det(kern) = [L : L_v] and det(rows) / p^n is the
    # covolume of the neighbor; both indices equal p iff these are p and p^n.
    if abs(linalg.det_int(kern)) != p or abs(linalg.det_int(rows)) != p ** lat.n:
        raise RuntimeError("neighbor index certificate failed")
    if not out.is_even:
        raise RuntimeError("neighbor is not even")
    if out.discriminant != lat.discriminant:
        raise RuntimeError("neighbor discriminant changed")


def is_p_neighbor(lat: Lattice, other: Lattice, p: int) -> bool:
    """True iff [L : L cap M] = [M : L cap M] = p."""
    meet = intersect(lat, other)
    return index(lat, meet) == p and index(other, meet) == p


def certificate(lat: Lattice, p: int, v) -> NeighborCertificate:
    out = neighbor(lat, p, v)
    if not is_p_neighbor(lat, out, p):
        raise RuntimeError("neighbor failed the index check")
    return NeighborCertificate(p, tuple(int(x) for x in v), lat, out)


def iter_neighbors(lat: Lattice, p: int) -> Iterator[tuple[ProjPoint, list[int], Lattice]]:
    """(point, lifted vector, neighbor) for every isotropic point, in order."""
    for row in isotropic_array(lat, p):
        pt = ProjPoint(p, tuple(int(x) for x in row))
        v = hensel_lift(lat, p, pt)
        yield pt, v, neighbor(lat, p, v)


def all_neighbors(lat: Lattice, p: int,
                  visitor: Callable[[ProjPoint, list[int], Lattice], None] | None = None):
    """All p-neighbors in isotropic-point order.

    With a visitor, each neighbor is handed over and dropped (nothing is
    accumulated); otherwise the list of lattices is returned.
    """
    if visitor is not None:
        for item in iter_neighbors(lat, p):
            visitor(*item)
        return None
    return [nb for _, _, nb in iter_neighbors(lat, p)]


# -- root systems of neighbors without building them -----------------------

class NeighborRoots:
    """Roots {x : Q(x) = 1} of neighbors L(p, v) of a fixed even lattice L.

    The roots of L(p, v) inside L are the roots r of L with T(v, r) = 0 mod p.
    The others lie in cosets kv/p + L (0 < k < p) and are found as close
    vectors: w in L with Q(kv/p + w) = 1 and T(v, w) = 0 mod p.  Roots are
    returned as p times their coordinates in the basis of L, so they stay
    integral.
    """

    def __init__(self, lat: Lattice):
        lat.require_even()
        self.lat = lat
        self.red = reduction(lat)
        if self.red.scale != 1:
            raise KneserError("lattice must be integral")
        self.gram = np.array(lat.gram_int, dtype=np.int64)
        sv = short_vectors(lat, 1)
        self.roots = sv.with_norm(1)
        self.roots_g = self.roots @ self.gram

    def roots_of(self, p: int, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64)
        inner = (self.roots_g @ v) % p == 0
        parts = [p * self.roots[inner]]
        vg = self.gram @ v
        v_red = v @ self.red.u_inv
        for k in range(1, p // 2 + 1):
            # Q(kv/p + w) = 1  <=>  (w - c)' A (w - c) <= 2 with c = -kv/p
            w_red = enumerate_points(self.red.gram, 2, q=self.red.q,
                                     center_num=-k * v_red, center_den=p)
            if w_red.shape[0] == 0:
                continue
            w = w_red @ self.red.u
            w = w[(w @ vg) % p == 0]
            parts.append(k * v[None, :] + p * w)
        return np.concatenate(parts)

    def root_determinant(self, p: int, v):
        """Gram determinant of the root sublattice of L(p, v)."""
        from fractions import Fraction
        roots = self.roots_of(p, v)
        if roots.shape[0] == 0:
            return Fraction(1)
        h = linalg.span_hnf(roots)
        g = self.lat.gram_int
        gh = linalg.matmul(h, g)
        sub = linalg.matmul(gh, linalg.transpose(h))
        return Fraction(linalg.det_int(sub), p ** (2 * len(h)))

    def root_count(self, p: int, v) -> int:
        """Number of roots counted with sign."""
        roots = self.roots_of(p, v)
        kernel = int(((self.roots_g @ np.asarray(v)) % p == 0).sum())
        coset = roots.shape[0] - kernel
        # cosets k and p-k are negatives; k = p/2 (p = 2) is self-paired
        per_coset = 2 * coset if p > 2 else coset
        return 2 * kernel + per_coset


@lru_cache(maxsize=64)
def neighbor_roots(lat: Lattice) -> NeighborRoots:
    return NeighborRoots(lat)
