"""Isotropic lines in L/pL and their Hensel lifts."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np
from sympy import isprime

from .errors import (NoClosedFormError, NotIsotropicError, NotPrimeError,
                     PrimeDividesDiscriminantError, TooManyPointsError)
from .lattice import Lattice

MAX_POINTS = 5_000_000


@dataclass(frozen=True, order=True)
class ProjPoint:
    """A point of P^(n-1)(F_p), normalized so the first nonzero entry is 1."""

    p: int
    coords: tuple[int, ...]

    @classmethod
    def normalize(cls, p: int, v) -> "ProjPoint":
        v = [int(x) % p for x in v]
        lead = next((x for x in v if x), None)
        if lead is None:
            raise NotIsotropicError("zero vector has no projective point")
        inv = pow(lead, -1, p)
        return cls(p, tuple(x * inv % p for x in v))

    def __str__(self):
        return "(" + ":".join(map(str, self.coords)) + ")"


def check_prime(lat: Lattice, p: int) -> None:
    if not isprime(p):
        raise NotPrimeError(f"{p} is not prime")
    disc = lat.discriminant
    if disc.numerator % p == 0:
        raise PrimeDividesDiscriminantError(p, disc)


def quadratic_coefficients(lat: Lattice) -> np.ndarray:
    """Upper-triangular integer matrix a with Q(x) = x a x^T."""
    lat.require_even()
    g = np.array(lat.gram_int, dtype=object)
    n = lat.n
    a = np.zeros((n, n), dtype=object)
    for i in range(n):
        a[i, i] = g[i, i] // 2
        for j in range(i + 1, n):
            a[i, j] = g[i, j]
    return a


def _q_mod_p(a_mod: np.ndarray, xs: np.ndarray, p: int) -> np.ndarray:
    return ((xs @ a_mod) % p * xs).sum(axis=1) % p


def isotropic_array(lat: Lattice, p: int, limit: int = MAX_POINTS) -> np.ndarray:
    """Normalized isotropic vectors mod p as rows, lexicographically sorted."""
    check_prime(lat, p)
    n = lat.n
    total = (p ** n - 1) // (p - 1)
    if total > limit:
        raise TooManyPointsError(
            f"P^{n - 1}(F_{p}) has {total} points; supply a vector instead")
    a_mod = (quadratic_coefficients(lat) % p).astype(np.int64)
    out = []
    # leading 1 at position `lead`; later leads sort first lexicographically
    for lead in range(n - 1, -1, -1):
        free = n - 1 - lead
        tail = _product_array(p, free)
        xs = np.zeros((tail.shape[0], n), dtype=np.int64)
        xs[:, lead] = 1
        xs[:, lead + 1:] = tail
        out.append(xs[_q_mod_p(a_mod, xs, p) == 0])
    return np.concatenate(out) if out else np.zeros((0, n), dtype=np.int64)


def _product_array(p: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((p,) * k).reshape(k, -1).T
    return grids.astype(np.int64)


def isotropic_points(lat: Lattice, p: int) -> list[ProjPoint]:
    """All points of P^(n-1)(F_p) with Q = 0, in lexicographic order."""
    return [ProjPoint(p, tuple(int(x) for x in row))
            for row in isotropic_array(lat, p)]


def brute_force_isotropic(lat: Lattice, p: int) -> set[ProjPoint]:
    """Reference enumeration over all p^n - 1 nonzero vectors."""
    out = set()
    for v in itertools.product(range(p), repeat=lat.n):
        if any(v) and lat.evaluate(v) % p == 0:
            out.add(ProjPoint.normalize(p, v))
    return out


def hensel_lift(lat: Lattice, p: int, point) -> list[int]:
    """Lift an isotropic vector mod p to v with v = point mod p and p^2 | Q(v).

    ``point`` is a :class:`ProjPoint` or an integer coordinate vector.  The
    correction is v + p t w_k where w_k is the first basis vector with
    T(v, w_k) nonzero mod p and t = -(Q(v)/p) T(v, w_k)^-1 mod p.
    """
    check_prime(lat, p)
    v = point_coords(point)
    g = lat.gram_int
    n = lat.n
    q = int(lat.evaluate(v))
    if q % p:
        raise NotIsotropicError(f"Q(v) = {q} is not divisible by {p}")
    if all(x % p == 0 for x in v):
        raise NotIsotropicError("vector is zero mod p")
    if q % (p * p):
        tv = [sum(v[i] * g[i][k] for i in range(n)) for k in range(n)]
        k = next(k for k in range(n) if tv[k] % p)
        t = (-(q // p) * pow(tv[k], -1, p)) % p
        v = list(v)
        v[k] += p * t
    q2 = lat.evaluate(v)
    if q2 % (p * p) or any((a - b) % p for a, b in zip(v, point_coords(point))):
        raise RuntimeError(f"Hensel lift failed: Q = {q2}")
    return v


def point_coords(point) -> list[int]:
    if isinstance(point, ProjPoint):
        return list(point.coords)
    return [int(x) for x in point]


def count_formula(n: int, p: int) -> int:
    """Number of F_p points on a smooth quadric in P^(n-1).

    For even n this is the split case 1 + p + ... + 2p^(n/2-1) + ... + p^(n-2);
    for n = 3 it is p + 1.
    """
    if n % 2 == 0:
        return sum(p ** i for i in range(n - 1)) + p ** (n // 2 - 1)
    if n == 3:
        return p + 1
    raise NoClosedFormError(f"no closed form for odd rank {n}")
