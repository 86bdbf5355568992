"""Exact integral quadratic lattices inside a fixed rational quadratic space.

A :class:`Lattice` is a rational row basis relative to an :class:`AmbientForm`
(an integer Gram matrix on a reference basis of Q^n).  Bases are always kept
in a canonical normal form, row Hermite normal form after clearing a single
common denominator, so two lattices are equal exactly when their stored
matrices agree.

Discriminants follow the half-discriminant convention
``disc = 2^(-eps(n)) det(Gram)`` with ``eps(n) = 0`` for even ``n`` and ``1``
for odd ``n``.  Many references differ from this by a power of 2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm

from . import linalg
from .errors import (DimensionMismatchError, KneserError, NotSublatticeError,
                     OddLatticeError, UnknownLatticeError)


@dataclass(frozen=True)
class AmbientForm:
    """Nondegenerate quadratic space Q^n with integer Gram matrix ``gram0``.

    The Gram matrix is that of T(x, y) = Q(x + y) - Q(x) - Q(y) on the
    reference basis, so Q(x) = x gram0 x^T / 2.  The diagonal need not be
    even: the coordinate space of D_n uses the identity matrix.
    """

    gram0: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram0)
        object.__setattr__(self, "gram0", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise DimensionMismatchError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise KneserError("Gram matrix must be symmetric")
        if n and linalg.det_int(g) == 0:
            raise KneserError("Gram matrix is degenerate")

    @property
    def n(self) -> int:
        return len(self.gram0)


@dataclass(frozen=True, eq=False)
class Lattice:
    """Full-rank lattice with basis ``basis_num / basis_den`` (rows).

    Construct with :meth:`from_basis`; the stored basis is canonical.
    """

    ambient: AmbientForm
    basis_num: tuple[tuple[int, ...], ...]
    basis_den: int = 1
    name: str | None = field(default=None, compare=False)

    @classmethod
    def from_basis(cls, ambient: AmbientForm, rows, name=None) -> "Lattice":
        rows = [[Fraction(x) for x in r] for r in rows]
        n = ambient.n
        if len(rows) < n or any(len(r) != n for r in rows):
            raise DimensionMismatchError(
                f"need at least {n} vectors of length {n} for a full lattice")
        den = linalg.common_denominator(rows)
        num = [[int(x * den) for x in r] for r in rows]
        return cls._from_integer(ambient, num, den, name)

    @classmethod
    def _from_integer(cls, ambient, num, den, name=None) -> "Lattice":
        h = linalg.hnf(num, ambient.n)
        if len(h) != ambient.n:
            raise KneserError("basis vectors do not span a full lattice")
        g = gcd(den, linalg.content(x for r in h for x in r))
        if g > 1:
            h = [[x // g for x in r] for r in h]
            den //= g
        return cls(ambient, tuple(map(tuple, h)), den, name)

    @classmethod
    def reference(cls, gram, name=None) -> "Lattice":
        """Z^n with the given Gram matrix (identity basis)."""
        amb = AmbientForm(gram)
        n = amb.n
        eye = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        return cls(amb, eye, 1, name)

    # -- identity ---------------------------------------------------------

    def _key(self):
        return (self.ambient.gram0, self.basis_num, self.basis_den)

    def __eq__(self, other):
        return isinstance(other, Lattice) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Lattice{label} rank={self.n} disc={self.discriminant}>"

    def renamed(self, name: str) -> "Lattice":
        return Lattice(self.ambient, self.basis_num, self.basis_den, name)

    # -- basic data -------------------------------------------------------

    @property
    def n(self) -> int:
        return self.ambient.n

    @property
    def basis(self) -> list[list[Fraction]]:
        d = self.basis_den
        return [[Fraction(x, d) for x in r] for r in self.basis_num]

    @cached_property
    def gram(self) -> tuple[tuple[Fraction, ...], ...]:
        """basis * gram0 * basis^T, exactly."""
        b = self.basis_num
        num = linalg.matmul(linalg.matmul(b, self.ambient.gram0),
                            linalg.transpose(b))
        d2 = self.basis_den ** 2
        return tuple(tuple(Fraction(x, d2) for x in r) for r in num)

    @cached_property
    def gram_int(self) -> tuple[tuple[int, ...], ...]:
        """Integer Gram matrix; raises if T is not integral on the lattice."""
        if not self.is_bilinear_integral:
            raise OddLatticeError(f"{self!r} has a non-integral Gram matrix")
        return tuple(tuple(x.numerator for x in r) for r in self.gram)

    @property
    def is_bilinear_integral(self) -> bool:
        return all(x.denominator == 1 for r in self.gram for x in r)

    @property
    def is_integral(self) -> bool:
        """Q(L) is contained in Z, i.e. the lattice is even."""
        return self.is_bilinear_integral and all(
            self.gram[i][i].numerator % 2 == 0 for i in range(self.n))

    is_even = is_integral

    def require_even(self) -> None:
        if not self.is_integral:
            raise OddLatticeError(
                f"{self!r} is not an even integral lattice")

    @cached_property
    def discriminant(self) -> Fraction:
        det = linalg.det_frac(self.gram)
        return det / 2 if self.n % 2 else det

    @cached_property
    def is_positive_definite(self) -> bool:
        return linalg.leading_minors_positive(self.gram)

    @cached_property
    def basis_det(self) -> Fraction:
        """Determinant of the basis matrix in ambient coordinates."""
        return Fraction(linalg.det_int(self.basis_num),
                        self.basis_den ** self.n)

    # -- vectors ----------------------------------------------------------

    def evaluate(self, x) -> Fraction:
        """Q of the vector with coordinates ``x`` in this basis."""
        if len(x) != self.n:
            raise DimensionMismatchError(
                f"expected {self.n} coordinates, got {len(x)}")
        g = self.gram
        t = sum(g[i][j] * x[i] * x[j]
                for i in range(self.n) for j in range(self.n))
        return Fraction(t) / 2

    def bilinear(self, x, y) -> Fraction:
        g = self.gram
        return sum(g[i][j] * x[i] * y[j]
                   for i in range(self.n) for j in range(self.n))

    def to_ambient(self, x) -> list[Fraction]:
        d = self.basis_den
        return [Fraction(sum(xi * self.basis_num[i][j] for i, xi in enumerate(x)), d)
                for j in range(self.n)]

    @cached_property
    def _basis_inverse(self):
        return linalg.inverse_frac(self.basis)

    def coordinates(self, v) -> list[Fraction]:
        """Coordinates of the ambient vector ``v`` in this basis."""
        if len(v) != self.n:
            raise DimensionMismatchError(
                f"expected {self.n} coordinates, got {len(v)}")
        inv = self._basis_inverse
        return [sum(Fraction(v[i]) * inv[i][j] for i in range(self.n))
                for j in range(self.n)]

    def contains_vector(self, v) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(v))

    def lattice_vector(self, v) -> list[int]:
        """Integer coordinates of an ambient vector known to lie in the lattice."""
        c = self.coordinates(v)
        if any(x.denominator != 1 for x in c):
            raise NotSublatticeError(f"{v} is not a vector of {self!r}")
        return [int(x) for x in c]

    def contains(self, other: "Lattice") -> bool:
        _same_ambient(self, other)
        return all(self.contains_vector(b) for b in other.basis)

    def scaled(self, c) -> "Lattice":
        c = Fraction(c)
        num = [[x * c.numerator for x in r] for r in self.basis_num]
        return Lattice._from_integer(self.ambient, num,
                                     self.basis_den * c.denominator)


def gram_of(ambient: AmbientForm, rows) -> list[list[Fraction]]:
    rows = [[Fraction(x) for x in r] for r in rows]
    g0 = ambient.gram0
    n = ambient.n
    tmp = [[sum(r[k] * g0[k][j] for k in range(n)) for j in range(n)] for r in rows]
    return [[sum(a * b for a, b in zip(t, s)) for s in rows] for t in tmp]


def _same_ambient(a: Lattice, b: Lattice) -> None:
    if a.ambient != b.ambient:
        raise DimensionMismatchError("lattices live in different ambient spaces")


def gram(lat: Lattice):
    return lat.gram


def evaluate(lat: Lattice, x) -> Fraction:
    return lat.evaluate(x)


def discriminant(lat: Lattice) -> Fraction:
    return lat.discriminant


def index(big: Lattice, small: Lattice) -> Fraction:
    """[big : small], checking containment."""
    _same_ambient(big, small)
    if not big.contains(small):
        raise NotSublatticeError("second lattice is not contained in the first")
    return abs(small.basis_det / big.basis_det)


def lattice_sum(a: Lattice, b: Lattice) -> Lattice:
    _same_ambient(a, b)
    den = lcm(a.basis_den, b.basis_den)
    fa, fb = den // a.basis_den, den // b.basis_den
    rows = [[x * fa for x in r] for r in a.basis_num] + \
           [[x * fb for x in r] for r in b.basis_num]
    return Lattice._from_integer(a.ambient, rows, den)


def _dual_rows(lat: Lattice) -> list[list[Fraction]]:
    # dual with respect to the standard dot product on coordinates
    inv = lat._basis_inverse
    return linalg.transpose(inv)


def intersect(a: Lattice, b: Lattice) -> Lattice:
    """a cap b, via (a^# + b^#)^# for the coordinate dot product."""
    _same_ambient(a, b)
    amb = a.ambient
    da = Lattice.from_basis(amb, _dual_rows(a))
    db = Lattice.from_basis(amb, _dual_rows(b))
    s = lattice_sum(da, db)
    return Lattice.from_basis(amb, _dual_rows(s))


def direct_sum(a: Lattice, b: Lattice, name=None) -> Lattice:
    n1, n2 = a.n, b.n
    g = [list(r) + [0] * n2 for r in a.ambient.gram0] + \
        [[0] * n1 + list(r) for r in b.ambient.gram0]
    amb = AmbientForm(g)
    rows = [list(r) + [Fraction(0)] * n2 for r in a.basis] + \
           [[Fraction(0)] * n1 + list(r) for r in b.basis]
    if not rows:
        return Lattice(amb, (), 1, name)
    return Lattice.from_basis(amb, rows, name)


@dataclass(frozen=True)
class QFPoly:
    """Integral quadratic form sum_{i<=j} a_ij x_i x_j as a coefficient map."""

    n: int
    coeffs: dict

    def to_gram(self) -> list[list[int]]:
        g = [[0] * self.n for _ in range(self.n)]
        for (i, j), a in self.coeffs.items():
            if i == j:
                g[i][i] = 2 * a
            else:
                g[i][j] = g[j][i] = a
        return g

    @classmethod
    def from_gram(cls, g) -> "QFPoly":
        n = len(g)
        coeffs = {}
        for i in range(n):
            if Fraction(g[i][i]) % 2:
                raise OddLatticeError("Gram diagonal must be even")
            for j in range(i, n):
                a = Fraction(g[i][j]) / 2 if i == j else Fraction(g[i][j])
                if a.denominator != 1:
                    raise OddLatticeError("Gram matrix must be integral")
                if a:
                    coeffs[(i, j)] = int(a)
        return cls(n, coeffs)

    def __call__(self, x) -> int:
        return sum(a * x[i] * x[j] for (i, j), a in self.coeffs.items())


# -- catalog ----------------------------------------------------------------

def _e8_gram():
    # (sum_{i<=j} x_i x_j) - x1 x2 - x2 x3
    c = {(i, j): 1 for i in range(8) for j in range(i, 8)}
    c[(0, 1)] = 0
    c[(1, 2)] = 0
    return QFPoly(8, {k: v for k, v in c.items() if v}).to_gram()


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _dn_rows(n):
    rows = [[0] * n for _ in range(n)]
    rows[0][0] = 2
    for i in range(1, n):
        rows[i][i - 1] = -1
        rows[i][i] = 1
    return rows


def lattice_zn(n: int) -> Lattice:
    return Lattice.reference(_identity(n), name=f"Z{n}")


def lattice_dn(n: int) -> Lattice:
    if n < 1:
        raise UnknownLatticeError("D_n needs n >= 1")
    return Lattice.from_basis(AmbientForm(_identity(n)), _dn_rows(n), name=f"D{n}")


def lattice_dn_plus(n: int) -> Lattice:
    if n % 8:
        raise UnknownLatticeError(f"D{n}+ is even unimodular only for 8 | n")
    glue = [Fraction(1, 2)] * n
    return Lattice.from_basis(AmbientForm(_identity(n)), _dn_rows(n) + [glue],
                              name=f"D{n}plus")


_DISC11A = [[2, 0, 0], [0, 2, 1], [0, 1, 6]]
_DISC11B = [[2, 1, 1], [1, 2, 1], [1, 1, 8]]


def builtin(name: str) -> Lattice:
    """Catalog lattice by name.

    Names: ``E8``, ``E8E8``, ``H``, ``disc11a``, ``disc11b``, ``Dn(k)`` or
    ``Dk``, ``Dnplus(k)`` or ``Dkplus``, ``Zn(k)`` or ``Zk``.
    """
    key = name.strip()
    if key == "E8":
        return Lattice.reference(_e8_gram(), name="E8")
    if key in ("E8E8", "E8+E8"):
        e8 = builtin("E8")
        return direct_sum(e8, e8, name="E8E8")
    if key == "H":
        return Lattice.reference([[0, 1], [1, 0]], name="H")
    if key == "disc11a":
        return Lattice.reference(_DISC11A, name="disc11a")
    if key == "disc11b":
        return Lattice.reference(_DISC11B, name="disc11b")
    m = re.fullmatch(r"(Dnplus|Dn|Zn)\((\d+)\)|(D|Z)(\d+)(plus)?", key)
    if m:
        if m.group(1):
            kind, k = m.group(1), int(m.group(2))
        else:
            kind = {"D": "Dn", "Z": "Zn"}[m.group(3)] + ("plus" if m.group(5) else "")
            k = int(m.group(4))
        if kind == "Dnplus":
            return lattice_dn_plus(k)
        if kind == "Dn":
            return lattice_dn(k)
        if kind == "Zn":
            return lattice_zn(k)
    raise UnknownLatticeError(f"unknown builtin lattice {name!r}")
