"""Theta series and arithmetic oracles: eta products and point counts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sympy import isprime

from .errors import BadReductionError, KneserError, NotPrimeError
from .isometry import short_vectors
from .lattice import Lattice


@dataclass(frozen=True)
class IntPowerSeries:
    """c_0 + c_1 q + ... + c_M q^M with integer coefficients, truncated at M."""

    coefficients: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))

    @property
    def truncation(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, m: int) -> int:
        return self.coefficients[m] if m <= self.truncation else _raise_trunc(m, self)

    def __mul__(self, other: "IntPowerSeries") -> "IntPowerSeries":
        m = min(self.truncation, other.truncation)
        a, b = self.coefficients, other.coefficients
        out = [0] * (m + 1)
        for i in range(m + 1):
            if a[i]:
                for j in range(m + 1 - i):
                    out[i + j] += a[i] * b[j]
        return IntPowerSeries(out)

    def __add__(self, other: "IntPowerSeries") -> "IntPowerSeries":
        m = min(self.truncation, other.truncation)
        return IntPowerSeries([self[i] + other[i] for i in range(m + 1)])

    def truncate(self, m: int) -> "IntPowerSeries":
        return IntPowerSeries(self.coefficients[: m + 1])

    def to_list(self) -> list[int]:
        return list(self.coefficients)


def _raise_trunc(m, s):
    raise IndexError(f"coefficient {m} is beyond the truncation {s.truncation}")


def theta_series(lat: Lattice, m: int) -> IntPowerSeries:
    """sum_x q^Q(x) up to q^m for a positive definite even lattice."""
    if m < 0:
        raise KneserError("truncation must be nonnegative")
    lat.require_even()
    coeffs = [1] + [0] * m
    if m:
        sv = short_vectors(lat, m)
        qs = np.asarray(sv.norms2) // (2 * sv.scale)
        counts = np.bincount(qs, minlength=m + 1)
        for k in range(1, m + 1):
            coeffs[k] = 2 * int(counts[k])
    return IntPowerSeries(coeffs)


def eta_product(pairs, m: int) -> IntPowerSeries:
    """q * prod_(l, a) prod_{n >= 1} (1 - q^(l n))^a up to q^m."""
    if m < 1:
        raise KneserError("truncation must be at least 1")
    top = m - 1                     # degree needed in the product
    c = [0] * (top + 1)
    c[0] = 1
    for level, a in pairs:
        level, a = int(level), int(a)
        if level < 1:
            raise KneserError("levels must be positive")
        for n in range(1, top // level + 1):
            k = level * n
            for _ in range(abs(a)):
                if a > 0:
                    for i in range(top, k - 1, -1):
                        c[i] -= c[i - k]
                else:
                    for i in range(k, top + 1):
                        c[i] += c[i - k]
    return IntPowerSeries([0] + c)


def delta_series(m: int) -> IntPowerSeries:
    return eta_product([(1, 24)], m)


def tau(n: int) -> int:
    """Ramanujan's tau function."""
    return delta_series(n)[n]


# -- elliptic curves --------------------------------------------------------

@dataclass(frozen=True)
class Curve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: int = 0
    a2: int = 0
    a3: int = 0
    a4: int = 0
    a6: int = 0

    @property
    def discriminant(self) -> int:
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6


# Cremona 11a3, the curve whose point counts match the weight-2 newform of
# level 11.  (y^2 + y = x^3 + x^2 is 43a1 and does not.)
CURVE_11A3 = Curve(a2=-1, a3=1)


def ec_point_count(p: int, curve: Curve = CURVE_11A3) -> int:
    """#E(F_p) including the point at infinity, by counting every (x, y)."""
    if not isprime(p):
        raise NotPrimeError(f"{p} is not prime")
    if curve.discriminant % p == 0:
        raise BadReductionError(f"the curve has bad reduction at {p}")
    x = np.arange(p, dtype=np.int64)[:, None]
    y = np.arange(p, dtype=np.int64)[None, :]
    c = curve
    lhs = (y * y + (c.a1 % p) * x * y + (c.a3 % p) * y) % p
    rhs = (x * x % p * x + (c.a2 % p) * x * x + (c.a4 % p) * x + c.a6) % p
    return int(np.count_nonzero(lhs == rhs)) + 1


def a_p_from_curve(p: int, curve: Curve = CURVE_11A3) -> int:
    return p + 1 - ec_point_count(p, curve)
