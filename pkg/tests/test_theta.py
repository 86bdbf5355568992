import pytest
import sympy as sp
from hypothesis import given, strategies as st
from sympy import divisor_sigma, primerange

from kneser.errors import BadReductionError, NotPrimeError
from kneser.lattice import builtin
from kneser.theta import (CURVE_11A3, Curve, IntPowerSeries, a_p_from_curve,
                          delta_series, ec_point_count, eta_product, tau,
                          theta_series)


def test_theta_examples():
    assert theta_series(builtin("disc11a"), 1).to_list() == [1, 4]
    assert theta_series(builtin("disc11b"), 1).to_list() == [1, 6]
    a = theta_series(builtin("E8E8"), 3)
    assert a == theta_series(builtin("D16plus"), 3)
    assert a.to_list() == [1, 480, 61920, 1050240]


def test_theta_e8_eisenstein():
    # theta_E8 = E_4 = 1 + 240 sum sigma_3(m) q^m
    got = theta_series(builtin("E8"), 4).to_list()
    assert got == [1] + [240 * int(divisor_sigma(m, 3)) for m in range(1, 5)]


def test_theta_basic_properties():
    for name in ("disc11a", "disc11b", "Dn(4)"):
        s = theta_series(builtin(name), 6).to_list()
        assert s[0] == 1 and all(c >= 0 and c % 2 == 0 for c in s[1:])


def _trunc(poly, q, m):
    return sp.Poly(sum((c * q ** k for (k,), c in poly.terms() if k <= m), sp.Integer(0)), q)


def sympy_eta(pairs, m):
    """Same product through sympy polynomials; negative powers by Newton inversion."""
    q = sp.Symbol("q")
    prod = sp.Poly(q, q)
    for level, a in pairs:
        factor = sp.Poly(1, q)
        for n in range(1, m // level + 1):
            factor = _trunc(factor * sp.Poly(1 - q ** (level * n), q), q, m)
        if a < 0:
            inv = sp.Poly(1, q)
            for _ in range(m.bit_length() + 1):
                inv = _trunc(inv * (sp.Poly(2, q) - factor * inv), q, m)
            factor = inv
        for _ in range(abs(a)):
            prod = _trunc(prod * factor, q, m)
    return [int(prod.coeff_monomial(q ** k)) for k in range(m + 1)]


def test_eta_examples():
    f = eta_product([(1, 2), (11, 2)], 5)
    assert (f[2], f[3], f[5]) == (-2, -1, 1)
    assert f.to_list() == sympy_eta([(1, 2), (11, 2)], 5)
    assert eta_product([(1, 2), (11, 2)], 1).to_list() == [0, 1]
    assert eta_product([(3, 5)], 1).to_list() == [0, 1]


def test_eta_against_sympy_series():
    assert eta_product([(1, 2), (11, 2)], 30).to_list() == sympy_eta([(1, 2), (11, 2)], 30)
    assert eta_product([(1, -1), (2, 3)], 12).to_list() == sympy_eta([(1, -1), (2, 3)], 12)


def test_euler_pentagonal():
    c = eta_product([(1, 1)], 40).to_list()[1:]
    expected = [0] * 40
    for k in range(-10, 11):
        e = k * (3 * k - 1) // 2
        if e < 40:
            expected[e] = (-1) ** k
    assert c == expected


def test_tau_against_eisenstein():
    # 1728 Delta = E_4^3 - E_6^2, computed from divisor sums
    m = 12
    e4 = IntPowerSeries([1] + [240 * int(divisor_sigma(k, 3)) for k in range(1, m + 1)])
    e6 = IntPowerSeries([1] + [-504 * int(divisor_sigma(k, 5)) for k in range(1, m + 1)])
    diff = (e4 * e4 * e4).coefficients
    sq = (e6 * e6).coefficients
    assert [(a - b) // 1728 for a, b in zip(diff, sq)] == delta_series(m).to_list()
    assert tau(2) == -24


def naive_count(p, curve):
    n = 1
    for x in range(p):
        for y in range(p):
            lhs = y * y + curve.a1 * x * y + curve.a3 * y
            rhs = x ** 3 + curve.a2 * x * x + curve.a4 * x + curve.a6
            n += (lhs - rhs) % p == 0
    return n


def test_curve_counts():
    assert [a_p_from_curve(p) for p in (2, 3, 5)] == [-2, -1, 1]
    for p in primerange(2, 60):
        if p != 11:
            assert ec_point_count(p) == naive_count(p, CURVE_11A3)
    with pytest.raises(BadReductionError):
        ec_point_count(11)
    with pytest.raises(NotPrimeError):
        ec_point_count(9)
    assert CURVE_11A3.discriminant == -11


def test_43a1_is_not_level_11():
    """y^2 + y = x^3 + x^2 disagrees with the level-11 form at p = 3, 5."""
    other = Curve(a2=1, a3=1)
    assert other.discriminant == -43
    assert [a_p_from_curve(p, other) for p in (2, 3, 5)] == [-2, -2, -4]
    with pytest.raises(BadReductionError):
        ec_point_count(43, other)


def test_modularity_triangle():
    f = eta_product([(1, 2), (11, 2)], 50)
    for p in primerange(2, 51):
        if p != 11:
            assert f[p] == a_p_from_curve(p)


series = st.lists(st.integers(-5, 5), min_size=6, max_size=6).map(IntPowerSeries)


@given(series, series, series)
def test_series_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
