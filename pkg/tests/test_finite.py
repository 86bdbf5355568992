import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kneser.errors import (KneserError, NoClosedFormError, NotIsotropicError,
                           NotPrimeError,
                           PrimeDividesDiscriminantError)
from kneser.finite import (ProjPoint, brute_force_isotropic, count_formula,
                           hensel_lift, isotropic_points)
from kneser.lattice import Lattice, builtin, direct_sum


def test_disc11a_points():
    lat = builtin("disc11a")
    assert [str(x) for x in isotropic_points(lat, 2)] == ["(1:0:1)", "(1:1:0)", "(1:1:1)"]
    assert len(isotropic_points(lat, 3)) == 4


def test_rank16_point_counts():
    assert count_formula(16, 2) == 32895
    from kneser.finite import isotropic_array
    assert len(isotropic_array(builtin("D16plus"), 2)) == 32895
    assert len(isotropic_array(builtin("E8E8"), 2)) == 32895


def test_count_formula():
    assert count_formula(4, 3) == 16
    assert count_formula(3, 5) == 6
    with pytest.raises(NoClosedFormError):
        count_formula(5, 3)
    h = builtin("H")
    hh = direct_sum(h, h)
    # H + H is split at every prime, but indefinite; count by brute force
    assert len(brute_force_isotropic(hh, 3)) == 16


def test_prime_checks():
    lat = builtin("disc11a")
    with pytest.raises(PrimeDividesDiscriminantError):
        isotropic_points(lat, 11)
    with pytest.raises(NotPrimeError):
        isotropic_points(lat, 4)


def test_hensel_examples():
    lat = builtin("disc11a")
    assert hensel_lift(lat, 2, ProjPoint(2, (1, 0, 1))) == [1, 0, 1]
    assert hensel_lift(lat, 2, [1, 1, 0]) == [1, 1, 2]
    assert hensel_lift(lat, 2, [1, 1, 1]) == [1, 3, 1]
    with pytest.raises(NotIsotropicError):
        hensel_lift(lat, 2, [1, 0, 0])


def test_hensel_d24plus_47():
    d24 = builtin("D24plus")
    v = d24.lattice_vector(list(range(24)))
    w = hensel_lift(d24, 47, v)
    assert all((a - b) % 47 == 0 for a, b in zip(v, w))
    assert d24.evaluate(w) % 47 ** 2 == 0
    assert any(a % 47 for a in w)


def test_projpoint_normalize():
    assert ProjPoint.normalize(5, [0, 3, 1]).coords == (0, 1, 2)
    with pytest.raises(NotIsotropicError):
        ProjPoint.normalize(5, [0, 5, 10])


def random_ternary(rng, avoid=(2, 3, 5, 7)):
    """Random positive definite even ternary Gram with disc prime to ``avoid``."""
    while True:
        off = rng.integers(-3, 4, size=3)
        dia = 2 * rng.integers(1, 6, size=3)
        g = [[dia[0], off[0], off[1]], [off[0], dia[1], off[2]], [off[1], off[2], dia[2]]]
        try:
            lat = Lattice.reference([[int(x) for x in r] for r in g])
        except KneserError:
            continue                   # degenerate
        if not lat.is_positive_definite:
            continue
        d = lat.discriminant.numerator
        if all(d % p for p in avoid):
            return lat


def test_ternary_counts_random():
    """#isotropic points = p + 1 for 20 random ternary forms."""
    rng = np.random.default_rng(20)
    for _ in range(20):
        lat = random_ternary(rng)
        for p in (2, 3, 5, 7):
            pts = isotropic_points(lat, p)
            assert len(pts) == p + 1
            assert set(pts) == brute_force_isotropic(lat, p)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from([2, 3, 5, 7]))
def test_hensel_property(seed, p):
    lat = random_ternary(np.random.default_rng(seed))
    for pt in isotropic_points(lat, p):
        v = hensel_lift(lat, p, pt)
        assert lat.evaluate(v) % (p * p) == 0
        assert ProjPoint.normalize(p, v) == pt


def test_enumeration_matches_brute_force_rank4():
    lat = Lattice.reference([[2, 1, 0, 0], [1, 2, 1, 0], [0, 1, 2, 1], [0, 0, 1, 4]])
    for p in (3, 5, 7):
        if lat.discriminant.numerator % p:
            pts = isotropic_points(lat, p)
            assert pts == sorted(pts)
            assert len(set(pts)) == len(pts)
            assert set(pts) == brute_force_isotropic(lat, p)
