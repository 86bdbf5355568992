import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from kneser.errors import (NotIsotropicError, PrimeDividesDiscriminantError,
                           VectorDivisibleError)
from kneser.finite import hensel_lift, isotropic_points
from kneser.isometry import is_isometric, root_determinant, short_vectors
from kneser.lattice import AmbientForm, Lattice, builtin, index, intersect
from kneser.neighbors import (NeighborRoots, all_neighbors, certificate,
                              is_p_neighbor, iter_neighbors, neighbor)


def test_disc11a_first_neighbor():
    lam1 = builtin("disc11a")
    nb = neighbor(lam1, 2, [1, 0, 1])
    half = Fraction(1, 2)
    expected = Lattice.from_basis(lam1.ambient, [[half, 0, half], [0, 2, 0], [0, 0, 1]])
    assert nb == expected
    assert [list(map(int, r)) for r in nb.gram] == [[2, 1, 3], [1, 8, 2], [3, 2, 6]]


def test_disc11a_neighbor_at_112_is_lam1():
    lam1 = builtin("disc11a")
    assert is_isometric(neighbor(lam1, 2, [1, 1, 2]), lam1) is not None


def test_preconditions():
    lam1 = builtin("disc11a")
    with pytest.raises(PrimeDividesDiscriminantError):
        neighbor(lam1, 11, [1, 0, 0])
    with pytest.raises(VectorDivisibleError):
        neighbor(lam1, 2, [2, 0, 2])
    with pytest.raises(NotIsotropicError):
        neighbor(lam1, 2, [1, 1, 0])          # Q = 2, not divisible by 4


def test_counts():
    lam1 = builtin("disc11a")
    assert len(all_neighbors(lam1, 2)) == 3
    assert len(all_neighbors(lam1, 3)) == 4
    assert len(all_neighbors(builtin("E8"), 2)) == 135


def test_visitor_streams_in_order():
    lam1 = builtin("disc11a")
    seen = []
    assert all_neighbors(lam1, 5, visitor=lambda pt, v, nb: seen.append((pt, nb))) is None
    assert [pt for pt, _ in seen] == isotropic_points(lam1, 5)
    assert [nb for _, nb in seen] == all_neighbors(lam1, 5)


def test_is_p_neighbor():
    lam1 = builtin("disc11a")
    lam2 = neighbor(lam1, 2, [1, 0, 1])
    assert is_p_neighbor(lam1, lam2, 2) and is_p_neighbor(lam2, lam1, 2)
    assert not is_p_neighbor(lam1, lam1, 2)
    assert not is_p_neighbor(lam1, lam2, 3)


def test_neighbors_distinct_and_certified():
    for name, p in [("disc11a", 3), ("disc11b", 5), ("E8", 3)]:
        lat = builtin(name)
        nbs = all_neighbors(lat, p)
        assert len(set(nbs)) == len(nbs)
        for nb in nbs[:20]:
            assert nb.is_even and nb.discriminant == lat.discriminant
            assert is_p_neighbor(lat, nb, p) and is_p_neighbor(nb, lat, p)
            # indices are powers of p only
            assert index(lat, intersect(lat, nb)) == p


def test_certificate():
    cert = certificate(builtin("disc11a"), 2, [1, 0, 1])
    assert cert.p == 2 and cert.target.discriminant == cert.source.discriminant


def _random_w(rng, n):
    return [rng.randint(-3, 3) for _ in range(n)]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.sampled_from(["disc11a", "disc11b", "E8", "Dn(4)"]),
       st.sampled_from([2, 3, 5]))
def test_well_defined(seed, name, p):
    """L(p, v) depends only on the line of v: v -> v + p w (re-lifted), v -> c v."""
    lat = builtin(name)
    if lat.discriminant.numerator % p == 0:
        return
    rng = random.Random(seed)
    pts = isotropic_points(lat, p)
    pt = pts[rng.randrange(len(pts))]
    v = hensel_lift(lat, p, pt)
    base = neighbor(lat, p, v)
    w = [a + p * b for a, b in zip(v, _random_w(rng, lat.n))]
    if lat.evaluate(w) % (p * p):
        w = hensel_lift(lat, p, w)
    assert neighbor(lat, p, w) == base
    c = rng.randrange(1, p)
    cv = [c * x for x in v]
    assert neighbor(lat, p, cv) == base


def test_leech_from_d24plus():
    d24 = builtin("D24plus")
    v = hensel_lift(d24, 47, d24.lattice_vector(list(range(24))))
    leech = neighbor(d24, 47, v)
    assert leech.n == 24 and leech.is_even and leech.discriminant == 1
    assert len(short_vectors(leech, 1)) == 0
    assert is_p_neighbor(d24, leech, 47)


@pytest.mark.parametrize("name,p", [("E8", 3), ("E8", 2), ("Dn(4)", 3), ("disc11a", 3),
                                    ("disc11b", 2), ("E8", 5)])
def test_neighbor_roots_match_direct(name, p):
    lat = builtin(name)
    oracle = NeighborRoots(lat)
    for k, (_, v, nb) in enumerate(iter_neighbors(lat, p)):
        if k >= 30:
            break
        assert oracle.root_determinant(p, v) == root_determinant(nb)
        assert oracle.root_count(p, v) == 2 * len(short_vectors(nb, 1).with_norm(1))


def test_neighbor_roots_rank16_spot_check():
    d16 = builtin("D16plus")
    oracle = NeighborRoots(d16)
    from kneser.finite import isotropic_array
    pts = isotropic_array(d16, 2)
    for r in pts[::3000]:
        v = hensel_lift(d16, 2, r)
        nb = neighbor(d16, 2, v)
        assert oracle.root_determinant(2, v) == root_determinant(nb)
