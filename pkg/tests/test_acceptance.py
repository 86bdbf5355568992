"""Acceptance workloads, one test group per criterion.

Each test carries ``criterion(n)``; the conftest prints a pass/fail line per
criterion at the end of the run.
"""

import functools
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest
from sympy import primerange

from kneser.finite import count_formula, hensel_lift, isotropic_points
from kneser.genus import (certify, classify_neighbors, enumerate_classes, mass,
                          mass_formula_ternary_prime, mass_formula_unimodular, replay)
from kneser.hecke import (commute, eigenforms, hecke_matrix, is_self_adjoint,
                          ramanujan_check)
from kneser.isometry import aut_group, fingerprint, is_isometric, root_determinant
from kneser.lattice import builtin
from kneser.neighbors import all_neighbors, neighbor
from kneser.theta import a_p_from_curve, delta_series, eta_product, theta_series

ROOT = Path(__file__).resolve().parent.parent


def timed(func, *args, **kwargs):
    t0 = time.perf_counter()
    out = func(*args, **kwargs)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def disc11():
    cs, secs = timed(enumerate_classes, builtin("disc11a"), [2])
    return cs, secs


# -- 1 ---------------------------------------------------------------------

@pytest.mark.criterion(1)
def test_disc11_genus():
    t0 = time.perf_counter()
    cs = enumerate_classes(builtin("disc11a"), [2])
    rep = certify(cs)
    assert time.perf_counter() - t0 < 1.0
    assert len(cs) == 2
    assert sorted(cs.aut_orders) == [8, 12]
    assert mass(cs) == Fraction(5, 24)
    assert mass_formula_ternary_prime(11) == Fraction(11 - 1, 48)
    assert rep.certified and rep.computed_mass == rep.formula_mass


# -- 2 ---------------------------------------------------------------------

@pytest.mark.criterion(2)
def test_neighbor_ground_truth(disc11):
    t0 = time.perf_counter()
    cs, _ = disc11
    lam1, lam2 = cs.representatives
    pts = isotropic_points(lam1, 2)
    assert [p.coords for p in pts] == [(1, 0, 1), (1, 1, 0), (1, 1, 1)]
    lifts = [hensel_lift(lam1, 2, p) for p in pts]
    assert lifts[1] == [1, 1, 2]
    assert all(a % 2 == b % 2 for a, b in zip(lifts[2], [1, -1, 1]))
    targets = [lam2, lam1, lam2]
    nbs = [neighbor(lam1, 2, v) for v in lifts]
    assert nbs == all_neighbors(lam1, 2)
    for nb, want, other in zip(nbs, targets, [lam1, lam2, lam1]):
        assert is_isometric(nb, want) is not None
        assert is_isometric(nb, other) is None
    for nb in all_neighbors(lam2, 2):
        assert is_isometric(nb, lam1) is not None
    assert time.perf_counter() - t0 < 1.0


# -- 3 ---------------------------------------------------------------------

@pytest.mark.criterion(3)
def test_disc11_hecke_matrices(disc11):
    t0 = time.perf_counter()
    cs, build = disc11
    assert is_isometric(cs.representatives[0], builtin("disc11a")) is not None
    assert is_isometric(cs.representatives[1], builtin("disc11b")) is not None
    assert hecke_matrix(cs, 2).entries == [[1, 2], [3, 0]]
    assert hecke_matrix(cs, 3).entries == [[2, 2], [3, 1]]
    assert hecke_matrix(cs, 5).entries == [[4, 2], [3, 3]]
    assert build + time.perf_counter() - t0 < 5.0


# -- 4 ---------------------------------------------------------------------

PRIMES_50 = [p for p in primerange(2, 51) if p != 11]


@pytest.mark.criterion(4)
def test_modularity_triangle(disc11):
    t0 = time.perf_counter()
    cs, _ = disc11
    f = eta_product([(1, 2), (11, 2)], 50)
    v = [2, -3]
    for p in PRIMES_50:
        t = hecke_matrix(cs, p).entries
        tv = [sum(t[i][j] * v[j] for j in range(2)) for i in range(2)]
        lam = Fraction(tv[0], v[0])
        assert tv == [lam * x for x in v], p
        assert lam == f[p] == a_p_from_curve(p), p
    assert time.perf_counter() - t0 < 120.0


@pytest.mark.criterion(4)
def test_eigenform_listing(disc11):
    cs, _ = disc11
    ms = [hecke_matrix(cs, p) for p in (2, 3, 5)]
    forms = eigenforms(ms)
    assert [e.eigenvector for e in forms[0]] == [[1, 1], [2, -3]]
    assert [forms[k][1].eigenvalue for k in range(3)] == [-2, -1, 1]


# -- 5 ---------------------------------------------------------------------

@pytest.mark.criterion(5)
def test_hecke_structure(disc11):
    t0 = time.perf_counter()
    cs, _ = disc11
    ms = {p: hecke_matrix(cs, p) for p in (2, 3, 5, 7)}
    for p, m in ms.items():
        assert m.row_sums() == [p + 1] * m.h
        assert is_self_adjoint(m)
        rep = ramanujan_check(m)
        assert rep.holds and rep.bound == 4 * p
        for q, other in ms.items():
            assert commute(m, other)
    assert time.perf_counter() - t0 < 60.0


# -- 6 ---------------------------------------------------------------------

@pytest.mark.criterion(6)
def test_e8():
    cs = enumerate_classes(builtin("E8"), [2])
    assert len(cs) == 1
    grp, secs = timed(aut_group, builtin("E8"))
    assert secs < 600.0
    assert grp.order == 696729600
    assert Fraction(1, grp.order) == mass_formula_unimodular(8) == mass(cs)
    assert certify(cs).certified


# -- 7 ---------------------------------------------------------------------

@functools.cache
def rank16_classes():
    # computed on first use inside a test, so its time lands in the criterion total
    return timed(enumerate_classes, builtin("E8E8"), [2])


@pytest.mark.criterion(7)
def test_rank16_classes():
    cs, secs = rank16_classes()
    assert secs < 3600.0
    assert len(cs) == 2
    dets = [root_determinant(lat) for lat in cs.representatives]
    assert dets == [1, 4]
    a, b = cs.representatives
    assert theta_series(a, 3) == theta_series(b, 3)
    assert theta_series(a, 3).to_list() == [1, 480, 61920, 1050240]
    assert fingerprint(a) != fingerprint(b)
    assert certify(cs).certified
    assert mass(cs) == mass_formula_unimodular(16)


@pytest.mark.criterion(7)
def test_rank16_hecke_diagonal():
    cs, _ = rank16_classes()
    t2 = classify_neighbors(cs, 2)
    tau2 = delta_series(2)[2]
    assert tau2 == -24
    npts = count_formula(16, 2)
    assert npts == 32895
    off = Fraction((1 + 2 + 4 + 8) * (1 + 2 ** 11 - tau2) * 286, 691)
    assert t2[1][1] == 20025 == npts - off
    assert t2[1][0] == off
    assert [sum(r) for r in t2] == [npts, npts]
    # the closed form sums to the neighbor count along columns: compare its transpose
    c = Fraction((1 + 2 + 4 + 8) * (1 + 2 ** 11 - tau2), 691)
    closed = [[npts + c * -405, c * 286], [c * 405, npts + c * -286]]
    assert [list(r) for r in zip(*t2)] == closed


@pytest.mark.criterion(7)
def test_rank16_full_isometry_spot_check():
    cs, _ = rank16_classes()
    d16 = replay(cs, 1)
    assert is_isometric(d16, builtin("D16plus")) is not None
    assert is_isometric(d16, builtin("E8E8")) is None


# -- 8 ---------------------------------------------------------------------

@pytest.mark.criterion(8)
def test_leech():
    t0 = time.perf_counter()
    d24 = builtin("D24plus")
    v = hensel_lift(d24, 47, d24.lattice_vector(list(range(24))))
    leech = neighbor(d24, 47, v)
    assert leech.n == 24 and leech.is_even
    assert leech.discriminant == 1
    assert root_determinant(leech) == 1 and fingerprint(leech, depth=1)[1] == (0,)
    assert time.perf_counter() - t0 < 300.0


# -- 9 ---------------------------------------------------------------------

PROPERTY_SUITES = [
    "tests/test_lattice.py::test_disc_index_identity",
    "tests/test_neighbors.py::test_well_defined",
    "tests/test_isometry.py::test_short_vectors_vs_brute_force",
    "tests/test_finite.py::test_ternary_counts_random",
]


@pytest.mark.criterion(9)
@pytest.mark.parametrize("node", PROPERTY_SUITES)
def test_property_suite_standalone(node):
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", node],
                          cwd=ROOT, capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout[-2000:]
    assert " passed" in proc.stdout and "failed" not in proc.stdout
