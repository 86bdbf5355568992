"""Hecke operators as p-neighbor adjacency matrices on a class set."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import sympy as sp

from .errors import KneserError, NotTernaryError
from .genus import ClassSet, classify_neighbors


@dataclass
class HeckeMatrix:
    """[T_p]: entries[i][j] = number of p-neighbors of class i isometric to class j."""

    p: int
    entries: list[list[int]]
    labels: list[str]
    aut_orders: list[int]
    rank: int

    @property
    def h(self) -> int:
        return len(self.entries)

    def row_sums(self) -> list[int]:
        return [sum(r) for r in self.entries]

    def transpose(self) -> list[list[int]]:
        return [list(r) for r in zip(*self.entries)]

    def to_json(self) -> str:
        return json.dumps({"p": self.p, "basis": self.labels,
                           "aut_orders": self.aut_orders, "matrix": self.entries})


def hecke_matrix(cs: ClassSet, p: int, threads: int | None = None) -> HeckeMatrix:
    entries = classify_neighbors(cs, p, threads)
    labels = [lat.name or f"class{i}" for i, lat in enumerate(cs.representatives)]
    return HeckeMatrix(p, entries, labels, list(cs.aut_orders), cs.rank)


def _matmul(a, b):
    return [[sum(x * y for x, y in zip(r, c)) for c in zip(*b)] for r in a]


def commute(a: HeckeMatrix, b: HeckeMatrix) -> bool:
    return _matmul(a.entries, b.entries) == _matmul(b.entries, a.entries)


def is_self_adjoint(m: HeckeMatrix) -> bool:
    """#Aut(L_j) T_ij == #Aut(L_i) T_ji for all i, j."""
    t, aut = m.entries, m.aut_orders
    return all(aut[j] * t[i][j] == aut[i] * t[j][i]
               for i in range(m.h) for j in range(m.h))


def component_count(m: HeckeMatrix) -> int:
    """Connected components of the neighbor graph (edges taken undirected)."""
    parent = list(range(m.h))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(m.h):
        for j in range(m.h):
            if m.entries[i][j]:
                parent[find(i)] = find(j)
    return len({find(i) for i in range(m.h)})


# -- eigenforms -----------------------------------------------------------

@dataclass
class EigenPair:
    """Eigenvalue with its eigenvector.

    ``eigenvalue`` is a Fraction when rational, otherwise a sympy algebraic
    number; ``interval`` gives an isolating interval with rational endpoints
    for irrational values.  ``eigenvector`` is a primitive integer vector
    when the eigenvalue is rational, a sympy vector for quadratic values, and
    None for higher degree (only the interval is reported).
    """

    eigenvalue: object
    eigenvector: list | None
    minimal_polynomial: list[int]
    interval: tuple[Fraction, Fraction] | None = None

    @property
    def is_rational(self) -> bool:
        return isinstance(self.eigenvalue, Fraction)


def _primitive(vec) -> list[int]:
    fr = [Fraction(int(sp.numer(x)), int(sp.denom(x))) for x in vec]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    lead = next(x for x in ints if x)
    return [-x for x in ints] if lead < 0 else ints


def _combination(ms):
    """A combination sum c_i T_i with as many distinct eigenvalues as possible."""
    h = ms[0].h
    lam = sp.Symbol("x")
    best, best_sq = None, -1
    for c in range(1, 8):
        comb = sp.zeros(h, h)
        for i, m in enumerate(ms):
            comb += (c ** i) * sp.Matrix(m.entries)
        cp = comb.charpoly(lam).as_expr()
        sqf = sp.degree(sp.sqf_part(cp), lam)
        if sqf > best_sq:
            best, best_sq = comb, sqf
        if sqf == h:
            break
    return best


def eigenforms(ms: list[HeckeMatrix]) -> list[list[EigenPair]]:
    """Simultaneous eigenvectors of commuting Hecke matrices.

    Returns one list per input matrix; entry k of each list refers to the
    same common eigenvector.  Common eigenvectors come from a combination of
    the matrices with (if possible) simple spectrum, ordered by decreasing
    eigenvalue of the first matrix.
    """
    if not ms:
        return []
    h = ms[0].h
    if any(m.h != h for m in ms):
        raise KneserError("matrices must share the class-set basis")
    for a in ms:
        for b in ms:
            if not commute(a, b):
                raise KneserError(f"T_{a.p} and T_{b.p} do not commute")
    x = sp.Symbol("x")
    comb = _combination(ms)
    vectors = []          # (vector or None, factor, root index)
    for factor, mult in sp.factor_list(comb.charpoly(x).as_expr(), x)[1]:
        deg = sp.degree(factor, x)
        if deg <= 2:
            for root in sp.roots(sp.Poly(factor, x)):
                space = (comb - root * sp.eye(h)).nullspace()
                for vec in space:
                    vectors.append((list(vec), factor, root))
        else:
            for root in sp.Poly(factor, x).all_roots():
                vectors.append((None, factor, root))

    out = [[] for _ in ms]
    for vec, factor, root in vectors:
        for k, m in enumerate(ms):
            out[k].append(_pair(m, vec, factor, root, comb))
    order = sorted(range(len(vectors)), key=lambda i: -_as_float(out[0][i].eigenvalue))
    return [[lst[i] for i in order] for lst in out]


def _as_float(value) -> float:
    return float(value) if isinstance(value, Fraction) else float(sp.N(value, 30))


def _pair(m: HeckeMatrix, vec, factor, root, comb) -> EigenPair:
    x = sp.Symbol("x")
    t = sp.Matrix(m.entries)
    if vec is None:
        return _interval_pair(t, comb, root)
    v = sp.Matrix(vec)
    tv = t * v
    j = next(i for i in range(len(vec)) if sp.simplify(v[i]) != 0)
    lam = sp.nsimplify(sp.simplify(tv[j] / v[j]))
    if any(sp.simplify(tv[i] - lam * v[i]) != 0 for i in range(len(vec))):
        raise RuntimeError("eigenvector verification failed")
    mp = sp.Poly(sp.minimal_polynomial(lam, x), x)
    coeffs = [int(c) for c in mp.all_coeffs()]
    if lam.is_Rational:
        return EigenPair(Fraction(int(lam.p), int(lam.q)), _primitive(vec), coeffs)
    lo, hi = _isolate(mp, lam)
    return EigenPair(lam, [sp.simplify(c) for c in vec], coeffs, (lo, hi))


def _isolate(poly: sp.Poly, value) -> tuple[Fraction, Fraction]:
    approx = sp.N(value, 50)
    for (a, b), _ in poly.intervals():
        if a <= approx <= b:
            return Fraction(int(sp.numer(a)), int(sp.denom(a))), \
                Fraction(int(sp.numer(b)), int(sp.denom(b)))
    raise RuntimeError("could not isolate eigenvalue")


def _interval_pair(t, comb, root) -> EigenPair:
    # the eigenvalue of t on the eigenvector of comb for `root`
    x = sp.Symbol("x")
    vec = (comb - root * sp.eye(comb.shape[0])).nullspace()
    if not vec:
        raise RuntimeError("no eigenvector for an isolated root")
    v = vec[0]
    tv = t * v
    j = next(i for i in range(len(v)) if v[i] != 0)
    lam = sp.simplify(tv[j] / v[j])
    mp = sp.Poly(sp.minimal_polynomial(lam, x), x)
    coeffs = [int(c) for c in mp.all_coeffs()]
    if mp.degree() == 1:
        val = -Fraction(coeffs[1], coeffs[0])
        return EigenPair(val, None, coeffs)
    lo, hi = _isolate(mp, lam)
    return EigenPair(lam, None, coeffs, (lo, hi))


# -- Ramanujan bound ------------------------------------------------------

@dataclass
class RamanujanReport:
    holds: bool
    bound: int                   # 4(k - 1)
    max_square: object           # largest lambda^2 over non-trivial eigenvalues
    margin: object               # bound - max_square

    def __bool__(self):
        return self.holds


def ramanujan_check(m: HeckeMatrix) -> RamanujanReport:
    """All eigenvalues other than +-k satisfy lambda^2 <= 4(k - 1), exactly."""
    if m.rank != 3:
        raise NotTernaryError("the bound is only checked for ternary genera")
    x, mu = sp.symbols("x mu")
    k = m.row_sums()[0]
    if any(s != k for s in m.row_sums()):
        raise KneserError("rows do not all sum to the neighbor count")
    cp = sp.Poly(sp.Matrix(m.entries).charpoly(x).as_expr(), x)
    g = cp
    for root in (k, -k):
        while g.degree() > 0 and g.eval(root) == 0:
            g = sp.Poly(sp.quo(g.as_expr(), x - root), x)
    bound = 4 * (k - 1)
    if g.degree() <= 0:
        return RamanujanReport(True, bound, None, None)
    # roots of h are the squares of the roots of g
    h = sp.Poly(sp.resultant(g.as_expr(), mu - x ** 2, x), mu)
    above = h.count_roots(bound, None)
    at = 0
    hh = h
    while hh.degree() > 0 and hh.eval(bound) == 0:
        at += 1
        hh = sp.Poly(sp.quo(hh.as_expr(), mu - bound), mu)
    holds = above - at == 0
    squares = [r ** 2 for r in g.all_roots()]
    top = max(squares, key=lambda s: sp.N(s, 30))
    top = sp.nsimplify(sp.simplify(top))
    return RamanujanReport(holds, bound, top, sp.simplify(bound - top))


# -- output ---------------------------------------------------------------

def export_dot(m: HeckeMatrix) -> str:
    """Neighbor graph as a DOT digraph; edge labels are multiplicities."""
    lines = [f"digraph T{m.p} {{"]
    for i in range(m.h):
        lines.append(f'  {i} [label="{i}: {m.labels[i]} (#Aut {m.aut_orders[i]})"];')
    for i in range(m.h):
        for j in range(m.h):
            if m.entries[i][j]:
                lines.append(f'  {i} -> {j} [label="{m.entries[i][j]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
