"""Class sets by breadth-first p-neighbor search, and mass certification."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import IncompleteClassSetError, KneserError, NotPositiveDefiniteError
from .finite import check_prime, hensel_lift, isotropic_array
from .isometry import aut_group, fingerprint, is_isometric
from .lattice import Lattice
from .neighbors import neighbor, neighbor_roots
from .parallel import parallel_map

DEDUP_MODES = ("auto", "isometry", "root_determinant")


@dataclass
class ClassSet:
    """Genus representatives in discovery order.

    ``provenance[i]`` is ``(parent, p, v)`` for every class but the seed,
    meaning ``neighbor(representatives[parent], p, v)`` produced class i.
    ``neighbor_counts[p][i][j]`` counts p-neighbors of class i in class j
    for every prime used by the search.
    """

    representatives: list[Lattice]
    aut_orders: list[int]
    provenance: list
    primes_used: list[int]
    keys: list = field(default_factory=list)
    dedup: str = "isometry"
    neighbor_counts: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.representatives)

    @property
    def rank(self) -> int:
        return self.representatives[0].n

    @property
    def discriminant(self) -> Fraction:
        return self.representatives[0].discriminant


@dataclass
class MassReport:
    computed_mass: Fraction
    formula_mass: Fraction | None
    certified: bool

    @property
    def status(self) -> str:
        if self.formula_mass is None:
            return "uncertified (no mass formula; closure under the given primes only)"
        return "certified" if self.certified else "incomplete"


def _resolve_mode(seed: Lattice, dedup: str) -> str:
    if dedup not in DEDUP_MODES:
        raise KneserError(f"unknown dedup mode {dedup!r}")
    if dedup != "auto":
        return dedup
    if seed.n == 16 and seed.discriminant == 1:
        return "root_determinant"
    return "isometry"


class _Registry:
    """Classes found so far and how to recognize them."""

    def __init__(self, mode: str, depth: int):
        self.mode = mode
        self.depth = depth
        self.reps: list[Lattice] = []
        self.keys: list = []
        self.buckets: dict = {}

    def key(self, lat: Lattice):
        if self.mode == "root_determinant":
            from .isometry import root_determinant
            return root_determinant(lat)
        return fingerprint(lat, self.depth)

    def add(self, lat: Lattice, key) -> int:
        self.reps.append(lat)
        self.keys.append(key)
        self.buckets.setdefault(key, []).append(len(self.reps) - 1)
        return len(self.reps) - 1

    def find(self, lat: Lattice, key, trust_unique: bool = False) -> int | None:
        cands = self.buckets.get(key, [])
        if self.mode == "root_determinant":
            return cands[0] if cands else None
        if trust_unique and len(cands) == 1:
            return cands[0]
        for i in cands:
            if is_isometric(lat, self.reps[i]) is not None:
                return i
        return None


def _root_keys(chunk):
    lat, p, rows = chunk
    oracle = neighbor_roots(lat)
    return [oracle.root_determinant(p, hensel_lift(lat, p, r)) for r in rows]


def _keys_for(lat: Lattice, p: int, pts, threads: int):
    """Root-determinant keys of all neighbors at the given points, in order."""
    size = max(1, min(2048, len(pts) // max(1, 4 * threads) + 1))
    chunks = [(lat, p, pts[i:i + size]) for i in range(0, len(pts), size)]
    out = []
    for part in parallel_map(_root_keys, chunks, threads):
        out.extend(part)
    return out


def default_threads() -> int:
    env = os.environ.get("KNESER_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def _scan(reg: _Registry, lat: Lattice, p: int, threads: int, on_new, trust_unique=False):
    """Classify every p-neighbor of ``lat``; returns the count row."""
    pts = isotropic_array(lat, p)
    row: dict[int, int] = {}
    if reg.mode == "root_determinant":
        keys = _keys_for(lat, p, pts, threads)
        for r, key in zip(pts, keys):
            j = reg.find(None, key)
            if j is None:
                v = hensel_lift(lat, p, r)
                nb = neighbor(lat, p, v)
                j = on_new(nb, key, p, v)
            row[j] = row.get(j, 0) + 1
        return row
    for r in pts:
        v = hensel_lift(lat, p, r)
        nb = neighbor(lat, p, v)
        key = reg.key(nb)
        j = reg.find(nb, key, trust_unique)
        if j is None:
            j = on_new(nb, key, p, v)
        row[j] = row.get(j, 0) + 1
    return row


def enumerate_classes(seed: Lattice, primes, dedup: str = "auto", depth: int = 3,
                      threads: int | None = None) -> ClassSet:
    """Closure of {seed} under p-neighbors for p in ``primes``, breadth first."""
    primes = [int(p) for p in primes]
    if not primes:
        raise KneserError("need at least one prime")
    seed.require_even()
    if not seed.is_positive_definite:
        raise NotPositiveDefiniteError("seed lattice must be positive definite")
    for p in primes:
        check_prime(seed, p)
    threads = threads or default_threads()
    mode = _resolve_mode(seed, dedup)
    reg = _Registry(mode, depth)
    prov: list = [None]
    reg.add(seed, reg.key(seed))
    counts = {p: [] for p in primes}

    def on_new(nb, key, p, v):
        prov.append((current, p, tuple(int(x) for x in v)))
        return reg.add(nb, key)

    current = 0
    while current < len(reg.reps):
        lat = reg.reps[current]
        for p in primes:
            counts[p].append(_scan(reg, lat, p, threads, on_new))
        current += 1
    h = len(reg.reps)
    matrices = {p: [[rows[i].get(j, 0) for j in range(h)] for i in range(h)]
                for p, rows in counts.items()}
    auts = [aut_group(lat).order for lat in reg.reps]
    return ClassSet(reg.reps, auts, prov, primes, reg.keys, mode, matrices)


def classify_neighbors(cs: ClassSet, p: int, threads: int | None = None) -> list[list[int]]:
    """[T_p] counts on an existing class set (rows are source classes)."""
    if p in cs.neighbor_counts:
        return [list(r) for r in cs.neighbor_counts[p]]
    for lat in cs.representatives:
        check_prime(lat, p)
    threads = threads or default_threads()
    reg = _Registry(cs.dedup, _key_depth(cs))
    for lat, key in zip(cs.representatives, cs.keys):
        reg.add(lat, key)
    trust = certify(cs).certified

    def on_new(nb, key, q, v):
        raise IncompleteClassSetError(
            f"a {q}-neighbor of class {src} matches no class of the set")

    h = len(cs)
    rows = []
    for src in range(h):
        row = _scan(reg, cs.representatives[src], p, threads, on_new, trust)
        rows.append([row.get(j, 0) for j in range(h)])
    cs.neighbor_counts[p] = rows
    return [list(r) for r in rows]


def _key_depth(cs: ClassSet) -> int:
    if cs.dedup == "isometry" and cs.keys:
        return len(cs.keys[0][1])
    return 3


# -- masses ---------------------------------------------------------------

def mass(cs: ClassSet) -> Fraction:
    return sum((Fraction(1, a) for a in cs.aut_orders), Fraction(0))


@lru_cache(maxsize=None)
def bernoulli(k: int) -> Fraction:
    """B_k with B_1 = -1/2, from sum_{j<m} C(m, j) B_j = 0 for m >= 2."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    b = [Fraction(1)]
    from math import comb
    for m in range(1, k + 1):
        b.append(-sum(comb(m + 1, j) * b[j] for j in range(m)) / (m + 1))
    return b[k]


def mass_formula_ternary_prime(p: int) -> Fraction:
    return Fraction(p - 1, 48)


def mass_formula_unimodular(n: int) -> Fraction:
    """Mass of even unimodular lattices of rank n (8 | n)."""
    if n <= 0 or n % 8:
        raise KneserError("even unimodular lattices need 8 | n")
    m = abs(bernoulli(n // 2)) / n
    for k in range(1, n // 2):
        m *= abs(bernoulli(2 * k)) / (4 * k)
    return m


def formula_mass(n: int, disc: Fraction) -> Fraction | None:
    from sympy import isprime
    if n == 3 and disc.denominator == 1 and isprime(disc.numerator):
        return mass_formula_ternary_prime(disc.numerator)
    if n % 8 == 0 and n > 0 and disc == 1:
        return mass_formula_unimodular(n)
    return None


def certify(cs: ClassSet) -> MassReport:
    computed = mass(cs)
    if not len(cs):
        return MassReport(computed, None, False)
    fm = formula_mass(cs.rank, cs.discriminant)
    return MassReport(computed, fm, fm is not None and computed == fm)


def replay(cs: ClassSet, i: int) -> Lattice:
    """Rebuild class i by following its provenance chain from the seed."""
    entry = cs.provenance[i]
    if entry is None:
        return cs.representatives[i]
    parent, p, v = entry
    return neighbor(replay(cs, parent), p, v)
