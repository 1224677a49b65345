"""Lower-bound constructions: random tournaments, vertex deletion and iterated H6 blow-ups.

Randomness comes from numpy's PCG64 generator.  Inner tournaments of a
blow-up draw from children of ``SeedSequence(seed)`` spawned in part order,
so every part is reproducible on its own.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from .errors import CostGuardError, InputError
from .hypergraph import ThreeGraph, is_k4minus_free
from .tournaments import Tournament, ct_construction, is_prime, min_codegree, paley_tournament

PRNG_NAME = "numpy PCG64 via SeedSequence"
MAX_BLOWUP_N = 200
MAX_FREE_CHECK_N = 60

H6_EDGES = ((1, 2, 3), (2, 3, 4), (3, 4, 5), (1, 4, 5), (1, 2, 5),
            (1, 3, 6), (3, 5, 6), (2, 5, 6), (2, 4, 6), (1, 4, 6))


def h6() -> ThreeGraph:
    return ThreeGraph(6, H6_EDGES)


def is_five_cycle(pairs) -> bool:
    """True iff the 2-graph given by ``pairs`` is a single cycle on five vertices."""
    pairs = [tuple(p) for p in pairs]
    verts = {v for p in pairs for v in p}
    if len(pairs) != 5 or len(verts) != 5:
        return False
    deg = {v: 0 for v in verts}
    for a, b in pairs:
        deg[a] += 1
        deg[b] += 1
    if any(d != 2 for d in deg.values()):
        return False
    # two vertex-disjoint cycles would need at least six vertices
    return True


def random_tournament(n: int, seed) -> Tournament:
    """Every pair gets an independent fair orientation; ``seed`` is an int or SeedSequence."""
    if n < 1:
        raise InputError("n must be positive")
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(int(seed))
    rng = np.random.Generator(np.random.PCG64(ss))
    bits = rng.integers(0, 2, size=comb(n, 2))
    return Tournament(n, tuple(bool(b) for b in bits))


def delete_vertices(t: Tournament, count: int, vertices=None) -> tuple[Tournament, int]:
    """Remove ``count`` vertices (the last ones unless given); returns the tournament and its delta_2."""
    if vertices is None:
        vertices = list(range(t.n - count + 1, t.n + 1))
    vertices = sorted(set(int(v) for v in vertices))
    if len(vertices) != count or count >= t.n or count < 1:
        raise InputError(f"cannot delete {count} of {t.n} vertices")
    if vertices[0] < 1 or vertices[-1] > t.n:
        raise InputError("vertex out of range")
    keep = [v for v in range(1, t.n + 1) if v not in vertices]
    s = t.subtournament(keep)
    return s, min_codegree(s)


@dataclass
class BlowupSpec:
    n: int
    t: int
    seed: int = 0
    paley: bool = False

    def __post_init__(self):
        if self.t < 0:
            raise InputError("depth must be non-negative")
        if self.n < 6 ** self.t:
            raise InputError(f"n={self.n} is too small for depth {self.t}: need n >= {6 ** self.t}")
        if self.n > MAX_BLOWUP_N:
            raise CostGuardError(f"blow-ups are limited to n <= {MAX_BLOWUP_N}")


@dataclass
class BlowupResult:
    graph: ThreeGraph
    spec: BlowupSpec
    inner: list[tuple[list[int], str, Tournament]] = field(default_factory=list)

    def stats(self, check_free: bool | None = None) -> dict:
        g = self.graph
        n = g.n
        bound = Fraction(2, 7) - Fraction(1, 28) * Fraction(1, 6 ** (2 * self.spec.t))
        density = Fraction(g.m, comb(n, 3)) if n >= 3 else Fraction(0)
        out = {
            "n": n,
            "depth": self.spec.t,
            "seed": self.spec.seed,
            "prng": PRNG_NAME,
            "edges": g.m,
            "min_codegree": g.min_codegree(),
            "edge_density": str(density),
            "formula_density": str(bound),
            "formula_edges": float(bound * comb(n, 3)),
            "inner": [{"size": len(p), "kind": kind, "min_codegree": min_codegree(tt)} for p, kind, tt in self.inner],
        }
        if check_free is None:
            check_free = n <= MAX_FREE_CHECK_N
        if check_free:
            out["k4minus_free"] = is_k4minus_free(g)
        return out


def balanced_parts(vertices: list[int], k: int = 6) -> list[list[int]]:
    """Split in order into k consecutive blocks whose sizes differ by at most one."""
    n = len(vertices)
    sizes = [n // k + (i < n % k) for i in range(k)]
    out, pos = [], 0
    for s in sizes:
        out.append(vertices[pos:pos + s])
        pos += s
    return out


def iterated_blowup(spec: BlowupSpec) -> BlowupResult:
    edges: list[tuple[int, int, int]] = []
    inner: list[tuple[list[int], str, Tournament]] = []
    root = np.random.SeedSequence(spec.seed)
    pattern = [tuple(x - 1 for x in e) for e in H6_EDGES]

    def place_tournament(verts: list[int], ss):
        m = len(verts)
        if spec.paley and is_prime(m) and m % 4 == 3:
            tt, kind = paley_tournament(m), "paley"
        else:
            tt, kind = random_tournament(m, ss), "random"
        inner.append((verts, kind, tt))
        for a, b, c in ct_construction(tt).edges:
            edges.append((verts[a - 1], verts[b - 1], verts[c - 1]))

    def build(verts: list[int], depth: int, ss):
        if depth == 0:
            place_tournament(verts, ss)
            return
        parts = balanced_parts(verts)
        for i, j, k in pattern:
            for a, b, c in itertools.product(parts[i], parts[j], parts[k]):
                edges.append((a, b, c))
        for part, child in zip(parts, ss.spawn(6)):
            build(part, depth - 1, child)

    build(list(range(1, spec.n + 1)), spec.t, root)
    return BlowupResult(ThreeGraph(spec.n, tuple(edges)), spec, inner)
