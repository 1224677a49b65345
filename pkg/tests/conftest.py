import itertools
import random

import pytest

from flagcert.hypergraph import ThreeGraph


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> ThreeGraph:
    edges = [e for e in itertools.combinations(range(1, n + 1), 3) if rng.random() < p]
    return ThreeGraph(n, tuple(edges))


def random_perm(rng: random.Random, n: int) -> list[int]:
    p = list(range(1, n + 1))
    rng.shuffle(p)
    return p


def naive_k4minus_free(g: ThreeGraph) -> bool:
    es = g.edge_set()
    for quad in itertools.combinations(range(1, g.n + 1), 4):
        if sum(1 for t in itertools.combinations(quad, 3) if t in es) >= 3:
            return False
    return True


def brute_canonical(g: ThreeGraph) -> tuple:
    """Lexicographically least sorted edge list over all relabellings."""
    best = None
    for p in itertools.permutations(range(1, g.n + 1)):
        key = tuple(sorted(tuple(sorted(p[v - 1] for v in e)) for e in g.edges))
        if best is None or key < best:
            best = key
    return best


@pytest.fixture
def rng():
    return random.Random(20240611)


def brute_flag_key(g: ThreeGraph, roots) -> tuple:
    """Root-preserving canonical key: least edge list over relabellings that send
    the i-th root to i and permute the rest."""
    s = len(roots)
    rest = [v for v in range(1, g.n + 1) if v not in roots]
    best = None
    for tail in itertools.permutations(range(s + 1, g.n + 1)):
        image = {r: i + 1 for i, r in enumerate(roots)}
        image.update(zip(rest, tail))
        key = tuple(sorted(tuple(sorted(image[v] for v in e)) for e in g.edges))
        if best is None or key < best:
            best = key
    return best


def brute_pair_density(sigma_graph: ThreeGraph, key1, k1, key2, k2, g: ThreeGraph):
    """Pair density from its definition with exhaustive enumeration of outcomes."""
    from fractions import Fraction

    from flagcert.hypergraph import induced_subgraph

    s = sigma_graph.n
    hit = total = 0
    for inj in itertools.permutations(range(1, g.n + 1), s):
        rest = [v for v in range(1, g.n + 1) if v not in inj]
        for A in itertools.combinations(rest, k1 - s):
            left = [v for v in rest if v not in A]
            for B in itertools.combinations(left, k2 - s):
                total += 1
                if induced_subgraph(g, inj) != sigma_graph:
                    continue
                h1 = induced_subgraph(g, inj + A)
                h2 = induced_subgraph(g, inj + B)
                roots = tuple(range(1, s + 1))
                if brute_flag_key(h1, roots) == key1 and brute_flag_key(h2, roots) == key2:
                    hit += 1
    return Fraction(hit, total)


def brute_pair_distribution(sigma_graph: ThreeGraph, k1: int, k2: int, g: ThreeGraph):
    """Map (key1, key2) -> probability over all outcomes of the pair experiment."""
    from collections import Counter
    from fractions import Fraction

    from flagcert.hypergraph import induced_subgraph

    s = sigma_graph.n
    roots = tuple(range(1, s + 1))
    hits = Counter()
    total = 0
    for inj in itertools.permutations(range(1, g.n + 1), s):
        rest = [v for v in range(1, g.n + 1) if v not in inj]
        typed = induced_subgraph(g, inj) == sigma_graph
        for A in itertools.combinations(rest, k1 - s):
            left = [v for v in rest if v not in A]
            for B in itertools.combinations(left, k2 - s):
                total += 1
                if typed:
                    hits[(brute_flag_key(induced_subgraph(g, inj + A), roots),
                          brute_flag_key(induced_subgraph(g, inj + B), roots))] += 1
    return {k: Fraction(v, total) for k, v in hits.items()}
