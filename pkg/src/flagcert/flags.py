"""Types, rooted flags, subgraph densities and flag pair densities.

A flag is stored in *normal form*: its root occupies vertices ``1..s`` in
root order, and the remaining vertices are relabelled so that the bit code
is maximal among relabellings fixing the root (the rooted analogue of the
canonical form in ``hypergraph``).  Flag families are sorted by
``(edge count, edge list)``.

Pair densities are computed by direct counting: for a graph ``G`` every
injection of the type's vertices together with every ordered choice of
disjoint unlabelled vertex sets ``A`` and ``B`` of the right sizes is one
equally likely outcome.  Counts are kept as integers with a single shared
denominator, so that every derived value is an exact rational.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, perm
from typing import Sequence

import numpy as np

from . import _bits
from .errors import CostGuardError, InputError
from .hypergraph import (
    MAX_ENUM_K,
    ThreeGraph,
    basis,
    basis_by_name,
    canonical_form,
    canonical_graph,
    induced_subgraph,
    is_k4minus_free,
    sort_codes,
)
from .lincomb import LinComb


@dataclass(frozen=True)
class TypeGraph:
    name: str
    graph: ThreeGraph

    def __post_init__(self):
        if not is_k4minus_free(self.graph):
            raise InputError(f"type {self.name} contains K4^-")

    @property
    def size(self) -> int:
        return self.graph.n

    @property
    def code(self) -> int:
        return self.graph.code


def _t(name, n, edges=()):
    return TypeGraph(name, ThreeGraph(n, tuple(edges)))


EMPTY = _t("empty", 0)
TAU = _t("tau", 2)
SIGMA0 = _t("sigma0", 4)
SIGMA1 = _t("sigma1", 4, [(1, 2, 3)])
SIGMA2 = _t("sigma2", 4, [(1, 2, 3), (1, 2, 4)])
IOTA1 = _t("iota1", 5, [(1, 2, 3), (1, 2, 4)])
IOTA2 = _t("iota2", 5, [(1, 2, 3), (1, 4, 5)])
IOTA3 = _t("iota3", 5, [(1, 2, 3), (1, 2, 4), (1, 2, 5)])
IOTA4 = _t("iota4", 5, [(1, 2, 3), (1, 2, 4), (1, 3, 5)])
IOTA5 = _t("iota5", 5, [(1, 2, 3), (1, 2, 4), (3, 4, 5)])
IOTA6 = _t("iota6", 5, [(1, 2, 3), (1, 2, 4), (1, 3, 5), (2, 4, 5)])

SIGMAS = (SIGMA0, SIGMA1, SIGMA2)
IOTAS = (IOTA1, IOTA2, IOTA3, IOTA4, IOTA5, IOTA6)
TYPES = {t.name: t for t in (EMPTY, TAU, *SIGMAS, *IOTAS)}


def get_type(name: str) -> TypeGraph:
    try:
        return TYPES[name]
    except KeyError:
        raise InputError(f"unknown type {name!r}; known: {', '.join(TYPES)}") from None


@dataclass(frozen=True)
class Flag:
    type: TypeGraph
    graph: ThreeGraph
    root: tuple[int, ...]

    def __post_init__(self):
        root = tuple(int(v) for v in self.root)
        object.__setattr__(self, "root", root)
        if len(root) != self.type.size:
            raise InputError(f"root has {len(root)} vertices, type {self.type.name} has {self.type.size}")
        if induced_subgraph(self.graph, root) != self.type.graph:
            raise InputError(f"root {root} does not induce type {self.type.name}")
        if not is_k4minus_free(self.graph):
            raise InputError("flag graph contains K4^-")

    @property
    def n(self) -> int:
        return self.graph.n

    def normalized(self) -> "Flag":
        """Same flag with the root moved to vertices 1..s, in root order."""
        rest = [v for v in range(1, self.n + 1) if v not in self.root]
        order = list(self.root) + rest
        return Flag(self.type, induced_subgraph(self.graph, order), tuple(range(1, self.type.size + 1)))

    def canonical(self) -> "Flag":
        f = self.normalized()
        return Flag(self.type, canonical_graph(f.graph, fixed=self.type.size), f.root)

    def unlabelled(self) -> ThreeGraph:
        return canonical_form(self.graph).graph

    def __str__(self) -> str:
        from .formats import flag_to_text
        return flag_to_text(self)


class FlagFamily:
    """All ``k``-vertex flags of one type, in normal form and fixed order."""

    def __init__(self, sigma: TypeGraph, k: int, codes: np.ndarray):
        self.type = sigma
        self.k = k
        self.codes = np.asarray(codes, dtype=np.uint64)
        self._sorted_pos = np.argsort(self.codes)
        self._sorted = self.codes[self._sorted_pos]
        self._flags: list[Flag] | None = None

    def __len__(self) -> int:
        return len(self.codes)

    @property
    def flags(self) -> list[Flag]:
        if self._flags is None:
            s = self.type.size
            self._flags = [Flag(self.type, ThreeGraph.from_code(self.k, int(c)), tuple(range(1, s + 1)))
                           for c in self.codes]
        return self._flags

    def __getitem__(self, i: int) -> Flag:
        return self.flags[i]

    def canonical_codes(self, codes: np.ndarray) -> np.ndarray:
        return _bits.canonical_codes(np.asarray(codes, dtype=np.uint64), self.k, fixed=self.type.size)

    def lookup(self, codes: np.ndarray, canonical: bool = False) -> np.ndarray:
        """Family indices of labelled codes (root first); -1 if not a member."""
        c = np.asarray(codes, dtype=np.uint64)
        if not canonical:
            c = self.canonical_codes(c)
        pos = np.searchsorted(self._sorted, c)
        pos = np.minimum(pos, len(self._sorted) - 1)
        hit = self._sorted[pos] == c
        return np.where(hit, self._sorted_pos[pos], -1)

    def index_of(self, f: Flag) -> int:
        if f.type.graph != self.type.graph or f.n != self.k:
            raise KeyError("flag does not belong to this family")
        code = f.canonical().graph.code
        i = int(self.lookup(np.array([code], dtype=np.uint64), canonical=True)[0])
        if i < 0:
            raise KeyError("flag not found")
        return i


@lru_cache(maxsize=None)
def flag_family(sigma: TypeGraph, k: int) -> FlagFamily:
    s = sigma.size
    if k < s or k > MAX_ENUM_K:
        raise CostGuardError(f"flags need {s} <= k <= {MAX_ENUM_K}, got k={k}")
    if k == s:
        return FlagFamily(sigma, k, np.array([sigma.code], dtype=np.uint64))
    parent = flag_family(sigma, k - 1)
    found = []
    for pc in parent.codes:
        ext = _bits.extend_codes(int(pc), k)
        ext = ext[_bits.k4minus_free(ext, k, must_contain=k - 1)]
        found.append(ext)
    cand = np.unique(np.concatenate(found))
    canon = np.unique(_bits.canonical_codes(cand, k, fixed=s))
    return FlagFamily(sigma, k, sort_codes(canon))


def generate_flags(sigma: TypeGraph, k: int) -> list[Flag]:
    """One representative per rooted isomorphism class of k-vertex sigma-flags."""
    return list(flag_family(sigma, k).flags)


def swap_roots(f: Flag, perm_: Sequence[int]) -> Flag:
    """Relabel the root by ``perm_`` (a permutation of 1..s) and re-normalise.

    The type must be invariant under that permutation.
    """
    s = f.type.size
    g = f.normalized().graph
    full = list(perm_) + list(range(s + 1, f.n + 1))
    h = g.relabel(full)
    return Flag(f.type, h, tuple(range(1, s + 1))).canonical()


def _count_copies(h: ThreeGraph, g: ThreeGraph) -> int:
    target = canonical_form(h)
    return sum(1 for S in itertools.combinations(range(1, g.n + 1), h.n)
               if canonical_form(induced_subgraph(g, S)) == target)


def density(h: ThreeGraph, g: ThreeGraph) -> Fraction:
    """Probability that a uniform random v(h)-subset of g induces a copy of h."""
    if h.n > g.n:
        return Fraction(0)
    if h.m > g.m:
        return Fraction(0)
    return Fraction(_count_copies(h, g), comb(g.n, h.n))


def root_probability(f: Flag) -> Fraction:
    """Probability that a random injection of the type's vertices yields ``f``."""
    s = f.type.size
    g = f.graph
    target = f.canonical().graph
    hit = 0
    for inj in itertools.permutations(range(1, g.n + 1), s):
        rest = [v for v in range(1, g.n + 1) if v not in inj]
        h = induced_subgraph(g, list(inj) + rest)
        if induced_subgraph(h, range(1, s + 1)) != f.type.graph:
            continue
        if canonical_graph(h, fixed=s) == target:
            hit += 1
    return Fraction(hit, perm(g.n, s))


def type_probability(sigma: TypeGraph, g: ThreeGraph) -> Fraction:
    """Probability that a random ordered v(sigma)-tuple of g induces sigma in order."""
    s = sigma.size
    hit = sum(1 for inj in itertools.permutations(range(1, g.n + 1), s)
              if induced_subgraph(g, inj) == sigma.graph)
    return Fraction(hit, perm(g.n, s))


@lru_cache(maxsize=None)
def density_matrix(k: int, n: int) -> np.ndarray:
    """Integer matrix C with p(H_j, G_i) = C[i, j] / comb(n, k) over the F_k, F_n bases."""
    if not 0 <= k <= n <= MAX_ENUM_K:
        raise CostGuardError(f"density matrix needs k <= n <= {MAX_ENUM_K}")
    big = basis(n)
    small = basis(k)
    out = np.zeros((len(big), len(small)), dtype=np.int64)
    rows = np.arange(len(big))
    order = np.argsort(small.codes)
    ordered = small.codes[order]
    for S in itertools.combinations(range(n), k):
        can = _bits.canonical_codes(_bits.sub_codes(big.codes, n, S), k)
        np.add.at(out, (rows, order[np.searchsorted(ordered, can)]), 1)
    out.setflags(write=False)
    return out


class PairDensityTable:
    """Sparse table of flag pair densities over a graph basis.

    Entry ``(g, a, b)`` equals ``count / denominator``; absent entries are 0.
    """

    def __init__(self, sigma: TypeGraph, k1: int, k2: int, basis_id: str,
                 g: np.ndarray, f1: np.ndarray, f2: np.ndarray, count: np.ndarray, denominator: int,
                 sizes: tuple[int, int]):
        self.type = sigma
        self.k1, self.k2 = k1, k2
        self.basis_id = basis_id
        self.g, self.f1, self.f2 = g, f1, f2
        self.count = count
        self.denominator = int(denominator)
        self.sizes = sizes

    def __len__(self) -> int:
        return len(self.count)

    def value(self, g: int, a: int, b: int) -> Fraction:
        m = (self.g == g) & (self.f1 == a) & (self.f2 == b)
        return Fraction(int(self.count[m].sum()), self.denominator)

    def as_dict(self) -> dict[tuple[int, int, int], Fraction]:
        return {(int(a), int(b), int(g)): Fraction(int(c), self.denominator)
                for g, a, b, c in zip(self.g, self.f1, self.f2, self.count)}

    def mass(self) -> np.ndarray:
        """Per-graph total count over all flag pairs (numerators)."""
        n_g = len(basis_by_name(self.basis_id))
        out = np.zeros(n_g, dtype=np.int64)
        np.add.at(out, self.g, self.count)
        return out

    def quadratic(self, numerators, denominator: int = 1) -> LinComb:
        """Sum over pairs of ``M[a, b] * pbar(a, b, G)`` with ``M = numerators / denominator``.

        ``numerators`` is any 2-D integer array (object dtype allowed).
        """
        M = np.asarray(numerators, dtype=object)
        if M.shape != self.sizes:
            raise InputError(f"matrix shape {M.shape} does not match flag counts {self.sizes}")
        vals = M[self.f1, self.f2] * self.count.astype(object)
        return _collect(self.basis_id, self.g, vals, self.denominator * int(denominator))

    def linear(self, v1, v2, denominator: int = 1) -> LinComb:
        """Product of two flag combinations ``v1`` and ``v2`` (integer coefficients), averaged."""
        a = np.asarray(v1, dtype=object)
        b = np.asarray(v2, dtype=object)
        vals = a[self.f1] * b[self.f2] * self.count.astype(object)
        return _collect(self.basis_id, self.g, vals, self.denominator * int(denominator))

    def lift(self, n: int) -> "PairDensityTable":
        """Re-express over F_n by averaging over the induced subgraphs of each graph."""
        src_n = int(self.basis_id[1:])
        if n == src_n:
            return self
        P = density_matrix(src_n, n)
        gi, hi = np.nonzero(P)
        w = P[gi, hi]
        order = np.argsort(hi, kind="stable")
        gi, hi, w = gi[order], hi[order], w[order]
        starts = np.searchsorted(hi, np.arange(P.shape[1]))
        ends = np.searchsorted(hi, np.arange(P.shape[1]), side="right")
        reps = (ends - starts)[self.g]
        rec = np.repeat(np.arange(len(self.g)), reps)
        offs = np.arange(len(rec)) - np.repeat(np.cumsum(reps) - reps, reps)
        col = np.repeat(starts[self.g], reps) + offs
        g_new = gi[col]
        cnt = self.count[rec] * w[col]
        key = _merge_keys(g_new, self.f1[rec], self.f2[rec], self.sizes)
        return _from_keys(self.type, self.k1, self.k2, f"F{n}", key, cnt,
                          self.denominator * comb(n, src_n), self.sizes)


def _collect(basis_id: str, g: np.ndarray, vals: np.ndarray, den: int) -> LinComb:
    out: dict[int, Fraction] = {}
    if len(g):
        order = np.argsort(g, kind="stable")
        gs = g[order]
        vs = vals[order]
        cuts = np.flatnonzero(np.diff(gs)) + 1
        starts = np.concatenate(([0], cuts))
        sums = np.add.reduceat(vs, starts)
        for gi, s in zip(gs[starts], sums):
            if s:
                out[int(gi)] = Fraction(int(s), den)
    return LinComb(basis_id, out)


def _merge_keys(g, f1, f2, sizes):
    K1, K2 = sizes
    return (g.astype(np.int64) * K1 + f1) * K2 + f2


def _from_keys(sigma, k1, k2, basis_id, key, cnt, den, sizes):
    K1, K2 = sizes
    uk, inv = np.unique(key, return_inverse=True)
    tot = np.zeros(len(uk), dtype=np.int64)
    np.add.at(tot, inv.ravel(), cnt)
    f2 = uk % K2
    f1 = (uk // K2) % K1
    g = uk // (K1 * K2)
    return PairDensityTable(sigma, k1, k2, basis_id, g, f1, f2, tot, den, sizes)


def pair_counts(sigma: TypeGraph, k1: int, k2: int, codes: np.ndarray, n: int):
    """Raw direct counts ``(graph row, flag a, flag b)`` for graphs given by codes on n vertices.

    Returns arrays ``(g, f1, f2)`` with one entry per favourable outcome and
    the total number of outcomes per graph.
    """
    s = sigma.size
    a1, a2 = k1 - s, k2 - s
    if a1 < 0 or a2 < 0 or s + a1 + a2 > n:
        raise InputError(f"flag sizes {k1}, {k2} do not fit type {sigma.name} in {n} vertices")
    fam1, fam2 = flag_family(sigma, k1), flag_family(sigma, k2)
    codes = np.asarray(codes, dtype=np.uint64)
    rows_all = np.arange(len(codes))
    gs, i1s, i2s = [], [], []
    for inj in itertools.permutations(range(n), s):
        if s:
            ok = _bits.sub_codes(codes, n, inj) == np.uint64(sigma.code)
            if not ok.any():
                continue
            sub, rows = codes[ok], rows_all[ok]
        else:
            sub, rows = codes, rows_all
        rest = [v for v in range(n) if v not in inj]
        for A in itertools.combinations(rest, a1):
            left = [v for v in rest if v not in A]
            i1 = fam1.lookup(_bits.sub_codes(sub, n, inj + A))
            for B in itertools.combinations(left, a2):
                i2 = fam2.lookup(_bits.sub_codes(sub, n, inj + B))
                gs.append(rows)
                i1s.append(i1)
                i2s.append(i2)
    total = perm(n, s) * comb(n - s, a1) * comb(n - s - a1, a2)
    if not gs:
        e = np.zeros(0, dtype=np.int64)
        return e, e, e, total
    g = np.concatenate(gs)
    i1 = np.concatenate(i1s)
    i2 = np.concatenate(i2s)
    if (i1 < 0).any() or (i2 < 0).any():
        raise InputError("graph list contains a graph that is not K4^- -free")
    return g, i1, i2, total


def pair_density_table(sigma: TypeGraph, k1: int, k2: int, target: str | None = None,
                       method: str = "direct") -> PairDensityTable:
    """Flag pair densities ``pbar(F_a, F_b, G)`` for all flag pairs and all G in a basis.

    ``target`` defaults to the basis at ``k1 + k2 - v(sigma)`` vertices.
    ``method="direct"`` counts outcomes on the target graphs themselves;
    ``method="compose"`` counts on the smallest basis and lifts through
    induced-subgraph densities.
    """
    base_n = k1 + k2 - sigma.size
    if base_n > MAX_ENUM_K:
        raise CostGuardError(f"pair densities need at most {MAX_ENUM_K} vertices, got {base_n}")
    tb = basis_by_name(target) if target else basis(base_n)
    if tb.n < base_n:
        raise InputError(f"target {tb.name} has fewer than {base_n} vertices")
    sizes = (len(flag_family(sigma, k1)), len(flag_family(sigma, k2)))
    if method == "compose" and tb.n > base_n:
        return pair_density_table(sigma, k1, k2, None, "direct").lift(tb.n)
    if method not in ("direct", "compose"):
        raise InputError(f"unknown method {method!r}")
    g, i1, i2, total = pair_counts(sigma, k1, k2, tb.codes, tb.n)
    key = _merge_keys(g, i1, i2, sizes)
    return _from_keys(sigma, k1, k2, tb.name, key, np.ones(len(key), dtype=np.int64), total, sizes)
