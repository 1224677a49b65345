"""3-graphs on small labelled vertex sets, canonical forms and K4^- -free enumeration.

Vertices are 1-based.  Internally a graph on ``n <= 9`` vertices is also
encoded as an integer bit code (see ``_bits``); the lexicographically least
edge list of an isomorphism class is the relabelling with the largest code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache, total_ordering
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import _bits
from .errors import CostGuardError, InputError

MAX_CANON_N = 9
MAX_ENUM_K = 7

Triple = tuple[int, int, int]


@dataclass(frozen=True)
class ThreeGraph:
    n: int
    edges: tuple[Triple, ...] = ()

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise InputError(f"vertex count must be a non-negative integer, got {n!r}")
        norm = []
        for e in self.edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != 3 or len(set(t)) != 3:
                raise InputError(f"edge {e!r} does not have three distinct vertices")
            if t[0] < 1 or t[2] > n:
                raise InputError(f"edge {e!r} leaves the vertex range 1..{n}")
            norm.append(t)
        norm.sort()
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise InputError(f"duplicate edge {a!r}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "edges", tuple(norm))

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __str__(self) -> str:
        body = ",".join("".join(map(str, e)) for e in self.edges)
        return f"ThreeGraph(n={self.n}, {{{body}}})"

    def edge_set(self) -> frozenset[Triple]:
        return frozenset(self.edges)

    @property
    def code(self) -> int:
        """Bit code of the 0-based relabelling (requires n <= 9)."""
        return _bits.code_of(self.n, ((a - 1, b - 1, c - 1) for a, b, c in self.edges))

    @classmethod
    def from_code(cls, n: int, code: int) -> "ThreeGraph":
        return cls(n, tuple((a + 1, b + 1, c + 1) for a, b, c in _bits.edges_of(n, code)))

    def relabel(self, perm: Sequence[int]) -> "ThreeGraph":
        """Image under the map ``v -> perm[v-1]`` (perm is a 1-based permutation)."""
        if sorted(perm) != list(range(1, self.n + 1)):
            raise InputError(f"{perm!r} is not a permutation of 1..{self.n}")
        return ThreeGraph(self.n, tuple((perm[a - 1], perm[b - 1], perm[c - 1]) for a, b, c in self.edges))

    def link(self, v: int) -> tuple[tuple[int, int], ...]:
        """Link graph of ``v`` as sorted pairs."""
        return tuple(sorted(tuple(x for x in e if x != v) for e in self.edges if v in e))

    def codegree_matrix(self) -> np.ndarray:
        """Symmetric (n x n) integer matrix of pair codegrees, 0-based indices."""
        d = np.zeros((self.n, self.n), dtype=np.int64)
        if self.edges:
            e = np.asarray(self.edges, dtype=np.int64) - 1
            for i, j in ((0, 1), (0, 2), (1, 2)):
                np.add.at(d, (e[:, i], e[:, j]), 1)
            d = d + d.T
        return d

    def min_codegree(self) -> int:
        """Minimum codegree over all pairs; 0 when there is no pair."""
        if self.n < 2:
            return 0
        d = self.codegree_matrix()
        iu = np.triu_indices(self.n, 1)
        return int(d[iu].min())


@total_ordering
@dataclass(frozen=True, eq=False)
class CanonicalForm:
    graph: ThreeGraph

    @property
    def key(self) -> tuple:
        g = self.graph
        return (g.n, g.m, tuple(v for e in g.edges for v in e))

    def __eq__(self, other):
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return self.key == other.key

    def __lt__(self, other):
        if not isinstance(other, CanonicalForm):
            return NotImplemented
        return self.key < other.key

    def __hash__(self):
        return hash(self.key)


def is_k4minus_free(g: ThreeGraph) -> bool:
    """True iff no four vertices span three or more edges."""
    if g.m < 3:
        return True
    if g.n <= 12:
        es = g.edge_set()
        for q in itertools.combinations(range(1, g.n + 1), 4):
            a, b, c, d = q
            if ((a, b, c) in es) + ((a, b, d) in es) + ((a, c, d) in es) + ((b, c, d) in es) >= 3:
                return False
        return True
    return _k4minus_free_dense(g)


def _k4minus_free_dense(g: ThreeGraph) -> bool:
    n = g.n
    A = np.zeros((n, n, n), dtype=np.int8)
    for e in g.edges:
        for p in itertools.permutations(e):
            A[p[0] - 1, p[1] - 1, p[2] - 1] = 1
    upper = np.triu(np.ones((n, n), dtype=bool), 1)
    for a in range(n):
        for b in range(a + 1, n):
            # cnt[c, d] = edges among {a, b, c, d}
            cnt = A[a, b][:, None] + A[a, b][None, :] + A[a] + A[b]
            mask = upper.copy()
            mask[: b + 1, :] = False
            if (cnt[mask] >= 3).any():
                return False
    return True


def _canonical_search(n: int, edges0: Iterable[Triple], fixed: int = 0) -> tuple[int, tuple[int, ...]]:
    """Branch-and-prune search for the relabelling with the largest bit code.

    Positions ``0..fixed-1`` keep their vertices.  Returns ``(code, order)``
    where ``order[p]`` is the original vertex placed at position ``p``.
    The bound for a partial placement lists, in triple rank order, the bits
    already determined and, for every block of triples whose remaining
    members are still free, the known number of edges pushed to the front.
    """
    es = {tuple(sorted(e)) for e in edges0}
    plink: dict[tuple[int, int], set[int]] = {}
    for a, b, c in es:
        for x, y, z in ((a, b, c), (a, c, b), (b, c, a)):
            plink.setdefault((x, y), set()).add(z)

    def link(x, y):
        return plink.get((x, y) if x < y else (y, x), ())

    def has(x, y, z):
        return tuple(sorted((x, y, z))) in es

    def bound(order, free):
        j = len(order)
        k = n - j
        code = 0
        for a in range(n):
            if a >= j:
                t = sum(1 for e in es if e[0] in free and e[1] in free and e[2] in free)
                L = comb(k, 3)
                code = (code << L) | (((1 << t) - 1) << (L - t))
                break
            pa = order[a]
            for b in range(a + 1, n):
                if b >= j:
                    s = 0
                    for u, w in itertools.combinations(sorted(free), 2):
                        s += has(pa, u, w)
                    L = comb(k, 2)
                    code = (code << L) | (((1 << s) - 1) << (L - s))
                    break
                pb = order[b]
                for c in range(b + 1, n):
                    if c >= j:
                        r = sum(1 for u in link(pa, pb) if u in free)
                        code = (code << k) | (((1 << r) - 1) << (k - r))
                        break
                    code = (code << 1) | has(pa, pb, order[c])
        return code

    best = [-1, tuple(range(n))]

    def rec(order, free):
        if not free:
            c = bound(order, free)
            if c > best[0]:
                best[0], best[1] = c, tuple(order)
            return
        cands = []
        for u in sorted(free):
            b = bound(order + [u], free - {u})
            if b > best[0]:
                cands.append((b, u))
        cands.sort(key=lambda x: -x[0])
        for b, u in cands:
            if b > best[0]:
                rec(order + [u], free - {u})

    rec(list(range(fixed)), frozenset(range(fixed, n)))
    return best[0], best[1]


def canonical_form(g: ThreeGraph) -> CanonicalForm:
    """Lexicographically least relabelling of ``g``."""
    return CanonicalForm(canonical_graph(g))


def canonical_graph(g: ThreeGraph, fixed: int = 0) -> ThreeGraph:
    """Least relabelling among those fixing vertices ``1..fixed`` pointwise."""
    if g.n > MAX_CANON_N:
        raise CostGuardError(f"canonical forms are supported for n <= {MAX_CANON_N}, got n={g.n}")
    code, _ = _canonical_search(g.n, ((a - 1, b - 1, c - 1) for a, b, c in g.edges), fixed)
    return ThreeGraph.from_code(g.n, code)


def canonical_labelling(g: ThreeGraph, fixed: int = 0) -> tuple[int, ...]:
    """A 1-based permutation ``perm`` with ``g.relabel(perm)`` canonical."""
    if g.n > MAX_CANON_N:
        raise CostGuardError(f"canonical forms are supported for n <= {MAX_CANON_N}, got n={g.n}")
    _, order = _canonical_search(g.n, ((a - 1, b - 1, c - 1) for a, b, c in g.edges), fixed)
    perm = [0] * g.n
    for pos, v in enumerate(order):
        perm[v] = pos + 1
    return tuple(perm)


def are_isomorphic(g1: ThreeGraph, g2: ThreeGraph) -> bool:
    if g1.n != g2.n or g1.m != g2.m:
        return False
    return canonical_form(g1) == canonical_form(g2)


def induced_subgraph(g: ThreeGraph, vertices: Sequence[int]) -> ThreeGraph:
    """Subgraph on ``vertices``, relabelled 1..len(vertices) in the given order."""
    vs = [int(v) for v in vertices]
    if len(set(vs)) != len(vs):
        raise InputError(f"duplicate vertices in {vertices!r}")
    for v in vs:
        if not 1 <= v <= g.n:
            raise InputError(f"vertex {v} outside 1..{g.n}")
    pos = {v: i + 1 for i, v in enumerate(vs)}
    return ThreeGraph(len(vs), tuple(
        (pos[a], pos[b], pos[c]) for a, b, c in g.edges if a in pos and b in pos and c in pos))


def sort_codes(codes: np.ndarray) -> np.ndarray:
    """Order codes of same-size graphs by (edge count, lexicographic edge list)."""
    codes = np.asarray(codes, dtype=np.uint64)
    order = np.lexsort((-codes.astype(np.float64), _bits.popcount(codes)))
    return codes[order]


@lru_cache(maxsize=None)
def free_codes(k: int) -> np.ndarray:
    """Sorted canonical codes of all K4^- -free graphs on k vertices."""
    if k < 0 or k > MAX_ENUM_K:
        raise CostGuardError(f"enumeration supports 0 <= k <= {MAX_ENUM_K}, got {k}")
    if k < 3:
        return np.zeros(1, dtype=np.uint64)
    found = []
    for parent in free_codes(k - 1):
        ext = _bits.extend_codes(int(parent), k)
        ext = ext[_bits.k4minus_free(ext, k, must_contain=k - 1)]
        found.append(ext)
    cand = np.unique(np.concatenate(found))
    canon = np.unique(_bits.canonical_codes(cand, k))
    out = sort_codes(canon)
    out.setflags(write=False)
    return out


def enumerate_free(k: int) -> list[ThreeGraph]:
    """Canonical representatives of all K4^- -free 3-graphs on k vertices, in order."""
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise InputError(f"k must be a positive integer, got {k!r}")
    return [ThreeGraph.from_code(k, int(c)) for c in free_codes(int(k))]


class GraphBasis:
    """An ordered list of canonical graphs with a code -> index lookup."""

    def __init__(self, name: str, n: int, codes: np.ndarray):
        self.name = name
        self.n = n
        self.codes = np.asarray(codes, dtype=np.uint64)
        self._index = {int(c): i for i, c in enumerate(self.codes)}
        self._graphs: list[ThreeGraph] | None = None

    def __len__(self) -> int:
        return len(self.codes)

    @property
    def graphs(self) -> list[ThreeGraph]:
        if self._graphs is None:
            self._graphs = [ThreeGraph.from_code(self.n, int(c)) for c in self.codes]
        return self._graphs

    def __getitem__(self, i: int) -> ThreeGraph:
        return self.graphs[i]

    def index_of_code(self, code: int) -> int:
        return self._index[int(code)]

    def index_of(self, g: ThreeGraph) -> int:
        """Index of the class of ``g``; raises KeyError if it is not in the basis."""
        if g.n != self.n:
            raise KeyError(f"graph has {g.n} vertices, basis {self.name} has {self.n}")
        return self._index[canonical_graph(g).code]

    def edge_counts(self) -> np.ndarray:
        return _bits.popcount(self.codes)


@lru_cache(maxsize=None)
def basis(k: int) -> GraphBasis:
    return GraphBasis(f"F{k}", k, free_codes(k))


def basis_by_name(name: str) -> GraphBasis:
    if len(name) == 2 and name[0] == "F" and name[1].isdigit():
        return basis(int(name[1]))
    raise InputError(f"unknown basis {name!r}")
