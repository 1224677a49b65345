"""Tournaments, their cyclic-triangle 3-graphs and codegree statistics."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from .errors import CostGuardError, InputError
from .hypergraph import ThreeGraph, basis, is_k4minus_free

MAX_TOURNAMENT_ENUM = 7
MAX_REALIZE_N = 7
MAX_DEFECT_N = 20


@lru_cache(maxsize=None)
def _pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(itertools.combinations(range(1, n + 1), 2))


@dataclass(frozen=True)
class Tournament:
    """Orientation of K_n on 1..n; ``bits[r]`` is True when the r-th pair (i<j) is oriented i->j."""

    n: int
    bits: tuple[bool, ...]

    def __post_init__(self):
        if self.n < 0:
            raise InputError("negative vertex count")
        b = tuple(bool(x) for x in self.bits)
        if len(b) != comb(self.n, 2):
            raise InputError(f"expected {comb(self.n, 2)} orientation bits, got {len(b)}")
        object.__setattr__(self, "bits", b)

    @classmethod
    def from_adjacency(cls, A) -> "Tournament":
        A = np.asarray(A)
        n = A.shape[0]
        for i in range(n):
            if A[i, i]:
                raise InputError("self-loop in adjacency matrix")
            for j in range(i + 1, n):
                if bool(A[i, j]) == bool(A[j, i]):
                    raise InputError(f"pair ({i + 1},{j + 1}) is not oriented exactly once")
        return cls(n, tuple(bool(A[i - 1, j - 1]) for i, j in _pairs(n)))

    @classmethod
    def from_arcs(cls, n: int, arcs) -> "Tournament":
        A = np.zeros((n, n), dtype=np.int8)
        for x, y in arcs:
            A[x - 1, y - 1] = 1
        return cls.from_adjacency(A)

    def adjacency(self) -> np.ndarray:
        """0/1 matrix with A[i-1, j-1] = 1 iff i -> j."""
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for (i, j), b in zip(_pairs(self.n), self.bits):
            if b:
                A[i - 1, j - 1] = 1
            else:
                A[j - 1, i - 1] = 1
        return A

    def arc(self, x: int, y: int) -> bool:
        """True iff x -> y."""
        if x == y:
            raise InputError("no arc from a vertex to itself")
        i, j = min(x, y), max(x, y)
        b = self.bits[_pairs(self.n).index((i, j))]
        return b if x < y else not b

    def out_degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1)

    def in_degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=0)

    def relabel(self, perm: Sequence[int]) -> "Tournament":
        """Image under ``v -> perm[v-1]``."""
        A = self.adjacency()
        B = np.zeros_like(A)
        p = np.asarray(perm) - 1
        B[np.ix_(p, p)] = A
        return Tournament.from_adjacency(B)

    def reversed(self) -> "Tournament":
        return Tournament(self.n, tuple(not b for b in self.bits))

    def reverse_arc(self, x: int, y: int) -> "Tournament":
        A = self.adjacency()
        A[x - 1, y - 1], A[y - 1, x - 1] = A[y - 1, x - 1], A[x - 1, y - 1]
        return Tournament.from_adjacency(A)

    def subtournament(self, vertices: Sequence[int]) -> "Tournament":
        A = self.adjacency()
        p = np.asarray(vertices) - 1
        return Tournament.from_adjacency(A[np.ix_(p, p)])


def transitive_tournament(n: int) -> Tournament:
    return Tournament(n, (True,) * comb(n, 2))


def cyclic_triangle() -> Tournament:
    return Tournament.from_arcs(3, [(1, 2), (2, 3), (3, 1)])


def ct_construction(t: Tournament) -> ThreeGraph:
    """The 3-graph whose edges are the cyclically oriented triangles of ``t``."""
    A = t.adjacency()
    edges = [(a, b, c) for a, b, c in itertools.combinations(range(1, t.n + 1), 3)
             if A[a - 1, b - 1] == A[b - 1, c - 1] != A[a - 1, c - 1]]
    return ThreeGraph(t.n, tuple(edges))


@dataclass(frozen=True)
class CodegreeReport:
    """``C[x, y]``: cyclic triangles through {x, y} (symmetric);
    ``R[x, y]``: for an arc x -> y, the number of z with x -> z -> y (zero off arcs)."""

    C: np.ndarray
    R: np.ndarray
    delta2: int
    identity_ok: bool


def cyclic_codegrees(t: Tournament) -> CodegreeReport:
    n = t.n
    if n < 2:
        raise InputError("codegrees need at least two vertices")
    A = t.adjacency()
    P = A @ A
    # for an arc x->y: P[y, x] counts y->z->x (cyclic), P[x, y] counts x->z->y
    C = np.where(A.T == 1, P, 0)
    C = C + C.T
    R = np.where(A == 1, P, 0)
    iu = np.triu_indices(n, 1)
    delta2 = int(C[iu].min())
    dout, din = A.sum(axis=1), A.sum(axis=0)
    xs, ys = np.nonzero(A)
    ok = bool(np.all(R[xs, ys] == (n - 2) - din[xs] - dout[ys] + C[xs, ys]))
    return CodegreeReport(C, R, delta2, ok)


def min_codegree(t: Tournament) -> int:
    """Minimum cyclic codegree over pairs; 0 when there are fewer than three vertices."""
    if t.n < 3:
        return 0
    return cyclic_codegrees(t).delta2


@lru_cache(maxsize=None)
def _pair_perm_weights(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    npairs = len(pairs)
    rank = {p: r for r, p in enumerate(pairs)}
    perms = list(itertools.permutations(range(n)))
    W = np.zeros((npairs, len(perms)))
    off = np.zeros(len(perms))
    for j, p in enumerate(perms):
        for r, (a, b) in enumerate(pairs):
            x, y = p[a], p[b]
            w = 2.0 ** (npairs - 1 - rank[(min(x, y), max(x, y))])
            if x < y:
                W[r, j] = w
            else:
                W[r, j] = -w
                off[j] += w
    return W, off


def _canonical_tournament_codes(codes: np.ndarray, n: int) -> np.ndarray:
    """Least orientation code over all relabellings (first pair is the top bit)."""
    npairs = comb(n, 2)
    if npairs == 0:
        return codes.copy()
    W, off = _pair_perm_weights(n)
    shifts = np.arange(npairs - 1, -1, -1, dtype=np.int64)
    B = ((codes[:, None] >> shifts) & 1).astype(np.float64)
    return (B @ W + off).min(axis=1).astype(np.int64)


def _code_to_tournament(n: int, code: int) -> Tournament:
    npairs = comb(n, 2)
    return Tournament(n, tuple(bool(code >> (npairs - 1 - r) & 1) for r in range(npairs)))


def tournament_code(t: Tournament) -> int:
    code = 0
    for b in t.bits:
        code = code << 1 | b
    return code


@lru_cache(maxsize=None)
def _tournament_codes(k: int) -> tuple[int, ...]:
    if k <= 1:
        return (0,)
    old_pairs = list(itertools.combinations(range(k - 1), 2))
    new_pairs = list(itertools.combinations(range(k), 2))
    top = len(new_pairs) - 1
    pos = {p: top - r for r, p in enumerate(new_pairs)}
    # bit r of a parent code (counted from the top) moves to pos[old_pairs[r]]
    masks = np.arange(1 << (k - 1), dtype=np.int64)
    link = np.zeros(len(masks), dtype=np.int64)
    for v in range(k - 1):
        link |= ((masks >> v) & 1) << pos[(v, k - 1)]
    out = set()
    for parent in _tournament_codes(k - 1):
        base = 0
        for r, p in enumerate(old_pairs):
            if parent >> (len(old_pairs) - 1 - r) & 1:
                base |= 1 << pos[p]
        out.update(_canonical_tournament_codes(base | link, k).tolist())
    return tuple(sorted(out))


def enumerate_tournaments(k: int, allow_large: bool = False) -> list[Tournament]:
    """Isomorphism-class representatives with the least orientation string, sorted."""
    if k < 1:
        raise InputError("k must be positive")
    if k > MAX_TOURNAMENT_ENUM and not allow_large:
        raise CostGuardError(f"tournament enumeration is limited to k <= {MAX_TOURNAMENT_ENUM}")
    if k > MAX_TOURNAMENT_ENUM + 1:
        raise CostGuardError("tournament enumeration beyond 8 vertices is not supported")
    return [_code_to_tournament(k, c) for c in _tournament_codes(k)]


def canonical_tournament(t: Tournament) -> Tournament:
    if t.n > MAX_TOURNAMENT_ENUM + 1:
        raise CostGuardError("canonical tournaments are limited to 8 vertices")
    c = _canonical_tournament_codes(np.array([tournament_code(t)], dtype=np.int64), t.n)[0]
    return _code_to_tournament(t.n, int(c))


def tournaments_isomorphic(t1: Tournament, t2: Tournament) -> bool:
    return t1.n == t2.n and canonical_tournament(t1) == canonical_tournament(t2)


def realize_as_tournament(g: ThreeGraph) -> Tournament | None:
    """Some tournament T on V(g) with C(T) = g (as labelled graphs), or None.

    Orientation variables are the pairs; each triple forces "cyclic" (edge)
    or "not cyclic" (non-edge).  Unit propagation over triples with one
    unknown pair, then branching on pairs in lexicographic order.  Since
    reversing every arc preserves C(T), the first pair is fixed as 1 -> 2.
    """
    n = g.n
    if n > MAX_REALIZE_N:
        raise CostGuardError(f"realisation search is limited to n <= {MAX_REALIZE_N}")
    if n < 3:
        return transitive_tournament(n)
    if not is_k4minus_free(g):
        return None
    es = g.edge_set()
    pairs = _pairs(n)
    pid = {p: r for r, p in enumerate(pairs)}
    tri = []
    for a, b, c in itertools.combinations(range(1, n + 1), 3):
        tri.append((pid[(a, b)], pid[(b, c)], pid[(a, c)], (a, b, c) in es))
    by_pair = [[] for _ in pairs]
    for t in tri:
        for v in t[:3]:
            by_pair[v].append(t)

    def consistent(x, t):
        ab, bc, ac, want = t
        return (x[ab] == x[bc] != x[ac]) == want

    def propagate(x, queue):
        while queue:
            v = queue.pop()
            for t in by_pair[v]:
                unk = [w for w in t[:3] if x[w] is None]
                if not unk:
                    if not consistent(x, t):
                        return False
                elif len(unk) == 1:
                    w = unk[0]
                    ok = []
                    for val in (False, True):
                        x[w] = val
                        if consistent(x, t):
                            ok.append(val)
                    x[w] = None
                    if not ok:
                        return False
                    if len(ok) == 1:
                        x[w] = ok[0]
                        queue.append(w)
        return True

    def solve(x):
        try:
            v = x.index(None)
        except ValueError:
            return x
        for val in (True, False):
            y = list(x)
            y[v] = val
            if propagate(y, [v]):
                r = solve(y)
                if r is not None:
                    return r
        return None

    x = [None] * len(pairs)
    x[0] = True
    if not propagate(x, [0]):
        return None
    sol = solve(x)
    if sol is None:
        return None
    return Tournament(n, tuple(sol))


@lru_cache(maxsize=None)
def realizable_indices(k: int = 7) -> tuple[int, ...]:
    """Indices into F_k of graphs of the form C(T)."""
    B = basis(k)
    return tuple(i for i, g in enumerate(B.graphs) if realize_as_tournament(g) is not None)


def realizable_via_tournaments(k: int = 7) -> set[int]:
    """Same set as ``realizable_indices`` but computed from the tournament list."""
    B = basis(k)
    return {B.index_of(ct_construction(t)) for t in enumerate_tournaments(k)}


@dataclass(frozen=True)
class IotaDimension:
    type_name: str
    realizers: int
    realizers_up_to_reversal: int
    dimension: int
    vectors: tuple[tuple[Fraction, ...], ...]
    basis_vectors: tuple[tuple[Fraction, ...], ...]


def labelled_realizers(target: ThreeGraph) -> list[Tournament]:
    """All tournaments on 1..n whose cyclic triangles are exactly the edges of ``target``."""
    n = target.n
    out = []
    for mask in range(1 << comb(n, 2)):
        t = _code_to_tournament(n, mask)
        if ct_construction(t) == target:
            out.append(t)
    return out


def extension_distribution(j: Tournament, sigma) -> tuple[Fraction, ...]:
    """Distribution over (v(J)+1)-vertex sigma-flags of C(J + x) for a uniformly oriented new vertex x."""
    from .flags import flag_family

    n = j.n
    fam = flag_family(sigma, n + 1)
    A = j.adjacency()
    counts = [0] * len(fam)
    for mask in range(1 << n):
        B = np.zeros((n + 1, n + 1), dtype=np.int64)
        B[:n, :n] = A
        for v in range(n):
            if mask >> v & 1:
                B[v, n] = 1
            else:
                B[n, v] = 1
        g = ct_construction(Tournament.from_adjacency(B))
        idx = int(fam.lookup(np.array([g.code], dtype=np.uint64))[0])
        counts[idx] += 1
    return tuple(Fraction(c, 1 << n) for c in counts)


@lru_cache(maxsize=None)
def iota_dimensions() -> tuple[IotaDimension, ...]:
    from .exact import row_basis
    from .flags import IOTAS

    out = []
    for sigma in IOTAS:
        js = labelled_realizers(sigma.graph)
        vecs = tuple(extension_distribution(j, sigma) for j in js)
        reps = {min(tournament_code(j), tournament_code(j.reversed())) for j in js}
        basis_rows = row_basis(vecs) if vecs else []
        out.append(IotaDimension(sigma.name, len(js), len(reps), len(basis_rows), vecs,
                                 tuple(tuple(r) for r in basis_rows)))
    return tuple(out)


def t_upper_bound(n: int) -> int:
    """Bound on the largest minimum cyclic codegree of an n-vertex tournament."""
    if n < 3:
        raise InputError("bound needs n >= 3")
    u = ((n - 1) // 2) * ((n - 1) - (n - 1) // 2)
    # floor(3u/(n-1) - (n-2)/2) in exact arithmetic
    val = Fraction(3 * u, n - 1) - Fraction(n - 2, 2)
    return val.numerator // val.denominator


def t_exact(n: int) -> int:
    """Largest minimum cyclic codegree over all n-vertex tournaments (exhaustive)."""
    if n < 3:
        raise InputError("t_exact needs n >= 3")
    return max(min_codegree(t) for t in enumerate_tournaments(n))


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


def paley_tournament(q: int) -> Tournament:
    """Quadratic-residue tournament on Z_q (vertex v+1 represents residue v)."""
    if not is_prime(q) or q % 4 != 3:
        raise InputError(f"q={q} must be a prime congruent to 3 mod 4")
    if q > 1000:
        raise CostGuardError("Paley tournaments are limited to q <= 1000")
    e = (q - 1) // 2
    A = np.zeros((q, q), dtype=np.int64)
    for i in range(q):
        for j in range(q):
            if i != j and pow(j - i, e, q) == 1:
                A[i, j] = 1
    return Tournament.from_adjacency(A)


def doubly_regular_violation(t: Tournament) -> str | None:
    """None if t is doubly regular, else a description of the first failure."""
    n = t.n
    if n % 4 != 3:
        return f"n={n} is not congruent to 3 mod 4"
    A = t.adjacency()
    dout = A.sum(axis=1)
    for v in range(n):
        if dout[v] != (n - 1) // 2:
            return f"vertex {v + 1} has out-degree {dout[v]}, expected {(n - 1) // 2}"
    C = cyclic_codegrees(t).C
    for x, y in itertools.combinations(range(n), 2):
        if C[x, y] != (n + 1) // 4:
            return f"pair ({x + 1},{y + 1}) has cyclic codegree {C[x, y]}, expected {(n + 1) // 4}"
    return None


def extend_tournament(t: Tournament, x: int) -> Tournament:
    """Add a twin y of ``x``: x -> y, and {v, y} oriented opposite to {v, x}."""
    bad = doubly_regular_violation(t)
    if bad:
        raise InputError(f"tournament is not doubly regular: {bad}")
    n = t.n
    if not 1 <= x <= n:
        raise InputError(f"vertex {x} outside 1..{n}")
    A = t.adjacency()
    B = np.zeros((n + 1, n + 1), dtype=np.int64)
    B[:n, :n] = A
    B[x - 1, n] = 1
    for v in range(n):
        if v == x - 1:
            continue
        if A[v, x - 1]:
            B[n, v] = 1
        else:
            B[v, n] = 1
    return Tournament.from_adjacency(B)


def quasirandomness_defect(t: Tournament) -> Fraction:
    """max over Y of sum_x |d+(x,Y) - d-(x,Y)|, divided by n^2.

    The maximising X is always the whole vertex set because every summand
    is non-negative.
    """
    n = t.n
    if n > MAX_DEFECT_N:
        raise CostGuardError(f"defect computation is limited to n <= {MAX_DEFECT_N}")
    if n == 0:
        return Fraction(0)
    A = t.adjacency()
    D = (A - A.T).T  # D[y, x] = +1 if x -> y, -1 if y -> x
    best = 0
    chunk = 1 << 14
    total = 1 << n
    shifts = np.arange(n, dtype=np.int64)
    for s in range(0, total, chunk):
        ys = np.arange(s, min(total, s + chunk), dtype=np.int64)
        S = (ys[:, None] >> shifts) & 1
        best = max(best, int(np.abs(S @ D).sum(axis=1).max()))
    return Fraction(best, n * n)
