"""The concrete expression families over F_7 used by the certificate identity.

* the target ``N - 3E``;
* the codegree expressions: the averaged product of each 6-vertex
  tau-flag with ``3E - N`` (tau is the 2-vertex type), merged over the
  swap of the two root labels;
* the tight-path expressions for the three 4-vertex types;
* quadratic forms over the 6-vertex flags of the six 5-vertex types.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _bits
from .errors import InputError
from .exact import RationalMatrix
from .flags import (
    IOTAS,
    SIGMAS,
    TAU,
    Flag,
    FlagFamily,
    PairDensityTable,
    TypeGraph,
    flag_family,
    pair_density_table,
)
from .hypergraph import ThreeGraph, basis
from .lincomb import LinComb

TOP = 7


def target_vector() -> LinComb:
    """Coefficient of G is p(N, G) - 3 p(E, G) = (35 - 4|G|) / 35."""
    B = basis(TOP)
    m = B.edge_counts()
    triples = len(_bits.triples(TOP))
    return LinComb.from_dense(B.name, [Fraction(triples - 4 * int(x), triples) for x in m])


@dataclass(frozen=True)
class CodegreeTable:
    """Integer coefficients of all codegree expressions: expression r is ``rows[r] / denominator``."""

    identifiers: tuple[str, ...]
    representatives: tuple[int, ...]
    partners: tuple[int, ...]
    rows: np.ndarray
    denominator: int

    def expression(self, r: int) -> LinComb:
        return LinComb.from_int_array(f"F{TOP}", self.rows[r], self.denominator)


def root_swap_partners(fam: FlagFamily) -> np.ndarray:
    """Index of the flag obtained by exchanging the first two root labels."""
    k = fam.k
    swapped = _bits.sub_codes(fam.codes, k, [1, 0] + list(range(2, k)))
    return fam.lookup(swapped)


@lru_cache(maxsize=None)
def codegree_table() -> CodegreeTable:
    fam = flag_family(TAU, 6)
    small = flag_family(TAU, 3)
    weight = np.zeros(len(small), dtype=np.int64)
    for i, f in enumerate(small.flags):
        weight[i] = 3 if f.graph.m == 1 else -1
    table = pair_density_table(TAU, 6, 3, f"F{TOP}")
    n_g = len(basis(TOP))
    full = np.zeros(len(fam) * n_g, dtype=np.int32)
    np.add.at(full, table.f1 * n_g + table.g, (table.count * weight[table.f2]).astype(np.int32))
    full = full.reshape(len(fam), n_g)
    partner = root_swap_partners(fam)
    reps = [a for a in range(len(fam)) if a <= partner[a]]
    from .formats import flag_to_text

    ids = tuple(flag_to_text(fam[a]) for a in reps)
    rows = full[reps]
    rows.setflags(write=False)
    return CodegreeTable(ids, tuple(reps), tuple(int(partner[a]) for a in reps), rows, table.denominator)


@dataclass(frozen=True)
class CodegreeExpression:
    identifier: str
    sources: tuple[Flag, ...]
    index: int

    @property
    def expression(self) -> LinComb:
        return codegree_table().expression(self.index)


def codegree_expressions() -> list[CodegreeExpression]:
    tab = codegree_table()
    fam = flag_family(TAU, 6)
    out = []
    for r, (ident, a, b) in enumerate(zip(tab.identifiers, tab.representatives, tab.partners)):
        src = (fam[a],) if a == b else (fam[a], fam[b])
        out.append(CodegreeExpression(ident, src, r))
    return out


def codegree_expression_of(f: Flag) -> LinComb:
    """Averaged product of a single 6-vertex tau-flag with 3E - N."""
    fam = flag_family(TAU, 6)
    a = fam.index_of(f)
    tab = codegree_table()
    for r, (x, y) in enumerate(zip(tab.representatives, tab.partners)):
        if a in (x, y):
            return tab.expression(r)
    raise KeyError("flag not found")


# --- tight paths ---------------------------------------------------------

def tight_paths(g: ThreeGraph, start=(1, 2), end=(3, 4), length: int = 3) -> list[tuple[int, ...]]:
    """Vertex sequences v_1..v_{l+2} whose consecutive triples are edges, with
    ``start`` inside the first edge and ``end`` inside the last."""
    es = g.edge_set()
    out = []
    for seq in itertools.permutations(range(1, g.n + 1), length + 2):
        ok = True
        for i in range(length):
            if tuple(sorted(seq[i:i + 3])) not in es:
                ok = False
                break
        if ok and set(start) <= set(seq[:3]) and set(end) <= set(seq[length - 1:length + 2]):
            out.append(seq)
    return out


def path_admitting_flags(sigma: TypeGraph) -> list[int]:
    """Indices of 5-vertex sigma-flags in which {1,2} reaches {3,4} by a tight path of length 3."""
    fam = flag_family(sigma, 5)
    return [i for i, f in enumerate(fam.flags) if tight_paths(f.graph)]


def _pair_preserving_automorphisms(sigma: TypeGraph) -> list[tuple[int, ...]]:
    goal = {frozenset((1, 2)), frozenset((3, 4))}
    out = []
    for p in itertools.permutations(range(1, 5)):
        if {frozenset(p[:2]), frozenset(p[2:])} == goal and sigma.graph.relabel(p) == sigma.graph:
            out.append(p)
    return out


def _relabel_roots(fam: FlagFamily, perm: tuple[int, ...]) -> np.ndarray:
    # new vertex perm[v] takes the role of old vertex v: read old vertex inv[w] at position w
    inv = [0] * 4
    for v, w in enumerate(perm):
        inv[w - 1] = v
    return fam.lookup(_bits.sub_codes(fam.codes, fam.k, inv + [4]))


def tournament_extension_masses(sigma: TypeGraph, subset) -> list[Fraction]:
    """For each labelled tournament realising sigma, the chance that a uniformly
    oriented new vertex produces a flag in ``subset``."""
    from .tournaments import extension_distribution, labelled_realizers

    return [sum((d[i] for i in subset), Fraction(0))
            for d in (extension_distribution(j, sigma) for j in labelled_realizers(sigma.graph))]


def tight_path_candidates(sigma: TypeGraph) -> list[tuple[int, ...]]:
    """All subsets of the path-admitting flags that are unions of orbits under the
    root symmetries fixing {{1,2},{3,4}} and that every tournament realising sigma
    hits with probability exactly 1/16; largest first."""
    fam = flag_family(sigma, 5)
    cand = path_admitting_flags(sigma)
    auts = _pair_preserving_automorphisms(sigma)
    images = [_relabel_roots(fam, p) for p in auts]
    orbit = {i: frozenset(int(im[i]) for im in images) for i in cand}
    good = []
    for r in range(len(cand), 0, -1):
        for sub in itertools.combinations(cand, r):
            s = set(sub)
            if any(not orbit[i] <= s for i in sub):
                continue
            if all(m == Fraction(1, 16) for m in tournament_extension_masses(sigma, sub)):
                good.append(sub)
    return good


def _middle_score(fam: FlagFamily, sub) -> int:
    return sum(1 for i in sub for p in tight_paths(fam[i].graph) if p[2] == 5)


@lru_cache(maxsize=None)
def tight_path_indices() -> tuple[tuple[int, ...], ...]:
    out = []
    for sigma in SIGMAS:
        fam = flag_family(sigma, 5)
        cands = tight_path_candidates(sigma)
        if not cands:
            raise RuntimeError(f"no admissible tight-path set for {sigma.name}")
        size = len(cands[0])
        top = [c for c in cands if len(c) == size]
        # prefer paths whose middle vertex is the unlabelled one, then family order
        top.sort(key=lambda c: (-_middle_score(fam, c), c))
        out.append(top[0])
    return tuple(out)


def tight_path_flag_sets() -> tuple[list[Flag], list[Flag], list[Flag]]:
    sets = []
    for sigma, idx in zip(SIGMAS, tight_path_indices()):
        fam = flag_family(sigma, 5)
        sets.append([fam[i] for i in idx])
    return tuple(sets)


def tight_path_vector(i: int, form: str = "all") -> np.ndarray:
    """Integer coefficients over the 5-vertex flags of the i-th 4-vertex type.

    ``form="all"``: 16 on path flags minus 1 on every flag;
    ``form="rest"``: 15 on path flags, -1 on the others.
    """
    fam = flag_family(SIGMAS[i], 5)
    P = set(tight_path_indices()[i])
    if form == "all":
        return np.array([16 * (a in P) - 1 for a in range(len(fam))], dtype=object)
    if form == "rest":
        return np.array([15 if a in P else -1 for a in range(len(fam))], dtype=object)
    raise InputError(f"unknown form {form!r}")


@lru_cache(maxsize=None)
def _sigma_table(i: int, target: str) -> PairDensityTable:
    if target == f"F{TOP}":
        return _sigma_table(i, "F6").lift(TOP)
    return pair_density_table(SIGMAS[i], 5, 5, target)


def tight_path_expression(i: int, target: str = f"F{TOP}", form: str = "all") -> LinComb:
    v = tight_path_vector(i, form)
    return _sigma_table(i, target).linear(v, v)


@lru_cache(maxsize=None)
def tight_path_expressions() -> tuple[LinComb, LinComb, LinComb]:
    return tuple(tight_path_expression(i) for i in range(3))


# --- quadratic forms over the 5-vertex types -----------------------------

@lru_cache(maxsize=None)
def iota_table(i: int) -> PairDensityTable:
    if not 1 <= i <= 6:
        raise InputError(f"type index must be in 1..6, got {i}")
    return pair_density_table(IOTAS[i - 1], 6, 6, f"F{TOP}")


def iota_size(i: int) -> int:
    return len(flag_family(IOTAS[i - 1], 6))


def iota_quadratic_expression(i: int, M) -> LinComb:
    """Sum over G in F_7 of sum_{a,b} M[a,b] pbar(F_a, F_b, G) times G."""
    k = iota_size(i)
    if isinstance(M, RationalMatrix):
        if (M.rows, M.cols) != (k, k):
            raise InputError(f"matrix is {M.rows}x{M.cols}, expected {k}x{k}")
        if not M.is_symmetric():
            raise InputError("matrix is not symmetric")
        N, d = M.scaled_integers()
    else:
        N = np.asarray(M, dtype=object)
        if N.shape != (k, k):
            raise InputError(f"matrix is {N.shape}, expected {(k, k)}")
        d = 1
        if any(isinstance(x, Fraction) for x in N.flat):
            R = RationalMatrix(k, k, tuple(N.flat))
            N, d = R.scaled_integers()
        if not (N == N.T).all():
            raise InputError("matrix is not symmetric")
    return iota_table(i).quadratic(N, d)
