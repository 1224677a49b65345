"""Bit-level encodings of small labelled 3-graphs and vectorised relabelling.

A 3-graph on the (0-based) vertex set range(n) is encoded as an integer
"code": the i-th triple of range(n) in lexicographic order owns bit
N - 1 - i, where N = C(n, 3).  With this weighting, among graphs with the
same number of edges, a lexicographically smaller sorted edge list has a
*larger* code, so lex-minimal relabellings are code maximisers.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

_ONE = np.uint64(1)


@lru_cache(maxsize=None)
def triples(n: int) -> tuple[tuple[int, int, int], ...]:
    return tuple(itertools.combinations(range(n), 3))


@lru_cache(maxsize=None)
def bit_of(n: int) -> dict[tuple[int, int, int], int]:
    ts = triples(n)
    top = len(ts) - 1
    return {t: top - r for r, t in enumerate(ts)}


def code_of(n: int, edges) -> int:
    pos = bit_of(n)
    code = 0
    for e in edges:
        code |= 1 << pos[tuple(sorted(e))]
    return code


def edges_of(n: int, code: int) -> list[tuple[int, int, int]]:
    pos = bit_of(n)
    code = int(code)
    return [t for t in triples(n) if code >> pos[t] & 1]


def popcount(codes: np.ndarray) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.uint64)
    out = np.zeros(codes.shape, dtype=np.int64)
    c = codes.copy()
    while c.any():
        out += (c & _ONE).astype(np.int64)
        c >>= _ONE
    return out


def bit_matrix(codes: np.ndarray, nbits: int) -> np.ndarray:
    shifts = np.arange(nbits, dtype=np.uint64)
    return ((codes[:, None] >> shifts) & _ONE).astype(np.float64)


def k4minus_free(codes: np.ndarray, n: int, must_contain: int | None = None) -> np.ndarray:
    """Vectorised test: no 4-set spans 3 or more edges.

    If ``must_contain`` is given only 4-sets through that vertex are checked
    (the caller guarantees the rest is already free).
    """
    codes = np.asarray(codes, dtype=np.uint64)
    pos = bit_of(n)
    ok = np.ones(codes.shape, dtype=bool)
    for quad in itertools.combinations(range(n), 4):
        if must_contain is not None and must_contain not in quad:
            continue
        cnt = np.zeros(codes.shape, dtype=np.int8)
        for t in itertools.combinations(quad, 3):
            cnt += ((codes >> np.uint64(pos[t])) & _ONE).astype(np.int8)
        ok &= cnt <= 2
    return ok


@lru_cache(maxsize=None)
def perm_weights(n: int, fixed: int = 0) -> tuple[np.ndarray, tuple[tuple[int, ...], ...]]:
    """Weight matrix W with W[b, p] = 2**(bit of the image of bit b under p).

    Permutations fix 0..fixed-1 pointwise.  ``codes_bits @ W`` then yields the
    code of every relabelling; all values stay below 2**53 for n <= 7, so
    float64 arithmetic is exact.
    """
    pos = bit_of(n)
    head = tuple(range(fixed))
    perms = tuple(head + p for p in itertools.permutations(range(fixed, n)))
    nbits = len(pos)
    W = np.zeros((nbits, len(perms)), dtype=np.float64)
    for j, p in enumerate(perms):
        for t, b in pos.items():
            W[b, j] = 2.0 ** pos[tuple(sorted(p[v] for v in t))]
    return W, perms


def canonical_codes(codes: np.ndarray, n: int, fixed: int = 0, chunk: int = 1000) -> np.ndarray:
    """Maximum code over all relabellings fixing the first ``fixed`` vertices."""
    if n > 7:
        raise ValueError("vectorised canonicalisation supports n <= 7")
    codes = np.asarray(codes, dtype=np.uint64)
    nbits = n * (n - 1) * (n - 2) // 6
    if nbits == 0 or len(codes) == 0:
        return codes.copy()
    W, _ = perm_weights(n, fixed)
    out = np.empty(len(codes), dtype=np.uint64)
    for s in range(0, len(codes), chunk):
        B = bit_matrix(codes[s:s + chunk], nbits)
        out[s:s + chunk] = (B @ W).max(axis=1).astype(np.uint64)
    return out


def sub_codes(codes: np.ndarray, n: int, vertices) -> np.ndarray:
    """Codes of the subgraphs induced on ``vertices`` (in that order)."""
    k = len(vertices)
    src = bit_of(n)
    dst = bit_of(k)
    codes = np.asarray(codes, dtype=np.uint64)
    out = np.zeros(codes.shape, dtype=np.uint64)
    for t in triples(k):
        s = src[tuple(sorted(vertices[i] for i in t))]
        out |= ((codes >> np.uint64(s)) & _ONE) << np.uint64(dst[t])
    return out


def extend_codes(parent_code: int, n: int) -> np.ndarray:
    """All one-vertex extensions of a graph on range(n-1) to range(n).

    The new vertex n-1 receives every possible link graph on range(n-1).
    """
    dst = bit_of(n)
    base = 0
    for t in edges_of(n - 1, parent_code):
        base |= 1 << dst[t]
    pairs = list(itertools.combinations(range(n - 1), 2))
    links = np.arange(1 << len(pairs), dtype=np.uint64)
    add = np.zeros(len(links), dtype=np.uint64)
    for i, (a, b) in enumerate(pairs):
        add |= ((links >> np.uint64(i)) & _ONE) << np.uint64(dst[(a, b, n - 1)])
    return np.uint64(base) | add
