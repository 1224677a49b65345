"""Skew Hadamard matrices and their correspondence with doubly regular tournaments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .tournaments import Tournament, doubly_regular_violation


@dataclass(frozen=True)
class SkewHadamardMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        H = np.asarray(self.matrix, dtype=np.int64)
        object.__setattr__(self, "matrix", H)
        problem = skew_hadamard_violation(H)
        if problem:
            raise InputError(problem)

    @property
    def order(self) -> int:
        return self.matrix.shape[0]


def skew_hadamard_violation(H: np.ndarray) -> str | None:
    """None when ``H H^T = nI`` and ``H + H^T = 2I`` hold exactly, else the reason."""
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] == 0:
        return "matrix is not square"
    n = H.shape[0]
    if not np.isin(H, (-1, 1)).all():
        return "entries must be +1 or -1"
    H = H.astype(object)
    eye = np.eye(n, dtype=np.int64)
    if not (H.dot(H.T) == n * eye).all():
        return "H H^T != n I"
    if not (H + H.T == 2 * eye).all():
        return "H + H^T != 2 I"
    return None


def tournament_to_skew_hadamard(t: Tournament) -> SkewHadamardMatrix:
    """Border the +-1 skew adjacency matrix with a row of +1 and a column of -1, then add I."""
    bad = doubly_regular_violation(t)
    if bad:
        raise InputError(f"tournament is not doubly regular: {bad}")
    A = t.adjacency()
    S = A - A.T
    n = t.n
    C = np.zeros((n + 1, n + 1), dtype=np.int64)
    C[0, 1:] = 1
    C[1:, 0] = -1
    C[1:, 1:] = S
    return SkewHadamardMatrix(C + np.eye(n + 1, dtype=np.int64))


def skew_hadamard_to_tournament(h: SkewHadamardMatrix | np.ndarray) -> Tournament:
    """Inverse of ``tournament_to_skew_hadamard`` after sign normalisation.

    Conjugating by a diagonal +-1 matrix keeps both identities; choosing the
    signs from row 0 turns that row into (1, 1, ..., 1).
    """
    H = h.matrix if isinstance(h, SkewHadamardMatrix) else np.asarray(h, dtype=np.int64)
    problem = skew_hadamard_violation(H)
    if problem:
        raise InputError(problem)
    m = H.shape[0]
    if m < 4:
        raise InputError(f"order {m} is too small")
    C = H - np.eye(m, dtype=np.int64)
    d = np.ones(m, dtype=np.int64)
    d[1:] = C[0, 1:]
    C = d[:, None] * C * d[None, :]
    S = C[1:, 1:]
    t = Tournament.from_adjacency((S == 1).astype(np.int64))
    bad = doubly_regular_violation(t)
    if bad:
        raise InputError(f"normalised matrix does not give a doubly regular tournament: {bad}")
    return t


def paley_skew_hadamard(q: int) -> SkewHadamardMatrix:
    from .tournaments import paley_tournament

    return tournament_to_skew_hadamard(paley_tournament(q))
