"""Exact rational matrices: fraction-free elimination, definiteness and rank."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from .errors import InputError
from .lincomb import as_fraction


@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise InputError("matrix dimensions must be positive")
        ents = tuple(as_fraction(x) for x in self.entries)
        if len(ents) != self.rows * self.cols:
            raise InputError(f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} entries, got {len(ents)}")
        object.__setattr__(self, "entries", ents)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise InputError("ragged or empty matrix")
        return cls(len(rows), len(rows[0]), tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RationalMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls(n, n, tuple(Fraction(int(i == j)) for i in range(n) for j in range(n)))

    def to_rows(self) -> list[list[Fraction]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __getitem__(self, ij) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix.from_rows([list(r) for r in zip(*self.to_rows())])

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self[i, j] == self[j, i] for i in range(self.rows) for j in range(i + 1, self.cols))

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("shape mismatch")
        return RationalMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def scaled_integers(self) -> tuple[np.ndarray, int]:
        """(N, d) with self = N / d, N an object array of Python ints."""
        d = 1
        for x in self.entries:
            d = lcm(d, x.denominator)
        N = np.array([x.numerator * (d // x.denominator) for x in self.entries], dtype=object)
        return N.reshape(self.rows, self.cols), d


def leading_minors(m: RationalMatrix) -> list[Fraction]:
    """All leading principal minors, by Bareiss elimination without pivoting.

    Stops early (and returns the minors found so far, the last being 0)
    when a zero pivot appears.
    """
    if m.rows != m.cols:
        raise InputError("leading minors need a square matrix")
    N, d = m.scaled_integers()
    A = [list(map(int, r)) for r in N]
    n = m.rows
    minors = []
    prev = 1
    for k in range(n):
        piv = A[k][k]
        # Bareiss: after step k-1, A[k][k] equals the k-th leading minor of the integer matrix
        minors.append(Fraction(piv, d ** (k + 1)))
        if piv == 0:
            break
        for i in range(k + 1, n):
            Ai, Ak = A[i], A[k]
            aik = Ai[k]
            for j in range(k + 1, n):
                Ai[j] = (piv * Ai[j] - aik * Ak[j]) // prev
        prev = piv
    return minors


def is_positive_definite(m: RationalMatrix) -> bool:
    """Exact test: symmetric with every leading principal minor positive."""
    if m.rows != m.cols:
        raise InputError(f"matrix is {m.rows}x{m.cols}, not square")
    if not m.is_symmetric():
        raise InputError("matrix is not symmetric")
    minors = leading_minors(m)
    return len(minors) == m.rows and all(x > 0 for x in minors)


def row_basis(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """A maximal linearly independent subset of ``rows`` (over the rationals)."""
    picked: list[list[Fraction]] = []
    reduced: list[tuple[int, list[Fraction]]] = []
    for r in rows:
        v = [as_fraction(x) for x in r]
        for piv, b in reduced:
            if v[piv]:
                f = v[piv] / b[piv]
                v = [x - f * y for x, y in zip(v, b)]
        nz = next((i for i, x in enumerate(v) if x), None)
        if nz is not None:
            reduced.append((nz, v))
            picked.append([as_fraction(x) for x in r])
    return picked


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_basis(rows))
