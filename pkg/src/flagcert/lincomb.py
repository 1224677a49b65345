"""Sparse exact-rational linear combinations over a named graph basis."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

import numpy as np

from .errors import InputError


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    raise InputError(f"refusing non-exact value {x!r}")


class LinComb:
    __slots__ = ("basis_id", "_c")

    def __init__(self, basis_id: str, coeffs: Mapping[int, object] | None = None):
        self.basis_id = basis_id
        c = {}
        for i, v in (coeffs or {}).items():
            if int(i) < 0:
                raise InputError(f"negative basis index {i}")
            f = as_fraction(v)
            if f:
                c[int(i)] = f
        self._c = c

    @classmethod
    def from_dense(cls, basis_id: str, values: Iterable) -> "LinComb":
        return cls(basis_id, {i: v for i, v in enumerate(values) if v})

    @classmethod
    def from_int_array(cls, basis_id: str, numerators, denominator: int) -> "LinComb":
        out = cls(basis_id)
        den = int(denominator)
        for i, x in enumerate(numerators):
            if x:
                out._c[i] = Fraction(int(x), den)
        return out

    def __getitem__(self, i: int) -> Fraction:
        return self._c.get(int(i), Fraction(0))

    def items(self):
        return sorted(self._c.items())

    def support(self) -> list[int]:
        return sorted(self._c)

    def __len__(self) -> int:
        return len(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def to_dense(self, size: int) -> list[Fraction]:
        out = [Fraction(0)] * size
        for i, v in self._c.items():
            if i >= size:
                raise InputError(f"index {i} outside basis of size {size}")
            out[i] = v
        return out

    def _check(self, other: "LinComb"):
        if not isinstance(other, LinComb):
            raise TypeError(f"cannot combine LinComb with {type(other).__name__}")
        if other.basis_id != self.basis_id:
            raise InputError(f"basis mismatch: {self.basis_id} vs {other.basis_id}")

    def __add__(self, other: "LinComb") -> "LinComb":
        self._check(other)
        c = dict(self._c)
        for i, v in other._c.items():
            c[i] = c.get(i, 0) + v
        return LinComb(self.basis_id, c)

    def __neg__(self) -> "LinComb":
        return LinComb(self.basis_id, {i: -v for i, v in self._c.items()})

    def __sub__(self, other: "LinComb") -> "LinComb":
        return self + (-other)

    def __mul__(self, scalar) -> "LinComb":
        s = as_fraction(scalar)
        return LinComb(self.basis_id, {i: s * v for i, v in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinComb):
            return NotImplemented
        return self.basis_id == other.basis_id and self._c == other._c

    def __hash__(self):
        return hash((self.basis_id, frozenset(self._c.items())))

    def __repr__(self) -> str:
        head = ", ".join(f"{i}: {v}" for i, v in self.items()[:4])
        more = ", ..." if len(self._c) > 4 else ""
        return f"LinComb({self.basis_id}, {{{head}{more}}})"
