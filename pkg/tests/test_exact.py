import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from flagcert.errors import InputError
from flagcert.exact import RationalMatrix, is_positive_definite, leading_minors, rank, row_basis


def sympy_minors(m: RationalMatrix) -> list:
    S = sympy.Matrix(m.rows, m.cols, [sympy.Rational(x.numerator, x.denominator) for x in m.entries])
    return [S[:k, :k].det(method="berkowitz") for k in range(1, m.rows + 1)]


def random_symmetric(rng: random.Random, n: int) -> RationalMatrix:
    kind = rng.randrange(3)
    rows = [[Fraction(0)] * n for _ in range(n)]
    if kind == 0:
        for i in range(n):
            for j in range(i, n):
                rows[i][j] = rows[j][i] = Fraction(rng.randint(-9, 9), rng.randint(1, 6))
    else:
        # Gram matrix B B^T, made singular or nudged off definiteness sometimes
        k = n if kind == 1 else rng.randint(1, n)
        B = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(k)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                rows[i][j] = sum((B[i][t] * B[j][t] for t in range(k)), Fraction(0))
        if rng.random() < 0.5:
            shift = Fraction(rng.choice((-1, 1)), rng.randint(1, 50))
            for i in range(n):
                rows[i][i] += shift
    return RationalMatrix.from_rows(rows)


def test_psd_agrees_with_minor_oracle_on_200_matrices():
    rng = random.Random(1234)
    verdicts = []
    for _ in range(200):
        m = random_symmetric(rng, rng.randint(1, 7))
        want = all(x > 0 for x in sympy_minors(m))
        got = is_positive_definite(m)
        assert got == want
        verdicts.append(got)
    assert any(verdicts) and not all(verdicts)


def test_leading_minors_are_exact():
    rng = random.Random(99)
    for _ in range(60):
        m = random_symmetric(rng, rng.randint(1, 6))
        ours = leading_minors(m)
        ref = sympy_minors(m)
        assert [sympy.Rational(x.numerator, x.denominator) for x in ours] == ref[:len(ours)]
        if len(ours) < m.rows:
            assert ours[-1] == 0


def test_definiteness_boundary_cases():
    assert is_positive_definite(RationalMatrix.identity(4))
    assert not is_positive_definite(RationalMatrix.zeros(3, 3))
    assert not is_positive_definite(RationalMatrix.from_rows([[1, 1], [1, 1]]))
    assert is_positive_definite(RationalMatrix.from_rows([[Fraction(1, 10**30), 0], [0, 1]]))
    # a zero leading pivot with a positive determinant is still indefinite
    assert not is_positive_definite(RationalMatrix.from_rows([[0, 1], [1, 0]]))


def test_definiteness_rejects_bad_input():
    with pytest.raises(InputError):
        is_positive_definite(RationalMatrix.from_rows([[1, 2], [3, 4]]))
    with pytest.raises(InputError):
        is_positive_definite(RationalMatrix.zeros(2, 3))
    with pytest.raises(InputError):
        RationalMatrix.from_rows([[0.5]])
    with pytest.raises(InputError):
        RationalMatrix(2, 2, (1, 2, 3))
    with pytest.raises(InputError):
        RationalMatrix.from_rows([[1, 2], [3]])


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=0, max_size=6))
@settings(max_examples=150, deadline=None)
def test_rank_matches_sympy(rows):
    want = sympy.Matrix(rows).rank() if rows else 0
    assert rank(rows) == want
    basis = row_basis(rows)
    assert all(list(map(Fraction, r)) in [list(map(Fraction, x)) for x in rows] for r in basis)


def test_scaled_integers_round_trip():
    m = RationalMatrix.from_rows([[Fraction(1, 2), Fraction(-2, 3)], [Fraction(5), Fraction(7, 4)]])
    N, d = m.scaled_integers()
    assert d == 12
    assert [[Fraction(int(x), d) for x in r] for r in N] == m.to_rows()
    assert m.transpose().transpose() == m
    assert (m + m)[0, 1] == Fraction(-4, 3)
