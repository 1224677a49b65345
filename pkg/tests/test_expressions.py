import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import brute_pair_distribution
from flagcert.errors import InputError
from flagcert.exact import RationalMatrix
from flagcert.expressions import (
    codegree_expression_of,
    codegree_expressions,
    codegree_table,
    iota_quadratic_expression,
    iota_size,
    root_swap_partners,
    target_vector,
    tight_path_candidates,
    tight_path_expression,
    tight_path_flag_sets,
    tight_path_indices,
    tight_path_vector,
    tight_paths,
    tournament_extension_masses,
)
from flagcert.flags import IOTAS, SIGMAS, TAU, flag_family, pair_density_table
from flagcert.formats import flag_from_text
from flagcert.hypergraph import ThreeGraph, basis


def test_target_vector():
    T = target_vector()
    B = basis(7)
    assert T[len(B) - 1] == Fraction(-5, 7)
    assert B[len(B) - 1].m == 15
    assert T[0] == 1
    for i in (10, 500, 4000):
        assert T[i] == Fraction(35 - 4 * B[i].m, 35)


def test_codegree_table_shape():
    tab = codegree_table()
    assert len(tab.identifiers) == 905
    assert tab.rows.shape == (905, 8157)
    assert tab.denominator == 210
    assert len(set(tab.identifiers)) == 905
    fam = flag_family(TAU, 6)
    for ident, rep in zip(tab.identifiers[:50], tab.representatives[:50]):
        assert fam.index_of(flag_from_text(ident)) == rep


def test_codegree_expressions_merge_swap_partners():
    exprs = codegree_expressions()
    assert len(exprs) == 905
    assert sum(len(e.sources) for e in exprs) == 1643
    assert sum(len(e.sources) == 1 for e in exprs) == 167
    table = pair_density_table(TAU, 6, 3, "F7")
    weight = [3 if f.graph.m == 1 else -1 for f in flag_family(TAU, 3).flags]
    fam = flag_family(TAU, 6)
    partner = root_swap_partners(fam)
    rng = random.Random(4)
    for a in rng.sample(range(len(fam)), 6):
        ind = np.zeros(len(fam), dtype=object)
        ind[a] = 1
        own = table.linear(ind, weight)
        ind[a], ind[partner[a]] = 0, 1
        assert table.linear(ind, weight) == own
        assert codegree_expression_of(fam[a]) == own


def test_codegree_expression_matches_definition():
    fam6, fam3 = flag_family(TAU, 6), flag_family(TAU, 3)
    keys6 = {f.graph.edges: i for i, f in enumerate(fam6.flags)}
    weight = {f.graph.edges: (3 if f.graph.m == 1 else -1) for f in fam3.flags}
    B = basis(7)
    rng = random.Random(12)
    for gi in rng.sample(range(len(B)), 3):
        dist = brute_pair_distribution(TAU.graph, 6, 3, B[gi])
        want = {}
        for (k6, k3), p in dist.items():
            a = keys6[k6]
            want[a] = want.get(a, Fraction(0)) + weight[k3] * p
        for a, v in list(want.items())[:8]:
            assert codegree_expression_of(fam6[a])[gi] == v


def test_tight_paths_definition():
    # 1 2 5 3 4: edges 125, 253, 534
    g = ThreeGraph(5, ((1, 2, 5), (2, 3, 5), (3, 4, 5)))
    assert (1, 2, 5, 3, 4) in tight_paths(g)
    assert tight_paths(ThreeGraph(5, ((1, 2, 5),))) == []


def test_tight_path_sets():
    idx = tight_path_indices()
    assert [len(s) for s in idx] == [6, 2, 2]
    for sigma, sub, flags in zip(SIGMAS, idx, tight_path_flag_sets()):
        assert all(tight_paths(f.graph) for f in flags)
        assert all(m == Fraction(1, 16) for m in tournament_extension_masses(sigma, sub))


def test_tight_path_choice_for_sigma1_is_one_of_three():
    cands = [c for c in tight_path_candidates(SIGMAS[1]) if len(c) == 2]
    assert len(cands) == 3
    assert tight_path_indices()[1] in cands


def test_tight_path_forms_agree():
    for i in range(3):
        assert tight_path_expression(i, "F6", "rest") == tight_path_expression(i, "F6", "all")
        v = tight_path_vector(i)
        assert sum(1 for x in v if x == 15) == len(tight_path_indices()[i])
    with pytest.raises(InputError):
        tight_path_vector(0, "half")


def test_iota_quadratic_matches_definition():
    B = basis(7)
    rng = random.Random(21)
    for i in (1, 4):
        sigma = IOTAS[i - 1]
        fam = flag_family(sigma, 6)
        k = iota_size(i)
        keys = {f.graph.edges: j for j, f in enumerate(fam.flags)}
        M = np.zeros((k, k), dtype=object)
        for _ in range(30):
            a, b = rng.randrange(k), rng.randrange(k)
            x = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            M[a, b] += x
            M[b, a] += x
        Q = RationalMatrix(k, k, tuple(M.flat))
        expr = iota_quadratic_expression(i, Q)
        for gi in rng.sample(range(len(B)), 3) + [len(B) - 1]:
            dist = brute_pair_distribution(sigma.graph, 6, 6, B[gi])
            want = sum((M[keys[a], keys[b]] * p for (a, b), p in dist.items()), Fraction(0))
            assert expr[gi] == want


def test_iota_quadratic_input_checks():
    k = iota_size(6)
    with pytest.raises(InputError):
        iota_quadratic_expression(6, np.zeros((k, k + 1), dtype=object))
    bad = np.zeros((k, k), dtype=object)
    bad[0, 1] = 1
    with pytest.raises(InputError):
        iota_quadratic_expression(6, bad)
    assert iota_quadratic_expression(6, np.zeros((k, k), dtype=object)).is_zero()
