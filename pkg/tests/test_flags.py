import itertools
import random
from fractions import Fraction
from math import comb

import numpy as np
import pytest

from conftest import brute_flag_key, brute_pair_density, naive_k4minus_free
from flagcert.errors import CostGuardError, InputError
from flagcert.expressions import root_swap_partners
from flagcert.flags import (
    EMPTY,
    IOTAS,
    SIGMAS,
    TAU,
    TYPES,
    Flag,
    density,
    density_matrix,
    flag_family,
    generate_flags,
    get_type,
    pair_counts,
    pair_density_table,
    root_probability,
    type_probability,
)
from flagcert.hypergraph import ThreeGraph, are_isomorphic, basis

NINE = list(SIGMAS) + list(IOTAS)


def _brute_family(sigma, k):
    """Root-preserving classes of K4^- -free graphs on k vertices that induce sigma on 1..s."""
    s = sigma.size
    triples = [t for t in itertools.combinations(range(1, k + 1), 3) if t[2] > s]
    roots = tuple(range(1, s + 1))
    keys = set()
    for mask in range(1 << len(triples)):
        g = ThreeGraph(k, sigma.graph.edges + tuple(t for i, t in enumerate(triples) if mask >> i & 1))
        if naive_k4minus_free(g):
            keys.add(brute_flag_key(g, roots))
    return keys


@pytest.mark.parametrize("name,k", [("tau", 3), ("tau", 4), ("tau", 5), ("empty", 4),
                                    ("sigma0", 5), ("sigma1", 5), ("sigma2", 5), ("iota1", 6)])
def test_flag_family_matches_exhaustive_oracle(name, k):
    sigma = get_type(name)
    got = {f.graph.edges for f in flag_family(sigma, k).flags}
    assert got == _brute_family(sigma, k)


def test_flag_counts():
    assert [len(flag_family(t, 6)) for t in IOTAS] == [191, 173, 148, 135, 124, 95]
    assert [len(flag_family(t, 5)) for t in SIGMAS] == [41, 26, 18]
    fam = flag_family(TAU, 6)
    assert len(fam) == 1643
    assert int((root_swap_partners(fam) == np.arange(len(fam))).sum()) == 167
    assert len(generate_flags(TAU, 3)) == 2


def test_types_are_k4minus_free_and_named():
    assert len(TYPES) == 11
    for name, t in TYPES.items():
        assert t.name == name
        assert naive_k4minus_free(t.graph)
    with pytest.raises(InputError):
        get_type("omega")


def test_flag_validation_and_normalisation():
    with pytest.raises(InputError):
        Flag(TAU, ThreeGraph(3, ((1, 2, 3),)), (1, 1))
    with pytest.raises(InputError):
        Flag(get_type("sigma1"), ThreeGraph(4, ()), (1, 2, 3, 4))
    f = Flag(TAU, ThreeGraph(4, ((2, 3, 4),)), (4, 2))
    n = f.normalized()
    assert n.root == (1, 2) and n.graph.edges == ((1, 2, 4),)
    c = f.canonical()
    assert flag_family(TAU, 4).index_of(c) >= 0
    assert f.unlabelled().edges == ((1, 2, 3),)


def test_lookup_marks_non_members():
    fam = flag_family(TAU, 4)
    k4 = ThreeGraph(4, ((1, 2, 3), (1, 2, 4), (1, 3, 4)))
    assert fam.lookup(np.array([k4.code], dtype=np.uint64))[0] == -1


def test_root_probability_examples():
    # roots inside the single edge for half of the 12 ordered pairs
    assert root_probability(Flag(TAU, ThreeGraph(4, ((1, 2, 3),)), (1, 2))) == Fraction(1, 2)
    # ordered roots: first inside the edge, second the isolated vertex
    assert root_probability(Flag(TAU, ThreeGraph(4, ((1, 2, 3),)), (1, 4))) == Fraction(1, 4)
    assert root_probability(Flag(TAU, ThreeGraph(4, ((1, 2, 3),)), (4, 1))) == Fraction(1, 4)
    assert root_probability(Flag(TAU, ThreeGraph(3, ((1, 2, 3),)), (1, 2))) == 1
    # every ordered pair of a single edge gives the same flag
    assert root_probability(Flag(TAU, ThreeGraph(3, ()), (1, 2))) == 1


def test_root_probabilities_sum_to_type_probability():
    rng = random.Random(5)
    for sigma in (TAU, get_type("sigma1")):
        fam = flag_family(sigma, 5)
        for g in rng.sample(basis(5).graphs, 5):
            total = sum((root_probability(f) for f in fam.flags if are_isomorphic(f.graph, g)), Fraction(0))
            assert total == type_probability(sigma, g)


def test_density_matrix_matches_brute_force():
    P = density_matrix(5, 6)
    B5, B6 = basis(5), basis(6)
    for i, g in enumerate(B6.graphs):
        for j, h in enumerate(B5.graphs):
            assert Fraction(int(P[i, j]), comb(6, 5)) == density(h, g)
    assert (P.sum(axis=1) == comb(6, 5)).all()
    with pytest.raises(CostGuardError):
        density_matrix(5, 8)


def test_density_chain_rule_on_sampled_graphs():
    P56, P67 = density_matrix(5, 6), density_matrix(6, 7)
    B5, B7 = basis(5), basis(7)
    rng = random.Random(11)
    for gi in rng.sample(range(len(B7)), 50):
        g = B7[gi]
        for hj, h in enumerate(B5.graphs):
            via = sum(Fraction(int(P67[gi, m]), 7) * Fraction(int(P56[m, hj]), 6)
                      for m in range(P67.shape[1]) if P67[gi, m] and P56[m, hj])
            assert via == density(h, g)


def test_pair_density_matches_definition_tau():
    tab = pair_density_table(TAU, 3, 4)
    assert tab.basis_id == "F5"
    fam3, fam4 = flag_family(TAU, 3), flag_family(TAU, 4)
    keys3 = [f.graph.edges for f in fam3.flags]
    keys4 = [f.graph.edges for f in fam4.flags]
    d = tab.as_dict()
    for gi, g in enumerate(basis(5).graphs):
        for a, b in itertools.product(range(len(fam3)), range(len(fam4))):
            want = brute_pair_density(TAU.graph, keys3[a], 3, keys4[b], 4, g)
            assert d.get((a, b, gi), Fraction(0)) == want


def test_pair_density_matches_definition_sigma_sample():
    sigma = get_type("sigma1")
    tab = pair_density_table(sigma, 5, 5, "F6")
    fam = flag_family(sigma, 5)
    keys = [f.graph.edges for f in fam.flags]
    d = tab.as_dict()
    rng = random.Random(2)
    for gi in rng.sample(range(len(basis(6))), 4):
        g = basis(6)[gi]
        for a, b in itertools.product(range(len(fam)), repeat=2):
            want = brute_pair_density(sigma.graph, keys[a], 5, keys[b], 5, g)
            assert d.get((a, b, gi), Fraction(0)) == want


def test_pair_density_symmetric_when_sizes_agree():
    tab = pair_density_table(TAU, 4, 4)
    d = tab.as_dict()
    assert all(d.get((b, a, g)) == v for (a, b, g), v in d.items())


def test_direct_and_composed_pair_densities_agree_small():
    cases = ((TAU, 3, 3, "F5"), (TAU, 3, 4, "F7"), (EMPTY, 2, 3, "F6"), (get_type("sigma0"), 5, 5, "F6"))
    for sigma, k1, k2, target in cases:
        a = pair_density_table(sigma, k1, k2, target, "direct")
        b = pair_density_table(sigma, k1, k2, target, "compose")
        assert a.as_dict() == b.as_dict()


@pytest.mark.parametrize("sigma", NINE, ids=lambda t: t.name)
def test_mass_conservation_on_sampled_f7(sigma):
    B = basis(7)
    rng = random.Random(sigma.size * 31 + len(sigma.graph.edges))
    rows = rng.sample(range(len(B)), 20)
    s = sigma.size
    g, _, _, total = pair_counts(sigma, s + 1, s + 1, B.codes[rows], 7)
    hits = np.bincount(g, minlength=len(rows))
    for r, gi in enumerate(rows):
        assert Fraction(int(hits[r]), total) == type_probability(sigma, B[gi])


def test_pair_density_guards():
    with pytest.raises(CostGuardError):
        pair_density_table(TAU, 5, 6)
    with pytest.raises(InputError):
        pair_density_table(TAU, 4, 4, "F5")
    with pytest.raises(InputError):
        pair_density_table(TAU, 3, 3, None, "magic")
    tab = pair_density_table(TAU, 3, 3)
    with pytest.raises(InputError):
        tab.quadratic(np.zeros((3, 3), dtype=object))


def test_quadratic_and_linear_agree():
    tab = pair_density_table(TAU, 3, 4, "F6")
    rng = random.Random(9)
    v1 = [rng.randint(-3, 3) for _ in range(tab.sizes[0])]
    v2 = [rng.randint(-3, 3) for _ in range(tab.sizes[1])]
    M = np.outer(np.array(v1, dtype=object), np.array(v2, dtype=object))
    assert tab.linear(v1, v2, 5) == tab.quadratic(M, 5)
