import random
from itertools import combinations_with_replacement, permutations
from math import factorial

import pytest

from cechmc.cech import build_cech_scs, constant_presheaf
from cechmc.coefficients import UNIT
from cechmc.glie import semidirect_sl2, sl2_dual_de_rham
from cechmc.linear import LinComb
from cechmc.scs import map_E, map_h, map_I, positive_truncation
from cechmc.transfer import (ArityError, TransferredLInfty, check_linfty_relations,
                             check_morphism_relations, enumerate_trees, koszul_sign, splittings,
                             symmetry_defects, tree_sum, tw_q2, unshuffles)


def two_opens(g):
    return build_cech_scs(constant_presheaf(["U1", "U2"], g))


def unit(key):
    return LinComb.unit((key[0], key[1], UNIT))


def keys_of(G):
    return [(k[0], k[1]) for v in G.tot_basis().values() for k in v]


@pytest.fixture(scope="module")
def de_rham_two():
    return two_opens(sl2_dual_de_rham())


def double_factorial(m):
    out = 1
    while m > 1:
        out *= m
        m -= 2
    return out


@pytest.mark.parametrize("n,classes", [(2, 1), (3, 1), (4, 2), (5, 3), (6, 6)])
def test_tree_enumeration(n, classes):
    trees = enumerate_trees(n)
    assert len(trees) == classes
    # orbit-stabilizer: leaf-labelled binary trees number (2n-3)!!
    assert sum(factorial(n) // aut for _, aut in trees) == double_factorial(2 * n - 3)


def test_tree_automorphisms_at_four():
    assert sorted(aut for _, aut in enumerate_trees(4)) == [2, 8]
    with pytest.raises(ArityError):
        enumerate_trees(1)


def test_signs_and_splittings():
    assert koszul_sign([1, 1], (1, 0)) == -1
    assert koszul_sign([1, 0, 1], (2, 1, 0)) == -1
    assert koszul_sign([0, 1], (1, 0)) == 1
    assert len(list(unshuffles(4, 2))) == 6
    for n in range(2, 6):
        parts = list(splittings(n))
        assert len(parts) == 2 ** (n - 1) - 1
        assert all(0 in S and T for S, T in parts)


def test_binary_bracket_is_integrated_q2(sl2_two):
    L = TransferredLInfty(sl2_two)
    for a, b in combinations_with_replacement(keys_of(sl2_two), 2):
        expected = map_I(sl2_two, tw_q2(sl2_two, map_E(sl2_two, unit(a)), map_E(sl2_two, unit(b))))
        assert L.bracket(2, [unit(a), unit(b)]) == expected


@pytest.mark.parametrize("G_name", ["sl2_two", "de_rham_two"])
def test_recursion_matches_tree_oracle(G_name, request):
    G = request.getfixturevalue(G_name)
    L = TransferredLInfty(G)
    rng = random.Random(9)
    keys = keys_of(G)
    for n in (2, 3, 4):
        for _ in range(6 if n < 4 else 3):
            tup = sorted((rng.choice(keys) for _ in range(n)), key=L.sort_key)
            inputs = [unit(k) for k in tup]
            assert tree_sum(G, n, "I", inputs) == L.bracket(n, inputs)
            assert tree_sum(G, n, "h", inputs) == L.einfty(n, inputs)


@pytest.mark.parametrize("g", [sl2_dual_de_rham, semidirect_sl2], ids=["de_rham", "semidirect"])
def test_linfty_relations_through_arity_three(g):
    L = TransferredLInfty(two_opens(g()))
    assert check_linfty_relations(L, 3) == []
    assert check_morphism_relations(L, 3) == []


def test_corrupted_homotopy_breaks_the_relations(sl2_three):
    L = TransferredLInfty(sl2_three, homotopy=lambda X: map_h(sl2_three, X).scale(2))
    assert check_linfty_relations(L, 3)


def test_abelian_object_has_no_higher_brackets(corpus):
    G = corpus.objects["line_3opens"]
    L = TransferredLInfty(G)
    for n in (2, 3, 4):
        for tup in combinations_with_replacement(keys_of(G), n):
            assert not L._q_basis(tup)


def test_higher_E_have_no_one_form_part_on_the_edge(sl2_three):
    L = TransferredLInfty(sl2_three)
    degree_one = [(k[0], k[1]) for k in sl2_three.tot_basis()[1]]
    for n in (2, 3):
        for tup in combinations_with_replacement(degree_one, n):
            E = L._E_basis(tup)
            assert not [k for k in E if k[0] == 1 and k[4]]


def test_graded_symmetry(de_rham_two):
    L = TransferredLInfty(de_rham_two)
    rng = random.Random(2)
    keys = keys_of(de_rham_two)
    for n in (2, 3):
        for _ in range(10):
            tup = [rng.choice(keys) for _ in range(n)]
            assert symmetry_defects(L, n, tup) == []


def test_multilinear_extension_respects_order(de_rham_two):
    L = TransferredLInfty(de_rham_two)
    keys = [k for k in keys_of(de_rham_two) if de_rham_two.tot_degree(k) % 2]
    a, b = unit(keys[0]), unit(keys[1])
    # shifted degrees of odd total-degree inputs are even: symmetric
    assert L.bracket(2, [a, b]) == L.bracket(2, [b, a])
    for order in permutations([a, b, a]):
        assert L.bracket(3, list(order)) == L.bracket(3, [a, a, b])


def test_arity_bounds(sl2_two):
    L = TransferredLInfty(sl2_two, max_arity=3)
    x = unit(keys_of(sl2_two)[0])
    with pytest.raises(ArityError):
        L.bracket(4, [x] * 4)
    with pytest.raises(ArityError):
        L.bracket(2, [x])


def test_truncation_restricts_the_structure(sl2_three):
    L = TransferredLInfty(sl2_three)
    Lp = TransferredLInfty(positive_truncation(sl2_three))
    upper = [k for k in keys_of(sl2_three) if k[0] >= 1]
    rng = random.Random(6)
    for n in (2, 3):
        for _ in range(10):
            tup = tuple(sorted((rng.choice(upper) for _ in range(n)), key=L.sort_key))
            assert Lp._q_basis(tup) == L._q_basis(tup)
