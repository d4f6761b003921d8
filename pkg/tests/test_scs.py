import random

import pytest
from hypothesis import given, settings, strategies as st

from cechmc.cech import build_cech_scs, constant_morphism, constant_presheaf, trace_map
from cechmc.coefficients import UNIT, SchemaError
from cechmc.glie import LinearMap, gl2, line, sl2, sl2_dual_de_rham
from cechmc.linear import Accumulator, LinComb
from cechmc.scs import (IncompatibleElement, ScsMorphism, apply_scs_morphism,
                        compatibility_violations, constant_tower, is_compatible, map_E, map_h,
                        map_I, positive_truncation, random_compatible, tot_differential,
                        tw_bracket, tw_differential, validate_scs)

_DR = build_cech_scs(constant_presheaf(["U1", "U2", "U3"], sl2_dual_de_rham()))


def basis(G):
    return [k for v in G.tot_basis().values() for k in v]


@pytest.fixture(scope="module", params=["sl2_2opens", "sl2_3opens", "line_3opens", "trace_presheaf"])
def corpus_object(request, corpus):
    return corpus.objects[request.param]


def test_corpus_objects_are_semicosimplicial(corpus_object):
    assert validate_scs(corpus_object) == []


def test_corrupted_coface_is_detected(negative):
    report = validate_scs(negative.objects["sl2_3opens_twisted"])
    assert report and all("cosimplicial identity" in p for p in report)


def test_tot_differential_squares_to_zero(corpus_object, de_rham_three):
    for G in (corpus_object, de_rham_three):
        for key in basis(G):
            assert not tot_differential(G, tot_differential(G, LinComb.unit(key)))


def test_integration_inverts_E(corpus_object, de_rham_three):
    for G in (corpus_object, de_rham_three):
        for key in basis(G):
            x = LinComb.unit(key)
            assert map_I(G, map_E(G, x)) == x


def test_E_on_level_one_is_dt1():
    G = constant_tower(sl2(), 2)
    x = LinComb({(1, "e", UNIT): 3})
    level1 = {k: c for k, c in map_E(G, x).items() if k[0] == 1}
    assert level1 == {(1, "e", UNIT, (0,), (1,)): 3}


def test_E_vanishes_below_the_level(sl2_three):
    for key in basis(sl2_three):
        image = map_E(sl2_three, LinComb.unit(key))
        assert all(k[0] >= key[0] for k in image)
        assert is_compatible(sl2_three, image)


def test_homotopy_relation_with_nonzero_differential(de_rham_three):
    G, rng = de_rham_three, random.Random(3)
    for _ in range(20):
        X = random_compatible(G, rng)
        lhs = map_E(G, map_I(G, X)) - X
        rhs = map_h(G, tw_differential(G, X)) + tw_differential(G, map_h(G, X))
        assert lhs == rhs


def test_E_and_I_are_chain_maps(de_rham_three):
    G, rng = de_rham_three, random.Random(4)
    for key in basis(G):
        x = LinComb.unit(key)
        assert tw_differential(G, map_E(G, x)) == map_E(G, tot_differential(G, x))
    for _ in range(20):
        X = random_compatible(G, rng)
        assert map_I(G, tw_differential(G, X)) == tot_differential(G, map_I(G, X))


def _tot_differential_internal_sign(G, x):
    """The alternative reading with sign (-1)^j on d_j, j the internal degree."""
    acc = Accumulator()
    for (i, name, m), c in x.items():
        g = G.levels[i]
        for z, cz in g.d.get(name, {}).items():
            acc.add((i, z, m), cz * c * (-1) ** g.degree[name])
        if i < G.top:
            for k in range(i + 2):
                for z, cz in G.cofaces[(k, i + 1)].matrix.get(name, {}).items():
                    acc.add((i + 1, z, m), (-1) ** k * c * cz)
    return acc.result()


def test_internal_degree_sign_is_not_a_differential(de_rham_three):
    G = de_rham_three
    bad = [k for k in basis(G)
           if _tot_differential_internal_sign(G, _tot_differential_internal_sign(G, LinComb.unit(k)))]
    assert len(bad) == 18


def test_side_conditions(corpus_object):
    G, rng = corpus_object, random.Random(5)
    for key in basis(G):
        assert not map_h(G, map_E(G, LinComb.unit(key)))
    for _ in range(10):
        X = random_compatible(G, rng)
        hX = map_h(G, X)
        assert not map_h(G, hX)
        assert is_compatible(G, hX)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_tw_operations_preserve_compatibility(seed):
    G = _DR
    rng = random.Random(seed)
    X, Y = random_compatible(G, rng), random_compatible(G, rng)
    assert is_compatible(G, tw_differential(G, X))
    assert is_compatible(G, tw_bracket(G, X, Y))
    assert not tw_differential(G, tw_differential(G, X))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_tw_bracket_leibniz_and_antisymmetry(seed):
    G = _DR
    rng = random.Random(seed)
    X, Y = random_compatible(G, rng), random_compatible(G, rng)
    for p in {G.tw_degree(k) for k in X}:
        Xp = X.filter(lambda k: G.tw_degree(k) == p)
        for q in {G.tw_degree(k) for k in Y}:
            Yq = Y.filter(lambda k: G.tw_degree(k) == q)
            sign = -1 if p % 2 else 1
            lhs = tw_differential(G, tw_bracket(G, Xp, Yq))
            rhs = tw_bracket(G, tw_differential(G, Xp), Yq) + tw_bracket(G, Xp, tw_differential(G, Yq)).scale(sign)
            assert lhs == rhs
            assert tw_bracket(G, Xp, Yq) == tw_bracket(G, Yq, Xp).scale(-(-1) ** (p * q))


def test_incompatible_elements_are_rejected(sl2_two):
    X = LinComb({(1, "e@U1.U2", UNIT, (1,), ()): 1})
    assert compatibility_violations(sl2_two, X)
    for op in (map_I, map_h, tw_differential):
        with pytest.raises(IncompatibleElement):
            op(sl2_two, X, check=True)
    with pytest.raises(IncompatibleElement):
        tw_bracket(sl2_two, X, X, check=True)


def test_positive_truncation(sl2_three):
    T = positive_truncation(sl2_three)
    assert len(T.levels[0]) == 0
    assert validate_scs(T) == []
    assert 0 not in T.tot_basis()


def test_trace_commutes_with_the_total_differential():
    opens = ["U1", "U2", "U3"]
    Cs, Ct = constant_presheaf(opens, gl2()), constant_presheaf(opens, line())
    phi = constant_morphism(Cs, Ct, trace_map(gl2(), line()))
    assert phi.validate() == []
    Gs, Gt = build_cech_scs(Cs), build_cech_scs(Ct)
    F = phi.on_scs(Gs, Gt)
    assert F.violations() == []
    for key in basis(Gs):
        x = LinComb.unit(key)
        assert F.apply_tot(tot_differential(Gs, x)) == tot_differential(Gt, F.apply_tot(x))
        assert F.apply_tw(map_E(Gs, x)) == map_E(Gt, F.apply_tot(x))


def test_non_morphisms_are_rejected():
    G = constant_tower(gl2(), 1)
    g = G.levels[0]
    transpose = LinearMap(g, g, {"e11": {"e11": 1}, "e12": {"e21": 1}, "e21": {"e12": 1}, "e22": {"e22": 1}})
    F = ScsMorphism(G, G, [transpose, transpose])
    with pytest.raises(SchemaError):
        apply_scs_morphism(F, LinComb({(0, "e12", UNIT): 1}))

