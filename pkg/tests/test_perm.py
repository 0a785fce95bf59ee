import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockscope.perm import (
    EnumerationBoundExceeded,
    MalformedPermutation,
    Permutation,
    are_conjugate,
    centralizer,
    group_from_generators,
    normalizer,
    p_decomposition,
    power_class_map,
    subgroup_profile,
    sylow_subgroup,
)

from conftest import cyclic, symmetric


def test_trivial_group():
    G = group_from_generators(1, [])
    assert G.order == 1
    assert [c.size for c in G.classes] == [1]


def test_s3_order_and_classes(S3):
    assert S3.order == 6
    assert sorted(c.size for c in S3.classes) == [1, 2, 3]


def test_sl28(SL28):
    assert SL28.order == 504
    assert len(SL28.classes) == 9


def test_malformed():
    with pytest.raises(MalformedPermutation):
        group_from_generators(3, [[0, 0, 1]])
    with pytest.raises(MalformedPermutation):
        group_from_generators(3, [[0, 1]])


def test_enumeration_bound(monkeypatch):
    monkeypatch.setenv("BLOCKSCOPE_MAX_ORDER", "100")
    with pytest.raises(EnumerationBoundExceeded):
        symmetric(5)


def test_composition_left_to_right():
    a = Permutation.from_cycles(3, [(0, 1)])
    b = Permutation.from_cycles(3, [(1, 2)])
    # 0 -a-> 1 -b-> 2
    assert (a * b)[0] == 2
    assert a * a.inverse() == Permutation.identity(3)


def test_centralizer_normalizer_trivial(S4):
    assert centralizer(S4, [S4.identity]).order == 24
    assert normalizer(S4, S4).order == 24


def test_sylow_normalizer_in_s4(S4):
    P = sylow_subgroup(S4, 2)
    assert P.order == 8
    assert normalizer(S4, P).element_set == P.element_set


def test_sylow_orders(S3, SL28):
    assert sylow_subgroup(S3, 5).order == 1
    P = sylow_subgroup(SL28, 3)
    assert P.order == 9
    assert subgroup_profile(P)[0]


@pytest.mark.parametrize("seed", range(5))
def test_sylow_seeds_conjugate(S4, seed):
    A = sylow_subgroup(S4, 2, seed=0)
    B = sylow_subgroup(S4, 2, seed=seed)
    assert are_conjugate(S4, A, B) is not None


def test_p_decomposition():
    e = Permutation.identity(5)
    assert p_decomposition(e, 2) == (e, e)
    g = Permutation.from_cycles(5, [(0, 1, 2, 3)])
    assert p_decomposition(g, 2) == (g, e)
    h = Permutation.from_cycles(5, [(0, 1), (2, 3, 4)])
    assert p_decomposition(h, 2) == (h ** 3, h ** 4)


def test_power_class_map(S3):
    n = len(S3.classes)
    assert power_class_map(S3, 1) == tuple(range(n))
    inv = power_class_map(S3, -1)
    assert inv == tuple(range(n))  # every class of S3 is real
    sq = power_class_map(S3, 2)
    transpositions = next(i for i, c in enumerate(S3.classes) if c.element_order == 2)
    assert sq[transpositions] == 0


def test_subgroup_profile():
    assert subgroup_profile(cyclic(9)) == (True, 9, True)
    klein = group_from_generators(4, [[1, 0, 3, 2], [2, 3, 0, 1]])
    assert subgroup_profile(klein) == (False, 2, True)
    d8 = group_from_generators(4, [[1, 2, 3, 0], [3, 2, 1, 0]])
    assert subgroup_profile(d8) == (False, 4, False)


def test_class_sizes_sum(small_groups):
    from conftest import build

    for e in small_groups:
        G = build(e)
        assert sum(c.size for c in G.classes) == G.order
        shapes = sorted([c.element_order, c.size] for c in G.classes)
        assert shapes == sorted(e["expected"]["class_shapes"]), e["name"]


perms5 = st.permutations(range(5)).map(Permutation)


@given(perms5, st.sampled_from([2, 3, 5]))
def test_p_decomposition_unique(g, p):
    gp, gq = p_decomposition(g, p)
    powers = [g ** k for k in range(g.order())]
    assert gp in powers and gq in powers
    assert gp * gq == g and gp * gq == gq * gp

    def p_element(x):
        n = x.order()
        while n % p == 0:
            n //= p
        return n == 1

    hits = [(a, b) for a in powers for b in powers
            if a * b == g and p_element(a) and b.order() % p]
    assert hits == [(gp, gq)]


@settings(max_examples=30)
@given(st.sampled_from([1, 5, 7, 11]), st.sampled_from([1, 7, 11, 13]))
def test_power_map_composition(k, l):
    G = symmetric(4)  # exponent 12
    a, b = power_class_map(G, k), power_class_map(G, l)
    assert tuple(b[a[i]] for i in range(len(a))) == power_class_map(G, k * l % 12)
