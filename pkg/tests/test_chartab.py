from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blockscope.chartab import (
    Character,
    char_level,
    character_table,
    decompose,
    delta_degrees,
    delta_i,
    ell,
    field_contains_Q4,
    galois_on_character,
    galois_on_values,
    induce,
    inner_product,
    regular_character,
    restrict,
    restricted_level,
    trivial_character,
    zero_function,
)
from blockscope.cyclo import Cyclotomic, conductor, nu, sigma_e_exponent
from blockscope.perm import group_from_generators, sylow_subgroup

from conftest import build, cyclic, load_corpus, symmetric

z = Cyclotomic.zeta
CORPUS = load_corpus("small_groups.json") + load_corpus("named_groups.json") + \
    load_corpus("paper_7_3.json")


def test_trivial_group_table():
    G = group_from_generators(1, [])
    table = character_table(G)
    assert [[v for v in chi.values] for chi in table] == [[1]]


def test_s3_degrees(S3):
    assert character_table(S3).degrees == [1, 1, 2]


def test_sl28_degrees(SL28):
    table = character_table(SL28)
    assert table.degrees == [1, 7, 7, 7, 7, 8, 9, 9, 9]
    assert table[0] == trivial_character(SL28)


@pytest.mark.parametrize("entry", CORPUS, ids=lambda e: e["name"])
def test_against_gap_export(entry):
    G = build(entry)
    exp = entry["expected"]
    table = character_table(G)
    assert G.order == exp["order"]
    assert len(table) == exp["classes"]
    assert sorted(table.degrees) == exp["degrees"]
    assert sorted(conductor(chi.values) for chi in table) == exp["conductors"]


@pytest.mark.parametrize("entry", CORPUS[::7], ids=lambda e: e["name"])
def test_orthogonality(entry):
    G = build(entry)
    table = character_table(G)
    k = len(table)
    for a in range(k):
        for b in range(a, k):
            assert inner_product(table[a], table[b]) == (a == b)
    # column orthogonality: sum over chi of |chi(g)|^2 = |C_G(g)|
    for j, c in enumerate(G.classes):
        total = sum((chi.values[j] * chi.values[j].conjugate() for chi in table),
                    Cyclotomic.rational(0))
        assert total == c.centralizer_order
    assert sum(d * d for d in table.degrees) == G.order


def test_inner_products(S4):
    one = trivial_character(S4)
    reg = regular_character(S4)
    assert inner_product(one, one) == 1
    for chi in character_table(S4):
        assert inner_product(reg, chi) == chi.degree


def test_restriction_and_induction(S3):
    C3 = S3.subgroup(generators=[next(x for x in S3.elements if x.order() == 3)])
    table = character_table(S3)
    assert restrict(trivial_character(S3), C3) == trivial_character(C3)
    assert restrict(table[2], S3) == table[2]
    two = restrict(table[2], C3)
    parts = decompose(two)
    lin = character_table(C3)
    assert parts[0] == 0 and parts[1:] == [1, 1]
    assert all(chi.degree == 1 for chi in lin)
    assert induce(trivial_character(C3), S3).degree == 2
    reg = induce(regular_character(C3), S3)
    assert reg == regular_character(S3)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.permutations(range(4)), min_size=1, max_size=2))
def test_frobenius_reciprocity(gens):
    G = symmetric(4)
    H = G.subgroup(generators=[type(G.identity)(g) for g in gens])
    for psi in character_table(H):
        up = induce(psi, G)
        for chi in character_table(G):
            assert inner_product(up, chi) == inner_product(psi, restrict(chi, H))


def test_levels(SL28):
    table = character_table(SL28)
    assert char_level(table[0], 3) == 0
    levs = [char_level(chi, 3) for chi in table if chi.degree == 7]
    assert sorted(levs) == [0, 2, 2, 2]
    for chi in table:
        if all(v.is_rational() for v in chi.values):
            assert char_level(chi, 3) == 0


def _sl28_level_two(SL28):
    table = character_table(SL28)
    return next(chi for chi in table if chi.degree == 7 and char_level(chi, 3) == 2)


def test_delta_and_ell(SL28):
    one = trivial_character(SL28)
    assert delta_degrees(one, 3) == {0: 1}
    assert delta_i(one, 0, 3) == one
    assert delta_i(one, 1, 3).is_zero()
    assert ell(one, 3) == 0
    assert ell(one * 3, 3) is None
    chi = _sl28_level_two(SL28)
    P = sylow_subgroup(SL28, 3)
    psi = restrict(chi, P)
    deg = delta_degrees(psi, 3)
    assert deg[2] % 3 != 0
    assert ell(psi, 3) == 2
    total = zero_function(P)
    for i in deg:
        total = total + delta_i(psi, i, 3)
    assert total == psi


def test_galois_action(SL28):
    table = character_table(SL28)
    assert all(galois_on_character(chi, 1) == chi for chi in table)
    k = sigma_e_exponent(SL28.exponent, 3, 1)
    lev2 = [chi for chi in table if char_level(chi, 3) == 2]
    images = [galois_on_character(chi, k) for chi in lev2]
    assert set(images) == set(lev2) and images != lev2
    for chi in table:
        assert galois_on_character(chi, k) == galois_on_values(chi, k)


def test_field_contains_Q4():
    assert field_contains_Q4([z(4)])
    assert not field_contains_Q4([1, -1])
    assert not field_contains_Q4([z(8) + z(8, 7)])
    assert field_contains_Q4([z(8)])


@pytest.mark.parametrize("entry", CORPUS[::5], ids=lambda e: e["name"])
def test_level_bounded_by_exponent(entry):
    G = build(entry)
    for chi in character_table(G):
        for p in (2, 3, 5, 7):
            lev = char_level(chi, p)
            assert lev <= nu(G.exponent, p)
            if p == 2:
                assert lev != 1


@pytest.mark.parametrize("entry", CORPUS[::5], ids=lambda e: e["name"])
def test_sigma_e_fixes_iff_level(entry):
    G = build(entry)
    for chi in character_table(G):
        for p in (3, 5, 7):
            a = char_level(chi, p)
            if a < 1:
                continue
            for e in range(1, nu(G.exponent, p) + 1):
                k = sigma_e_exponent(G.exponent, p, e)
                assert (galois_on_character(chi, k) == chi) == (e >= a)


@pytest.mark.parametrize("entry", CORPUS[::9], ids=lambda e: e["name"])
def test_lemma_4_2_on_sylow_restrictions(entry):
    G = build(entry)
    for p in (2, 3):
        if G.order % p:
            continue
        P = sylow_subgroup(G, p)
        for chi in character_table(G):
            psi = restrict(chi, P)
            a = char_level(psi, p)
            for i, d in delta_degrees(psi, p).items():
                if i >= max(2, a + 1):
                    assert d % p == 0


def test_restricted_level_needs_no_subgroup_table():
    G = cyclic(9)
    chi = character_table(G)[1]
    H = G.subgroup(generators=[G.generators[0] ** 3])
    assert char_level(chi, 3) == 2
    assert restricted_level(chi, H, 3) == 1
    assert "_character_table" not in H.__dict__


def test_decompose_rejects_non_characters(S3):
    half = Character(S3, [Fraction(1, 2)] * 3)
    with pytest.raises(ValueError):
        decompose(half)
