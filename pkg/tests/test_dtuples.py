import math

import pytest
from hypothesis import given, settings, strategies as st

from d4pairs.dtuples import (
    C_LABELS,
    DnPair,
    DnQuadruple,
    DnTriple,
    ScopeError,
    brute_force_extensions,
    brute_force_quadruples,
    c_branch_value,
    c_candidates,
    campaign_c_list,
    d_plus_minus,
    dn_pairs_upto,
    is_regular,
    regular_sorted,
    verify_dn_set,
)


@pytest.mark.parametrize("elements, ok", [((1, 5, 12, 96), True), ((1, 5, 13), False), ((7,), True),
                                          ((1, 5), True), ((1, 6), False)])
def test_verify_dn_set(elements, ok):
    assert bool(verify_dn_set(4, elements)) is ok


def test_verify_reports_root():
    assert verify_dn_set(4, (5, 96)).roots[(5, 96)] == 22


def test_pair_rejects_non_square():
    with pytest.raises(ValueError):
        DnPair.of(1, 6)


def test_d_plus_minus_1_5_12():
    # rst = 3*4*8 = 96, abc = 60
    assert d_plus_minus(DnTriple.of(1, 5, 12)) == (96, 0)


def test_d_plus_of_1_5_96_extends():
    dp, dm = d_plus_minus(DnTriple.of(1, 5, 96))
    assert dm == 12
    assert verify_dn_set(4, (1, 5, 96, dp))


def test_c_list_for_1_5():
    got = [c for _, c in c_candidates(DnPair.of(1, 5), 10 ** 6)]
    assert got[:2] == [12, 96]
    # c1- = 1 + 5 - 6 = 0 is dropped
    assert all(c > 0 for c in got)


def test_c_branch_values_for_1_5():
    p = DnPair.of(1, 5)
    assert c_branch_value(p, "c1+") == 12
    assert c_branch_value(p, "c1-") == 0
    assert c_branch_value(p, "c2+") == 7 * 12 + 12


def test_campaign_c_list_scope():
    with pytest.raises(ScopeError):
        campaign_c_list(DnPair.of(1, 5))


def test_campaign_c_list_seven_increasing():
    pair = DnPair.of(39996, 40397)
    labs = campaign_c_list(pair)
    assert [lab for lab, _ in labs] == list(C_LABELS)
    assert [c for _, c in labs] == sorted(c for _, c in labs)
    assert c_branch_value(pair, "c4+") > pair.b ** 6


@pytest.mark.parametrize("q, regular", [((1, 5, 12, 96), True), ((12, 96, 1, 5), True)])
def test_is_regular(q, regular):
    assert is_regular(DnQuadruple.of(*q)) is regular


def test_non_regular_set_rejected():
    assert not regular_sorted((1, 5, 12, 97))
    assert regular_sorted((1, 5, 96, 672))


def test_quadruples_upto_100():
    assert (1, 5, 12, 96) in brute_force_quadruples(4, 100)


def test_quadruples_upto_10_empty():
    assert brute_force_quadruples(4, 10) == []


@pytest.mark.parametrize("triple, limit, ds", [((1, 5, 12), 10 ** 6, [96]), ((1, 5, 96), 10 ** 4, [12, 672])])
def test_brute_force_extensions(triple, limit, ds):
    assert brute_force_extensions(DnTriple.of(*triple), limit) == ds


def test_dn_pairs_match_naive_scan():
    naive = [(a, b) for a in range(1, 301) for b in range(a + 1, 301) if math.isqrt(a * b + 4) ** 2 == a * b + 4]
    assert sorted(dn_pairs_upto(4, 300)) == naive


@given(st.integers(1, 300), st.integers(1, 300))
@settings(max_examples=60, deadline=None)
def test_triple_identities(a, j):
    # {a, a + 2j + m, ...} with j^2 = m a + 4 is a D(4)-pair; use m = (j^2 - 4)/a when integral
    if (j * j - 4) % a or j * j <= 4:
        return
    m = (j * j - 4) // a
    b = a + 2 * j + m
    if b <= a:
        return
    pair = DnPair.of(a, b)
    c = c_branch_value(pair, "c1+")
    tr = DnTriple.of(a, b, c)
    dp, dm = d_plus_minus(tr)
    assert dp - dm == tr.r * tr.s * tr.t
    assert verify_dn_set(4, (a, b, c, dp))
    if dm > 0:
        assert verify_dn_set(4, (a, b, c, dm))


@given(st.integers(1, 10 ** 4), st.integers(1, 50))
@settings(max_examples=50, deadline=None)
def test_c_candidates_are_triples(a, j):
    if (j * j - 4) % a or j * j <= 4:
        return
    b = a + 2 * j + (j * j - 4) // a
    for _, c in c_candidates(DnPair.of(a, b), 10 ** 12):
        assert verify_dn_set(4, (a, b, c))
