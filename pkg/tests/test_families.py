import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from d4pairs.dtuples import GAP_SQ, SMALL_B, verify_dn_set
from d4pairs.families import (
    EXPECTED_COUNT,
    M_MAX,
    ParametricFamily,
    Rejection,
    enumerate_families,
    first_in_scope_k,
    instantiate,
    k_bound,
)

CAT = enumerate_families()

# the twelve families printed in the source listing, as (a, b) coefficient triples in k
LISTED = [
    ((1, 0, -4), (1, 2, -3)),
    ((2, 0, -2), (2, 4, 0)),
    ((3, -2, -1), (3, 4, 0)),
    ((3, 2, -1), (3, 8, 4)),
    ((812, -4, 0), (812, 1620, 808)),
    ((812, 4, 0), (812, 1628, 816)),
    ((812, -228, 16), (812, 1396, 600)),
    ((812, 228, 16), (812, 1852, 1056)),
    ((812, -584, 105), (812, 1040, 333)),
    ((812, 584, 105), (812, 2208, 1501)),
    ((812, -808, 201), (812, 816, 205)),
    ((812, 808, 201), (812, 2432, 1821)),
]


def test_catalog_sorted_and_bounded():
    keys = [(f.m, f.t) for f in CAT.families]
    assert keys == sorted(keys)
    assert all(1 <= f.m <= M_MAX and 0 <= f.t < f.m for f in CAT.families)
    assert len(set(keys)) == len(keys)


def test_count_is_residue_sum():
    assert CAT.count == sum(sum(1 for t in range(m) if (t * t - 4) % m == 0) for m in range(1, M_MAX + 1))


def test_count_discrepancy_reported():
    # the residue sum is 3688; the expected 3691 is what double-counting t = 0 for m | 4 gives
    if CAT.matches_expected:
        assert CAT.discrepancy_report() is None
    else:
        rep = CAT.discrepancy_report()
        assert rep["expected"] == EXPECTED_COUNT
        assert rep["m_with_self_paired_residue"][:3] == [1, 2, 4]
        assert str(EXPECTED_COUNT) in rep["note"]


def test_m0_annotated():
    assert any("m = 0" in a for a in CAT.annotations)


@pytest.mark.parametrize("polys", LISTED)
def test_listed_family_present(polys):
    assert any((f.a_poly, f.b_poly) == polys for f in CAT.families)


def test_pretty():
    assert CAT.get(1, 0).pretty() == "{k^2-4, k^2+2k-3}"
    assert CAT.get(812, 404).pretty() == "{812k^2+808k+201, 812k^2+2432k+1821}"


def test_instantiate_1_0_k200():
    p = instantiate(CAT.get(1, 0), 200)
    assert (p.a, p.b, p.r) == (39996, 40397, 40196)
    assert 39996 * 40397 + 4 == 40196 ** 2


@pytest.mark.parametrize("m, t, k, reason", [(2, 0, 3, "10^4"), (1, 0, 1, "a(k) < 1"), (1, 0, 0, "a(k) < 1")])
def test_rejections(m, t, k, reason):
    got = instantiate(CAT.get(m, t), k)
    assert isinstance(got, Rejection) and not got and reason in got.reason


def test_k_bound_1_0():
    assert k_bound(CAT.get(1, 0), 655_000_000_000) == 809320


def test_k_bound_812_404():
    fam = CAT.get(812, 404)
    k = k_bound(fam, 655_000_000_000)
    assert k == 28401
    assert fam.a(k) <= 655_000_000_000 < fam.a(k + 1)


def test_k_bound_none():
    fam = ParametricFamily(812, 406)  # a(0) = (406^2 - 4)/812 = 203
    assert k_bound(fam, 10) is None


def test_first_in_scope_k():
    assert first_in_scope_k(CAT.get(1, 0)) == 100


@given(st.integers(0, len(CAT.families) - 1), st.integers(0, 20000))
@settings(max_examples=300, deadline=None)
def test_instantiations_are_pairs(idx, k):
    fam = CAT.families[idx]
    p = instantiate(fam, k)
    if not p:
        return
    assert verify_dn_set(4, (p.a, p.b))
    assert ((p.r - p.a) ** 2 - 4) % p.a == 0
    assert (p.b - p.a) ** 2 < GAP_SQ * p.a and p.b > SMALL_B


@given(st.integers(0, len(CAT.families) - 1), st.integers(10 ** 4, 10 ** 12))
@settings(max_examples=200, deadline=None)
def test_k_bound_exact(idx, a_max):
    fam = CAT.families[idx]
    k = k_bound(fam, a_max)
    if k is None:
        assert fam.a(0) > a_max
    else:
        assert fam.a(k) <= a_max < fam.a(k + 1)


def _scan_pairs(a_lo, a_hi):
    """In-scope pairs by scanning r directly: (r^2 - 4) / a = b."""
    out = set()
    for a in range(a_lo, a_hi + 1):
        r_hi = math.isqrt(a * (a + 57 * math.isqrt(a) + 58) + 4) + 1
        r = np.arange(a + 1, r_hi + 1, dtype=np.int64)
        num = r * r - 4
        b = num[num % a == 0] // a
        for bb in b.tolist():
            if bb > a and bb > SMALL_B and (bb - a) ** 2 < GAP_SQ * a:
                out.add((a, bb))
    return out


def test_completeness_window():
    lo, hi = 4000, 9000
    scanned = _scan_pairs(lo, hi)
    produced = set()
    for fam in CAT.families:
        k = 0
        kb = k_bound(fam, hi)
        if kb is None:
            continue
        for k in range(0, kb + 1):
            p = instantiate(fam, k)
            if p and lo <= p.a <= hi:
                produced.add((p.a, p.b))
    assert scanned and scanned == produced
