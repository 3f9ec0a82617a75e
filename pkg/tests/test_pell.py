import pytest
from hypothesis import given, settings, strategies as st

from d4pairs.dtuples import DnPair, DnTriple, brute_force_extensions, c_branch_value, d_plus_minus
from d4pairs.pell import (
    EVEN_EVEN,
    ODD_ODD,
    admissible_cases,
    all_cases,
    c_label_of,
    extensions_via_intersections,
    find_intersections,
    fundamental_solutions,
    recurrence_sequence,
    v_sequence,
    w_sequence,
)

T = DnTriple.of(1, 5, 12)
BIG = DnPair.of(39996, 40397)


def _triple(label):
    return DnTriple.of(BIG.a, BIG.b, c_branch_value(BIG, label))


@pytest.mark.parametrize("kind, a", [("zx", 1), ("zy", 5)])
def test_fundamental_solutions_include_pm2(kind, a):
    sols = {(f.z, f.x) for f in fundamental_solutions(kind, T)}
    assert {(2, 2), (-2, 2)} <= sols
    for z, x in sols:
        assert a * z * z - T.c * x * x == 4 * (a - T.c)


def test_constant_recurrence():
    assert recurrence_sequence(2, 2, 2, 5) == [2] * 5


def test_v_w_tables():
    assert v_sequence(T, -2, 2).terms(4) == [-2, 8, 34, 128]
    assert w_sequence(T, -2, 2).terms(4) == [-2, 4, 34, 268]


def test_c1_minus_single_shape():
    cases = [c for c in admissible_cases(_triple("c1-"), "c1-") if c.admissible]
    assert cases and all(c.parity == EVEN_EVEN and c.z0 == c.z1 == 2 and c.x0 == 2 for c in cases)


def test_c2_plus_both_parities():
    cases = [c for c in admissible_cases(_triple("c2+"), "c2+") if c.admissible]
    assert {c.parity for c in cases} == {EVEN_EVEN, ODD_ODD}


def test_c1_plus_mixed_parity_inadmissible():
    cases = admissible_cases(_triple("c1+"), "c1+")
    mixed = [c for c in cases if c.parity not in (EVEN_EVEN,)]
    assert mixed and not any(c.admissible for c in mixed)


def test_unknown_label():
    with pytest.raises(ValueError):
        admissible_cases(T, "c9+")


def test_intersection_1_5_12():
    case = next(c for c in all_cases(T) if (c.z0, c.z1, c.x0, c.y1) == (-2, -2, 2, 2))
    hits = find_intersections(T, case, 10)
    assert [(h.m, h.n, h.z, h.d) for h in hits] == [(2, 2, 34, 96)]
    assert find_intersections(T, case, 1) == []


def test_c_label_of():
    assert c_label_of(T) == "c1+"
    assert c_label_of(_triple("c3-")) == "c3-"


@pytest.mark.parametrize("triple, expected", [((1, 5, 12), [96]), ((1, 5, 96), [12, 672])])
def test_extensions_small(triple, expected):
    assert extensions_via_intersections(DnTriple.of(*triple), 30) == expected


@pytest.mark.parametrize("label", ["c1-", "c1+", "c2-", "c2+", "c3-"])
def test_big_pair_extensions_are_d_pm(label):
    tr = _triple(label)
    dp, dm = d_plus_minus(tr)
    got = extensions_via_intersections(tr, 12)
    assert set(got) == {dp} | ({dm} if dm > 0 else set())


@given(st.integers(1, 40), st.integers(3, 30))
@settings(max_examples=40, deadline=None)
def test_intersections_match_brute_force(a, j):
    if (j * j - 4) % a or j * j <= 4:
        return
    b = a + 2 * j + (j * j - 4) // a
    pair = DnPair.of(a, b)
    c = c_branch_value(pair, "c1+")
    tr = DnTriple.of(a, b, c)
    limit = 10 ** 8
    via = [d for d in extensions_via_intersections(tr, 40) if d <= limit]
    assert via == brute_force_extensions(tr, limit)


@given(st.integers(2, 12), st.integers(-50, 50), st.integers(-50, 50))
def test_recurrence_linear(coeff, u0, u1):
    seq = recurrence_sequence(u0, u1, coeff, 8)
    assert all(seq[i + 2] == coeff * seq[i + 1] - seq[i] for i in range(6))
