import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from d4pairs.bigarith import RealEnclosure
from d4pairs.dtuples import DnPair, DnTriple, c_branch_value
from d4pairs.families import enumerate_families, instantiate
from d4pairs.linforms import LinearFormInstance
from d4pairs.pell import admissible_cases, all_cases, find_intersections
from d4pairs.reduction import (
    FALLBACK_BOUND,
    ReductionInstance,
    baker_davenport_step,
    derive_index_bound,
    digits_for,
    finish_instance,
    recheck_certificates,
    reduce_instance,
    to_reduction_shape,
    verify_outcome,
)

T = DnTriple.of(1, 5, 12)
CASE = next(c for c in all_cases(T) if (c.z0, c.z1, c.x0, c.y1) == (-2, -2, 2, 2))


def _cases(pair, label):
    tr = DnTriple.of(pair.a, pair.b, c_branch_value(pair, label))
    return tr, [c for c in admissible_cases(tr, label) if c.admissible]


def test_shape_1_5_12():
    ri = to_reduction_shape(LinearFormInstance(T, CASE), "lf1", 100, 128)
    # mpmath: log a1 / log a2 = 1.3169578969 / 2.0634370689
    assert abs(float(ri.theta) - 0.6382350675) < 1e-9
    assert abs(float(ri.beta) - 0.7274910595) < 1e-9


def test_digits_rule():
    assert digits_for(10 ** 25) == 2 * 26 + 15


def test_family_2_0_k100_c1plus():
    # golden: one step from the fallback bound reaches 3
    pair = instantiate(enumerate_families().get(2, 0), 100)
    tr, cases = _cases(pair, "c1+")
    for case in cases:
        inst = LinearFormInstance(tr, case)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            res = reduce_instance(inst)
        assert res.initial.bound == FALLBACK_BOUND and res.initial.source == "fallback"
        assert res.status == "reduced" and res.m_bound == 3 and len(res.steps) <= 2
        assert recheck_certificates(inst, res)


def test_fallback_warns():
    tr, cases = _cases(DnPair.of(39996, 40397), "c2-")
    with pytest.warns(RuntimeWarning, match="Mignotte"):
        ch = derive_index_bound(LinearFormInstance(tr, cases[0]))
    assert ch.bound == FALLBACK_BOUND


def test_rational_theta_fails():
    # beta = 0 makes ||q beta|| = 0, so epsilon <= 0 for every convergent
    theta = RealEnclosure.exact(Fraction(123457, 1000003))
    ri = ReductionInstance(theta, RealEnclosure.exact(0), RealEnclosure.exact(2), RealEnclosure.exact(4), 10)
    out = baker_davenport_step(ri)
    assert not out.success and out.new_bound is None and out.tries == 5
    assert not verify_outcome(ri, out)


def test_shifted_step_used_for_degenerate_case():
    pair = instantiate(enumerate_families().get(2, 0), 100)
    tr, cases = _cases(pair, "c3-")
    kinds = []
    for case in cases:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            inst = LinearFormInstance(tr, case)
            res = reduce_instance(inst)
        kinds += [s.kind for s in res.steps if s.success]
        assert recheck_certificates(inst, res)
    assert "shifted" in kinds


@pytest.mark.parametrize("triple, bound, expected", [((1, 5, 12), 10, {96}), ((1, 5, 96), 10, {12})])
def test_finish_small(triple, bound, expected):
    tr = DnTriple.of(*triple)
    found = set()
    for case in all_cases(tr):
        if case.admissible:
            found |= {h.d for h in finish_instance(tr, case, bound)}
    assert expected <= found


def test_finish_bound_zero_only_small_n():
    hits = finish_instance(T, CASE, 0)
    assert all(h.n <= 2 for h in hits)


@given(st.integers(110, 3000))
@settings(max_examples=8, deadline=None)
def test_reduced_bound_covers_solutions(k):
    fam = enumerate_families().get(1, 0)
    pair = instantiate(fam, k)
    if not pair:
        return
    tr, cases = _cases(pair, "c1+")
    for case in cases:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            res = reduce_instance(LinearFormInstance(tr, case))
        assert res.m_bound is not None
        assert all(h.m <= max(res.m_bound, 2) for h in find_intersections(tr, case, 60))
