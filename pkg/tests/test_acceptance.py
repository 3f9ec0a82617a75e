"""Acceptance criteria 1-8.  Each test prints its own PASS/FAIL line via conftest."""

import math
import random
import time
import warnings
from fractions import Fraction

import numpy as np
import pytest

from d4pairs.bigarith import nearest_integer_distance
from d4pairs.campaign import CampaignConfig, run_campaign
from d4pairs.dtuples import (
    DnTriple,
    brute_force_extensions,
    brute_force_quadruples,
    c_candidates,
    d_plus_minus,
    dn_pairs_upto,
    regular_sorted,
)
from d4pairs.families import enumerate_families, first_in_scope_k, instantiate, k_bound
from d4pairs.linforms import LinearFormInstance, lambda_enclosure, lambda_upper_bound, a_bound_pipeline
from d4pairs.pell import IntersectionCase, all_cases, c_label_of, extensions_via_intersections, find_intersections
from d4pairs.reduction import IndexBoundChoice, reduce_instance, to_reduction_shape

A_MAX = 655_000_000_000
CATALOG = enumerate_families()


def _report(label, **facts):
    print(f"[{label}] " + ", ".join(f"{k}={v}" for k, v in facts.items()))


# ---------------------------------------------------------------------------
# 1. regularity at desk scale
# ---------------------------------------------------------------------------

@pytest.mark.criterion(1)
@pytest.mark.slow
def test_c1_quadruples_upto_1e6_are_regular():
    t0 = time.perf_counter()
    quads = brute_force_quadruples(4, 10 ** 6)
    irregular = [q for q in quads if not regular_sorted(q)]
    _report("c1", quadruples=len(quads), irregular=len(irregular), seconds=round(time.perf_counter() - t0, 1))
    assert quads and (1, 5, 12, 96) in quads
    assert irregular == []


# ---------------------------------------------------------------------------
# 2. c-generation against an exhaustive scan
# ---------------------------------------------------------------------------

def _c_scan(a, b, cap):
    """Every c in [1, cap] with ac + 4 and bc + 4 square, by scanning z^2 = ac + 4."""
    z = np.arange(2, math.isqrt(a * cap + 4) + 1, dtype=np.int64)
    num = z * z - 4
    c = num[(num > 0) & (num % a == 0)] // a
    out = []
    for cc in c.tolist():
        if cc <= cap:
            v = b * cc + 4
            if math.isqrt(v) ** 2 == v and cc not in (a, b):
                out.append(cc)
    return sorted(set(out))


def _pairs_upto(a_max, count, seed):
    pool = []
    for fam in CATALOG.families:
        kb = k_bound(fam, a_max)
        if kb is None:
            continue
        for k in range(kb + 1):
            p = instantiate(fam, k)
            if p:
                pool.append(p)
    pool = sorted({(p.a, p.b): p for p in pool}.values(), key=lambda p: (p.a, p.b))
    return sorted(random.Random(seed).sample(pool, count), key=lambda p: (p.a, p.b))


@pytest.mark.criterion(2)
def test_c2_c_candidates_match_scan():
    cap = 10 ** 7
    pairs = _pairs_upto(10 ** 5, 50, seed=2)
    assert len(pairs) == 50 and all(p.in_scope and p.a <= 10 ** 5 for p in pairs)
    mismatches = []
    for p in pairs:
        got = [c for _, c in c_candidates(p, cap)]
        want = _c_scan(p.a, p.b, cap)
        if got != want:
            mismatches.append((p.a, p.b, got, want))
    _report("c2", pairs=len(pairs), mismatches=len(mismatches))
    assert mismatches == []


# ---------------------------------------------------------------------------
# 3. + 6. intersections against brute force, and Lambda containment
# ---------------------------------------------------------------------------

def _small_triples():
    """20 triples with c <= 10^4 and d+ <= 10^9, mixing c labels and d- > 0."""
    adj = {}
    for a, b in dn_pairs_upto(4, 10 ** 4):
        adj.setdefault(a, set()).add(b)
    rows = []
    for a, bs in adj.items():
        for b in bs:
            for c in adj.get(b, ()):
                if c in bs:
                    tr = DnTriple.of(a, b, c)
                    dp, dm = d_plus_minus(tr)
                    if dp <= 10 ** 9:
                        rows.append((tr, dm, c_label_of(tr)))
    rows.sort(key=lambda r: r[0].elements())
    groups = {}
    for r in rows:
        key = r[2] if r[2] != "c1+" else ("c1+, d- > 0" if r[1] > 0 else "c1+")
        groups.setdefault(key, []).append(r[0])
    quota = {"c1+": 4, "c1+, d- > 0": 4, None: 3, "c2-": 3, "c2+": 2, "c3-": 1, "c3+": 2, "c4+": 1}
    picked = []
    for key, n in quota.items():
        g = groups.get(key, [])
        step = max(1, len(g) // n)
        picked += g[::step][:n]
    rest = [r[0] for r in rows if r[0] not in picked]
    step = max(1, len(rest) // (20 - len(picked)))
    return sorted(picked + rest[::step][:20 - len(picked)], key=lambda t: t.elements())


SMALL_TRIPLES = _small_triples()


@pytest.mark.criterion(3)
def test_c3_intersections_match_brute_force():
    limit = 10 ** 9
    assert len(SMALL_TRIPLES) == 20 and all(t.c <= 10 ** 4 for t in SMALL_TRIPLES)
    bad = []
    n_ext = 0
    for tr in SMALL_TRIPLES:
        via = [d for d in extensions_via_intersections(tr, 50) if d <= limit]
        bf = brute_force_extensions(tr, limit)
        n_ext += len(bf)
        if via != bf:
            bad.append((tr.elements(), via, bf))
    _report("c3", triples=len(SMALL_TRIPLES), extensions=n_ext, mismatches=len(bad))
    assert n_ext > 0 and bad == []


@pytest.mark.criterion(6)
def test_c6_lambda_containment():
    checked, bad = 0, []
    for tr in SMALL_TRIPLES:
        for case in all_cases(tr):
            if not case.admissible:
                continue
            for hit in find_intersections(tr, case, 50):
                inst = LinearFormInstance(tr, case, hit.m, hit.n)
                lam = lambda_enclosure(inst)
                upper = lambda_upper_bound(inst)
                checked += 1
                if not (lam.lo > 0 and lam.hi < upper.lo):
                    bad.append((tr.elements(), case.key, hit.m, hit.n, float(lam), float(upper)))
    _report("c6", intersections=checked, outside=len(bad))
    assert checked > 0 and bad == []


# ---------------------------------------------------------------------------
# 4. bound constants
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def prop1():
    return a_bound_pipeline()


def _at_most(rep, stated):
    return rep.hi <= Fraction(stated)


@pytest.mark.criterion(4)
def test_c4_C0_below_02411(prop1):
    rep = prop1.step("C0").reproduced
    _report("c4 C0", reproduced=f"{float(rep.hi):.6f}", stated="0.2411")
    assert _at_most(rep, "0.2411")


@pytest.mark.criterion(4)
def test_c4_threshold_below_14170(prop1):
    threshold, _ = prop1
    _report("c4 threshold", reproduced=f"{float(threshold.hi):.4f}", stated="14170")
    assert _at_most(threshold, 14170)


@pytest.mark.criterion(4)
def test_c4_small_h_branch_below_11231(prop1):
    rep = prop1.step("small_h").reproduced
    _report("c4 small h", reproduced=f"{float(rep.hi):.4f}", stated="11231")
    assert _at_most(rep, 11231)


@pytest.mark.criterion(4)
def test_c4_a_bound_below_655e9(prop1):
    _, a_bound = prop1
    _report("c4 a bound", reproduced=a_bound, stated=A_MAX)
    assert a_bound <= A_MAX


# ---------------------------------------------------------------------------
# 5. family catalog
# ---------------------------------------------------------------------------

LISTED = [
    "{k^2-4, k^2+2k-3}", "{2k^2-2, 2k^2+4k}", "{3k^2-2k-1, 3k^2+4k}", "{3k^2+2k-1, 3k^2+8k+4}",
    "{812k^2-4k, 812k^2+1620k+808}", "{812k^2+4k, 812k^2+1628k+816}",
    "{812k^2-228k+16, 812k^2+1396k+600}", "{812k^2+228k+16, 812k^2+1852k+1056}",
    "{812k^2-584k+105, 812k^2+1040k+333}", "{812k^2+584k+105, 812k^2+2208k+1501}",
    "{812k^2-808k+201, 812k^2+816k+205}", "{812k^2+808k+201, 812k^2+2432k+1821}",
]


@pytest.mark.criterion(5)
def test_c5_family_count_3691():
    count = CATALOG.count
    _report("c5 count", enumerated=count, stated=3691)
    assert count == 3691


@pytest.mark.criterion(5)
def test_c5_listed_families_present():
    shown = {f.pretty() for f in CATALOG.families}
    missing = [p for p in LISTED if p not in shown]
    _report("c5 listed", listed=len(LISTED), missing=len(missing))
    assert missing == []


# ---------------------------------------------------------------------------
# 7. + 8. sampled campaign and reduction soundness
# ---------------------------------------------------------------------------

def _campaign_sample():
    fams = CATALOG.families
    picks = [fams[round(i * (len(fams) - 1) / 9)] for i in range(10)]
    plan = {}
    for fam in picks:
        lo, hi = first_in_scope_k(fam), k_bound(fam, A_MAX)
        ks = []
        for k in (lo, (lo + hi) // 2, hi):
            while not instantiate(fam, k):
                k -= 1
            ks.append(k)
        plan[(fam.m, fam.t)] = sorted(set(ks))
    return plan


@pytest.fixture(scope="module")
def campaign():
    plan = _campaign_sample()
    records = []
    t0 = time.perf_counter()
    for (m, t), ks in plan.items():
        cfg = CampaignConfig.from_mapping({
            "family_filter": [f"{m}:{t}"], "k_sample": "list:" + ",".join(map(str, ks)),
            "record_timing": False,
        })
        records += run_campaign(cfg).records
    return plan, records, time.perf_counter() - t0


@pytest.mark.criterion(7)
@pytest.mark.slow
def test_c7_sampled_campaign_all_verified(campaign):
    plan, records, wall = campaign
    pairs = {(r.a, r.b) for r in records}
    labels = {(r.a, r.b, r.c_label) for r in records}
    status = {s: sum(r.status == s for r in records) for s in ("verified", "discrepancy", "undecided")}
    _report("c7", families=len(plan), pairs=len(pairs), triples=len(labels), instances=len(records),
            seconds=round(wall, 1), **status)
    assert len(plan) == 10 and all(len(ks) == 3 for ks in plan.values())
    assert len(labels) == 7 * len(pairs) == 7 * 30
    assert status["verified"] == len(records)
    for r in records:
        assert set(r.extensions) <= {r.d_plus, r.d_minus}


def _certificate_holds(inst, form, step, extra_bits):
    """Independent exact re-check of one reduction step at a higher precision."""
    ri = to_reduction_shape(inst, form, step.M, step.bits + extra_bits)
    if step.kind == "shifted":
        x0, y0 = step.anchor
        beta0 = ri.theta * x0 - y0 + ri.beta
        return nearest_integer_distance(ri.theta * step.q).lo - beta0.magnitude() > 0
    if step.q <= 6 * step.M:
        return False
    eps = nearest_integer_distance(ri.beta * step.q).lo - step.M * (ri.theta * step.q - step.p).magnitude()
    return eps > 0


@pytest.mark.criterion(8)
@pytest.mark.slow
def test_c8_reduction_soundness(campaign):
    _, records, _ = campaign
    cap = 1000
    violations, cert_fail, steps = [], [], 0
    for r in records:
        tr = DnTriple.of(r.a, r.b, r.c)
        parity, left, right = r.case_id.split(":")
        z0, x0 = map(int, left.split(","))
        z1, y1 = map(int, right.split(","))
        case = IntersectionCase(r.c_label, parity, z0, x0, z1, y1)
        for hit in find_intersections(tr, case, cap):
            if hit.m > r.m_bound:
                violations.append((r.key_str, hit.m, hit.n, r.m_bound))
        inst = LinearFormInstance(tr, case)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            res = reduce_instance(inst, IndexBoundChoice(r.m_initial, r.m_source))
        assert res.m_bound == r.m_bound
        for step in res.steps:
            if step.success:
                steps += 1
                if not _certificate_holds(inst, res.form, step, 64):
                    cert_fail.append((r.key_str, step.kind, step.q))
    _report("c8", instances=len(records), certified_steps=steps, index_violations=len(violations),
            certificate_failures=len(cert_fail))
    assert violations == [] and cert_fail == []
