"""Baker-Davenport reduction in the Dujella-Petho form.

If x <= M solves |x theta - y + beta| < A B^-x and p/q is a convergent of
theta with q > 6M and eps = ||q beta|| - M |q theta - p| > 0, then
x < log(A q / eps) / log B.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .bigarith import (
    InsufficientPrecision,
    RealEnclosure,
    convergent_exceeding,
    escalate,
    expand_continued_fraction,
    nearest_integer_distance,
)
from .dtuples import DnTriple
from .linforms import LinearFormInstance, mignotte_index_bound
from .pell import Intersection, IntersectionCase, find_intersections, v_sequence, w_sequence

FALLBACK_BOUND = 10 ** 25
SMALL_ENOUGH = 10
MAX_CONVERGENT_TRIES = 5
ANCHOR_SCAN = 8
ANCHOR_TRIES = 3


@dataclass(frozen=True)
class ReductionInstance:
    """|x theta - y + beta| < A * B**(-x) for 0 <= x <= M."""

    theta: RealEnclosure
    beta: RealEnclosure
    A: RealEnclosure
    B: RealEnclosure
    M: int
    form: str = "lf1"


@dataclass(frozen=True)
class ReductionOutcome:
    success: bool
    new_bound: Optional[int]
    p: Optional[int] = None
    q: Optional[int] = None
    epsilon: Optional[Fraction] = None
    tries: int = 0
    bits: int = 0
    reason: str = ""
    kind: str = "inhomogeneous"
    M: int = 0
    anchor: Optional[tuple] = None      # (x0, y0) for shifted steps


def digits_for(M: int) -> int:
    return 2 * math.ceil(math.log10(6 * M)) + 15


def bits_for(M: int) -> int:
    return math.ceil(digits_for(M) * math.log2(10)) + 8


def to_reduction_shape(inst: LinearFormInstance, form: str, M: int, bits: int) -> ReductionInstance:
    """Normalise Lambda into the reduction shape.

    lf1 bounds x = m':  theta = log a1/log a2, beta = log mu/log a2, A = a1^2/log a2, B = a1^2.
    lf2 (c1-) bounds x = n', with y = nu' = m' - n':
        theta = log a2/log a1 - 1, beta = -log mu/log a1, A = a2/log a1, B = a2^2.
    """
    k = inst.constants(bits)
    if form == "lf1":
        theta = k.log_alpha1 / k.log_alpha2
        beta = k.log_mu / k.log_alpha2
        A = k.alpha1 ** 2 / k.log_alpha2
        B = k.alpha1 ** 2
    elif form == "lf2":
        theta = k.log_alpha2 / k.log_alpha1 - 1
        beta = -k.log_mu / k.log_alpha1
        A = k.alpha2 / k.log_alpha1
        B = k.alpha2 ** 2
    else:
        raise ValueError(f"unknown form {form!r}")
    return ReductionInstance(theta.rounded(bits), beta.rounded(bits), A.rounded(bits), B.rounded(bits), M, form)


def _epsilon(ri: ReductionInstance, p: int, q: int) -> tuple[Fraction, Fraction]:
    """Exact lower bound for ||q beta|| - M |q theta - p| from the rational endpoints."""
    qt = ri.theta * q - p
    qb = nearest_integer_distance(ri.beta * q)
    return qb.lo - ri.M * qt.magnitude(), qb.width + ri.M * qt.width


def baker_davenport_step(ri: ReductionInstance, max_tries: int = MAX_CONVERGENT_TRIES,
                         bits: int = 0) -> ReductionOutcome:
    """One reduction step.  Raises InsufficientPrecision when the enclosures
    are too wide to decide; callers rebuild at higher precision."""
    p, q = convergent_exceeding(ri.theta, 6 * ri.M)
    for attempt in range(1, max_tries + 1):
        eps, slack = _epsilon(ri, p, q)
        if slack > Fraction(1, 10 ** 12):
            raise InsufficientPrecision("epsilon not resolved")
        if eps > 0:
            bound = (ri.A * q / eps).log(max(bits, 64)) / ri.B.log(max(bits, 64))
            return ReductionOutcome(True, math.floor(bound.hi), p, q, eps, attempt, bits, M=ri.M)
        p, q = convergent_exceeding(ri.theta, q)
    return ReductionOutcome(False, None, p, q, None, max_tries, bits,
                            f"epsilon <= 0 for {max_tries} convergents", M=ri.M)


def shifted_step(ri: ReductionInstance, x0: int, y0: int, bits: int = 0) -> ReductionOutcome:
    """Reduction around an integer point (x0, y0) with tiny residue beta0 = x0 theta - y0 + beta.

    The point need not be a solution.  Every other x <= M has X = x - x0 with
    0 < |X| <= M + |x0| < q_{k+1}, hence
    |x theta - y + beta| >= ||q_k theta|| - |beta0| =: L and x < log(A/L)/log B.
    """
    beta0 = ri.theta * x0 - y0 + ri.beta
    reach = ri.M + abs(x0)
    state = expand_continued_fraction(ri.theta, q_limit=reach)
    if not state.convergents or state.convergents[-1][1] <= reach:
        raise InsufficientPrecision("continued fraction too short")
    p, q = max((pq for pq in state.convergents if pq[1] <= reach), key=lambda pq: pq[1])
    L = nearest_integer_distance(ri.theta * q).lo - beta0.magnitude()
    if L <= 0:
        return ReductionOutcome(False, None, p, q, None, 1, bits,
                                f"residue at ({x0}, {y0}) too large", kind="shifted", M=ri.M)
    bound = (ri.A / L).log(max(bits, 64)) / ri.B.log(max(bits, 64))
    return ReductionOutcome(True, max(x0, math.floor(bound.hi)), p, q, L, 1, bits,
                            f"shifted by ({x0}, {y0})", kind="shifted", M=ri.M,
                            anchor=(x0, y0))


def verify_outcome(ri: ReductionInstance, out: ReductionOutcome) -> bool:
    """Re-check a successful step in exact rational arithmetic."""
    if not out.success:
        return False
    if out.kind == "shifted":
        x0, y0 = out.anchor
        beta0 = ri.theta * x0 - y0 + ri.beta
        L = nearest_integer_distance(ri.theta * out.q).lo - beta0.magnitude()
        return L > 0 and L == out.epsilon
    if out.q <= 6 * ri.M:
        return False
    eps, _ = _epsilon(ri, out.p, out.q)
    return eps > 0 and eps == out.epsilon


@dataclass(frozen=True)
class IndexBoundChoice:
    bound: int
    source: str          # "mignotte" or "fallback"
    detail: str = ""


def derive_index_bound(inst: LinearFormInstance, fallback: int = FALLBACK_BOUND) -> IndexBoundChoice:
    """Initial bound on the reduced variable (n' for c1-, m' otherwise)."""
    ib = mignotte_index_bound(inst)
    if ib.m_bound is not None:
        bound = ib.n_bound if inst.minus_branch else ib.m_bound
        return IndexBoundChoice(bound, "mignotte", ib.detail)
    msg = (f"no closed Mignotte bound for a={inst.triple.a}, c={inst.triple.c}, "
           f"case {inst.case.key}: {ib.detail}; using {fallback}")
    warnings.warn(msg, RuntimeWarning, stacklevel=2)
    return IndexBoundChoice(fallback, "fallback", ib.detail)


@dataclass
class ReductionResult:
    form: str
    initial: IndexBoundChoice
    steps: list = field(default_factory=list)
    reduced_bound: Optional[int] = None     # on the reduced variable
    m_bound: Optional[int] = None           # on m'
    status: str = "undecided"


def _m_from_n(inst: LinearFormInstance, n_bound: int) -> int:
    """m' < (n' log a2 - log mu + Lambda)/log a1 with 0 < Lambda < 1."""
    k = inst.constants()
    val = (n_bound * k.log_alpha2 - k.log_mu + 1) / k.log_alpha1
    return math.floor(val.hi)


def recheck_certificates(inst: LinearFormInstance, res: "ReductionResult") -> bool:
    """Rebuild each successful step at its precision and re-verify it exactly."""
    for out in res.steps:
        if out.success:
            ri = to_reduction_shape(inst, res.form, out.M, out.bits)
            if not verify_outcome(ri, out):
                return False
    return True


def reduce_instance(inst: LinearFormInstance, initial: Optional[IndexBoundChoice] = None) -> ReductionResult:
    """Iterate reduction steps to a fixed point or until the bound is small."""
    form = "lf2" if inst.minus_branch else "lf1"
    initial = initial or derive_index_bound(inst)
    res = ReductionResult(form, initial)
    M = initial.bound
    while True:
        def attempt(bits: int, M=M) -> ReductionOutcome:
            return baker_davenport_step(to_reduction_shape(inst, form, M, bits), bits=bits)

        try:
            out = escalate(attempt, start_bits=bits_for(M), cap_bits=1 << 14)
        except InsufficientPrecision as exc:
            res.status = "undecided"
            res.steps.append(ReductionOutcome(False, None, reason=str(exc)))
            break
        if not out.success:
            shifted = _shifted_attempt(inst, form, M)
            if shifted is not None:
                res.steps.append(out)
                out = shifted
        res.steps.append(out)
        if not out.success:
            res.status = "reduction-failed"
            break
        if out.new_bound >= M:
            res.status = "fixed-point"
            break
        M = out.new_bound
        if M <= SMALL_ENOUGH:
            res.status = "reduced"
            break
    if res.status in ("fixed-point", "reduced"):
        res.reduced_bound = M
        res.m_bound = _m_from_n(inst, M) if form == "lf2" else M
    return res


def _near_anchors(inst: LinearFormInstance, form: str, M: int) -> list[tuple[int, int]]:
    """Small (x0, y0) ordered by |x0 theta - y0 + beta|; any integer point is a valid anchor."""
    ri = to_reduction_shape(inst, form, M, bits_for(M))
    scored = []
    for x0 in range(-ANCHOR_SCAN, ANCHOR_SCAN + 1):
        v = ri.theta * x0 + ri.beta
        y0 = round(v.mid)
        scored.append(((v - y0).magnitude(), x0, y0))
    scored.sort()
    return [(x0, y0) for _, x0, y0 in scored[:ANCHOR_TRIES]]


def _shifted_attempt(inst: LinearFormInstance, form: str, M: int) -> Optional[ReductionOutcome]:
    """Try the shifted step around each small solution of this case, then
    around the small lattice points nearest the form."""
    anchors = [(h.n, h.m - h.n) if form == "lf2" else (h.m, h.n)
               for h in find_intersections(inst.triple, inst.case, 6)]
    anchors += [a for a in _near_anchors(inst, form, M) if a not in anchors]
    for x0, y0 in anchors:
        def attempt(bits: int, x0=x0, y0=y0) -> ReductionOutcome:
            return shifted_step(to_reduction_shape(inst, form, M, bits), x0, y0, bits)

        try:
            out = escalate(attempt, start_bits=bits_for(M), cap_bits=1 << 14)
        except InsufficientPrecision:
            continue
        if out.success:
            return out
    return None


def _first_index_above(seq, value: int) -> int:
    """First k from which no later term is <= value, or from which all terms are negative.

    With coefficient >= 3, 0 < u_k < u_{k+1} forces growth and u_{k+1} < u_k < 0 forces decay.
    """
    it = iter(seq)
    prev = next(it)
    for k, u in enumerate(it):
        if (0 < prev < u and prev > value) or u < prev < 0:
            return k
        prev = u


def finish_instance(triple: DnTriple, case: IntersectionCase, m_bound: int) -> list[Intersection]:
    """Exhaustive search for v_m = w_n with m <= m_bound, plus every solution
    with n <= 2 regardless of m."""
    v = v_sequence(triple, case.z0, case.x0)
    w = w_sequence(triple, case.z1, case.y1)
    w2 = max(abs(x) for x in itertools.islice(w, 3))
    m_cap = max(m_bound, _first_index_above(v, w2))
    v_top = max(abs(x) for x in itertools.islice(v, m_cap + 1))
    n_cap = _first_index_above(w, v_top)
    return find_intersections(triple, case, m_cap, n_cap=n_cap)
