"""Pellian equations a z^2 - c x^2 = 4(a - c), b z^2 - c y^2 = 4(b - c) and the
binary recurrences v, w whose common terms give the extensions of a triple.

With alpha1 = (s + sqrt(ac))/2 every solution of the first equation is
z sqrt(a) + x sqrt(c) = (z0 sqrt(a) + x0 sqrt(c)) * alpha1^m, so z = v_m with

    v_0 = z0,  v_1 = (s z0 + c x0)/2,  v_{m+2} = s v_{m+1} - v_m

and likewise w_n from (z1, y1) and t.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .bigarith import is_perfect_square
from .dtuples import DnTriple, c_candidates

EVEN_EVEN = "even-even"
ODD_ODD = "odd-odd"
EVEN_ODD = "even-odd"
ODD_EVEN = "odd-even"
ANY_PARITY = "any"

_PARITY_OF = {EVEN_EVEN: (0, 0), ODD_ODD: (1, 1), EVEN_ODD: (0, 1), ODD_EVEN: (1, 0)}


@dataclass(frozen=True)
class FundamentalSolution:
    """(z, x) for kind 'zx' (a z^2 - c x^2 = 4(a-c)), (z, y) for kind 'zy'."""

    kind: str
    z: int
    x: int


def _coefficients(kind: str, triple: DnTriple) -> tuple[int, int]:
    if kind == "zx":
        return triple.a, triple.s
    if kind == "zy":
        return triple.b, triple.t
    raise ValueError(f"unknown equation kind {kind!r}")


def within_bounds(kind: str, triple: DnTriple, z: int, x: int) -> bool:
    """The size bounds a fundamental solution of the given equation obeys.

    If c exceeds the coefficient p (a or b): 2 <= x < sqrt(root+2) and
    2 <= |z| < sqrt(c sqrt(c)/sqrt(p)); otherwise the roles of z and x swap,
    with 2 <= z < sqrt(root+2) and 2 <= |x| < sqrt(p sqrt(p)/sqrt(c)).
    """
    p, root = _coefficients(kind, triple)
    c = triple.c
    if c > p:
        return 2 <= x and x * x < root + 2 and abs(z) >= 2 and z ** 4 * p < c ** 3
    return 2 <= z and z * z < root + 2 and abs(x) >= 2 and x ** 4 * c < p ** 3


def fundamental_solutions(kind: str, triple: DnTriple) -> list[FundamentalSolution]:
    """Every integer solution of the equation satisfying the fundamental-solution bounds."""
    p, root = _coefficients(kind, triple)
    c = triple.c
    rhs = 4 * (p - c)
    scan = range(2, math.isqrt(root + 1) + 1)   # u*u < root + 2
    out = set()
    if c > p:
        for x in scan:
            z = is_perfect_square((c * x * x + rhs) // p) if (c * x * x + rhs) % p == 0 else None
            if z is not None and z >= 2 and z ** 4 * p < c ** 3:
                out.update({(z, x), (-z, x)})
    else:
        for z in scan:
            num = p * z * z - rhs
            x = is_perfect_square(num // c) if num % c == 0 else None
            if x is not None and x >= 2 and x ** 4 * c < p ** 3:
                out.update({(z, x), (z, -x)})
    return [FundamentalSolution(kind, z, x) for z, x in sorted(out)]


def partners(kind: str, triple: DnTriple, z: int) -> list[int]:
    """All x (or y) completing z to a solution, with the sign rule of the bound regime."""
    p, _ = _coefficients(kind, triple)
    c = triple.c
    num = p * z * z - 4 * (p - c)
    if num % c:
        return []
    x = is_perfect_square(num // c)
    if x is None:
        return []
    if c > p:
        return [x]
    return sorted({x, -x})


# ---------------------------------------------------------------------------
# recurrences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolutionSequence:
    """u_{k+2} = coeff * u_{k+1} - u_k, generated lazily."""

    term0: int
    term1: int
    coeff: int

    def __iter__(self) -> Iterator[int]:
        a, b = self.term0, self.term1
        while True:
            yield a
            a, b = b, self.coeff * b - a

    def terms(self, count: int) -> list[int]:
        return list(itertools.islice(self, count))

    def __getitem__(self, k: int) -> int:
        if k < 0:
            raise IndexError(k)
        return next(itertools.islice(self, k, None))


def recurrence_sequence(term0: int, term1: int, coeff: int, count: int) -> list[int]:
    if count < 1:
        raise ValueError("count must be at least 1")
    return SolutionSequence(term0, term1, coeff).terms(count)


def _half(n: int, what: str) -> int:
    if n % 2:
        raise ValueError(f"{what} = {n}/2 is not an integer")
    return n // 2


def v_sequence(triple: DnTriple, z0: int, x0: int) -> SolutionSequence:
    s, c = triple.s, triple.c
    return SolutionSequence(z0, _half(s * z0 + c * x0, "v1"), s)


def w_sequence(triple: DnTriple, z1: int, y1: int) -> SolutionSequence:
    t, c = triple.t, triple.c
    return SolutionSequence(z1, _half(t * z1 + c * y1, "w1"), t)


def q_sequence(triple: DnTriple, z0: int, x0: int) -> SolutionSequence:
    """x-companion of v: x = q_m."""
    s, a = triple.s, triple.a
    return SolutionSequence(x0, _half(s * x0 + a * z0, "q1"), s)


def W_sequence(triple: DnTriple, z1: int, y1: int) -> SolutionSequence:
    """y-companion of w: y = W_n."""
    t, b = triple.t, triple.b
    return SolutionSequence(y1, _half(t * y1 + b * z1, "W1"), t)


# ---------------------------------------------------------------------------
# cases and intersections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntersectionCase:
    """One pair of starting solutions together with the index parities searched."""

    c_label: Optional[str]
    parity: str
    z0: int
    x0: int
    z1: int
    y1: int
    admissible: bool = True
    note: str = ""

    @property
    def key(self) -> str:
        return f"{self.parity}:{self.z0},{self.x0}:{self.z1},{self.y1}"


def c_label_of(triple: DnTriple) -> Optional[str]:
    """Which c_nu^{+-} of its pair the third element is, if any."""
    for label, c in c_candidates(triple.pair, triple.c):
        if c == triple.c:
            return label
    return None


def admissible_cases(triple: DnTriple, c_label: str) -> list[IntersectionCase]:
    """Starting solutions allowed by the initial-value lemma for this c.

    Admissible entries come first; the excluded parity classes are appended
    with ``admissible=False`` so reports can show what was ruled out.
    """
    if c_label not in ("c1-", "c1+", "c2-", "c2+", "c3-", "c3+", "c4-"):
        raise ValueError(f"unknown c label {c_label!r}")
    s, t = triple.s, triple.t
    cases: list[IntersectionCase] = []

    def add(parity: str, z0: int, z1: int):
        xs = partners("zx", triple, z0)
        if c_label == "c1-" and triple.b != triple.a + 4:
            xs = [x for x in xs if x > 0]   # x0 = 2 unless b = a + 4
        for x0 in xs:
            for y1 in partners("zy", triple, z1):
                inside = within_bounds("zx", triple, z0, x0) and within_bounds("zy", triple, z1, y1)
                cases.append(IntersectionCase(c_label, parity, z0, x0, z1, y1, True,
                                              "" if inside else "outside fundamental bounds"))

    if c_label == "c1-":
        add(EVEN_EVEN, 2, 2)
    else:
        for z in (2, -2):
            add(EVEN_EVEN, z, z)
        if c_label != "c1+":
            for sign in (1, -1):
                add(ODD_ODD, sign * t, sign * s)
    excluded = [EVEN_ODD, ODD_EVEN] + ([ODD_ODD] if c_label in ("c1-", "c1+") else [])
    for parity in excluded:
        cases.append(IntersectionCase(c_label, parity, 0, 0, 0, 0, False, "excluded by parity"))
    return cases


def all_cases(triple: DnTriple) -> list[IntersectionCase]:
    """Every pair of fundamental solutions, no parity restriction."""
    label = c_label_of(triple)
    return [IntersectionCase(label, ANY_PARITY, f.z, f.x, g.z, g.x)
            for f in fundamental_solutions("zx", triple)
            for g in fundamental_solutions("zy", triple)]


@dataclass(frozen=True)
class Intersection:
    m: int
    n: int
    z: int
    d: int


def _positive_terms(seq: SolutionSequence, cap: int, parity: Optional[int]) -> list[tuple[int, int]]:
    out = []
    for k, u in enumerate(itertools.islice(seq, cap + 1)):
        if u > 2 and (parity is None or k % 2 == parity):
            out.append((u, k))
    out.sort()
    return out


def find_intersections(triple: DnTriple, case: IntersectionCase, index_cap: int,
                       n_cap: Optional[int] = None) -> list[Intersection]:
    """All v_m = w_n > 2 with m <= index_cap (and n <= n_cap, default index_cap)
    in the parity class of ``case`` whose d = (z^2 - 4)/c is a positive integer."""
    if not case.admissible:
        return []
    pm, pn = _PARITY_OF.get(case.parity, (None, None))
    vs = _positive_terms(v_sequence(triple, case.z0, case.x0), index_cap, pm)
    ws = _positive_terms(w_sequence(triple, case.z1, case.y1),
                         index_cap if n_cap is None else n_cap, pn)
    hits = []
    i = j = 0
    while i < len(vs) and j < len(ws):
        if vs[i][0] < ws[j][0]:
            i += 1
        elif vs[i][0] > ws[j][0]:
            j += 1
        else:
            z = vs[i][0]
            num = z * z - 4
            if num % triple.c == 0:
                hits.append(Intersection(vs[i][1], ws[j][1], z, num // triple.c))
            i += 1
            j += 1
    hits.sort(key=lambda h: (h.m, h.n))
    return hits


def extensions_via_intersections(triple: DnTriple, index_cap: int,
                                 cases: Optional[list[IntersectionCase]] = None) -> list[int]:
    """Sorted distinct d > 0 recovered from the recurrences."""
    cases = all_cases(triple) if cases is None else cases
    ds = {h.d for case in cases for h in find_intersections(triple, case, index_cap)}
    return sorted(d for d in ds if d > 0)
