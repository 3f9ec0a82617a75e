"""Parametric families of gap-restricted D(4)-pairs.

For a pair {a, b} with r = sqrt(ab + 4) put j = r - a.  Then b = a + 2j + m
where j^2 = m a + 4, so every pair with a < b < a + 57 sqrt(a) has
j^2 < 813 a, i.e. m in [0, 812].  Writing j = m k + t with t^2 = 4 (mod m)
gives

    a(k) = m k^2 + 2 t k + (t^2 - 4)/m,   b(k) = a(k) + 2 j(k) + m.

Polynomials use the representative of t in (-m/2, m/2]; families are keyed
by the residue t mod m.  m = 0 (b = a + 4) is solved elsewhere and only
annotated here.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .bigarith import mod_sqrt_all
from .dtuples import GAP_SQ, SMALL_B, DnPair

log = logging.getLogger(__name__)

M_MAX = 812
EXPECTED_COUNT = 3691
J_SQ_FACTOR = 813          # j^2 < 813 a


@dataclass(frozen=True)
class ParametricFamily:
    m: int
    t: int                  # residue in [0, m)

    @property
    def shift(self) -> int:
        """Representative of t in (-m/2, m/2]."""
        return self.t - self.m if 2 * self.t > self.m else self.t

    @property
    def a_poly(self) -> tuple[int, int, int]:
        u = self.shift
        return (self.m, 2 * u, (u * u - 4) // self.m)

    @property
    def b_poly(self) -> tuple[int, int, int]:
        A, B, C = self.a_poly
        u = self.shift
        return (A, B + 2 * self.m, C + 2 * u + self.m)

    def j(self, k: int) -> int:
        return self.m * k + self.shift

    def a(self, k: int) -> int:
        A, B, C = self.a_poly
        return (A * k + B) * k + C

    def b(self, k: int) -> int:
        return self.a(k) + 2 * self.j(k) + self.m

    @property
    def key(self) -> str:
        return f"{self.m}:{self.t}"

    def pretty(self) -> str:
        return f"{{{_poly_str(self.a_poly)}, {_poly_str(self.b_poly)}}}"


def _poly_str(p: tuple[int, int, int]) -> str:
    terms = []
    for coef, mono in zip(p, ("k^2", "k", "")):
        if coef == 0:
            continue
        mag = abs(coef)
        body = (mono if mag == 1 and mono else f"{mag}{mono}")
        terms.append(("-" if coef < 0 else "+") + body)
    s = "".join(terms) or "0"
    return s[1:] if s.startswith("+") else s


@dataclass
class FamilyCatalog:
    families: list
    count: int
    expected: int = EXPECTED_COUNT
    annotations: list = field(default_factory=list)

    @property
    def matches_expected(self) -> bool:
        return self.count == self.expected

    def discrepancy_report(self) -> Optional[dict]:
        """None when the count agrees; otherwise the per-m data needed to audit it."""
        if self.matches_expected:
            return None
        per_m: dict[int, int] = {}
        for f in self.families:
            per_m[f.m] = per_m.get(f.m, 0) + 1
        self_paired = sorted({f.m for f in self.families if (2 * f.t) % f.m == 0})
        return {
            "count": self.count,
            "expected": self.expected,
            "difference": self.expected - self.count,
            "m_with_self_paired_residue": self_paired,
            "note": ("residues with t = -t (mod m) are the only ones whose counting "
                     "depends on convention; counting t = 0 twice for m | 4 gives "
                     f"{self.count + sum(1 for f in self.families if f.t == 0 and 4 % f.m == 0)}"),
            "per_m": per_m,
        }

    def get(self, m: int, t: int) -> ParametricFamily:
        for f in self.families:
            if f.m == m and f.t == t % m:
                return f
        raise KeyError((m, t))


def enumerate_families(m_max: int = M_MAX) -> FamilyCatalog:
    fams = [ParametricFamily(m, t) for m in range(1, m_max + 1) for t in mod_sqrt_all(4, m)]
    fams.sort(key=lambda f: (f.m, f.t))
    cat = FamilyCatalog(fams, len(fams),
                        annotations=["m = 0 (b = a + 4, the pairs {k-2, k+2}) excluded: solved separately"])
    if not cat.matches_expected:
        log.info("family count %d differs from expected %d", cat.count, cat.expected)
    return cat


@dataclass(frozen=True)
class Rejection:
    family: ParametricFamily
    k: int
    reason: str

    def __bool__(self) -> bool:
        return False


def instantiate(family: ParametricFamily, k: int, strict_scope: bool = True) -> Union[DnPair, Rejection]:
    """The pair at k, or a Rejection naming the failed check.

    Checks: a >= 1, ab + 4 = (a + j)^2, b > 10^4, j^2 < 813 a and, when
    ``strict_scope``, b < a + 57 sqrt(a).
    """
    a, b, j = family.a(k), family.b(k), family.j(k)
    if a < 1:
        return Rejection(family, k, "a(k) < 1")
    if b <= a:
        return Rejection(family, k, "b(k) <= a(k)")
    r = a + j
    if a * b + 4 != r * r:
        return Rejection(family, k, "ab + 4 is not (a + j)^2")
    if b <= SMALL_B:
        return Rejection(family, k, "b <= 10^4 (covered separately)")
    if j * j >= J_SQ_FACTOR * a:
        return Rejection(family, k, "(r - a)^2 >= 813 a")
    if strict_scope and (b - a) ** 2 >= GAP_SQ * a:
        return Rejection(family, k, "b >= a + 57 sqrt(a)")
    return DnPair(a, b, r)


def k_bound(family: ParametricFamily, a_max: int) -> Optional[int]:
    """Largest k >= 0 with a(k) <= a_max, or None if even a(0) exceeds it.

    Uses j(k)^2 = m a(k) + 4, so a(k) <= a_max iff j(k) <= isqrt(m a_max + 4).
    """
    if a_max < 1:
        raise ValueError("a_max must be positive")
    if family.a(0) > a_max:
        return None
    return (math.isqrt(family.m * a_max + 4) - family.shift) // family.m


def first_in_scope_k(family: ParametricFamily, k_start: int = 0, limit: int = 10 ** 7) -> Optional[int]:
    """Smallest k >= k_start whose instantiation is accepted."""
    # b > 10^4 needs roughly m k^2 > 10^4; start near there
    k = max(k_start, math.isqrt(SMALL_B // family.m) - 2, 0)
    for k in range(k, k + limit):
        if instantiate(family, k):
            return k
    return None
