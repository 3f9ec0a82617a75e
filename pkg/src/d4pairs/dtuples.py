"""D(n)-pairs, triples and quadruples, the standard extensions d+ and d-, the
recurrences for the third element c, and brute-force oracles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

import numpy as np

from .bigarith import is_perfect_square

#: pairs with b <= SMALL_B are settled elsewhere and never enter a campaign
SMALL_B = 10**4
#: 57**2, for the integer form (b - a)**2 < 57**2 * a of b < a + 57*sqrt(a)
GAP_SQ = 57 * 57

C_LABELS = ("c1-", "c1+", "c2-", "c2+", "c3-", "c3+", "c4-")


class ScopeError(ValueError):
    """Input lies outside the regime the operation is defined for."""


def _root(n: int, what: str) -> int:
    r = is_perfect_square(n)
    if r is None:
        raise ValueError(f"{what} = {n} is not a perfect square")
    return r


@dataclass(frozen=True)
class DnPair:
    a: int
    b: int
    r: int
    n: int = 4

    @classmethod
    def of(cls, a: int, b: int, n: int = 4) -> "DnPair":
        if not 0 < a < b:
            raise ValueError(f"need 0 < a < b, got a={a}, b={b}")
        return cls(a, b, _root(a * b + n, "ab+n"), n)

    @property
    def in_scope(self) -> bool:
        """b < a + 57*sqrt(a), decided exactly."""
        return (self.b - self.a) ** 2 < GAP_SQ * self.a


@dataclass(frozen=True)
class DnTriple:
    pair: DnPair
    c: int
    s: int
    t: int

    @classmethod
    def of(cls, a: int, b: int, c: int, n: int = 4) -> "DnTriple":
        pair = DnPair.of(a, b, n)
        if c <= 0 or c in (a, b):
            raise ValueError(f"c={c} must be positive and distinct from a, b")
        return cls(pair, c, _root(a * c + n, "ac+n"), _root(b * c + n, "bc+n"))

    @property
    def a(self) -> int:
        return self.pair.a

    @property
    def b(self) -> int:
        return self.pair.b

    @property
    def r(self) -> int:
        return self.pair.r

    @property
    def n(self) -> int:
        return self.pair.n

    def elements(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


@dataclass(frozen=True)
class DnQuadruple:
    triple: DnTriple
    d: int
    x: int
    y: int
    z: int

    @classmethod
    def of(cls, a: int, b: int, c: int, d: int, n: int = 4) -> "DnQuadruple":
        tr = DnTriple.of(a, b, c, n)
        if d <= 0 or d in tr.elements():
            raise ValueError(f"d={d} must be positive and new")
        return cls(tr, d, _root(a * d + n, "ad+n"), _root(b * d + n, "bd+n"), _root(c * d + n, "cd+n"))

    def elements(self) -> tuple[int, int, int, int]:
        return (*self.triple.elements(), self.d)


@dataclass(frozen=True)
class Verification:
    ok: bool
    roots: dict  # (x, y) -> root of xy+n, or None

    def __bool__(self) -> bool:
        return self.ok


def verify_dn_set(n: int, elements: Iterable[int]) -> Verification:
    """Check that x*y + n is a perfect square for every pair of distinct elements."""
    elems = sorted(set(elements))
    roots = {(x, y): is_perfect_square(x * y + n) for x, y in combinations(elems, 2)}
    return Verification(all(v is not None for v in roots.values()), roots)


def d_plus_minus(triple: DnTriple) -> tuple[int, int]:
    """(d+, d-) = a+b+c + (abc +- rst)/2."""
    a, b, c = triple.elements()
    abc = a * b * c
    rst = triple.r * triple.s * triple.t
    if (abc + rst) % 2:
        raise AssertionError(f"abc and rst differ in parity for {triple}")
    base = a + b + c
    return base + (abc + rst) // 2, base + (abc - rst) // 2


def _c_branch(pair: DnPair, sign: int, cap: int) -> list[tuple[int, int]]:
    """[(nu, c_nu)] along one branch, up to ``cap``."""
    a, b = pair.a, pair.b
    coef, shift = a * b + 2, 2 * (a + b)
    prev, cur = 0, a + b + sign * 2 * pair.r
    out, nu = [], 1
    # the minus branch may start nonpositive, so run until it climbs past cap
    while cur <= cap or cur <= 0:
        out.append((nu, cur))
        prev, cur = cur, coef * cur - prev + shift
        nu += 1
    return out


def c_branch_value(pair: DnPair, label: str) -> int:
    """c_nu^{+-} for a label such as 'c3+'."""
    nu, sign = int(label[1:-1]), 1 if label[-1] == "+" else -1
    a, b = pair.a, pair.b
    prev, cur = 0, a + b + sign * 2 * pair.r
    for _ in range(nu - 1):
        prev, cur = cur, (a * b + 2) * cur - prev + 2 * (a + b)
    return cur


def c_candidates(pair: DnPair, cap: int) -> list[tuple[str, int]]:
    """Positive c_nu^{+-} <= cap, ascending by value, labelled.

    A value reached on both branches is listed once, under its first label.
    """
    tagged = []
    for sign, ch in ((-1, "-"), (1, "+")):
        for nu, c in _c_branch(pair, sign, cap):
            if 0 < c <= cap:
                tagged.append((c, nu, ch))
    tagged.sort()
    out, seen = [], set()
    for c, nu, ch in tagged:
        if c not in seen:
            seen.add(c)
            out.append((f"c{nu}{ch}", c))
    return out


def campaign_c_list(pair: DnPair) -> list[tuple[str, int]]:
    """The (at most) seven third elements to examine for an in-scope pair."""
    if pair.b <= SMALL_B:
        raise ScopeError(f"b={pair.b} <= {SMALL_B} is outside the campaign regime")
    c4p = c_branch_value(pair, "c4+")
    if c4p <= pair.b ** 6:
        raise ScopeError(f"c4+ = {c4p} does not exceed b^6 for {pair}")
    vals = [(lab, c_branch_value(pair, lab)) for lab in C_LABELS]
    vals = [(lab, c) for lab, c in vals if c > 0 and c not in (pair.a, pair.b)]
    vals.sort(key=lambda lc: lc[1])
    return vals


def is_regular(quad: DnQuadruple) -> bool:
    """True iff the largest element equals d+ of the other three."""
    a, b, c, d = sorted(quad.elements())
    return d == d_plus_minus(DnTriple.of(a, b, c, quad.triple.n))[0]


def regular_sorted(elements: Iterable[int], n: int = 4) -> bool:
    a, b, c, d = sorted(elements)
    return d == d_plus_minus(DnTriple.of(a, b, c, n))[0]


# ---------------------------------------------------------------------------
# brute force
# ---------------------------------------------------------------------------

def _spf_sieve(n: int) -> np.ndarray:
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx
    return spf


def _factor(x: int, spf) -> dict[int, int]:
    f: dict[int, int] = {}
    while x > 1:
        p = int(spf[x])
        while x % p == 0:
            x //= p
            f[p] = f.get(p, 0) + 1
    return f


def _divisors(fac: dict[int, int]) -> list[int]:
    divs = [1]
    for p, e in fac.items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return divs


def dn_pairs_upto(n: int, limit: int) -> list[tuple[int, int]]:
    """Every D(n)-pair a < b <= limit (n > 0).

    Writing r = a + j, the pair condition is a * (b - a - 2j) = j*j - n, so
    the pairs are read off from the divisors of j*j - n; j = r - a >= 1
    because r*r = ab + n > a*a.
    """
    if n <= 0:
        return [(a, b) for a in range(1, limit + 1) for b in range(a + 1, limit + 1)
                if is_perfect_square(a * b + n) is not None]
    out: list[tuple[int, int]] = []
    jmax = limit // 2 + 2
    spf = _spf_sieve(jmax + 2 + n)
    for j in range(1, jmax + 1):
        v = j * j - n
        if v == 0:
            out.extend((a, a + 2 * j) for a in range(1, limit - 2 * j + 1))
            continue
        if v < 0:
            for a in _divisors(_factor(-v, spf)):
                b = a + 2 * j + v // a
                if a < b <= limit:
                    out.append((a, b))
            continue
        if 2 * j + 2 * math.isqrt(v) > limit:
            break
        if n == 4:
            fac = _factor(j - 2, spf)
            for p, e in _factor(j + 2, spf).items():
                fac[p] = fac.get(p, 0) + e
        else:
            fac = _factor(v, spf) if v < len(spf) else _factor_trial(v)
        for a in _divisors(fac):
            b = a + 2 * j + v // a
            if b <= limit:
                out.append((a, b))
    return out


def _factor_trial(x: int) -> dict[int, int]:
    f: dict[int, int] = {}
    p = 2
    while p * p <= x:
        while x % p == 0:
            f[p] = f.get(p, 0) + 1
            x //= p
        p += 1
    if x > 1:
        f[x] = f.get(x, 0) + 1
    return f


def _link_edges(n: int, nbrs: list[int]) -> list[tuple[int, int]]:
    """Pairs (b, c) of ``nbrs`` (ascending) with bc + n square."""
    k = len(nbrs)
    if k < 40 or nbrs[-1] ** 2 + abs(n) >= 1 << 52:
        return [(x, y) for i, x in enumerate(nbrs) for y in nbrs[i + 1:]
                if is_perfect_square(x * y + n) is not None]
    arr = np.asarray(nbrs, dtype=np.int64)
    iu, ju = np.triu_indices(k, 1)
    prod = arr[iu] * arr[ju] + n
    root = np.rint(np.sqrt(prod.astype(np.float64))).astype(np.int64)
    hit = np.nonzero(root * root == prod)[0]
    return [(int(arr[iu[h]]), int(arr[ju[h]])) for h in hit]


def brute_force_quadruples(n: int, limit: int) -> list[tuple[int, int, int, int]]:
    """Every D(n)-quadruple with all elements <= limit, sorted, in lexicographic order.

    Exhaustive: enumerate all pairs, then for each smallest element a find
    the triangles of the "bc + n is square" graph on the larger neighbours of a.
    """
    if limit < 4:
        return []
    upper: dict[int, list[int]] = {}
    for a, b in dn_pairs_upto(n, limit):
        upper.setdefault(a, []).append(b)
    found = []
    for a, nb in upper.items():
        if len(nb) < 3:
            continue
        nb.sort()
        link: dict[int, set[int]] = {}
        for x, y in _link_edges(n, nb):
            link.setdefault(x, set()).add(y)
        for b, cs in link.items():
            for c in cs:
                for d in cs & link.get(c, set()):
                    found.append((a, b, c, d))
    found.sort()
    return found


def _squares_mask(mult: int, d: np.ndarray, n: int) -> np.ndarray:
    v = mult * d + n
    root = np.rint(np.sqrt(v.astype(np.float64))).astype(np.int64)
    return root * root == v


def brute_force_extensions(triple: DnTriple, limit: int) -> list[int]:
    """All d in [1, limit] with ad+n, bd+n, cd+n simultaneously square.

    Scans z with e*d + n = z*z for the smallest element e, which visits every
    candidate d exactly once.
    """
    n = triple.n
    e, f, g = sorted(triple.elements())
    zmax = math.isqrt(e * limit + n)
    out: list[int] = []
    if e * limit + n < 1 << 62 and g * limit + n < 1 << 52:
        z = np.arange(0, zmax + 1, dtype=np.int64)
        num = z * z - n
        ok = (num > 0) & (num % e == 0)
        d = num[ok] // e
        d = d[(d >= 1) & (d <= limit)]
        d = d[_squares_mask(f, d, n) & _squares_mask(g, d, n)]
        out = sorted(set(int(x) for x in d))
    else:
        for z in range(0, zmax + 1):
            num = z * z - n
            if num <= 0 or num % e:
                continue
            d = num // e
            if d <= limit and is_perfect_square(f * d + n) is not None \
                    and is_perfect_square(g * d + n) is not None:
                out.append(d)
        out = sorted(set(out))
    return [d for d in out if d not in (e, f, g)]
