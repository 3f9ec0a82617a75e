"""Exact and certified-precision arithmetic.

Everything real-valued in the package lives in a :class:`RealEnclosure`, a
closed interval with exact rational endpoints.  Square roots are enclosed
with integer square roots, logarithms and exponentials with MPFR under
directed rounding (via gmpy2), so every interval is a proof, not an
estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, TypeVar, Union

import gmpy2

Rational = Union[int, Fraction]
T = TypeVar("T")

#: hard ceiling for precision escalation, in bits
PRECISION_CAP_BITS = 1 << 20


class DomainError(ValueError):
    """Argument outside the domain of the operation (sqrt of a negative, ...)."""


class InsufficientPrecision(ArithmeticError):
    """An enclosure is too wide to decide the requested question."""


# ---------------------------------------------------------------------------
# integers
# ---------------------------------------------------------------------------

def isqrt(n: int) -> int:
    """Return floor(sqrt(n)) for a nonnegative integer ``n``."""
    if n < 0:
        raise DomainError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def is_perfect_square(n: int) -> Optional[int]:
    """Return the nonnegative root of ``n`` if it is a perfect square, else None."""
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


def mod_sqrt_all(n: int, m: int) -> list[int]:
    """All t in [0, m) with t*t = n (mod m), ascending.

    Plain scan over the residues; the moduli used here never exceed 812.
    """
    if m < 1:
        raise DomainError(f"modulus must be positive, got {m}")
    n %= m
    return [t for t in range(m) if (t * t - n) % m == 0]


# ---------------------------------------------------------------------------
# dyadic rounding helpers
# ---------------------------------------------------------------------------

def _scale_bits(x: Fraction, bits: int) -> int:
    # number of fractional bits that leaves ~`bits` significant bits in x
    mag = x.numerator.bit_length() - x.denominator.bit_length()
    return bits - mag


def _floor_dyadic(x: Fraction, k: int) -> Fraction:
    if k >= 0:
        return Fraction((x.numerator << k) // x.denominator, 1 << k)
    return Fraction((x.numerator // (x.denominator << -k)) << -k)


def _ceil_dyadic(x: Fraction, k: int) -> Fraction:
    return -_floor_dyadic(-x, k)


def _to_mpfr_exact(x: Fraction) -> "gmpy2.mpfr":
    """Convert a dyadic rational to an mpfr without rounding."""
    num, den = x.numerator, x.denominator
    if den & (den - 1):
        raise ValueError("not a dyadic rational")
    shift = den.bit_length() - 1
    with gmpy2.context(gmpy2.get_context(), precision=max(num.bit_length(), 2) + 2):
        return gmpy2.div_2exp(gmpy2.mpfr(num), shift)


def _directed(fn: Callable, x: Fraction, bits: int, upward: bool) -> Fraction:
    """Evaluate a monotone increasing MPFR function at a dyadic point, rounded one way."""
    rnd = gmpy2.RoundUp if upward else gmpy2.RoundDown
    xm = _to_mpfr_exact(x)
    with gmpy2.context(gmpy2.get_context(), precision=bits, round=rnd):
        y = fn(xm)
    num, den = y.as_integer_ratio()
    return Fraction(int(num), int(den))


def _as_fraction(x: Rational) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# enclosures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RealEnclosure:
    """A closed interval [lo, hi] with rational endpoints containing a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", _as_fraction(self.lo))
        object.__setattr__(self, "hi", _as_fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, x: Rational) -> "RealEnclosure":
        x = _as_fraction(x)
        return cls(x, x)

    @classmethod
    def coerce(cls, x) -> "RealEnclosure":
        if isinstance(x, RealEnclosure):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.exact(x)
        raise TypeError(f"cannot enclose {type(x).__name__}")

    # -- inspection -------------------------------------------------------
    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def magnitude(self) -> Fraction:
        """Upper bound for |x|."""
        return max(abs(self.lo), abs(self.hi))

    def mignitude(self) -> Fraction:
        """Lower bound for |x|."""
        if self.lo <= 0 <= self.hi:
            return Fraction(0)
        return min(abs(self.lo), abs(self.hi))

    def contains(self, x) -> bool:
        if isinstance(x, RealEnclosure):
            return self.lo <= x.lo and x.hi <= self.hi
        x = _as_fraction(x)
        return self.lo <= x <= self.hi

    def sign(self) -> Optional[int]:
        """+1 or -1 if the sign is certain, 0 for the exact zero, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == self.hi == 0:
            return 0
        return None

    def definitely_lt(self, other) -> bool:
        other = RealEnclosure.coerce(other)
        return self.hi < other.lo

    def definitely_gt(self, other) -> bool:
        other = RealEnclosure.coerce(other)
        return self.lo > other.hi

    def __float__(self) -> float:
        return float(self.mid)

    def __repr__(self) -> str:
        return f"RealEnclosure(~{float(self.mid):.12g}, width={float(self.width):.3g})"

    # -- arithmetic ---------------------------------------------------------
    def __neg__(self):
        return RealEnclosure(-self.hi, -self.lo)

    def __add__(self, other):
        other = RealEnclosure.coerce(other)
        return RealEnclosure(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other):
        other = RealEnclosure.coerce(other)
        return RealEnclosure(self.lo - other.hi, self.hi - other.lo)

    def __rsub__(self, other):
        return RealEnclosure.coerce(other) - self

    def __mul__(self, other):
        other = RealEnclosure.coerce(other)
        p = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return RealEnclosure(min(p), max(p))

    __rmul__ = __mul__

    def reciprocal(self):
        if self.lo <= 0 <= self.hi:
            if self.lo == self.hi == 0:
                raise ZeroDivisionError("reciprocal of exact zero")
            raise InsufficientPrecision("divisor enclosure contains zero")
        return RealEnclosure(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * RealEnclosure.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return RealEnclosure.coerce(other) * self.reciprocal()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return (self ** -e).reciprocal()
        if e == 0:
            return RealEnclosure.exact(1)
        lo, hi = self.lo ** e, self.hi ** e
        if e % 2 == 0:
            if self.lo <= 0 <= self.hi:
                return RealEnclosure(0, max(lo, hi))
            return RealEnclosure(min(lo, hi), max(lo, hi))
        return RealEnclosure(lo, hi)

    # -- size control -----------------------------------------------------
    def rounded(self, bits: int) -> "RealEnclosure":
        """Outward-round both endpoints to dyadics with about ``bits`` significant bits."""
        lo, hi = self.lo, self.hi
        if lo != 0 and lo.denominator != 1:
            lo = _floor_dyadic(lo, _scale_bits(lo, bits))
        if hi != 0 and hi.denominator != 1:
            hi = _ceil_dyadic(hi, _scale_bits(hi, bits))
        return RealEnclosure(lo, hi)

    # -- elementary functions -----------------------------------------------
    def sqrt(self, bits: int) -> "RealEnclosure":
        if self.hi < 0:
            raise DomainError("sqrt of a negative enclosure")
        if self.lo < 0:
            raise InsufficientPrecision("sqrt argument may be negative")
        return RealEnclosure(_sqrt_down(self.lo, bits), _sqrt_up(self.hi, bits))

    def log(self, bits: int) -> "RealEnclosure":
        if self.hi <= 0:
            raise DomainError("log of a nonpositive enclosure")
        if self.lo <= 0:
            raise InsufficientPrecision("log argument may be nonpositive")
        return RealEnclosure(_log_down(self.lo, bits), _log_up(self.hi, bits))

    def exp(self, bits: int) -> "RealEnclosure":
        return RealEnclosure(_exp_down(self.lo, bits), _exp_up(self.hi, bits))

    def floor(self) -> int:
        """floor(x), provided the enclosure decides it."""
        f = math.floor(self.lo)
        if math.floor(self.hi) != f:
            raise InsufficientPrecision("enclosure straddles an integer")
        return f


def _sqrt_down(x: Fraction, bits: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    k = max(_scale_bits(x, 2 * bits) // 2 + 1, 0)
    return Fraction(math.isqrt((x.numerator << (2 * k)) // x.denominator), 1 << k)


def _sqrt_up(x: Fraction, bits: int) -> Fraction:
    if x == 0:
        return Fraction(0)
    k = max(_scale_bits(x, 2 * bits) // 2 + 1, 0)
    y = -((-x.numerator << (2 * k)) // x.denominator)   # ceil(x * 4^k)
    r = math.isqrt(y)
    if r * r < y:
        r += 1
    return Fraction(r, 1 << k)


def _log_down(x: Fraction, bits: int) -> Fraction:
    return _directed(gmpy2.log, _floor_dyadic(x, _scale_bits(x, bits + 8)), bits, upward=False)


def _log_up(x: Fraction, bits: int) -> Fraction:
    return _directed(gmpy2.log, _ceil_dyadic(x, _scale_bits(x, bits + 8)), bits, upward=True)


def _exp_point(x: Fraction, bits: int, upward: bool) -> Fraction:
    # exp grows fast; the argument needs absolute (not relative) accuracy
    k = bits + max(abs(x).numerator.bit_length() - abs(x).denominator.bit_length(), 0) + 8
    xd = _ceil_dyadic(x, k) if upward else _floor_dyadic(x, k)
    return _directed(gmpy2.exp, xd, bits, upward)


def _exp_down(x: Fraction, bits: int) -> Fraction:
    return _exp_point(x, bits, upward=False)


def _exp_up(x: Fraction, bits: int) -> Fraction:
    return _exp_point(x, bits, upward=True)


def nearest_integer_distance(x: RealEnclosure) -> RealEnclosure:
    """Enclosure of the distance from x to the nearest integer, within [0, 1/2]."""
    lo, hi = x.lo, x.hi
    half = Fraction(1, 2)
    if hi - lo >= 1:
        return RealEnclosure(0, half)

    def dist(v: Fraction) -> Fraction:
        f = v - math.floor(v)
        return min(f, 1 - f)

    d_lo, d_hi = dist(lo), dist(hi)
    has_integer = math.floor(hi) > math.floor(lo) or lo.denominator == 1
    has_half = math.floor(hi - half) > math.floor(lo - half) or (lo - half).denominator == 1
    low = Fraction(0) if has_integer else min(d_lo, d_hi)
    high = half if has_half else max(d_lo, d_hi)
    return RealEnclosure(low, high)


# ---------------------------------------------------------------------------
# symbolic expressions with precision escalation
# ---------------------------------------------------------------------------

class Expr:
    """A small expression tree over integers with + - * / sqrt log exp.

    >>> alpha1 = (4 + Expr.sqrt(12)) / 2
    >>> enclose(alpha1, 30).contains(Fraction(37320508, 10**7))
    True
    """

    __slots__ = ("op", "args")

    def __init__(self, op: str, *args):
        self.op = op
        self.args = args

    @staticmethod
    def lift(x) -> "Expr":
        if isinstance(x, Expr):
            return x
        if isinstance(x, (int, Fraction)):
            return Expr("const", _as_fraction(x))
        raise TypeError(f"cannot lift {type(x).__name__} into an expression")

    @staticmethod
    def sqrt(x) -> "Expr":
        return Expr("sqrt", Expr.lift(x))

    @staticmethod
    def log(x) -> "Expr":
        return Expr("log", Expr.lift(x))

    @staticmethod
    def exp(x) -> "Expr":
        return Expr("exp", Expr.lift(x))

    def __add__(self, o):
        return Expr("+", self, Expr.lift(o))

    def __radd__(self, o):
        return Expr("+", Expr.lift(o), self)

    def __sub__(self, o):
        return Expr("-", self, Expr.lift(o))

    def __rsub__(self, o):
        return Expr("-", Expr.lift(o), self)

    def __mul__(self, o):
        return Expr("*", self, Expr.lift(o))

    def __rmul__(self, o):
        return Expr("*", Expr.lift(o), self)

    def __truediv__(self, o):
        return Expr("/", self, Expr.lift(o))

    def __rtruediv__(self, o):
        return Expr("/", Expr.lift(o), self)

    def __neg__(self):
        return Expr("neg", self)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        return Expr("pow", self, e)

    def evaluate(self, bits: int) -> RealEnclosure:
        op, args = self.op, self.args
        if op == "const":
            return RealEnclosure.exact(args[0])
        if op == "pow":
            return (args[0].evaluate(bits) ** args[1]).rounded(bits)
        vals = [a.evaluate(bits) for a in args]
        if op == "+":
            out = vals[0] + vals[1]
        elif op == "-":
            out = vals[0] - vals[1]
        elif op == "*":
            out = vals[0] * vals[1]
        elif op == "/":
            out = vals[0] / vals[1]
        elif op == "neg":
            out = -vals[0]
        elif op == "sqrt":
            out = vals[0].sqrt(bits)
        elif op == "log":
            out = vals[0].log(bits)
        elif op == "exp":
            out = vals[0].exp(bits)
        else:
            raise ValueError(f"unknown operator {op!r}")
        return out.rounded(bits)


def escalate(fn: Callable[[int], "T"], start_bits: int = 64, cap_bits: int = PRECISION_CAP_BITS):
    """Call ``fn(bits)`` with doubling precision until it stops raising
    :class:`InsufficientPrecision`.  Gives up past ``cap_bits``."""
    bits = start_bits
    while True:
        try:
            return fn(bits)
        except InsufficientPrecision as exc:
            if bits >= cap_bits:
                raise InsufficientPrecision(f"undecided at precision cap {cap_bits} bits: {exc}") from exc
            bits = min(2 * bits, cap_bits)


def enclose(expr, precision_bits: int, cap_bits: int = PRECISION_CAP_BITS) -> RealEnclosure:
    """Certified enclosure of ``expr`` with width <= 2**(1 - precision_bits) * max(1, |value|)."""
    if precision_bits < 1:
        raise ValueError("precision_bits must be positive")
    expr = Expr.lift(expr)

    def attempt(bits: int) -> RealEnclosure:
        enc = expr.evaluate(bits)
        scale = max(Fraction(1), enc.mignitude())
        if enc.width > scale / (1 << (precision_bits - 1)):
            raise InsufficientPrecision("enclosure wider than requested")
        return enc

    return escalate(attempt, start_bits=precision_bits + 16, cap_bits=cap_bits)


# ---------------------------------------------------------------------------
# continued fractions of certified reals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuedFractionState:
    """Partial quotients and convergents certified by an enclosure of theta."""

    theta: RealEnclosure
    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    terminated: bool = False           # theta is rational and fully expanded
    insufficient_precision: bool = False
    # when the next quotient is a or a+1 and every remainder exceeds a + 1/2,
    # [.., a, 1] and [.., a+1] give the same convergent for all of theta
    shared_convergent: Optional[tuple[int, int]] = None


def expand_continued_fraction(theta: RealEnclosure, q_limit: Optional[int] = None,
                              max_terms: Optional[int] = None) -> ContinuedFractionState:
    """Expand the continued fraction of every real in ``theta`` as far as they agree.

    Stops when the expansion terminates (exact rational), when a convergent
    denominator exceeds ``q_limit``, after ``max_terms`` quotients, or when
    the enclosure no longer decides the next partial quotient.
    """
    lo, hi = theta.lo, theta.hi
    quotients: list[int] = []
    convs: list[tuple[int, int]] = []
    p_prev, p = 0, 1
    q_prev, q = 1, 0
    terminated = starved = False
    shared = None
    while True:
        a = math.floor(lo)
        if math.floor(hi) != a:
            starved = True
            if math.floor(hi) == a + 1 and 2 * (lo - a) > 1:
                shared = ((a + 1) * p + p_prev, (a + 1) * q + q_prev)
            break
        quotients.append(a)
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
        convs.append((p, q))
        flo, fhi = lo - a, hi - a
        if flo == 0:
            if fhi == 0:
                terminated = True
            else:
                starved = True
            break
        if q_limit is not None and q > q_limit:
            break
        if max_terms is not None and len(quotients) >= max_terms:
            break
        lo, hi = 1 / fhi, 1 / flo
    return ContinuedFractionState(theta, tuple(quotients), tuple(convs), terminated, starved, shared)


def convergent_exceeding(theta: RealEnclosure, q_min: int) -> tuple[int, int]:
    """First convergent p/q of theta with q > q_min, certified |theta - p/q| < 1/q**2.

    Raises :class:`InsufficientPrecision` when the enclosure is too wide to
    determine it; callers escalate precision and retry.
    """
    state = expand_continued_fraction(theta, q_limit=q_min)
    extra = (state.shared_convergent,) if state.shared_convergent else ()
    for p, q in state.convergents + extra:
        if q > q_min:
            err = max(abs(theta.lo - Fraction(p, q)), abs(theta.hi - Fraction(p, q)))
            if err * q * q >= 1:
                raise InsufficientPrecision("enclosure too wide to certify the convergent")
            return p, q
    if state.terminated:
        raise ValueError(f"theta is rational with denominator <= {q_min}")
    raise InsufficientPrecision(f"continued fraction undetermined before q > {q_min}")
