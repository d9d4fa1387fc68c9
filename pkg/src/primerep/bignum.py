"""Exact integer, rational, and interval arithmetic kernel.

Everything downstream (weights, towers, inequality checkers) is built on the
operations here.  There is no floating point anywhere in a computation path:
integers are Python ints, rationals are `fractions.Fraction` (always in lowest
terms), and real constants only ever exist as `RatInterval` enclosures whose
endpoints are exact rationals.  Any operation on an enclosure returns an
interval that provably contains the exact image (outward rounding only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import repeat
from typing import Iterator, Union

from . import config
from .errors import PrecisionError

Rational = Union[int, Fraction]

_DIGIT_ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"


def ipow(base: int, exp: int) -> int:
    """base**exp, exactly, with the result size checked against the bit cap."""
    if exp < 0:
        raise ValueError("ipow requires exp >= 0")
    if exp and abs(base) > 1:
        b = abs(base)
        if b.bit_length() <= 53:
            est = exp * math.log2(b) * (1 + 2e-12)
        else:
            est = exp * b.bit_length()
        config.check_bits(int(est) + 2, f"{base}^{exp}")
    return base**exp


def factorial(k: int) -> int:
    """k!, exactly, size-checked against the bit cap."""
    if k < 0:
        raise ValueError("factorial requires k >= 0")
    if k > 20:
        est = math.lgamma(k + 1) / math.log(2) * (1 + 2e-12)
        config.check_bits(int(est) + 2, f"{k}!")
    return math.factorial(k)


def floor_ratio(x: Rational) -> int:
    """Greatest integer <= x (true floor, not truncation)."""
    if isinstance(x, int):
        return x
    return x.numerator // x.denominator


def nth_root_floor(x: int, n: int) -> int:
    """Largest r with r**n <= x, by integer Newton iteration.  Exact."""
    if x < 0:
        raise ValueError("nth_root_floor requires x >= 0")
    if n < 1:
        raise ValueError("nth_root_floor requires n >= 1")
    if n == 1 or x < 2:
        return x
    bits = x.bit_length()
    if n >= bits:
        return 1
    # start strictly above the root; Newton descends monotonically
    r = 1 << -(-bits // n)
    while True:
        t = ((n - 1) * r + x // r ** (n - 1)) // n
        if t >= r:
            break
        r = t
    while r**n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r


class IntervalOp(Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"


@dataclass(frozen=True)
class RatInterval:
    """Closed interval [lo, hi] of exact rationals; lo <= hi enforced."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"invalid interval: lo={self.lo} > hi={self.hi}")

    @classmethod
    def point(cls, v: Rational) -> "RatInterval":
        f = Fraction(v)
        return cls(f, f)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, v: Rational) -> bool:
        return self.lo <= v <= self.hi

    def encloses(self, other: "RatInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def add(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo + other.lo, self.hi + other.hi)

    def sub(self, other: "RatInterval") -> "RatInterval":
        return RatInterval(self.lo - other.hi, self.hi - other.lo)

    def mul(self, other: "RatInterval") -> "RatInterval":
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return RatInterval(min(products), max(products))

    def shift(self, v: Rational) -> "RatInterval":
        f = Fraction(v)
        return RatInterval(self.lo + f, self.hi + f)

    def scale(self, v: Rational) -> "RatInterval":
        f = Fraction(v)
        if f >= 0:
            return RatInterval(self.lo * f, self.hi * f)
        return RatInterval(self.hi * f, self.lo * f)


def interval_arith(a: RatInterval, b: RatInterval, op: Union[str, IntervalOp]) -> RatInterval:
    """Sound enclosure of the exact op(a, b) for op in {add, sub, mul}."""
    op = IntervalOp(op) if isinstance(op, str) else op
    if op is IntervalOp.ADD:
        return a.add(b)
    if op is IntervalOp.SUB:
        return a.sub(b)
    return a.mul(b)


class DigitStatus(Enum):
    OK = "ok"  # max_digits certified
    AMBIGUOUS = "ambiguous"  # enclosure too wide for the next digit


@dataclass(frozen=True)
class DigitExtraction:
    """Certified digits of every real in an enclosure.

    `integer_part` is None when the enclosure straddles an integer (nothing
    can be certified); otherwise every digit in integer_part + digits is
    identical for all reals in the interval.
    """

    base: int
    integer_part: str | None
    digits: str
    status: DigitStatus

    @property
    def certified(self) -> int:
        return len(self.digits)

    @property
    def text(self) -> str:
        if self.integer_part is None:
            return "?"
        return f"{self.integer_part}.{self.digits}"

    def startswith(self, prefix: str) -> bool:
        return self.text.startswith(prefix)


def _int_to_base(n: int, base: int) -> str:
    if base == 10:
        return str(n)
    if n == 0:
        return "0"
    out = []
    while n:
        n, d = divmod(n, base)
        out.append(_DIGIT_ALPHABET[d])
    return "".join(reversed(out))


def _digit_stream(frac: Fraction, base: int, open_form: bool) -> Iterator[int]:
    """Base-`base` digits of frac in [0, 1).

    With open_form=True, yields the supremum expansion of reals approaching
    `frac` from below when the expansion terminates (…d000… -> …(d-1)(b-1)(b-1)…).
    """
    r = frac
    while True:
        r *= base
        d = r.numerator // r.denominator
        r -= d
        if open_form and r == 0:
            yield d - 1
            yield from repeat(base - 1)
        yield d


def digits_in_base(
    x: RatInterval, base: int, max_digits: int, open_hi: bool = False
) -> DigitExtraction:
    """Longest common digit prefix (integer part + fractional digits) shared
    by the base-`base` expansions of every real in the enclosure `x`.

    Every emitted digit is certified correct for all reals in x.  Returns
    status AMBIGUOUS (not an error) when fewer than max_digits fractional
    digits are common; callers drive the refine-and-retry loop.  open_hi
    treats the interval as [lo, hi).
    """
    if x.lo < 0:
        raise ValueError("digits_in_base requires a nonnegative interval")
    if not 2 <= base <= 36:
        raise ValueError("base must be in 2..36")
    if max_digits < 0:
        raise ValueError("max_digits must be >= 0")
    if open_hi and x.lo == x.hi:
        raise ValueError("open interval [v, v) is empty")

    il = floor_ratio(x.lo)
    hi_is_int = x.hi.denominator == 1
    if open_hi and hi_is_int:
        ih = int(x.hi) - 1
        hi_stream: Iterator[int] = repeat(base - 1)
    else:
        ih = floor_ratio(x.hi)
        hi_stream = _digit_stream(x.hi - ih, base, open_form=open_hi)
    if il != ih:
        return DigitExtraction(base, None, "", DigitStatus.AMBIGUOUS)

    lo_stream = _digit_stream(x.lo - il, base, open_form=False)
    out = []
    for _ in range(max_digits):
        dl = next(lo_stream)
        dh = next(hi_stream)
        if dl != dh:
            return DigitExtraction(base, _int_to_base(il, base), "".join(out), DigitStatus.AMBIGUOUS)
        out.append(_DIGIT_ALPHABET[dl])
    return DigitExtraction(base, _int_to_base(il, base), "".join(out), DigitStatus.OK)


def _log2_point_bracket(v: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Certified [l, u] with l <= log2(v) <= u and u - l = 2^-bits.

    Binary digit extraction by repeated squaring on dyadic bounds with
    outward rounding; no series, no floating point.  The guard precision
    2*bits+16 absorbs the 2^(bits+1) worst-case interval growth of the
    squaring recursion, so a straddle of the halving threshold is only
    possible for adversarially close inputs and is handled by retrying
    at doubled guard precision.
    """
    num, den = v.numerator, v.denominator

    def ge_pow2(w: int) -> bool:
        return num >= den << w if w >= 0 else num << -w >= den

    w = num.bit_length() - den.bit_length()
    if not ge_pow2(w):
        w -= 1
    elif ge_pow2(w + 1):
        w += 1
    # y = v / 2^w lies in [1, 2)
    guard = 2 * bits + 16
    for _attempt in range(8):
        if w >= 0:
            nn, dd = num, den << w
        else:
            nn, dd = num << -w, den
        a = (nn << guard) // dd
        b = -((-(nn << guard)) // dd)
        two = 2 << guard
        acc = 0
        straddled = False
        for _ in range(bits):
            a = (a * a) >> guard
            b = -((-(b * b)) >> guard)
            acc <<= 1
            if b < two:
                pass
            elif a >= two:
                acc |= 1
                a >>= 1
                b = -((-b) >> 1)
            else:
                straddled = True
                break
        if not straddled:
            scale = 1 << bits
            return (w + Fraction(acc, scale), w + Fraction(acc + 1, scale))
        guard *= 2
    raise PrecisionError(f"log2 digit extraction kept straddling for {v}")


def log2_enclosure(x: RatInterval, precision_bits: int) -> RatInterval:
    """Sound enclosure of log2 over x, width <= 2^-precision_bits plus the
    image width of the input interval."""
    if x.lo <= 0:
        raise ValueError("log2_enclosure requires x.lo > 0")
    if precision_bits < 1:
        raise ValueError("precision_bits must be >= 1")
    lo_l, lo_u = _log2_point_bracket(x.lo, precision_bits + 1)
    if x.hi == x.lo:
        return RatInterval(lo_l, lo_u)
    _, hi_u = _log2_point_bracket(x.hi, precision_bits + 1)
    return RatInterval(lo_l, hi_u)
