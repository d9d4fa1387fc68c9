"""Indexed prime supply and big-integer prime searches.

PrimeSource serves p_1, p_2, ... from a growable sieve (1-based, p_1 = 2).
is_prime gives a deterministic verdict below 2^64 (complete strong-pseudoprime
base set) and an honestly labelled probable_prime verdict above (BPSW plus 64
fixed extra strong rounds, combined error < 2^-128).  next/previous-prime
searches step wheel-30 candidates with trial-division filtering, as needed by
the Mills and Wright towers.
"""

from __future__ import annotations

import bisect
import math
import threading
from dataclasses import dataclass
from enum import Enum

from . import config
from .errors import ResourceLimitError

# deterministic Miller-Rabin base ladders (standard verified thresholds)
_MR_LADDER = (
    (2047, (2,)),
    (1373653, (2, 3)),
    (9080191, (31, 73)),
    (25326001, (2, 3, 5)),
    (3215031751, (2, 3, 5, 7)),
    (4759123141, (2, 7, 61)),
    (1122004669633, (2, 13, 23, 1662803)),
    (2152302898747, (2, 3, 5, 7, 11)),
    (3474749660383, (2, 3, 5, 7, 11, 13)),
    (341550071728321, (2, 3, 5, 7, 11, 13, 17)),
)
# complete for every n < 2^64 (Feitsma/Galway SPSP-2 database verification)
_MR_BASES_64 = (2, 325, 9375, 28178, 450775, 9780504, 1795265022)

_TINY_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61)

_WHEEL = (1, 7, 11, 13, 17, 19, 23, 29)
_WHEEL_SET = frozenset(_WHEEL)

_EXTRA_ROUNDS = 64  # each strong round has error <= 1/4: combined < 2^-128


def _sieve_upto(limit: int) -> list[int]:
    """Primes <= limit by a plain odd-only sieve of Eratosthenes."""
    if limit < 2:
        return []
    size = (limit - 1) // 2  # odds 3, 5, ..., track index i <-> 2i+3
    flags = bytearray([1]) * size
    i = 0
    while True:
        p = 2 * i + 3
        if p * p > limit:
            break
        if flags[i]:
            start = (p * p - 3) // 2
            flags[start::p] = bytearray(len(range(start, size, p)))
        i += 1
    return [2] + [2 * i + 3 for i in range(size) if flags[i]]


class Primality(Enum):
    COMPOSITE = "composite"
    PRIME = "prime"
    PROBABLE_PRIME = "probable_prime"


@dataclass(frozen=True)
class PrimalityVerdict:
    value: int
    status: Primality
    witness_info: str

    def __bool__(self) -> bool:
        return self.status is not Primality.COMPOSITE


def _strong_probable_prime(n: int, a: int) -> bool:
    """Strong (Miller-Rabin) probable prime test of odd n > 2 to base a."""
    a %= n
    if a == 0:
        return True
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd n > 0."""
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = _isqrt(n)
    return r * r == n


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)


def _strong_lucas_probable_prime(n: int) -> bool:
    """Strong Lucas test with Selfridge method A parameters (BPSW half)."""
    # find D = 5, -7, 9, -11, ... with jacobi(D/n) = -1
    d = 5
    while True:
        j = _jacobi(d, n)
        if j == -1:
            break
        if j == 0 and abs(d) != n:
            return False
        if d == 13 and _is_square(n):
            return False
        d = -(d + 2) if d > 0 else -(d - 2)
    q = (1 - d) // 4
    # n + 1 = k * 2^s with k odd
    k = n + 1
    s = (k & -k).bit_length() - 1
    k >>= s
    # compute U_k, V_k (P = 1) by binary ladder
    u, v, qk = 1, 1, q % n
    for bit in bin(k)[3:]:
        u = u * v % n
        v = (v * v - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            u, v = (u + v) % n, (v + d * u) % n
            if u & 1:
                u += n
            if v & 1:
                v += n
            u, v = u // 2 % n, v // 2 % n
            qk = qk * q % n
    if u == 0 or v == 0:
        return True
    for _ in range(s - 1):
        v = (v * v - 2 * qk) % n
        if v == 0:
            return True
        qk = qk * qk % n
    return False


def is_prime(x: int) -> PrimalityVerdict:
    """Primality verdict: deterministic below 2^64, probable_prime above.

    0 and 1 are composite by convention.  The verdict records which test
    decided, so reports can label large-search results honestly.
    """
    if x < 2:
        return PrimalityVerdict(x, Primality.COMPOSITE, "below 2")
    for p in _TINY_PRIMES:
        if x == p:
            return PrimalityVerdict(x, Primality.PRIME, "tiny prime table")
        if x % p == 0:
            return PrimalityVerdict(x, Primality.COMPOSITE, f"divisible by {p}")
    if x < 3721:  # 61^2: trial division above was exhaustive
        return PrimalityVerdict(x, Primality.PRIME, "trial division to sqrt")
    if x < 1 << 64:
        for bound, bases in _MR_LADDER:
            if x < bound:
                break
        else:
            bases = _MR_BASES_64
        if all(_strong_probable_prime(x, a) for a in bases):
            return PrimalityVerdict(
                x, Primality.PRIME, f"deterministic Miller-Rabin, bases {bases}"
            )
        return PrimalityVerdict(x, Primality.COMPOSITE, "Miller-Rabin witness found")
    # large: BPSW + fixed extra strong rounds
    if not _strong_probable_prime(x, 2):
        return PrimalityVerdict(x, Primality.COMPOSITE, "strong base-2 witness")
    if not _strong_lucas_probable_prime(x):
        return PrimalityVerdict(x, Primality.COMPOSITE, "strong Lucas witness")
    small = _sieve_upto(400)
    extra = [p for p in small if p > 2][: _EXTRA_ROUNDS]
    for a in extra:
        if not _strong_probable_prime(x, a):
            return PrimalityVerdict(x, Primality.COMPOSITE, f"strong base-{a} witness")
    return PrimalityVerdict(
        x,
        Primality.PROBABLE_PRIME,
        f"BPSW + {len(extra)} extra strong rounds (error < 2^-128)",
    )


_TRIAL_LIMIT = 30000
_trial_primes: list[int] | None = None


def _trial_division_primes() -> list[int]:
    global _trial_primes
    if _trial_primes is None:
        _trial_primes = [p for p in _sieve_upto(_TRIAL_LIMIT) if p > 5]
    return _trial_primes


def _survives_trial(x: int) -> bool:
    for p in _trial_division_primes():
        if x % p == 0:
            return x == p
    return True


def _wheel_candidates_up(start: int):
    """Candidates >= start coprime to 30, ascending."""
    base = start - start % 30
    while True:
        for r in _WHEEL:
            c = base + r
            if c >= start:
                yield c
        base += 30


def _wheel_candidates_down(start: int):
    """Candidates <= start coprime to 30, descending."""
    base = start - start % 30
    while base >= 0:
        for r in reversed(_WHEEL):
            c = base + r
            if c <= start:
                yield c
        base -= 30


def next_prime_geq(x: int) -> int:
    """Least prime >= x.  Wheel-30 stepping with trial-division filtering."""
    if x < 2:
        raise ValueError("next_prime_geq requires x >= 2")
    if x <= 31:
        for p in _TINY_PRIMES:
            if p >= x:
                return p
    for c in _wheel_candidates_up(x):
        config.check_deadline()
        if not _survives_trial(c):
            continue
        if c < 1 << 64:
            if is_prime(c):
                return c
        elif _strong_probable_prime(c, 2) and is_prime(c):
            return c
    raise AssertionError("unreachable")


def largest_prime_below(x: int) -> int:
    """Greatest prime < x.  Requires x >= 3 (largest prime below 3 is 2)."""
    if x < 3:
        raise ValueError("largest_prime_below requires x >= 3")
    if x <= 32:
        return max(p for p in _TINY_PRIMES if p < x)
    for c in _wheel_candidates_down(x - 1):
        config.check_deadline()
        if c < 7:
            break
        if not _survives_trial(c):
            continue
        if c < 1 << 64:
            if is_prime(c):
                return c
        elif _strong_probable_prime(c, 2) and is_prime(c):
            return c
    return max(p for p in _TINY_PRIMES if p < x)


class PrimeSource:
    """Growable ascending prime cache; index is 1-based so nth(1) == 2.

    Extension is lock-protected, so one instance may be shared across
    threads for concurrent reads with amortized growth.
    """

    def __init__(self, initial_limit: int = 1 << 16):
        self._lock = threading.Lock()
        self._limit = max(initial_limit, 64)
        self._primes = _sieve_upto(self._limit)

    def __len__(self) -> int:
        return len(self._primes)

    @property
    def sieve_limit(self) -> int:
        return self._limit

    def _grow_to_limit(self, limit: int) -> None:
        if limit > config.sieve_cap():
            raise ResourceLimitError(
                f"sieve extension to {limit} exceeds the cap of {config.sieve_cap()}"
            )
        self._primes = _sieve_upto(limit)
        self._limit = limit

    def ensure_count(self, n: int) -> None:
        if n <= len(self._primes):
            return
        with self._lock:
            while n > len(self._primes):
                import math

                if n >= 6:
                    guess = int(n * (math.log(n) + math.log(math.log(n))) * 1.2)
                else:
                    guess = 64
                self._grow_to_limit(max(guess, self._limit * 2))

    def ensure_limit(self, x: int) -> None:
        if x <= self._limit:
            return
        with self._lock:
            if x > self._limit:
                self._grow_to_limit(max(x, self._limit * 2))

    def nth(self, n: int) -> int:
        if n < 1:
            raise ValueError("prime indices are 1-based")
        self.ensure_count(n)
        return self._primes[n - 1]

    def first(self, n: int) -> list[int]:
        self.ensure_count(n)
        return self._primes[:n]

    def primes_upto(self, x: int) -> list[int]:
        self.ensure_limit(x)
        import bisect

        return self._primes[: bisect.bisect_right(self._primes, x)]


def nth_prime(src: PrimeSource, n: int) -> int:
    """p_n, extending the sieve as needed."""
    return src.nth(n)


@dataclass(frozen=True)
class BertrandReport:
    r: int
    checked_k: int
    bound_violations: tuple[tuple[int, int], ...]  # (k, p_k) with p_k > r^k
    gap_violations: tuple[tuple[int, int, int], ...]  # (k, p_k, p_{k+1})
    checked_gaps: int

    @property
    def ok(self) -> bool:
        return not self.bound_violations and not self.gap_violations


def bertrand_bound_check(src: PrimeSource, K: int, r: int) -> BertrandReport:
    """Verify p_k <= r^k for 1 <= k <= K, and the Bertrand gap property
    p_{k+1} - p_k < p_k over the same range."""
    if K < 1:
        raise ValueError("K must be >= 1")
    if r < 2:
        raise ValueError("r must be >= 2")
    primes = src.first(K + 1)
    bound_bad = []
    for k in range(1, K + 1):
        p = primes[k - 1]
        # r^k >= 2^k dwarfs any sieve-range prime once k is past word size
        if k * (r.bit_length() - 1) > 70:
            continue
        if p > r**k:
            bound_bad.append((k, p))
    gap_bad = []
    for k in range(1, K + 1):
        p, q = primes[k - 1], primes[k]
        if q - p >= p:
            gap_bad.append((k, p, q))
    return BertrandReport(r, K, tuple(bound_bad), tuple(gap_bad), K)
