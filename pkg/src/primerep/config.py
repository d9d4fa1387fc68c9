"""Global resource caps.

Every operation that can blow up (iterated exponents, factorial exponents,
sieve growth) checks these caps and raises ResourceLimitError instead of
exhausting memory.  The caps are process-wide; set them once up front
(the CLI does this from flags / environment variables).
"""

from __future__ import annotations

import time

from .errors import ResourceLimitError

DEFAULT_BIT_CAP = 1 << 26  # bits per integer

_bit_cap = DEFAULT_BIT_CAP
_sieve_cap = 1 << 27  # upper bound for sieve limits (integers, not bits)
_deadline: float | None = None


def bit_cap() -> int:
    return _bit_cap


def set_bit_cap(bits: int) -> None:
    global _bit_cap
    if bits < 64:
        raise ValueError("bit cap below 64 would break ordinary arithmetic")
    _bit_cap = bits


def check_bits(bits: int, what: str = "integer") -> None:
    """Raise if an integer of roughly `bits` bits would exceed the cap."""
    if bits > _bit_cap:
        raise ResourceLimitError(
            f"{what} would need ~{bits} bits, over the configured cap of {_bit_cap}"
            " (raise it with set_bit_cap / --max-bits / PRIMEREP_MAX_BITS)"
        )


def sieve_cap() -> int:
    return _sieve_cap


def set_sieve_cap(limit: int) -> None:
    global _sieve_cap
    _sieve_cap = limit


def set_timeout(seconds: float | None) -> None:
    """Arm (or clear) a soft wall-clock deadline, checked at loop boundaries."""
    global _deadline
    _deadline = None if seconds is None else time.monotonic() + seconds


def check_deadline() -> None:
    if _deadline is not None and time.monotonic() > _deadline:
        raise ResourceLimitError("wall-time budget exhausted (PRIMEREP_TIMEOUT_SECS)")
