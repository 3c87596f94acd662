"""Fixed-point scalar/complex arithmetic used by the FFT model.

All values are plain immutable dataclasses wrapping Python ints, so every
product is exact and rounding happens only where we ask for it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

MIN_WIDTH = 2
MAX_WIDTH = 48

# Q1.15 phase factors
TWIDDLE_WIDTH = 16
TWIDDLE_FRAC = 15

FORWARD = "forward"
INVERSE = "inverse"


def _check_width(width: int) -> None:
    if not MIN_WIDTH <= width <= MAX_WIDTH:
        raise ValueError(f"width must be in [{MIN_WIDTH}, {MAX_WIDTH}], got {width}")


def fix_min(width: int) -> int:
    return -(1 << (width - 1))


def fix_max(width: int) -> int:
    return (1 << (width - 1)) - 1


@dataclass(frozen=True, slots=True)
class Fix:
    """Signed two's-complement integer of a given bit width (sign included)."""

    value: int
    width: int

    def __post_init__(self):
        _check_width(self.width)
        if not fix_min(self.width) <= self.value <= fix_max(self.width):
            raise ValueError(f"{self.value} does not fit in {self.width} bits")

    def __int__(self) -> int:
        return self.value


@dataclass(frozen=True, slots=True)
class CFix:
    re: Fix
    im: Fix

    def __post_init__(self):
        if self.re.width != self.im.width:
            raise ValueError("re/im widths differ")

    @classmethod
    def of(cls, re: int, im: int, width: int) -> CFix:
        return cls(Fix(re, width), Fix(im, width))

    @property
    def width(self) -> int:
        return self.re.width

    def as_tuple(self) -> tuple[int, int]:
        return self.re.value, self.im.value

    def __complex__(self) -> complex:
        return complex(self.re.value, self.im.value)


@dataclass(frozen=True, slots=True)
class Twiddle:
    """Phase factor in Q1.15: ``re/2**15 + j*im/2**15``."""

    re: Fix
    im: Fix

    def __post_init__(self):
        if self.re.width != TWIDDLE_WIDTH or self.im.width != TWIDDLE_WIDTH:
            raise ValueError("twiddle components must be 16 bits wide")

    @classmethod
    def of(cls, re: int, im: int) -> Twiddle:
        return cls(Fix(re, TWIDDLE_WIDTH), Fix(im, TWIDDLE_WIDTH))

    def as_tuple(self) -> tuple[int, int]:
        return self.re.value, self.im.value

    def conj(self) -> Twiddle:
        # -(-32768) has no Q1.15 encoding
        return Twiddle.of(self.re.value, min(-self.im.value, fix_max(TWIDDLE_WIDTH)))


def round_shift(x: int, shift: int) -> int:
    """Return ``x / 2**shift`` rounded to nearest, ties to even."""
    if shift < 0:
        raise ValueError("shift must be non-negative")
    if shift == 0:
        return x
    q, r = divmod(x, 1 << shift)  # floor division, 0 <= r < 2**shift
    half = 1 << (shift - 1)
    if r > half or (r == half and q & 1):
        q += 1
    return q


def saturate(x: int, width: int) -> tuple[Fix, bool]:
    """Clamp ``x`` into ``width`` bits; the flag reports whether clamping happened."""
    _check_width(width)
    lo, hi = fix_min(width), fix_max(width)
    if x > hi:
        return Fix(hi, width), True
    if x < lo:
        return Fix(lo, width), True
    return Fix(x, width), False


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


@lru_cache(maxsize=None)
def _twiddle(k: int, n: int, direction: str) -> Twiddle:
    theta = 2.0 * math.pi * k / n
    if direction == FORWARD:
        theta = -theta
    elif direction != INVERSE:
        raise ValueError(f"unknown direction {direction!r}")
    scale = 1 << TWIDDLE_FRAC
    hi = fix_max(TWIDDLE_WIDTH)
    re = min(round(math.cos(theta) * scale), hi)
    im = min(round(math.sin(theta) * scale), hi)
    return Twiddle.of(re, im)


def twiddle(k: int, n: int, direction: str = FORWARD) -> Twiddle:
    """Q1.15 value of ``exp(-+j*2*pi*k/n)``; +1.0 saturates to 32767/32768."""
    if not _is_pow2(n):
        raise ValueError(f"transform size must be a power of two, got {n}")
    if not 0 <= k < n:
        raise ValueError(f"twiddle index {k} out of range for n={n}")
    return _twiddle(k, n, direction)


def cmul_twiddle_raw(a: CFix, w: Twiddle) -> tuple[int, int, int, bool]:
    """Like :func:`cmul_twiddle` but returns ``(re, im, width, overflowed)`` as ints."""
    ar, ai = a.re.value, a.im.value
    wr, wi = w.re.value, w.im.value
    width = a.width + 1
    re, o1 = saturate(round_shift(ar * wr - ai * wi, TWIDDLE_FRAC), width)
    im, o2 = saturate(round_shift(ar * wi + ai * wr, TWIDDLE_FRAC), width)
    return re.value, im.value, width, o1 or o2


def cmul_twiddle(a: CFix, w: Twiddle) -> CFix:
    """Multiply by a phase factor; the result is one bit wider than ``a``.

    Saturation is silent here, use :func:`cmul_twiddle_raw` to observe it.
    """
    re, im, width, _ = cmul_twiddle_raw(a, w)
    return CFix.of(re, im, width)
