"""Fixed-point mixed-radix (4...4, 2) decimation-in-time FFT plus float DFT oracles.

The fixed-point path mirrors a scaled burst-mode core: input words are 14 bits,
each stage shifts by its scaling-schedule entry and saturates back to 14 bits,
and results come out in natural order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .numerics import (
    FORWARD,
    INVERSE,
    CFix,
    Twiddle,
    cmul_twiddle_raw,
    round_shift,
    saturate,
    twiddle,
)

DATA_WIDTH = 14
MIN_SIZE = 8
MAX_SIZE = 1024


def _is_pow2(n: int) -> bool:
    return n > 0 and n & (n - 1) == 0


def _log2(n: int) -> int:
    return n.bit_length() - 1


def stage_radices(n: int) -> list[int]:
    """Radix of each stage in execution order: radix-4 stages, then one radix-2 if needed."""
    if not _is_pow2(n):
        raise ValueError(f"transform size must be a power of two, got {n}")
    bits = _log2(n)
    return [4] * (bits // 2) + [2] * (bits % 2)


# ---------------------------------------------------------------------------
# Float reference transforms
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _dft_matrix(n: int, sign: int) -> np.ndarray:
    # reduce n*k mod N before the exponential so large products keep full precision
    nk = np.outer(np.arange(n), np.arange(n)) % n
    m = np.exp(sign * 2j * np.pi * nk / n)
    m.setflags(write=False)
    return m


def dft_reference(x: Sequence[complex], n: int) -> np.ndarray:
    """Direct O(N^2) DFT, ``X[k] = sum_n x[n] exp(-j 2 pi n k / N)``."""
    x = np.asarray(x, dtype=complex)
    if x.shape != (n,):
        raise ValueError(f"expected {n} samples, got {x.shape[0] if x.ndim else x.size}")
    return _dft_matrix(n, -1) @ x


def idft_reference(X: Sequence[complex], n: int) -> np.ndarray:
    """Direct inverse DFT including the 1/N factor."""
    X = np.asarray(X, dtype=complex)
    if X.shape != (n,):
        raise ValueError(f"expected {n} bins, got {X.shape[0] if X.ndim else X.size}")
    return (_dft_matrix(n, 1) @ X) / n


# ---------------------------------------------------------------------------
# Fixed-point transform
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _digit_reverse(n: int) -> tuple[int, ...]:
    if n == 1:
        return (0,)
    radix = stage_radices(n)[-1]
    m = n // radix
    sub = _digit_reverse(m)
    # block q holds the q-th decimated subsequence, itself recursively permuted
    return tuple(radix * sub[j] + q for q in range(radix) for j in range(m))


def digit_reverse_map(n: int) -> list[int]:
    """Input permutation for the DIT stages: position ``i`` of the work buffer holds ``x[perm[i]]``."""
    if not _is_pow2(n):
        raise ValueError(f"transform size must be a power of two, got {n}")
    return list(_digit_reverse(n))


@dataclass(frozen=True)
class ScalingSchedule:
    """Right shift applied after each stage, in execution order."""

    n: int
    shifts: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "shifts", tuple(int(s) for s in self.shifts))
        radices = stage_radices(self.n)
        if len(self.shifts) != len(radices):
            raise ValueError(
                f"N={self.n} needs {len(radices)} schedule entries, got {len(self.shifts)}")
        for i, (radix, s) in enumerate(zip(radices, self.shifts)):
            limit = 3 if radix == 4 else 1
            if not 0 <= s <= limit:
                raise ValueError(f"stage {i} (radix-{radix}) shift {s} outside [0, {limit}]")

    @classmethod
    def default(cls, n: int) -> ScalingSchedule:
        """Full 1/N scaling: 2 per radix-4 stage, 1 for the radix-2 stage."""
        return cls(n, tuple(2 if r == 4 else 1 for r in stage_radices(n)))

    @classmethod
    def unscaled(cls, n: int) -> ScalingSchedule:
        return cls(n, (0,) * len(stage_radices(n)))

    @property
    def total_shift(self) -> int:
        return sum(self.shifts)


@dataclass(frozen=True)
class Frame:
    data: tuple[CFix, ...]
    n: int
    direction: str = FORWARD

    def __post_init__(self):
        object.__setattr__(self, "data", tuple(self.data))
        if not _is_pow2(self.n) or not MIN_SIZE <= self.n <= MAX_SIZE:
            raise ValueError(f"frame size must be a power of two in [{MIN_SIZE}, {MAX_SIZE}]")
        if len(self.data) != self.n:
            raise ValueError(f"frame holds {len(self.data)} samples, expected {self.n}")
        if self.direction not in (FORWARD, INVERSE):
            raise ValueError(f"unknown direction {self.direction!r}")

    @classmethod
    def from_ints(cls, values: Sequence, direction: str = FORWARD) -> Frame:
        """Build a 14-bit frame from ints (real) or complex/tuple (re, im) values."""
        data = []
        for v in values:
            if isinstance(v, tuple):
                re, im = v
            else:
                c = complex(v)
                re, im = int(c.real), int(c.imag)
            data.append(CFix.of(re, im, DATA_WIDTH))
        return cls(tuple(data), len(data), direction)


@dataclass(frozen=True)
class Spectrum:
    bins: tuple[CFix, ...]
    overflow: bool
    total_shift: int

    @property
    def n(self) -> int:
        return len(self.bins)

    def as_complex(self) -> list[complex]:
        return [complex(b) for b in self.bins]


def _sum_width(width: int, extra: int) -> int:
    return min(width + extra, 48)


def radix4_butterfly(a: CFix, b: CFix, c: CFix, d: CFix,
                     w1: Twiddle, w2: Twiddle, w3: Twiddle,
                     direction: str = FORWARD) -> tuple[CFix, CFix, CFix, CFix]:
    """One radix-4 DIT butterfly, outputs exact (not yet scaled or saturated)."""
    y, _ = _radix4(a, b, c, d, w1, w2, w3, direction)
    return y


def _radix4(a, b, c, d, w1, w2, w3, direction):
    if not a.width == b.width == c.width == d.width:
        raise ValueError("butterfly inputs must share a width")
    br, bi, wb, o1 = cmul_twiddle_raw(b, w1)
    cr, ci, _, o2 = cmul_twiddle_raw(c, w2)
    dr, di, _, o3 = cmul_twiddle_raw(d, w3)
    ar, ai = a.re.value, a.im.value
    # -j*(x+jy) = y - jx ; inverse swaps the sign of the j terms
    s = 1 if direction == FORWARD else -1
    y0 = (ar + br + cr + dr, ai + bi + ci + di)
    y1 = (ar + s * bi - cr - s * di, ai - s * br - ci + s * dr)
    y2 = (ar - br + cr - dr, ai - bi + ci - di)
    y3 = (ar - s * bi - cr + s * di, ai + s * br - ci - s * dr)
    width = _sum_width(wb, 2)
    out = tuple(CFix.of(re, im, width) for re, im in (y0, y1, y2, y3))
    return out, o1 or o2 or o3


def radix2_butterfly(a: CFix, b: CFix, w: Twiddle,
                     direction: str = FORWARD) -> tuple[CFix, CFix]:
    """One radix-2 DIT butterfly ``(a + w*b, a - w*b)``, outputs exact."""
    y, _ = _radix2(a, b, w)
    return y


def _radix2(a, b, w):
    if a.width != b.width:
        raise ValueError("butterfly inputs must share a width")
    br, bi, wb, o = cmul_twiddle_raw(b, w)
    ar, ai = a.re.value, a.im.value
    width = _sum_width(wb, 1)
    return (CFix.of(ar + br, ai + bi, width), CFix.of(ar - br, ai - bi, width)), o


def _scale(y: CFix, shift: int) -> tuple[CFix, bool]:
    re, o1 = saturate(round_shift(y.re.value, shift), DATA_WIDTH)
    im, o2 = saturate(round_shift(y.im.value, shift), DATA_WIDTH)
    return CFix(re, im), o1 or o2


def fft_fixed(frame: Frame, schedule: ScalingSchedule | None = None) -> Spectrum:
    """Transform a 14-bit frame; output bins are 14 bits in natural order.

    With a schedule whose shifts sum to log2(N) the result approximates
    ``dft_reference(x) / N``.
    """
    n = frame.n
    if schedule is None:
        schedule = ScalingSchedule.default(n)
    if schedule.n != n:
        raise ValueError(f"schedule built for N={schedule.n}, frame has N={n}")
    for v in frame.data:
        if v.width != DATA_WIDTH:
            raise ValueError(f"input samples must be {DATA_WIDTH} bits wide")

    direction = frame.direction
    perm = _digit_reverse(n)
    buf = [frame.data[p] for p in perm]
    overflow = False

    span = 1  # size of the sub-DFTs already formed
    for radix, shift in zip(stage_radices(n), schedule.shifts):
        length = span * radix
        stride = n // length
        for base in range(0, n, length):
            for k in range(span):
                idx = [base + q * span + k for q in range(radix)]
                if radix == 4:
                    w1 = twiddle(k * stride, n, direction)
                    w2 = twiddle(2 * k * stride, n, direction)
                    w3 = twiddle(3 * k * stride, n, direction)
                    ys, o = _radix4(*(buf[i] for i in idx), w1, w2, w3, direction)
                else:
                    w = twiddle(k * stride, n, direction)
                    ys, o = _radix2(buf[idx[0]], buf[idx[1]], w)
                overflow |= o
                for i, y in zip(idx, ys):
                    buf[i], o = _scale(y, shift)
                    overflow |= o
        span = length

    return Spectrum(tuple(buf), overflow, schedule.total_shift)
