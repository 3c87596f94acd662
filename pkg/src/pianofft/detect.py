"""Peak-bin search, bin/frequency conversion, piano-key naming, LCD text."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .fft import Spectrum
from .numerics import CFix

A4_HZ = 440.0
A4_KEY = 49
KEYS = range(1, 89)
NAMES = ("C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B")
LCD_WIDTH = 16


class NoSignal(ValueError):
    """Every scanned bin had zero magnitude."""


class OutOfPianoRange(ValueError):
    pass


@dataclass(frozen=True)
class PeakResult:
    bin: int
    mag_sq: int
    freq_hz: float


@dataclass(frozen=True)
class NoteId:
    key: int
    name: str
    cents: int


def magnitude_sq(c: CFix) -> int:
    return c.re.value * c.re.value + c.im.value * c.im.value


def bin_to_hz(bin: int, fs: float, n: int) -> float:
    if not 0 <= bin < n:
        raise ValueError(f"bin {bin} outside [0, {n})")
    return bin * fs / n


def find_peak(spec: Spectrum, fs: float) -> PeakResult:
    """Max-magnitude tracker over bins 1 .. N/2-1; the lowest bin wins ties."""
    n = spec.n
    if n < 4:
        raise ValueError("spectrum needs at least 4 bins")
    best_bin, best = 0, 0
    for k in range(1, n // 2):
        m = magnitude_sq(spec.bins[k])
        if m > best:
            best_bin, best = k, m
    if best == 0:
        raise NoSignal("no signal: all scanned bins are zero")
    return PeakResult(best_bin, best, bin_to_hz(best_bin, fs, n))


def note_name(key: int) -> str:
    midi = key + 20
    return f"{NAMES[midi % 12]}{midi // 12 - 1}"


def note_frequency(key: int) -> float:
    if key not in KEYS:
        raise OutOfPianoRange(f"key {key} is not on an 88-key piano")
    return A4_HZ * 2.0 ** ((key - A4_KEY) / 12)


def hz_to_note(f: float) -> NoteId:
    if not f > 0:
        raise OutOfPianoRange(f"{f} Hz is not a pitch")
    key = round(A4_KEY + 12 * math.log2(f / A4_HZ))
    if key not in KEYS:
        raise OutOfPianoRange(f"{f:.2f} Hz is outside the piano range")
    cents = round(1200 * math.log2(f / note_frequency(key)))
    return NoteId(key, note_name(key), cents)


def format_display(p: PeakResult, note: NoteId | None) -> tuple[str, str]:
    """Two 16-character LCD lines."""
    line1 = f"F:{p.freq_hz:11.2f} Hz"
    if note is None:
        line2 = "N:--"
    else:
        line2 = f"N:{note.name} {note.cents:+d}c"
    line1 = line1[:LCD_WIDTH].ljust(LCD_WIDTH)
    line2 = line2[:LCD_WIDTH].ljust(LCD_WIDTH)
    return line1, line2
